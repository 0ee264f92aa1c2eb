#include "hawkes/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hawkes/errors.hpp"

namespace hawkes::csv {

namespace {

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.emplace_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string where(std::size_t line) { return "line " + std::to_string(line) + ": "; }

}  // namespace

std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Writer::Writer(std::string_view header) {
    buffer_.append(header);
    buffer_.push_back('\n');
}

void Writer::separator() {
    if (row_open_) buffer_.push_back(',');
    row_open_ = true;
}

Writer& Writer::field(double v) {
    separator();
    buffer_ += format(v);
    return *this;
}

Writer& Writer::field(std::size_t v) {
    separator();
    buffer_ += std::to_string(v);
    return *this;
}

Writer& Writer::field(long v) {
    separator();
    buffer_ += std::to_string(v);
    return *this;
}

Writer& Writer::field(std::string_view v) {
    separator();
    buffer_.append(v);
    return *this;
}

void Writer::end_row() {
    buffer_.push_back('\n');
    row_open_ = false;
}

Table read(const std::filesystem::path& path, std::string_view expected_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    Table table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            if (line != expected_header)
                throw InputError(path.filename().string() + ": expected header '" + std::string(expected_header) +
                                 "', found '" + line + "'");
            table.header = split(line);
            continue;
        }
        if (line.empty()) continue;
        auto row = split(line);
        if (row.size() != table.header.size())
            throw InputError(path.filename().string() + ": " + where(line_no) + "expected " +
                             std::to_string(table.header.size()) + " fields");
        table.rows.push_back(std::move(row));
        table.lines.push_back(line_no);
    }
    if (in.bad()) throw IoError("error reading '" + path.string() + "'");
    if (line_no == 0) throw InputError(path.filename().string() + ": empty file");
    return table;
}

double parse_double(const std::string& s, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
        throw InputError(where(line) + "invalid number '" + s + "'");
    return v;
}

long parse_long(const std::string& s, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
        throw InputError(where(line) + "invalid integer '" + s + "'");
    return v;
}

std::size_t parse_index(const std::string& s, std::size_t line) {
    const long v = parse_long(s, line);
    if (v < 0) throw InputError(where(line) + "negative index '" + s + "'");
    return static_cast<std::size_t>(v);
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw IoError("error writing '" + path.string() + "'");
}

std::vector<EventSequence> read_events(const std::filesystem::path& path, std::size_t replications,
                                       double horizon) {
    const auto table = read(path, "replication,time");
    std::vector<EventSequence> out(replications);
    for (auto& seq : out) seq.horizon = horizon;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const std::size_t line = table.lines[i];
        const std::size_t r = parse_index(table.rows[i][0], line);
        const double t = parse_double(table.rows[i][1], line);
        if (r >= replications)
            throw InputError("events.csv: " + where(line) + "replication " + std::to_string(r) +
                             " not in the configured " + std::to_string(replications));
        if (!(t > 0.0 && t <= horizon)) throw InputError("events.csv: " + where(line) + "time outside (0, horizon]");
        auto& times = out[r].times;
        if (!times.empty() && !(t > times.back()))
            throw InputError("events.csv: " + where(line) + "times not strictly increasing");
        times.push_back(t);
    }
    return out;
}

std::vector<std::vector<CompensatorPoint>> read_compensator(const std::filesystem::path& path,
                                                            std::size_t replications) {
    const auto table = read(path, "replication,t,lambda_integral");
    std::vector<std::vector<CompensatorPoint>> out(replications);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const std::size_t line = table.lines[i];
        const std::size_t r = parse_index(table.rows[i][0], line);
        if (r >= replications)
            throw InputError("compensator.csv: " + where(line) + "replication " + std::to_string(r) +
                             " not in the configured " + std::to_string(replications));
        const CompensatorPoint p{parse_double(table.rows[i][1], line), parse_double(table.rows[i][2], line)};
        if (!out[r].empty() && !(p.t > out[r].back().t))
            throw InputError("compensator.csv: " + where(line) + "times not strictly increasing");
        out[r].push_back(p);
    }
    return out;
}

}  // namespace hawkes::csv
