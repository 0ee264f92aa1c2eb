#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hawkes/simulate.hpp"

namespace hawkes::csv {

/// Shortest round-trippable text: 17 significant digits.
std::string format(double v);

/// Appends comma-separated rows to an in-memory buffer.
class Writer {
  public:
    explicit Writer(std::string_view header);

    Writer& field(double v);
    Writer& field(std::size_t v);
    Writer& field(long v);
    Writer& field(std::string_view v);
    void end_row();

    const std::string& str() const noexcept { return buffer_; }

  private:
    void separator();

    std::string buffer_;
    bool row_open_ = false;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    /// 1-based line number of each row, for error messages.
    std::vector<std::size_t> lines;
};

/// Throws IoError if the file cannot be read, InputError on ragged rows or a
/// header that differs from `expected_header`.
Table read(const std::filesystem::path& path, std::string_view expected_header);

double parse_double(const std::string& s, std::size_t line);
std::size_t parse_index(const std::string& s, std::size_t line);
long parse_long(const std::string& s, std::size_t line);

/// Writes atomically enough for our purposes (whole buffer, then close);
/// throws IoError.
void write_file(const std::filesystem::path& path, std::string_view content);

/// events.csv (replication, time) -> one sequence per replication on (0, horizon].
/// Throws InputError if a replication index is >= replications or a time
/// lies outside (0, horizon] or is out of order.
std::vector<EventSequence> read_events(const std::filesystem::path& path, std::size_t replications,
                                       double horizon);

/// compensator.csv (replication, t, lambda_integral).
std::vector<std::vector<CompensatorPoint>> read_compensator(const std::filesystem::path& path,
                                                            std::size_t replications);

}  // namespace hawkes::csv
