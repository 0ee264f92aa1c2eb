#include "hawkes/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "hawkes/errors.hpp"

namespace hawkes {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool is_bare_key(std::string_view key) {
    return !key.empty() && std::all_of(key.begin(), key.end(), [](char ch) {
        return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_' ||
               ch == '-';
    });
}

// Strips a trailing comment, respecting double-quoted strings.
std::string_view strip_comment(std::string_view line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (ch == '\\' && quoted) {
            ++i;
        } else if (ch == '"') {
            quoted = !quoted;
        } else if (ch == '#' && !quoted) {
            return line.substr(0, i);
        }
    }
    return line;
}

std::string parse_string(std::string_view raw, std::size_t line) {
    if (raw.size() < 2 || raw.back() != '"') throw ConfigError("unterminated string", line);
    std::string out;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
        char ch = raw[i];
        if (ch == '"') throw ConfigError("unexpected quote inside string", line);
        if (ch == '\\') {
            if (i + 2 >= raw.size()) throw ConfigError("dangling escape in string", line);
            switch (raw[++i]) {
                case '"': ch = '"'; break;
                case '\\': ch = '\\'; break;
                case 'n': ch = '\n'; break;
                case 't': ch = '\t'; break;
                default: throw ConfigError("unsupported escape in string", line);
            }
        }
        out.push_back(ch);
    }
    return out;
}

std::variant<std::int64_t, double> parse_number(std::string_view raw, std::size_t line) {
    std::string text;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != '_') {
            text.push_back(raw[i]);
            continue;
        }
        // underscores only between digits
        if (i == 0 || i + 1 == raw.size() || !std::isdigit(static_cast<unsigned char>(raw[i - 1])) ||
            !std::isdigit(static_cast<unsigned char>(raw[i + 1])))
            throw ConfigError("misplaced underscore in number '" + std::string(raw) + "'", line);
    }
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    if (text == "nan" || text == "+nan" || text == "-nan") return std::numeric_limits<double>::quiet_NaN();

    const bool integral = text.find_first_of(".eE") == std::string::npos;
    errno = 0;
    char* end = nullptr;
    if (integral) {
        const long long v = std::strtoll(text.c_str(), &end, 10);
        if (end != text.c_str() + text.size() || text.empty())
            throw ConfigError("invalid value '" + std::string(raw) + "'", line);
        if (errno == ERANGE) throw ConfigError("integer out of range '" + std::string(raw) + "'", line);
        return static_cast<std::int64_t>(v);
    }
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text.empty())
        throw ConfigError("invalid value '" + std::string(raw) + "'", line);
    if (errno == ERANGE && std::isinf(v)) throw ConfigError("float out of range '" + std::string(raw) + "'", line);
    return v;
}

TomlValue parse_value(std::string_view raw, std::size_t line) {
    TomlValue value;
    value.line = line;
    if (raw.empty()) throw ConfigError("missing value", line);
    if (raw.front() == '"') {
        value.data = parse_string(raw, line);
    } else if (raw == "true" || raw == "false") {
        value.data = raw == "true";
    } else if (raw.front() == '[') {
        if (raw.back() != ']') throw ConfigError("unterminated array", line);
        TomlValue::Array items;
        std::string_view body = trim(raw.substr(1, raw.size() - 2));
        while (!body.empty()) {
            const auto comma = body.find(',');
            const auto item = trim(body.substr(0, comma));
            if (item.empty()) throw ConfigError("empty array element", line);
            const auto number = parse_number(item, line);
            items.push_back(std::visit([](auto v) { return static_cast<double>(v); }, number));
            if (comma == std::string_view::npos) break;
            body = trim(body.substr(comma + 1));  // a trailing comma leaves body empty
        }
        value.data = std::move(items);
    } else {
        std::visit([&](auto v) { value.data = v; }, parse_number(raw, line));
    }
    return value;
}

// --- typed access ------------------------------------------------------------

class SectionReader {
  public:
    SectionReader(const TomlDocument& doc, const std::string& name) : name_(name) {
        if (const auto it = doc.find(name); it != doc.end()) table_ = &it->second;
    }

    bool present() const { return table_ != nullptr; }

    const TomlValue* find(const std::string& key) {
        if (!table_) return nullptr;
        const auto it = table_->find(key);
        if (it == table_->end()) return nullptr;
        used_.insert(key);
        return &it->second;
    }

    void read(const std::string& key, double& out) {
        const auto* v = find(key);
        if (!v) return;
        if (const auto* d = std::get_if<double>(&v->data)) out = *d;
        else if (const auto* i = std::get_if<std::int64_t>(&v->data)) out = static_cast<double>(*i);
        else throw ConfigError(qualified(key) + " must be a number", v->line);
    }

    void read(const std::string& key, std::size_t& out) {
        const auto* v = find(key);
        if (!v) return;
        const auto* i = std::get_if<std::int64_t>(&v->data);
        if (!i || *i < 0) throw ConfigError(qualified(key) + " must be a non-negative integer", v->line);
        out = static_cast<std::size_t>(*i);
    }

    void read(const std::string& key, std::string& out) {
        const auto* v = find(key);
        if (!v) return;
        const auto* s = std::get_if<std::string>(&v->data);
        if (!s) throw ConfigError(qualified(key) + " must be a string", v->line);
        out = *s;
    }

    void read(const std::string& key, std::vector<double>& out) {
        const auto* v = find(key);
        if (!v) return;
        const auto* a = std::get_if<TomlValue::Array>(&v->data);
        if (!a) throw ConfigError(qualified(key) + " must be an array of numbers", v->line);
        out = *a;
    }

    /// Rejects keys that were not consumed.
    void finish() const {
        if (!table_) return;
        for (const auto& [key, value] : *table_)
            if (!used_.count(key)) throw ConfigError("unknown key " + qualified(key), value.line);
    }

    std::size_t line_of(const std::string& key) const {
        if (!table_) return 0;
        const auto it = table_->find(key);
        return it == table_->end() ? 0 : it->second.line;
    }

    std::string qualified(const std::string& key) const { return "'" + name_ + "." + key + "'"; }

  private:
    std::string name_;
    const TomlTable* table_ = nullptr;
    std::set<std::string> used_;
};

void require(bool ok, const std::string& message, std::size_t line) {
    if (!ok) throw ConfigError(message, line);
}

std::string format_float(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    if (s.find_first_of(".en") == std::string::npos) s += ".0";
    return s;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(ch);
        }
    }
    return out + "\"";
}

const std::vector<std::string>& kernel_keys(const std::string& family) {
    static const std::map<std::string, std::vector<std::string>> keys{
        {"exponential", {"a", "b"}}, {"power-law", {"c", "p", "t0"}}, {"zero", {}}};
    return keys.at(family);
}

const std::vector<std::string>& rate_keys(const std::string& family) {
    static const std::map<std::string, std::vector<std::string>> keys{
        {"linear", {"nu"}}, {"saturating", {"nu", "alpha"}}, {"clipped-linear", {"nu", "alpha", "cap"}}};
    return keys.at(family);
}

double& kernel_field(KernelConfig& k, const std::string& key) {
    if (key == "a") return k.a;
    if (key == "b") return k.b;
    if (key == "c") return k.c;
    if (key == "p") return k.p;
    return k.t0;
}

double& rate_field(RateConfig& r, const std::string& key) {
    if (key == "nu") return r.nu;
    if (key == "alpha") return r.alpha;
    return r.cap;
}

KernelConfig read_kernel(SectionReader& sec) {
    KernelConfig k;
    if (!sec.present()) return k;
    sec.read("family", k.family);
    if (k.family != "exponential" && k.family != "power-law" && k.family != "zero")
        throw ConfigError("unknown kernel family '" + k.family + "' (expected exponential, power-law or zero)",
                          sec.line_of("family"));
    for (const auto& key : kernel_keys(k.family)) sec.read(key, kernel_field(k, key));
    sec.finish();
    return k;
}

RateConfig read_rate(SectionReader& sec) {
    RateConfig r;
    if (!sec.present()) return r;
    sec.read("family", r.family);
    if (r.family != "linear" && r.family != "saturating" && r.family != "clipped-linear")
        throw ConfigError("unknown rate family '" + r.family + "' (expected linear, saturating or clipped-linear)",
                          sec.line_of("family"));
    for (const auto& key : rate_keys(r.family)) sec.read(key, rate_field(r, key));
    sec.finish();
    return r;
}

bool same_kernel(KernelConfig a, KernelConfig b) {
    if (a.family != b.family) return false;
    for (const auto& key : kernel_keys(a.family))
        if (kernel_field(a, key) != kernel_field(b, key)) return false;
    return true;
}

bool same_rate(RateConfig a, RateConfig b) {
    if (a.family != b.family) return false;
    for (const auto& key : rate_keys(a.family))
        if (rate_field(a, key) != rate_field(b, key)) return false;
    return true;
}

}  // namespace

TomlDocument parse_toml(std::string_view text) {
    TomlDocument doc;
    TomlTable* current = nullptr;
    std::string current_name;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        line = trim(strip_comment(line));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.size() >= 2 && line[1] == '[') throw ConfigError("arrays of tables are not supported", line_no);
            if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
            const auto name = trim(line.substr(1, line.size() - 2));
            if (!is_bare_key(name)) throw ConfigError("invalid section name '" + std::string(name) + "'", line_no);
            current_name = std::string(name);
            if (doc.count(current_name)) throw ConfigError("duplicate section [" + current_name + "]", line_no);
            current = &doc[current_name];
            current->line = line_no;
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
        const auto key = trim(line.substr(0, eq));
        if (!is_bare_key(key)) throw ConfigError("invalid key '" + std::string(key) + "'", line_no);
        if (!current) throw ConfigError("key '" + std::string(key) + "' outside of a section", line_no);
        const std::string k(key);
        if (current->count(k)) throw ConfigError("duplicate key '" + current_name + "." + k + "'", line_no);
        (*current)[k] = parse_value(trim(line.substr(eq + 1)), line_no);
    }
    return doc;
}

std::pair<KernelConfig, RateConfig> scenario_model(std::string_view scenario) {
    KernelConfig k;
    RateConfig r;
    if (scenario == "poisson") {
        k.family = "zero";
        r.nu = 2.0;
    } else if (scenario == "linear") {
        k.a = 1.0;
        k.b = 2.0;
        r.nu = 1.0;
    } else if (scenario == "nonlinear-saturating") {
        k.a = 1.0;
        k.b = 1.0;
        r.family = "saturating";
        r.nu = 0.5;
        r.alpha = 0.4;
    } else {
        throw ConfigError("unknown scenario '" + std::string(scenario) +
                          "' (expected poisson, linear or nonlinear-saturating)");
    }
    return {k, r};
}

RunConfig parse_config(std::string_view text) {
    const auto doc = parse_toml(text);
    static const std::set<std::string> known{"kernel", "rate", "run", "fclt", "lil", "verify", "output"};
    for (const auto& [name, table] : doc) {
        if (!known.count(name)) {
            throw ConfigError("unknown section [" + name + "]", table.line);
        }
    }

    RunConfig cfg;
    SectionReader kernel(doc, "kernel");
    SectionReader rate(doc, "rate");
    cfg.kernel = read_kernel(kernel);
    cfg.rate = read_rate(rate);

    SectionReader run(doc, "run");
    run.read("horizon", cfg.run.horizon);
    run.read("replications", cfg.run.replications);
    {
        std::size_t seed = cfg.run.seed;
        run.read("seed", seed);
        cfg.run.seed = seed;
    }
    run.read("burnin_epsilon", cfg.run.burnin_epsilon);
    run.read("compensator_step", cfg.run.compensator_step);
    run.finish();
    require(std::isfinite(cfg.run.horizon) && cfg.run.horizon > 0.0, "run.horizon must be > 0",
            run.line_of("horizon"));
    require(cfg.run.replications >= 1, "run.replications must be >= 1", run.line_of("replications"));
    require(cfg.run.burnin_epsilon > 0.0, "run.burnin_epsilon must be > 0", run.line_of("burnin_epsilon"));
    require(std::isfinite(cfg.run.compensator_step) && cfg.run.compensator_step >= 0.0,
            "run.compensator_step must be >= 0", run.line_of("compensator_step"));

    SectionReader fclt(doc, "fclt");
    fclt.read("grid", cfg.fclt.grid);
    fclt.read("significance", cfg.fclt.significance);
    fclt.read("s_points", cfg.fclt.s_points);
    fclt.finish();
    require(cfg.fclt.grid >= 2, "fclt.grid must be >= 2", fclt.line_of("grid"));
    require(cfg.fclt.significance > 0.0 && cfg.fclt.significance <= 0.1, "fclt.significance must be in (0, 0.1]",
            fclt.line_of("significance"));
    require(!cfg.fclt.s_points.empty(), "fclt.s_points must not be empty", fclt.line_of("s_points"));
    for (std::size_t i = 0; i < cfg.fclt.s_points.size(); ++i) {
        const double s = cfg.fclt.s_points[i];
        require(s > 0.0 && s <= 1.0, "fclt.s_points must lie in (0, 1]", fclt.line_of("s_points"));
        require(i == 0 || s > cfg.fclt.s_points[i - 1], "fclt.s_points must be strictly increasing",
                fclt.line_of("s_points"));
        const double k = s * static_cast<double>(cfg.fclt.grid - 1);
        require(std::abs(k - std::round(k)) < 1e-9, "fclt.s_points must lie on the fclt grid",
                fclt.line_of("s_points"));
    }

    SectionReader lil(doc, "lil");
    lil.read("n_max", cfg.lil.n_max);
    lil.read("oracle_replications", cfg.lil.oracle_replications);
    lil.read("grid", cfg.lil.grid);
    lil.read("s2_mode", cfg.lil.s2_mode);
    lil.finish();
    require(cfg.lil.n_max >= 2, "lil.n_max must be >= 2", lil.line_of("n_max"));
    require(cfg.lil.oracle_replications >= 2, "lil.oracle_replications must be >= 2",
            lil.line_of("oracle_replications"));
    require(cfg.lil.grid >= 2, "lil.grid must be >= 2", lil.line_of("grid"));
    require(cfg.lil.s2_mode == "plugin" || cfg.lil.s2_mode == "empirical",
            "lil.s2_mode must be \"plugin\" or \"empirical\"", lil.line_of("s2_mode"));

    SectionReader verify(doc, "verify");
    verify.read("scenario", cfg.scenario);
    verify.finish();
    if (verify.present()) {
        require(std::find(std::begin(kScenarios), std::end(kScenarios), cfg.scenario) != std::end(kScenarios),
                "verify.scenario must be one of poisson, linear, nonlinear-saturating", verify.line_of("scenario"));
        const auto [k, r] = scenario_model(cfg.scenario);
        if (kernel.present() && !same_kernel(cfg.kernel, k))
            throw ConfigError("[kernel] does not match scenario '" + cfg.scenario + "'", kernel.line_of("family"));
        if (rate.present() && !same_rate(cfg.rate, r))
            throw ConfigError("[rate] does not match scenario '" + cfg.scenario + "'", rate.line_of("family"));
        cfg.kernel = k;
        cfg.rate = r;
    }

    SectionReader output(doc, "output");
    output.read("dir", cfg.output_dir);
    output.finish();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

HawkesModel RunConfig::model() const {
    Kernel k = Kernel::zero();
    if (kernel.family == "exponential") k = Kernel::exponential(kernel.a, kernel.b);
    else if (kernel.family == "power-law") k = Kernel::power_law(kernel.c, kernel.p, kernel.t0);
    else if (kernel.family != "zero") throw ConfigError("unknown kernel family '" + kernel.family + "'");

    RateFunction r = RateFunction::linear(rate.nu);
    if (rate.family == "saturating") r = RateFunction::saturating(rate.nu, rate.alpha);
    else if (rate.family == "clipped-linear") r = RateFunction::clipped_linear(rate.nu, rate.alpha, rate.cap);
    else if (rate.family != "linear") throw ConfigError("unknown rate family '" + rate.family + "'");
    return validate_model(k, r);
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    if (!c.scenario.empty()) out << "[verify]\nscenario = " << quote(c.scenario) << "\n\n";

    out << "[kernel]\nfamily = " << quote(c.kernel.family) << "\n";
    KernelConfig k = c.kernel;
    for (const auto& key : kernel_keys(k.family)) out << key << " = " << format_float(kernel_field(k, key)) << "\n";

    out << "\n[rate]\nfamily = " << quote(c.rate.family) << "\n";
    RateConfig r = c.rate;
    for (const auto& key : rate_keys(r.family)) out << key << " = " << format_float(rate_field(r, key)) << "\n";

    out << "\n[run]\n"
        << "horizon = " << format_float(c.run.horizon) << "\n"
        << "replications = " << c.run.replications << "\n"
        << "seed = " << c.run.seed << "\n"
        << "burnin_epsilon = " << format_float(c.run.burnin_epsilon) << "\n"
        << "compensator_step = " << format_float(c.run.compensator_step) << "\n";

    out << "\n[fclt]\n"
        << "grid = " << c.fclt.grid << "\n"
        << "significance = " << format_float(c.fclt.significance) << "\n"
        << "s_points = [";
    for (std::size_t i = 0; i < c.fclt.s_points.size(); ++i)
        out << (i ? ", " : "") << format_float(c.fclt.s_points[i]);
    out << "]\n";

    out << "\n[lil]\n"
        << "n_max = " << c.lil.n_max << "\n"
        << "oracle_replications = " << c.lil.oracle_replications << "\n"
        << "grid = " << c.lil.grid << "\n"
        << "s2_mode = " << quote(c.lil.s2_mode) << "\n";

    out << "\n[output]\ndir = " << quote(c.output_dir) << "\n";
    return out.str();
}

}  // namespace hawkes
