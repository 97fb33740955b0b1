#include "hbeq/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <string>

namespace hbeq {

namespace {

constexpr std::pair<Mode, std::string_view> mode_names[] = {
    {Mode::solve, "solve"},
    {Mode::measures, "measures"},
    {Mode::simulate, "simulate"},
    {Mode::sweep, "sweep"},
    {Mode::check, "check"},
    {Mode::multi_solve, "multi-solve"},
    {Mode::multi_measures, "multi-measures"},
    {Mode::multi_simulate, "multi-simulate"},
    {Mode::leadlag, "leadlag"},
};

}  // namespace

std::string_view to_string(Mode m) {
    for (const auto& [mode, name] : mode_names)
        if (mode == m) return name;
    return "unknown";
}

std::optional<Mode> parse_mode(std::string_view s) {
    for (const auto& [mode, name] : mode_names)
        if (name == s) return mode;
    return std::nullopt;
}

bool is_multi(Mode m) {
    return m == Mode::multi_solve || m == Mode::multi_measures || m == Mode::multi_simulate || m == Mode::leadlag;
}

std::vector<double> SweepSpec::grid() const {
    std::vector<double> g(static_cast<std::size_t>(std::max(steps, 0)));
    for (int i = 0; i < steps; ++i) {
        const double t = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
        g[static_cast<std::size_t>(i)] = i == steps - 1 ? to : from + t * (to - from);
    }
    return g;
}

const std::vector<std::string>& sweepable_params() {
    static const std::vector<std::string> names = {
        "d_bar", "sigma_d2", "sigma_s2", "sigma_theta2_true", "sigma_theta2_informed",
        "delta_sigma_theta2", "alpha", "pi", "riskless_supply",
    };
    return names;
}

SingleParamsd with_param(SingleParamsd p, std::string_view name, double value) {
    if (name == "d_bar") p.d_bar = value;
    else if (name == "sigma_d2") p.sigma_d2 = value;
    else if (name == "sigma_s2") p.sigma_s2 = value;
    else if (name == "sigma_theta2_true") p.sigma_theta2_true = value;
    else if (name == "sigma_theta2_informed") p.sigma_theta2_informed = value;
    else if (name == "delta_sigma_theta2") p.sigma_theta2_informed = p.sigma_theta2_true + value;
    else if (name == "alpha") p.alpha = value;
    else if (name == "pi") p.pi = value;
    else if (name == "riskless_supply") p.riskless_supply = value;
    else throw InvalidParam("sweep.param", "cannot sweep '" + std::string(name) + "'");
    return p;
}

namespace {

struct Entry {
    int line = 0;
    bool is_array = false;
    std::string text;                 // scalar token (quotes stripped)
    std::vector<std::string> items;   // array tokens
};

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::string unquote(std::string_view v, int line, const std::string& key) {
    if (!v.empty() && (v.front() == '"' || v.front() == '\'')) {
        if (v.size() < 2 || v.back() != v.front()) throw ParseError(line, key, "unterminated string");
        return std::string(v.substr(1, v.size() - 2));
    }
    return std::string(v);
}

// Strips the comment from one line, leaving '#' inside quotes alone.
std::string_view strip_comment(std::string_view raw) {
    bool in_quote = false;
    char quote = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const char ch = raw[i];
        if (in_quote) {
            if (ch == quote) in_quote = false;
        } else if (ch == '"' || ch == '\'') {
            in_quote = true;
            quote = ch;
        } else if (ch == '#') {
            return trim(raw.substr(0, i));
        }
    }
    return trim(raw);
}

std::map<std::string, Entry> tokenize(std::string_view text) {
    std::vector<std::string_view> lines;
    for (std::size_t pos = 0; pos <= text.size();) {
        const auto eol = text.find('\n', pos);
        lines.push_back(strip_comment(text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos)));
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    }

    std::map<std::string, Entry> out;
    for (std::size_t idx = 0; idx < lines.size(); ++idx) {
        const int line_no = static_cast<int>(idx) + 1;
        const auto line = lines[idx];
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "", "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "", "empty key");
        if (!std::all_of(key.begin(), key.end(), [](char c) {
                return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
            }))
            throw ParseError(line_no, key, "invalid key");
        if (value.empty()) throw ParseError(line_no, key, "missing value");
        if (out.count(key)) throw ParseError(line_no, key, "duplicate key (first at line " + std::to_string(out[key].line) + ")");

        Entry e;
        e.line = line_no;
        if (value.front() == '[') {
            // Arrays may continue over following lines until the closing bracket.
            std::string joined(value);
            while (joined.back() != ']') {
                if (joined.find(']') != std::string::npos || ++idx >= lines.size())
                    throw ParseError(line_no, key, "unterminated array");
                if (!lines[idx].empty()) joined += " " + std::string(lines[idx]);
            }
            e.is_array = true;
            const auto body = trim(std::string_view(joined).substr(1, joined.size() - 2));
            std::size_t start = 0;
            while (!body.empty() && start <= body.size()) {
                const auto comma = body.find(',', start);
                const auto item = trim(body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
                if (item.empty()) throw ParseError(line_no, key, "empty array element");
                e.items.emplace_back(item);
                if (comma == std::string_view::npos) break;
                start = comma + 1;
            }
        } else {
            e.text = unquote(value, line_no, key);
        }
        out.emplace(key, std::move(e));
    }
    return out;
}

double to_double(std::string_view token, int line, const std::string& key) {
    double v = 0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ParseError(line, key, "not a number: '" + std::string(token) + "'");
    if (!std::isfinite(v)) throw ParseError(line, key, "value must be finite");
    return v;
}

std::uint64_t to_uint(std::string_view token, int line, const std::string& key) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec == std::errc() && ptr == token.data() + token.size()) return v;
    // Allow integral values written in floating notation, e.g. 1e6.
    const double d = to_double(token, line, key);
    if (d < 0 || d != std::floor(d) || d > 9007199254740992.0)
        throw ParseError(line, key, "expected a non-negative integer, got '" + std::string(token) + "'");
    return static_cast<std::uint64_t>(d);
}

bool to_bool(std::string_view token, int line, const std::string& key) {
    if (token == "true" || token == "1") return true;
    if (token == "false" || token == "0") return false;
    throw ParseError(line, key, "expected true or false");
}

class Reader {
public:
    explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    const Entry& entry(const std::string& key) {
        const auto it = entries_.find(key);
        if (it == entries_.end()) throw ParseError(0, key, "missing required key");
        used_.insert(key);
        return it->second;
    }

    const Entry& scalar_entry(const std::string& key) {
        const Entry& e = entry(key);
        if (e.is_array) throw ParseError(e.line, key, "expected a scalar, got an array");
        return e;
    }

    double number(const std::string& key) {
        const Entry& e = scalar_entry(key);
        return to_double(e.text, e.line, key);
    }
    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::uint64_t integer(const std::string& key) {
        const Entry& e = scalar_entry(key);
        return to_uint(e.text, e.line, key);
    }

    std::string string(const std::string& key) { return scalar_entry(key).text; }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const Entry& e = scalar_entry(key);
        return to_bool(e.text, e.line, key);
    }

    std::vector<double> numbers(const std::string& key, std::size_t expected) {
        const Entry& e = entry(key);
        std::vector<double> v;
        if (e.is_array) {
            for (const auto& item : e.items) v.push_back(to_double(item, e.line, key));
        } else {
            v.push_back(to_double(e.text, e.line, key));
        }
        if (v.size() != expected)
            throw ParseError(e.line, key,
                             "expected " + std::to_string(expected) + " values, got " + std::to_string(v.size()));
        return v;
    }

    int line(const std::string& key) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    /// Every key not consumed so far is an error.
    void reject_unused(Mode mode) const {
        for (const auto& [key, e] : entries_)
            if (!used_.count(key))
                throw ParseError(e.line, key, "unknown key for mode '" + std::string(to_string(mode)) + "'");
    }

private:
    std::map<std::string, Entry> entries_;
    std::set<std::string> used_;
};

SingleParamsd read_single(Reader& r) {
    SingleParamsd p;
    p.d_bar = r.number("model.d_bar");
    p.sigma_d2 = r.number("model.sigma_d2");
    p.sigma_s2 = r.number("model.sigma_s2");
    p.sigma_theta2_true = r.number("model.sigma_theta2_true");
    p.sigma_theta2_informed = r.number("model.sigma_theta2_informed");
    p.alpha = r.number("model.alpha");
    p.pi = r.number("model.pi");
    p.riskless_supply = r.number("model.riskless_supply", 0.0);
    return p;
}

Matrixd read_matrix(Reader& r, const std::string& key, Eigen::Index n) {
    const auto v = r.numbers(key, static_cast<std::size_t>(n * n));
    Matrixd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = v[static_cast<std::size_t>(i * n + j)];
    return m;
}

Vectord read_vector(Reader& r, const std::string& key, Eigen::Index n) {
    const auto v = r.numbers(key, static_cast<std::size_t>(n));
    return Eigen::Map<const Vectord>(v.data(), n);
}

MultiParamsd read_multi(Reader& r) {
    const auto n64 = r.integer("model.n");
    if (n64 < 1 || n64 > 10000) throw ParseError(r.line("model.n"), "model.n", "must be between 1 and 10000");
    const auto n = static_cast<Eigen::Index>(n64);
    MultiParamsd p;
    p.d_bar = read_vector(r, "model.d_bar_vec", n);
    p.sigma_d = read_matrix(r, "model.sigma_d", n);
    p.sigma_s = read_matrix(r, "model.sigma_s", n);
    p.sigma_theta_true = read_matrix(r, "model.sigma_theta_true", n);
    p.sigma_theta_informed = read_matrix(r, "model.sigma_theta_informed", n);
    p.alpha = r.number("model.alpha");
    p.pi = r.number("model.pi");
    p.riskless_supply = r.number("model.riskless_supply", 0.0);
    return p;
}

SimConfig read_sim(Reader& r) {
    SimConfig s;
    s.n_paths = r.integer("sim.n_paths");
    s.seed = r.integer("sim.seed");
    s.batch_size = r.has("sim.batch_size") ? r.integer("sim.batch_size") : std::min<std::uint64_t>(s.n_paths, 10000);
    validate_sim(s);
    return s;
}

}  // namespace

RunConfig parse_config(std::string_view text, std::optional<Mode> mode_override, const ValidationOptions& opts) {
    Reader r(tokenize(text));
    RunConfig cfg;
    cfg.validation = opts;

    std::optional<Mode> mode;
    if (r.has("mode")) {
        const auto name = r.string("mode");
        mode = parse_mode(name);
        if (!mode) throw ParseError(r.line("mode"), "mode", "unknown mode '" + name + "'");
        if (mode_override && *mode_override != *mode)
            throw ParseError(r.line("mode"), "mode",
                             "config says '" + name + "' but '" + std::string(to_string(*mode_override)) + "' was requested");
    }
    if (mode_override) mode = mode_override;
    if (!mode) throw ParseError(0, "mode", "missing required key");
    cfg.mode = *mode;

    cfg.validation.allow_homogeneous = r.boolean("validation.allow_homogeneous", cfg.validation.allow_homogeneous);
    cfg.validation.pi_min = r.number("validation.pi_min", cfg.validation.pi_min);
    cfg.validation.pi_max = r.number("validation.pi_max", cfg.validation.pi_max);
    if (!(cfg.validation.pi_min > 0 && cfg.validation.pi_min <= cfg.validation.pi_max && cfg.validation.pi_max < 1))
        throw InvalidParam("validation.pi_min/pi_max", "need 0 < pi_min <= pi_max < 1");

    if (r.has("output.format")) {
        const auto f = r.string("output.format");
        if (f == "csv") cfg.output.format = OutputFormat::csv;
        else if (f == "json") cfg.output.format = OutputFormat::json;
        else throw ParseError(r.line("output.format"), "output.format", "expected csv or json");
    }
    if (r.has("output.path")) cfg.output.path = r.string("output.path");

    switch (cfg.mode) {
        case Mode::solve:
        case Mode::measures:
        case Mode::simulate:
        case Mode::sweep:
            cfg.params = validate_single(read_single(r), cfg.validation);
            break;
        case Mode::multi_solve:
        case Mode::multi_measures:
        case Mode::multi_simulate:
        case Mode::leadlag:
            cfg.params = validate_multi(read_multi(r), cfg.validation);
            break;
        case Mode::check:
            break;
    }

    if (cfg.mode == Mode::simulate || cfg.mode == Mode::multi_simulate) cfg.sim = read_sim(r);

    if (cfg.mode == Mode::sweep) {
        SweepSpec s;
        s.param = r.string("sweep.param");
        const auto& names = sweepable_params();
        if (std::find(names.begin(), names.end(), s.param) == names.end())
            throw ParseError(r.line("sweep.param"), "sweep.param", "cannot sweep '" + s.param + "'");
        s.from = r.number("sweep.from");
        s.to = r.number("sweep.to");
        const auto steps = r.integer("sweep.steps");
        if (steps < 2 || steps > 1000000) throw ParseError(r.line("sweep.steps"), "sweep.steps", "must be between 2 and 1000000");
        s.steps = static_cast<int>(steps);
        for (double x : s.grid()) {
            try {
                validate_single(with_param(cfg.single(), s.param, x), cfg.validation);
            } catch (const InvalidParam& e) {
                throw InvalidParam("sweep", s.param + " = " + std::to_string(x) + " gives " + e.what());
            }
        }
        cfg.sweep = s;
        if (r.has("output.chart")) cfg.output.chart = r.string("output.chart");
    }

    if (cfg.mode == Mode::leadlag) {
        const Eigen::Index n = cfg.multi().n();
        LeadLagSpec ll;
        const Entry& e = r.entry("leadlag.muted");
        const std::vector<std::string> tokens = e.is_array ? e.items : std::vector<std::string>{e.text};
        for (const auto& t : tokens) {
            const auto idx = to_uint(t, e.line, "leadlag.muted");
            if (idx < 1 || idx > static_cast<std::uint64_t>(n))
                throw InvalidMute("asset " + t + " out of range 1.." + std::to_string(n));
            ll.muted.insert(static_cast<Eigen::Index>(idx - 1));
        }
        if (ll.muted.empty()) throw InvalidMute("no asset muted");
        if (static_cast<Eigen::Index>(ll.muted.size()) >= n) throw InvalidMute("every asset muted");
        ll.s_active = read_vector(r, "leadlag.s_active", n);
        cfg.leadlag = ll;
    }

    if (cfg.mode == Mode::check) {
        const auto count = [&](const std::string& key, int fallback) {
            if (!r.has(key)) return fallback;
            const auto v = r.integer(key);
            if (v < 1 || v > 10000000) throw ParseError(r.line(key), key, "must be between 1 and 10000000");
            return static_cast<int>(v);
        };
        if (r.has("check.seed")) cfg.check.seed = r.integer("check.seed");
        cfg.check.single_sets = count("check.single_sets", cfg.check.single_sets);
        cfg.check.worlds = count("check.worlds", cfg.check.worlds);
        cfg.check.multi_sets = count("check.multi_sets", cfg.check.multi_sets);
        cfg.check.clearing_tol = r.number("check.clearing_tol", cfg.check.clearing_tol);
        if (!(cfg.check.clearing_tol > 0)) throw InvalidParam("check.clearing_tol", "must be strictly positive");
    }

    r.reject_unused(cfg.mode);
    return cfg;
}

}  // namespace hbeq
