#include "hbeq/run.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hbeq/serialize.hpp"

namespace hbeq {

using nlohmann::json;

int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::parse_error:
        case ErrorKind::invalid_param:
        case ErrorKind::invalid_mute:
        case ErrorKind::invalid_perturbation:
        case ErrorKind::wrong_dimension:
            return exit_code::config;
        case ErrorKind::degenerate:
        case ErrorKind::singular_matrix:
        case ErrorKind::zero_variance:
        case ErrorKind::not_symmetric:
            return exit_code::numerical;
    }
    return exit_code::numerical;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

constexpr double clearing_tolerance = 1e-8;

const std::vector<std::string> coefficient_names = {
    "d_bar", "a2", "b2", "c2", "a2_star", "b2_star", "a1", "b1", "c1", "a1_star",
    "b1_star", "c1_star", "s0", "var1_s2", "var2_s2", "var1_s1", "var2_s1", "beta_s", "beta_xi",
};

std::vector<double> coefficient_values(const EquilibriumCoefficientsd& c) {
    return {c.d_bar, c.a2, c.b2, c.c2, c.a2_star, c.b2_star, c.a1, c.b1, c.c1, c.a1_star,
            c.b1_star, c.c1_star, c.s0, c.var1_s2, c.var2_s2, c.var1_s1, c.var2_s1, c.beta_s, c.beta_xi};
}

class Csv {
public:
    explicit Csv(const std::vector<std::string>& header) { row(header); }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            os_ << cells[i];
        }
        os_ << '\n';
    }

    std::string str() const { return os_.str(); }

private:
    std::ostringstream os_;
};

std::string cell(double v) { return format_double(v); }
std::string cell(bool v) { return v ? "true" : "false"; }
std::string cell(std::uint64_t v) { return std::to_string(v); }
std::string cell(long v) { return std::to_string(v); }

// Quotes text cells that contain separators.
std::string text_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + '"';
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

int render_solve(const RunConfig& cfg, std::string& doc, std::ostream& log) {
    const auto c = equilibrium(cfg.single());
    if (cfg.output.format == OutputFormat::json) {
        doc = dump_json(json(c));
    } else {
        Csv csv(solve_columns());
        std::vector<std::string> cells;
        for (double v : coefficient_values(c)) cells.push_back(cell(v));
        csv.row(cells);
        doc = csv.str();
    }
    log << "solve: b2 = " << format_double(c.b2) << ", b1 = " << format_double(c.b1) << ", s0 = " << format_double(c.s0)
        << '\n';
    return exit_code::ok;
}

int render_measures(const RunConfig& cfg, std::string& doc, std::ostream& log) {
    const auto& p = cfg.single();
    const auto c = equilibrium(p);
    const auto m = measures(c, p);
    if (cfg.output.format == OutputFormat::json) {
        doc = dump_json(json{{"params", p}, {"coefficients", c}, {"measures", m}});
    } else {
        Csv csv(measures_columns());
        csv.row({cell(c.a2), cell(c.b2), cell(c.c2), cell(c.a2_star), cell(c.b2_star), cell(c.a1), cell(c.b1), cell(c.c1),
                 cell(c.a1_star), cell(c.s0), cell(m.gamma_m), cell(m.gamma_r), cell(m.momentum_holds),
                 cell(m.condition_value)});
        doc = csv.str();
    }
    log << "measures: gamma_m = " << format_double(m.gamma_m) << ", gamma_r = " << format_double(m.gamma_r) << '\n';
    return exit_code::ok;
}

std::string render_paths(const SingleParamsd& p, const EquilibriumCoefficientsd& c, const SimConfig& sim,
                         std::uint64_t limit) {
    Csv csv(path_columns());
    for (const auto& r : simulate_paths(p, c, sim.seed, std::min(limit, sim.n_paths))) {
        csv.row({cell(r.index), cell(r.world.d), cell(r.world.s), cell(r.world.theta1), cell(r.world.theta2),
                 cell(r.prices.s0), cell(r.prices.s1), cell(r.prices.s2), cell(r.prices.s3), cell(r.x_informed[0]),
                 cell(r.x_informed[1]), cell(r.x_informed[2]), cell(r.x_uninformed[0]), cell(r.x_uninformed[1]),
                 cell(r.x_uninformed[2]), cell(r.w_informed[3]), cell(r.w_uninformed[3])});
    }
    return csv.str();
}

int render_simulate(const RunConfig& cfg, const RunOptions& opts, std::string& doc, std::ostream& log) {
    const auto& p = cfg.single();
    const auto c = equilibrium(p);
    const auto m = measures(c, p);
    SimConfig sim = *cfg.sim;
    sim.threads = opts.threads;
    const auto s = simulate(p, c, sim);

    if (cfg.output.format == OutputFormat::json) {
        const auto est = [](double analytic, const Estimate& e) {
            return json{{"analytic", analytic}, {"estimate", e.value}, {"se", e.se}};
        };
        doc = dump_json(json{
            {"n_paths", sim.n_paths},
            {"seed", sim.seed},
            {"batch_size", sim.batch_size},
            {"gamma_m", est(m.gamma_m, s.gamma_m)},
            {"gamma_r", est(m.gamma_r, s.gamma_r)},
            {"gamma_m_unconditional", est(m.gamma_m_unconditional, s.gamma_m_unconditional)},
            {"gamma_r_unconditional", est(m.gamma_r_unconditional, s.gamma_r_unconditional)},
            {"clearing_residual_max", s.clearing_residual_max},
            {"budget_residual_max", s.budget_residual_max},
            {"mean_payoff", s.mean_payoff},
            {"wealth_informed", {{"mean", s.wealth_informed.mean}, {"variance", s.wealth_informed.variance}}},
            {"wealth_uninformed", {{"mean", s.wealth_uninformed.mean}, {"variance", s.wealth_uninformed.variance}}},
            {"initial_wealth_convention", "W0 = S0 + riskless_supply"},
        });
    } else {
        Csv csv(simulate_columns());
        csv.row({cell(sim.n_paths), cell(sim.seed), cell(sim.batch_size), cell(m.gamma_m), cell(s.gamma_m.value),
                 cell(s.gamma_m.se), cell(m.gamma_r), cell(s.gamma_r.value), cell(s.gamma_r.se),
                 cell(m.gamma_m_unconditional), cell(s.gamma_m_unconditional.value), cell(s.gamma_m_unconditional.se),
                 cell(m.gamma_r_unconditional), cell(s.gamma_r_unconditional.value), cell(s.gamma_r_unconditional.se),
                 cell(s.clearing_residual_max), cell(s.budget_residual_max), cell(s.mean_payoff),
                 cell(s.wealth_informed.mean), cell(s.wealth_informed.variance), cell(s.wealth_uninformed.mean),
                 cell(s.wealth_uninformed.variance)});
        doc = csv.str();
    }
    log << "simulate: gamma_m_hat = " << format_double(s.gamma_m.value) << " (se " << format_double(s.gamma_m.se)
        << "), gamma_r_hat = " << format_double(s.gamma_r.value) << " (se " << format_double(s.gamma_r.se)
        << "), clearing residual " << format_double(s.clearing_residual_max) << '\n';
    if (!(s.clearing_residual_max < clearing_tolerance)) {
        log << "error: market-clearing residual " << format_double(s.clearing_residual_max) << " exceeds "
            << format_double(clearing_tolerance) << '\n';
        return exit_code::numerical;
    }
    return exit_code::ok;
}

int render_sweep(const RunConfig& cfg, std::string& doc, std::ostream& log, std::vector<double>& xs,
                 std::vector<double>& ys) {
    const auto& sw = *cfg.sweep;
    json points = json::array();
    Csv csv(sweep_columns());
    for (double x : sw.grid()) {
        const auto p = with_param(cfg.single(), sw.param, x);
        const auto c = equilibrium(p);
        const auto m = measures(c, p);
        xs.push_back(x);
        ys.push_back(m.gamma_m);
        if (cfg.output.format == OutputFormat::json) {
            points.push_back(json{{"value", x}, {"coefficients", c}, {"measures", m}});
        } else {
            std::vector<std::string> cells = {sw.param, cell(x)};
            for (double v : coefficient_values(c)) cells.push_back(cell(v));
            for (const auto& v : {cell(m.gamma_m), cell(m.gamma_r), cell(m.momentum_holds), cell(m.condition_value),
                                  cell(m.gamma_m_unconditional), cell(m.gamma_r_unconditional)})
                cells.push_back(v);
            csv.row(cells);
        }
    }
    doc = cfg.output.format == OutputFormat::json ? dump_json(json{{"param", sw.param}, {"points", points}}) : csv.str();
    log << "sweep: " << sw.steps << " points over " << sw.param << '\n';
    return exit_code::ok;
}

int render_check(const RunConfig& cfg, std::string& doc, std::ostream& log) {
    const auto report = run_battery(cfg.check);
    std::size_t asserted = 0, failed = 0, findings = 0;
    for (const auto& c : report.checks) {
        if (c.asserted) {
            ++asserted;
            if (!c.passed()) ++failed;
        } else if (c.failures) {
            ++findings;
        }
    }
    if (cfg.output.format == OutputFormat::json) {
        doc = dump_json(json{{"passed", report.passed()}, {"checks", report.checks}});
    } else {
        Csv csv(check_columns());
        for (const auto& c : report.checks) {
            const std::string status =
                c.asserted ? (c.passed() ? "pass" : "fail") : (c.failures ? "counterexamples" : "holds");
            csv.row({text_cell(c.name), c.asserted ? "invariant" : "finding", status, cell(c.cases), cell(c.failures),
                     cell(c.worst), text_cell(c.note)});
        }
        doc = csv.str();
    }
    log << "check: " << asserted - failed << "/" << asserted << " invariants hold; " << findings
        << " findings with counterexamples\n";
    return report.passed() ? exit_code::ok : exit_code::violation;
}

void matrix_rows(Csv& csv, const std::string& name, const Matrixd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index k = 0; k < m.cols(); ++k) csv.row({name, cell(long{i}), cell(long{k}), cell(m(i, k))});
}

int render_multi_solve(const RunConfig& cfg, std::string& doc, std::ostream& log) {
    const auto c = equilibrium_multi(cfg.multi());
    if (cfg.output.format == OutputFormat::json) {
        doc = dump_json(json(c));
    } else {
        Csv csv(multi_columns());
        const std::pair<const char*, const Vectord*> vectors[] = {
            {"d_bar", &c.d_bar}, {"A2", &c.A2}, {"A1", &c.A1}, {"A2_star", &c.A2_star}, {"A1_star", &c.A1_star}, {"S0", &c.S0},
        };
        for (const auto& [name, v] : vectors) matrix_rows(csv, name, *v);
        const std::pair<const char*, const Matrixd*> matrices[] = {
            {"B2", &c.B2},           {"B1", &c.B1},           {"C2", &c.C2},           {"C1", &c.C1},
            {"B2_star", &c.B2_star}, {"B1_star", &c.B1_star}, {"C1_star", &c.C1_star}, {"var1_s2", &c.var1_s2},
            {"var2_s2", &c.var2_s2}, {"var1_s1", &c.var1_s1}, {"var2_s1", &c.var2_s1}, {"beta_s", &c.beta_s},
            {"beta_xi", &c.beta_xi},
        };
        for (const auto& [name, m] : matrices) matrix_rows(csv, name, *m);
        doc = csv.str();
    }
    log << "multi-solve: n = " << cfg.multi().n() << '\n';
    return exit_code::ok;
}

int render_multi_measures(const RunConfig& cfg, std::string& doc, std::ostream& log) {
    const auto& p = cfg.multi();
    const auto c = equilibrium_multi(p);
    const auto m = cross_measures(c, p);
    const std::pair<std::string, const Matrixd*> named[] = {
        {"Gamma_m", &m.Gamma_m},
        {"Gamma_r", &m.Gamma_r},
        {"Gamma_c1", &m.Gamma_c[0]},
        {"Gamma_c2", &m.Gamma_c[1]},
        {"Gamma_c3", &m.Gamma_c[2]},
        {"Gamma_m_unconditional", &m.Gamma_m_unconditional},
        {"Gamma_r_unconditional", &m.Gamma_r_unconditional},
    };
    constexpr double tol = 1e-10;
    if (cfg.output.format == OutputFormat::json) {
        json j = json::object();
        for (const auto& [name, mat] : named) {
            const Matrixd sym = symmetrize(*mat);
            j[name] = json{
                {"matrix", matrix_json(*mat)},
                {"asymmetry", asymmetry(*mat)},
                {"eigenvalues", vector_json(symmetric_eigenvalues(sym))},
                {"definiteness", std::string(to_string(definiteness(sym, tol)))},
            };
        }
        doc = dump_json(j);
    } else {
        Csv csv(multi_columns());
        for (const auto& [name, mat] : named) matrix_rows(csv, name, *mat);
        for (const auto& [name, mat] : named) matrix_rows(csv, name + "_eigenvalues", symmetric_eigenvalues(*mat));
        doc = csv.str();
    }
    log << "multi-measures: Gamma_m " << to_string(definiteness(symmetrize(m.Gamma_m), tol)) << ", Gamma_r "
        << to_string(definiteness(symmetrize(m.Gamma_r), tol)) << '\n';
    return exit_code::ok;
}

int render_multi_simulate(const RunConfig& cfg, const RunOptions& opts, std::string& doc, std::ostream& log) {
    const auto& p = cfg.multi();
    const auto c = equilibrium_multi(p);
    const auto m = cross_measures(c, p);
    SimConfig sim = *cfg.sim;
    sim.threads = opts.threads;
    const auto s = simulate_multi(p, c, sim);

    const std::tuple<const char*, const Matrixd*, const MatrixEstimate*> named[] = {
        {"Gamma_m", &m.Gamma_m, &s.gamma_m},
        {"Gamma_r", &m.Gamma_r, &s.gamma_r},
        {"Gamma_m_unconditional", &m.Gamma_m_unconditional, &s.gamma_m_unconditional},
        {"Gamma_r_unconditional", &m.Gamma_r_unconditional, &s.gamma_r_unconditional},
    };
    if (cfg.output.format == OutputFormat::json) {
        json j = {{"n_paths", sim.n_paths}, {"seed", sim.seed}, {"batch_size", sim.batch_size}};
        for (const auto& [name, analytic, est] : named)
            j[name] = json{{"analytic", matrix_json(*analytic)}, {"estimate", matrix_json(est->value)},
                           {"se", matrix_json(est->se)}};
        j["clearing_residual_max"] = s.clearing_residual_max;
        j["budget_residual_max"] = s.budget_residual_max;
        j["mean_payoff"] = vector_json(s.mean_payoff);
        j["wealth_informed"] = {{"mean", s.wealth_informed.mean}, {"variance", s.wealth_informed.variance}};
        j["wealth_uninformed"] = {{"mean", s.wealth_uninformed.mean}, {"variance", s.wealth_uninformed.variance}};
        j["initial_wealth_convention"] = "W0 = 1'S0 + riskless_supply";
        doc = dump_json(j);
    } else {
        Csv csv(multi_simulate_columns());
        for (const auto& [name, analytic, est] : named)
            for (Eigen::Index i = 0; i < analytic->rows(); ++i)
                for (Eigen::Index k = 0; k < analytic->cols(); ++k)
                    csv.row({name, cell(long{i}), cell(long{k}), cell((*analytic)(i, k)), cell(est->value(i, k)),
                             cell(est->se(i, k))});
        const std::pair<const char*, double> scalars[] = {
            {"clearing_residual_max", s.clearing_residual_max},
            {"budget_residual_max", s.budget_residual_max},
            {"wealth_informed_mean", s.wealth_informed.mean},
            {"wealth_informed_variance", s.wealth_informed.variance},
            {"wealth_uninformed_mean", s.wealth_uninformed.mean},
            {"wealth_uninformed_variance", s.wealth_uninformed.variance},
        };
        for (const auto& [name, v] : scalars) csv.row({name, "0", "0", "", cell(v), ""});
        for (Eigen::Index i = 0; i < s.mean_payoff.size(); ++i)
            csv.row({"mean_payoff", cell(long{i}), "0", cell(p.d_bar(i)), cell(s.mean_payoff(i)), ""});
        doc = csv.str();
    }
    log << "multi-simulate: " << sim.n_paths << " paths, clearing residual " << format_double(s.clearing_residual_max)
        << '\n';
    if (!(s.clearing_residual_max < clearing_tolerance)) {
        log << "error: market-clearing residual exceeds " << format_double(clearing_tolerance) << '\n';
        return exit_code::numerical;
    }
    return exit_code::ok;
}

int render_leadlag(const RunConfig& cfg, std::string& doc, std::ostream& log) {
    const auto& p = cfg.multi();
    const auto& ll = *cfg.leadlag;
    const auto r = leadlag_experiment(p, ll.muted, ll.s_active);
    const Eigen::Index n = p.n();
    if (cfg.output.format == OutputFormat::json) {
        doc = dump_json(json{
            {"signal", vector_json(r.signal)},
            {"muted", r.muted},
            {"drift_t1", vector_json(r.response.drift_t1)},
            {"drift_t2", vector_json(r.response.drift_t2)},
            {"premium_t1", vector_json(r.response.premium_t1)},
            {"premium_t2", vector_json(r.response.premium_t2)},
            {"precision_ratio", vector_json(r.precision_ratio)},
        });
    } else {
        Csv csv(leadlag_columns());
        for (Eigen::Index i = 0; i < n; ++i)
            csv.row({cell(long{i + 1}), cell(bool(r.muted[static_cast<std::size_t>(i)])), cell(r.signal(i)),
                     cell(r.precision_ratio(i)), cell(r.response.drift_t1(i)), cell(r.response.drift_t2(i)),
                     cell(r.response.premium_t1(i)), cell(r.response.premium_t2(i))});
        doc = csv.str();
    }
    log << "leadlag: " << ll.muted.size() << " of " << n << " assets muted\n";
    return exit_code::ok;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidParam("output.path", "cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw InvalidParam("output.path", "write to '" + path + "' failed");
}

}  // namespace

const std::vector<std::string>& solve_columns() { return coefficient_names; }

const std::vector<std::string>& measures_columns() {
    static const std::vector<std::string> cols = {"a2",      "b2", "c2",      "a2_star", "b2_star",        "a1",
                                                  "b1",      "c1", "a1_star", "s0",      "gamma_m",        "gamma_r",
                                                  "momentum_holds", "condition_value"};
    return cols;
}

const std::vector<std::string>& simulate_columns() {
    static const std::vector<std::string> cols = {
        "n_paths",
        "seed",
        "batch_size",
        "gamma_m",
        "gamma_m_hat",
        "gamma_m_se",
        "gamma_r",
        "gamma_r_hat",
        "gamma_r_se",
        "gamma_m_unconditional",
        "gamma_m_unconditional_hat",
        "gamma_m_unconditional_se",
        "gamma_r_unconditional",
        "gamma_r_unconditional_hat",
        "gamma_r_unconditional_se",
        "clearing_residual_max",
        "budget_residual_max",
        "mean_payoff",
        "wealth_informed_mean",
        "wealth_informed_variance",
        "wealth_uninformed_mean",
        "wealth_uninformed_variance",
    };
    return cols;
}

const std::vector<std::string>& sweep_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c = {"param", "value"};
        c.insert(c.end(), coefficient_names.begin(), coefficient_names.end());
        for (const char* m : {"gamma_m", "gamma_r", "momentum_holds", "condition_value", "gamma_m_unconditional",
                              "gamma_r_unconditional"})
            c.emplace_back(m);
        return c;
    }();
    return cols;
}

const std::vector<std::string>& check_columns() {
    static const std::vector<std::string> cols = {"check", "kind", "status", "cases", "failures", "worst", "note"};
    return cols;
}

const std::vector<std::string>& multi_columns() {
    static const std::vector<std::string> cols = {"name", "row", "col", "value"};
    return cols;
}

const std::vector<std::string>& multi_simulate_columns() {
    static const std::vector<std::string> cols = {"name", "row", "col", "analytic", "estimate", "se"};
    return cols;
}

const std::vector<std::string>& leadlag_columns() {
    static const std::vector<std::string> cols = {"asset",    "muted",    "signal",     "precision_ratio",
                                                  "drift_t1", "drift_t2", "premium_t1", "premium_t2"};
    return cols;
}

const std::vector<std::string>& path_columns() {
    static const std::vector<std::string> cols = {"path",  "d",     "s",     "theta1", "theta2", "s0",
                                                  "s1",    "s2",    "s3",    "x1_t0",  "x1_t1",  "x1_t2",
                                                  "x2_t0", "x2_t1", "x2_t2", "w1_t3",  "w2_t3"};
    return cols;
}

std::string line_chart_svg(const std::vector<double>& x, const std::vector<double>& y, const std::string& x_label,
                           const std::string& y_label) {
    constexpr double width = 640, height = 400, left = 80, right = 20, top = 20, bottom = 50;
    const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
    const auto [ymin_it, ymax_it] = std::minmax_element(y.begin(), y.end());
    const double xmin = x.empty() ? 0 : *xmin_it, xmax = x.empty() ? 1 : *xmax_it;
    double ymin = y.empty() ? 0 : *ymin_it, ymax = y.empty() ? 1 : *ymax_it;
    if (ymax == ymin) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double xspan = xmax == xmin ? 1 : xmax - xmin;
    const auto px = [&](double v) { return left + (v - xmin) / xspan * (width - left - right); };
    const auto py = [&](double v) { return height - bottom - (v - ymin) / (ymax - ymin) * (height - top - bottom); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
       << height - bottom << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
       << "\" stroke=\"black\"/>\n";
    if (ymin < 0 && ymax > 0)
        os << "<line x1=\"" << left << "\" y1=\"" << py(0) << "\" x2=\"" << width - right << "\" y2=\"" << py(0)
           << "\" stroke=\"#999\" stroke-dasharray=\"4 4\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? " " : "") << px(x[i]) << ',' << py(y[i]);
    os << "\"/>\n";
    os << "<text x=\"" << left << "\" y=\"" << height - bottom + 16 << "\">" << format_double(xmin) << "</text>\n";
    os << "<text x=\"" << width - right << "\" y=\"" << height - bottom + 16 << "\" text-anchor=\"end\">"
       << format_double(xmax) << "</text>\n";
    os << "<text x=\"" << left - 4 << "\" y=\"" << top + 4 << "\" text-anchor=\"end\">" << format_double(ymax)
       << "</text>\n";
    os << "<text x=\"" << left - 4 << "\" y=\"" << height - bottom << "\" text-anchor=\"end\">" << format_double(ymin)
       << "</text>\n";
    os << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">" << x_label
       << "</text>\n";
    os << "<text x=\"14\" y=\"" << (top + height - bottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
       << (top + height - bottom) / 2 << ")\">" << y_label << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

int render(const RunConfig& cfg, const RunOptions& opts, std::string& doc, std::ostream& log) {
    switch (cfg.mode) {
        case Mode::solve: return render_solve(cfg, doc, log);
        case Mode::measures: return render_measures(cfg, doc, log);
        case Mode::simulate: return render_simulate(cfg, opts, doc, log);
        case Mode::sweep: {
            std::vector<double> xs, ys;
            return render_sweep(cfg, doc, log, xs, ys);
        }
        case Mode::check: return render_check(cfg, doc, log);
        case Mode::multi_solve: return render_multi_solve(cfg, doc, log);
        case Mode::multi_measures: return render_multi_measures(cfg, doc, log);
        case Mode::multi_simulate: return render_multi_simulate(cfg, opts, doc, log);
        case Mode::leadlag: return render_leadlag(cfg, doc, log);
    }
    return exit_code::config;
}

int run(const RunConfig& cfg, const RunOptions& opts, std::ostream& out, std::ostream& log) {
    std::string doc;
    int code = exit_code::ok;
    if (cfg.mode == Mode::sweep) {
        std::vector<double> xs, ys;
        code = render_sweep(cfg, doc, log, xs, ys);
        if (cfg.output.chart) write_file(*cfg.output.chart, line_chart_svg(xs, ys, cfg.sweep->param, "gamma_m"));
    } else {
        code = render(cfg, opts, doc, log);
    }

    if (opts.dump_paths) {
        if (cfg.mode != Mode::simulate) throw InvalidParam("--dump-paths", "only available in simulate mode");
        const auto& p = cfg.single();
        write_file(*opts.dump_paths, render_paths(p, equilibrium(p), *cfg.sim, opts.dump_limit));
    }

    const std::string path = opts.out.value_or(cfg.output.path);
    if (path == "-") {
        out << doc;
        out.flush();
    } else {
        write_file(path, doc);
    }
    return code;
}

}  // namespace hbeq
