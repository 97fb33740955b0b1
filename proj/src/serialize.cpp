#include "hbeq/serialize.hpp"

namespace hbeq {

using nlohmann::json;

namespace {

// Field tables keep to_json/from_json in sync.
template <typename T>
struct Field {
    const char* name;
    double T::*ptr;
};

constexpr Field<SingleParamsd> single_fields[] = {
    {"d_bar", &SingleParamsd::d_bar},
    {"sigma_d2", &SingleParamsd::sigma_d2},
    {"sigma_s2", &SingleParamsd::sigma_s2},
    {"sigma_theta2_true", &SingleParamsd::sigma_theta2_true},
    {"sigma_theta2_informed", &SingleParamsd::sigma_theta2_informed},
    {"alpha", &SingleParamsd::alpha},
    {"pi", &SingleParamsd::pi},
    {"riskless_supply", &SingleParamsd::riskless_supply},
};

using EC = EquilibriumCoefficientsd;
constexpr Field<EC> coefficient_fields[] = {
    {"d_bar", &EC::d_bar},       {"a2", &EC::a2},           {"b2", &EC::b2},           {"c2", &EC::c2},
    {"a2_star", &EC::a2_star},   {"b2_star", &EC::b2_star}, {"a1", &EC::a1},           {"b1", &EC::b1},
    {"c1", &EC::c1},             {"a1_star", &EC::a1_star}, {"b1_star", &EC::b1_star}, {"c1_star", &EC::c1_star},
    {"s0", &EC::s0},             {"var1_s2", &EC::var1_s2}, {"var2_s2", &EC::var2_s2}, {"var1_s1", &EC::var1_s1},
    {"var2_s1", &EC::var2_s1},   {"beta_s", &EC::beta_s},   {"beta_xi", &EC::beta_xi},
};

template <typename T, std::size_t N>
void write_fields(json& j, const T& v, const Field<T> (&fields)[N]) {
    j = json::object();
    for (const auto& f : fields) j[f.name] = v.*(f.ptr);
}

template <typename T, std::size_t N>
void read_fields(const json& j, T& v, const Field<T> (&fields)[N]) {
    for (const auto& f : fields) v.*(f.ptr) = j.at(f.name).template get<double>();
}

}  // namespace

json matrix_json(const Matrixd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrixd matrix_from_json(const json& j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j.at(0).size());
    Matrixd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != cols) throw WrongDimension("ragged matrix in JSON");
        for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
    }
    return m;
}

json vector_json(const Vectord& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Vectord vector_from_json(const json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Vectord>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void to_json(json& j, const SingleParamsd& p) { write_fields(j, p, single_fields); }
void from_json(const json& j, SingleParamsd& p) { read_fields(j, p, single_fields); }

void to_json(json& j, const EquilibriumCoefficientsd& c) { write_fields(j, c, coefficient_fields); }
void from_json(const json& j, EquilibriumCoefficientsd& c) { read_fields(j, c, coefficient_fields); }

void to_json(json& j, const PredictabilityMeasures<double>& m) {
    j = json{
        {"gamma_m", m.gamma_m},
        {"gamma_r", m.gamma_r},
        {"momentum_holds", m.momentum_holds},
        {"condition_value", m.condition_value},
        {"gamma_m_unconditional", m.gamma_m_unconditional},
        {"gamma_r_unconditional", m.gamma_r_unconditional},
    };
}

void to_json(json& j, const MultiCoefficientsd& c) {
    j = json{
        {"d_bar", vector_json(c.d_bar)},     {"A2", vector_json(c.A2)},           {"A1", vector_json(c.A1)},
        {"A2_star", vector_json(c.A2_star)}, {"A1_star", vector_json(c.A1_star)}, {"S0", vector_json(c.S0)},
        {"B2", matrix_json(c.B2)},           {"B1", matrix_json(c.B1)},           {"C2", matrix_json(c.C2)},
        {"C1", matrix_json(c.C1)},           {"B2_star", matrix_json(c.B2_star)}, {"B1_star", matrix_json(c.B1_star)},
        {"C1_star", matrix_json(c.C1_star)}, {"var1_s2", matrix_json(c.var1_s2)}, {"var2_s2", matrix_json(c.var2_s2)},
        {"var1_s1", matrix_json(c.var1_s1)}, {"var2_s1", matrix_json(c.var2_s1)}, {"beta_s", matrix_json(c.beta_s)},
        {"beta_xi", matrix_json(c.beta_xi)},
    };
}

void from_json(const json& j, MultiCoefficientsd& c) {
    c.d_bar = vector_from_json(j.at("d_bar"));
    c.A2 = vector_from_json(j.at("A2"));
    c.A1 = vector_from_json(j.at("A1"));
    c.A2_star = vector_from_json(j.at("A2_star"));
    c.A1_star = vector_from_json(j.at("A1_star"));
    c.S0 = vector_from_json(j.at("S0"));
    c.B2 = matrix_from_json(j.at("B2"));
    c.B1 = matrix_from_json(j.at("B1"));
    c.C2 = matrix_from_json(j.at("C2"));
    c.C1 = matrix_from_json(j.at("C1"));
    c.B2_star = matrix_from_json(j.at("B2_star"));
    c.B1_star = matrix_from_json(j.at("B1_star"));
    c.C1_star = matrix_from_json(j.at("C1_star"));
    c.var1_s2 = matrix_from_json(j.at("var1_s2"));
    c.var2_s2 = matrix_from_json(j.at("var2_s2"));
    c.var1_s1 = matrix_from_json(j.at("var1_s1"));
    c.var2_s1 = matrix_from_json(j.at("var2_s1"));
    c.beta_s = matrix_from_json(j.at("beta_s"));
    c.beta_xi = matrix_from_json(j.at("beta_xi"));
}

void to_json(json& j, const CheckOutcome& c) {
    j = json{
        {"name", c.name},   {"asserted", c.asserted}, {"passed", c.passed()}, {"cases", c.cases},
        {"failures", c.failures}, {"worst", c.worst}, {"note", c.note},
    };
}

}  // namespace hbeq
