#pragma once

#include <json.hpp>

#include "hbeq/battery.hpp"
#include "hbeq/multi_asset.hpp"
#include "hbeq/simulator.hpp"
#include "hbeq/single_asset.hpp"

namespace hbeq {

// JSON forms. Doubles are written with round-trip precision, so
// from_json(to_json(x)) == x bit for bit.

void to_json(nlohmann::json& j, const SingleParamsd& p);
void from_json(const nlohmann::json& j, SingleParamsd& p);

void to_json(nlohmann::json& j, const EquilibriumCoefficientsd& c);
void from_json(const nlohmann::json& j, EquilibriumCoefficientsd& c);

void to_json(nlohmann::json& j, const PredictabilityMeasures<double>& m);

void to_json(nlohmann::json& j, const MultiCoefficientsd& c);
void from_json(const nlohmann::json& j, MultiCoefficientsd& c);

void to_json(nlohmann::json& j, const CheckOutcome& c);

nlohmann::json matrix_json(const Matrixd& m);
Matrixd matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_json(const Vectord& v);
Vectord vector_from_json(const nlohmann::json& j);

}  // namespace hbeq
