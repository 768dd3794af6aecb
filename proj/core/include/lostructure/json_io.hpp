#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lostructure/arak.hpp"
#include "lostructure/concentration.hpp"
#include "lostructure/distributions.hpp"
#include "lostructure/gap.hpp"
#include "lostructure/polytope.hpp"
#include "lostructure/recovery.hpp"

namespace lostructure {

using Json = nlohmann::json;

// Rationals travel as "p/q" strings; plain JSON integers are accepted on input.
Json to_json(const Rational& x);
Json to_json(const RatVec& v);
Rational rational_from_json(const Json& j);
RatVec ratvec_from_json(const Json& j);

Json to_json(const DiscreteDistribution& f);
DiscreteDistribution distribution_from_json(const Json& j);
Json to_json(const WeightVector& a);
WeightVector weights_from_json(const Json& j);
// Same layout as a distribution; masses need not sum to one.
Json to_json(const AtomicMeasure& w);
AtomicMeasure measure_from_json(const Json& j);

Json to_json(const Gap& p);
Gap gap_from_json(const Json& j);
Json to_json(const SymmetricPolytope& v);
SymmetricPolytope polytope_from_json(const Json& j);
Json to_json(const Cgap& k);
Cgap cgap_from_json(const Json& j);

Json to_json(const ConcentrationResult& c);
Json to_json(const BetaResult& b);
Json to_json(const BoundReport& b);
Json to_json(const RecoveryParams& p);
Json to_json(const RecoveryReport& r);
Json to_json(const ProductReport& r);
Json to_json(const ScheduleEntry& e);
Json to_json(const LogRankReport& r);
Json to_json(const LogRankProduct& r);

Thm16Inputs thm16_inputs_from_json(const Json& j);
Thm19Inputs thm19_inputs_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_json_file(const Json& j, const std::string& path);

}  // namespace lostructure
