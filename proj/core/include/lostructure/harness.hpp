#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lostructure/config.hpp"
#include "lostructure/distributions.hpp"
#include "lostructure/gap.hpp"
#include "lostructure/json_io.hpp"
#include "lostructure/polytope.hpp"

namespace lostructure {

struct Planted {
  Gap gap = Gap::zero(1);
  std::vector<std::size_t> outliers;  // sorted indices
  Rational delta0 = 0;
};

struct Instance {
  std::string id;
  WeightVector weight;
  DiscreteDistribution law;
  std::optional<Planted> planted;
  std::uint64_t seed = 0;
};

struct GenParams {
  std::size_t n = 50;
  std::size_t d = 2;            // product_d
  Rational g = 1;
  Rational g2 = 0;              // gap2; 0 picks an incommensurable-looking default
  long L = 0;                   // coefficient range; ap with L = 0 gives a_k = k g
  double zero_prob = 0.0;
  std::size_t outliers = 0;
  long outlier_lo = 100;        // outliers sit at +-M g, M uniform in [lo, hi]
  long outlier_hi = 100;
  std::size_t rank = 2;         // signsum
  std::string law = "rademacher";  // or "uniform:lo:hi"
};

// Kinds: ap, gap2, outliers, dense_random, product_d, signsum.
Instance gen_planted(const std::string& kind, const GenParams& params, std::uint64_t seed);
DiscreteDistribution law_from_name(const std::string& name);

Json to_json(const Instance& inst);
Instance instance_from_json(const Json& j);
GenParams gen_params_from_json(const Json& j);

// Random objects shared by the property suites.
DiscreteDistribution random_law(std::mt19937_64& rng);
Gap random_gap(std::mt19937_64& rng, std::size_t max_rank = 3);
SymmetricPolytope random_polytope2(std::mt19937_64& rng);
AtomicMeasure random_integer_measure(std::mt19937_64& rng);

// Planted families for the recovery suites.
struct RecoveryCase {
  Instance inst;
  Rational tau, kappa, delta;
  int r = 1;
};
RecoveryCase thm4_case(std::size_t i, std::uint64_t seed);
RecoveryCase thm5_case(std::size_t i, std::uint64_t seed);

struct LogRankCase {
  Instance inst;
  Rational tau, kappa, delta;
  std::size_t planted_rank = 0;
};
LogRankCase lograank_case(std::size_t i, std::uint64_t seed);

struct CsvRow {
  std::string suite, id;
  std::size_t n = 0, d = 1;
  std::string r, m, tau, kappa, delta, lhs, rhs, slack, coverage, flags;
};

struct SuiteReport {
  std::string suite;
  std::size_t instances = 0;
  std::size_t passes = 0;
  std::vector<std::pair<std::string, std::string>> failures;  // (id, reason)
  std::map<std::string, double> calibration;
  std::vector<CsvRow> rows;
};

struct SuiteOptions {
  std::size_t instances = 0;  // 0 uses the suite default
  std::size_t threads = 0;    // 0 uses the hardware count
};

const std::vector<std::string>& suite_names();
SuiteReport run_suite(const std::string& name, const Config& cfg, const SuiteOptions& opts = {});
Json to_json(const SuiteReport& r);

inline constexpr const char* kCsvHeader = "suite,id,n,d,r,m,tau,kappa,delta,lhs,rhs,slack,coverage,flags";
// Appends rows; writes the header first when the file is new or empty.
void report_csv(const std::vector<CsvRow>& rows, const std::string& path);
std::string csv_line(const CsvRow& row);

struct CalibrationResult {
  Config config;
  std::map<std::string, double> observed;
  std::vector<std::string> notes;
};
// Smallest c2, c4, c8 (and Esseen constant) under which the calibration
// families pass; other fields of the input config are kept.
CalibrationResult calibrate(const Config& base, std::size_t thm4_instances = 50,
                            std::size_t thm5_instances = 10);


}  // namespace lostructure

#include "lostructure/detail/parallel.hpp"
