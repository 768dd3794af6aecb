#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lostructure/arak.hpp"
#include "lostructure/config.hpp"
#include "lostructure/distributions.hpp"
#include "lostructure/gap.hpp"

namespace lostructure {

struct RecoveryParams {
  Rational q;      // Q(F_a, tau)
  Rational tau;
  Rational kappa;
  Rational delta;
  int r = 0;
  std::size_t n_prime = 1;
  Rational p_val;  // p(tau/kappa), or p(0) when tau = 0
  Constants constants;
};

// Lower end of the admissible n' window.
double window_lower(const RecoveryParams& params);

// Computes q and p exactly; picks the smallest admissible n' unless given.
RecoveryParams make_recovery_params(const WeightVector& a, const DiscreteDistribution& F,
                                    const Rational& tau, const Rational& kappa,
                                    const Rational& delta, int r, const Constants& constants,
                                    std::optional<std::size_t> n_prime = std::nullopt,
                                    std::size_t atom_cap = kDefaultAtomCap);

// floor(y) + 1; throws InvalidWindow when n' lies outside [window_lower, n].
std::size_t select_m(const RecoveryParams& params, std::size_t n);

// Indices sorted by |a_k| descending, ties by index.
std::vector<std::size_t> magnitude_order(const std::vector<Rational>& a);

struct RecoveryOptions {
  Caps caps;
  BetaOptions beta;
  std::size_t dilation_budget = 64;
};

struct RecoveryReport {
  std::size_t n = 0;
  RecoveryParams params;
  std::size_t m = 1;
  Rational beta_value;
  BetaExactness beta_exactness = BetaExactness::exact;
  Cgap K = Cgap::zero();
  bool degenerate_zero = false;  // delta > |a| / sqrt(n')
  Cgap K_star = Cgap::zero();
  Cgap K_star_star = Cgap::zero();
  Gap bar_P = Gap::zero(1);
  Gap barbar_P = Gap::zero(1);
  Gap barbar_P_t = Gap::zero(1);  // t-proper version used for K**
  Gap tilde_P = Gap::zero(1);
  Rational sandwich_t = 1;
  Rational sandwich_t_tilde = 1;
  Rational embed_t = 1;
  Rational slab_bound = 0;       // rational stand-in for 2|a|/sqrt(n')
  Rational generator_bound_sq;   // (2 r |a| / sqrt(n'))^2
  std::map<std::string, std::size_t> coverage;
  std::map<std::string, std::size_t> sizes;
  std::map<std::string, bool> certified;
  std::vector<std::string> flags;

  bool has_flag(const std::string& f) const;
  long guarantee() const { return static_cast<long>(n) - 2 * static_cast<long>(params.n_prime); }
};

RecoveryReport recover(const WeightVector& a, const DiscreteDistribution& F,
                       const RecoveryParams& params, const RecoveryOptions& opts = {});

struct ProductReport {
  std::vector<RecoveryReport> coordinates;
  std::vector<bool> zero_coordinate;
  std::vector<Cgap> K_star;
  std::vector<Cgap> K_star_star;
  Gap bar_P = Gap::zero(1);
  Gap barbar_P = Gap::zero(1);
  Gap tilde_P = Gap::zero(1);
  std::vector<std::size_t> blocks;  // s_0 = 0, s_k = l_1 + ... + l_k
  std::map<std::string, std::size_t> joint_coverage;
  long guarantee = 0;               // n - 2 sum n'_j
  std::map<std::string, bool> certified;
  std::vector<std::string> flags;
};

// Coordinates whose weights vanish identically are reported as {0}.
ProductReport recover_multid(const WeightVector& a, const DiscreteDistribution& F,
                             const std::vector<RecoveryParams>& params,
                             const RecoveryOptions& opts = {});

// d-dimensional GAP whose generators are the factors' generators placed in
// their own coordinate, in factor order.
Gap block_product(const std::vector<Gap>& factors);

// Generators a_(n'+1..n) in magnitude order, all dims 1.
Gap fallback_gap(const WeightVector& a, std::size_t n_prime);

struct ScheduleEntry {
  std::size_t coordinate = 0;
  int r = 0;
  std::size_t n_prime = 0;
  double window_lower = 0.0;  // with the observed q_j
  double chain_bound = 0.0;   // with q_j replaced by its assumed lower bound
  bool preconditions_ok = true;
  bool window_ok = false;
  std::optional<Gap> fallback;
  std::string note;
};

struct Thm16Inputs {
  double A = 1.0;
  double theta = 1.0;
  double eps1 = 1.0;
  double eps2 = 1.0;
  double b_n = 2.0;
  std::vector<double> q;  // Q(F_a^(j), 0)
  double p0 = 1.0;
  double c4 = 1.0;
};

struct Thm19Inputs {
  double A = 1.0;
  double B = 0.0;
  double D = 0.0;
  double theta = 1.0;
  double eps1 = 1.0;
  double eps2 = 1.0;
  double eps3 = 1.0;
  double eps4 = 1.0;
  double b_n = 2.0;
  double rho_n = 1.0;  // delta / kappa
  double p_val = 1.0;  // p(tau/kappa)
  double kappa = 1.0;
  double delta = 1.0;
  std::vector<double> q;  // Q(F_a^(j), tau)
  double c4 = 1.0;
};

int schedule_rank_thm16(double A, double theta);
int schedule_rank_thm19(double A, double B, double D, double theta);

std::vector<ScheduleEntry> schedule_thm16(const Thm16Inputs& in, const WeightVector& a);
std::vector<ScheduleEntry> schedule_thm19(const Thm19Inputs& in, const WeightVector& a);

struct LogRankReport {
  Gap gap = Gap::zero(1);
  int r = 0;
  std::size_t n_prime = 0;  // elements left uncovered
  std::vector<std::size_t> coverage_history;
  Rational q;
  Rational p;
  double log_term = 0.0;  // |log q| + log(kappa/delta) + 1, or |log q| + 1
  double r_bound = 0.0;
  double n_prime_bound = 0.0;
  bool r_ok = false;
  bool n_prime_ok = false;
};

struct LogRankOptions {
  std::size_t max_rank = 12;
  std::size_t atom_cap = kDefaultAtomCap;
};

// Greedy {-1,0,1}-combination GAP. With tau = 0, delta must be 0.
LogRankReport lograank_construct(const WeightVector& a, const DiscreteDistribution& F,
                                 const Rational& tau, const Rational& kappa, const Rational& delta,
                                 double c8, const LogRankOptions& opts = {});

struct LogRankProduct {
  std::vector<LogRankReport> coordinates;
  Gap gap = Gap::zero(1);
  std::vector<std::size_t> blocks;
  std::size_t joint_coverage = 0;
  std::size_t total_rank = 0;
};

LogRankProduct lograank_multid(const WeightVector& a, const DiscreteDistribution& F,
                               const std::vector<Rational>& tau, const std::vector<Rational>& kappa,
                               const std::vector<Rational>& delta, double c8,
                               const LogRankOptions& opts = {});

}  // namespace lostructure
