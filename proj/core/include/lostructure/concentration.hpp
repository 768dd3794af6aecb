#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "lostructure/distributions.hpp"
#include "lostructure/rational.hpp"

namespace lostructure {

enum class ConcMode { exact, upper_bound, monte_carlo };

const char* to_string(ConcMode mode);

struct ConcentrationResult {
  ConcMode mode = ConcMode::exact;
  double value = 0.0;
  std::optional<Rational> exact;             // exact mode
  std::optional<RatVec> witness;             // exact mode: window center
  std::optional<std::vector<double>> center; // monte_carlo: best sampled center
  std::optional<double> ci_halfwidth;        // monte_carlo only
};

ConcentrationResult conc_zero(const DiscreteDistribution& F);
ConcentrationResult conc_interval(const DiscreteDistribution& F, const Rational& tau);

using BatchSampler = std::function<std::vector<std::vector<double>>(std::size_t count, std::uint64_t seed)>;

struct McOptions {
  std::size_t bootstrap = 200;
  std::size_t max_centers = 4096;  // d > 1 only
};

ConcentrationResult conc_ball_mc(const BatchSampler& sampler, std::size_t d, double tau,
                                 std::size_t count, std::uint64_t seed, McOptions opts = {});
ConcentrationResult conc_from_samples(const std::vector<std::vector<double>>& samples, double tau,
                                      std::uint64_t seed, McOptions opts = {});

// (Q(F, mu), (1 + floor(mu/lam))^d Q(F, lam))
std::pair<Rational, Rational> regularity_factor(const DiscreteDistribution& F, const Rational& mu,
                                                const Rational& lam);

// constant * tau * integral over |t| <= 1/tau of |char_fn(t)|
double esseen_upper(const std::function<double(double)>& char_fn_modulus, double tau,
                    double constant);

// P(sum_k (N_k^+ - N_k^-) a_k = 0), d = 1, computed from truncated Poisson tables.
double h_lambda_zero_mass(const WeightVector& a, double lambda);

struct Lemma1Options {
  std::size_t samples = 100'000;
  std::uint64_t seed = 1;
  double esseen_constant = 1.0;
  std::size_t bootstrap = 50;
};

struct Lemma1Result {
  Rational lhs;           // Q(F_a, tau), exact
  Rational p;             // p(tau / kappa)
  double rhs_mc = 0.0;    // Q(H^p, kappa) estimate
  double rhs_ci = 0.0;
  double rhs_esseen = 0.0;
  double ratio = 0.0;     // lhs / rhs_mc
};

Lemma1Result lemma1_pair(const DiscreteDistribution& F, const WeightVector& a, const Rational& tau,
                         const Rational& kappa, const Lemma1Options& opts = {});

struct Corollary1Result {
  Rational lhs;
  Rational p;
  double factor = 1.0;  // 1 + floor(kappa / delta)
  double rhs_mc = 0.0;  // factor * Q(H^p, delta)
  double ratio = 0.0;
};

Corollary1Result corollary1_pair(const DiscreteDistribution& F, const WeightVector& a,
                                 const Rational& tau, const Rational& kappa,
                                 const Rational& delta, const Lemma1Options& opts = {});

struct Lemma2Result {
  Rational lhs;       // Q(F_a, 0)
  Rational p0;        // p(0)
  double h_zero = 0;  // H^{p(0)}{0}
  double ratio = 0;
};

Lemma2Result lemma2_pair(const DiscreteDistribution& F, const WeightVector& a);

}  // namespace lostructure
