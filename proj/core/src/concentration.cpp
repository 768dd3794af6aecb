#include "lostructure/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lostructure/errors.hpp"

namespace lostructure {

const char* to_string(ConcMode mode) {
  switch (mode) {
    case ConcMode::exact: return "exact";
    case ConcMode::upper_bound: return "upper_bound";
    case ConcMode::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

ConcentrationResult conc_zero(const DiscreteDistribution& F) {
  const Atom* best = &F.atoms().front();
  for (const auto& a : F.atoms())
    if (a.mass > best->mass) best = &a;
  ConcentrationResult r;
  r.mode = ConcMode::exact;
  r.exact = best->mass;
  r.value = best->mass.get_d();
  r.witness = best->value;
  return r;
}

ConcentrationResult conc_interval(const DiscreteDistribution& F, const Rational& tau) {
  if (F.dim() != 1) throw InvalidArgument("conc_interval requires d = 1");
  if (tau < 0) throw InvalidArgument("conc_interval: tau must be nonnegative");
  const auto& at = F.atoms();
  // Right-anchored windows [x_j - tau, x_j]; the first maximum gives the
  // smallest optimal center.
  Rational window = 0;
  Rational best = -1;
  std::size_t best_j = 0;
  std::size_t i = 0;
  for (std::size_t j = 0; j < at.size(); ++j) {
    window += at[j].mass;
    while (at[i].value[0] < at[j].value[0] - tau) {
      window -= at[i].mass;
      ++i;
    }
    if (window > best) {
      best = window;
      best_j = j;
    }
  }
  ConcentrationResult r;
  r.mode = ConcMode::exact;
  r.exact = best;
  r.value = best.get_d();
  r.witness = RatVec{at[best_j].value[0] - tau / 2};
  return r;
}

namespace {

struct Empirical {
  std::vector<std::vector<double>> values;
  std::vector<std::size_t> counts;
  std::size_t total = 0;
};

Empirical dedupe(const std::vector<std::vector<double>>& samples) {
  std::map<std::vector<double>, std::size_t> m;
  for (const auto& s : samples) ++m[s];
  Empirical e;
  for (auto& [v, c] : m) {
    e.values.push_back(v);
    e.counts.push_back(c);
  }
  e.total = samples.size();
  return e;
}

bool within(double dist, double tau) {
  // Closed window; slack absorbs rounding in sums of rational weights.
  return dist <= tau + 1e-9 * std::max({1.0, std::abs(tau)});
}

// Best window count for d = 1 over sorted distinct values; returns (count, center).
std::pair<std::size_t, double> sup_line(const std::vector<double>& xs, const std::vector<std::size_t>& counts,
                                        double tau) {
  std::size_t best = 0;
  double center = xs.empty() ? 0.0 : xs.front();
  std::size_t window = 0;
  std::size_t i = 0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    window += counts[j];
    while (!within(xs[j] - xs[i], tau)) {
      window -= counts[i];
      ++i;
    }
    if (window > best) {
      best = window;
      center = xs[j] - tau / 2.0;
    }
  }
  return {best, center};
}

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

std::pair<std::size_t, std::size_t> sup_balls(const Empirical& e, const std::vector<std::size_t>& counts,
                                              const std::vector<std::size_t>& centers, double tau) {
  const double r = tau / 2.0;
  std::size_t best = 0;
  std::size_t best_c = centers.empty() ? 0 : centers.front();
  for (std::size_t c : centers) {
    std::size_t mass = 0;
    for (std::size_t k = 0; k < e.values.size(); ++k)
      if (counts[k] && within(std::sqrt(dist2(e.values[c], e.values[k])), r)) mass += counts[k];
    if (mass > best) {
      best = mass;
      best_c = c;
    }
  }
  return {best, best_c};
}

std::vector<std::size_t> multinomial(const std::vector<std::size_t>& counts, std::size_t total,
                                     std::mt19937_64& rng) {
  std::vector<std::size_t> out(counts.size(), 0);
  std::size_t left = total;
  double mass_left = 1.0;
  for (std::size_t k = 0; k < counts.size() && left > 0; ++k) {
    double p = static_cast<double>(counts[k]) / static_cast<double>(total);
    double q = mass_left > 0 ? std::min(1.0, p / mass_left) : 1.0;
    std::binomial_distribution<std::size_t> b(left, q);
    out[k] = k + 1 == counts.size() ? left : b(rng);
    left -= out[k];
    mass_left -= p;
  }
  return out;
}

}  // namespace

ConcentrationResult conc_from_samples(const std::vector<std::vector<double>>& samples, double tau,
                                      std::uint64_t seed, McOptions opts) {
  if (samples.empty()) throw InvalidArgument("conc_from_samples: no samples");
  if (tau < 0) throw InvalidArgument("conc_from_samples: tau must be nonnegative");
  const std::size_t d = samples.front().size();
  Empirical e = dedupe(samples);
  const double n = static_cast<double>(e.total);

  std::vector<double> xs;
  std::vector<std::size_t> centers;
  if (d == 1) {
    for (const auto& v : e.values) xs.push_back(v[0]);
  } else {
    std::vector<std::size_t> idx(e.values.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t p, std::size_t q) { return e.counts[p] > e.counts[q]; });
    if (idx.size() > opts.max_centers) idx.resize(opts.max_centers);
    centers = idx;
  }

  auto evaluate = [&](const std::vector<std::size_t>& counts, std::vector<double>* center) {
    if (d == 1) {
      auto [c, x] = sup_line(xs, counts, tau);
      if (center) *center = {x};
      return static_cast<double>(c) / n;
    }
    auto [c, k] = sup_balls(e, counts, centers, tau);
    if (center) *center = e.values[k];
    return static_cast<double>(c) / n;
  };

  ConcentrationResult r;
  r.mode = ConcMode::monte_carlo;
  std::vector<double> center;
  r.value = evaluate(e.counts, &center);
  r.center = center;

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  double s = 0.0;
  double s2 = 0.0;
  for (std::size_t b = 0; b < opts.bootstrap; ++b) {
    double v = evaluate(multinomial(e.counts, e.total, rng), nullptr);
    s += v;
    s2 += v * v;
  }
  double hw = 0.0;
  if (opts.bootstrap > 1) {
    double m = s / static_cast<double>(opts.bootstrap);
    double var = std::max(0.0, s2 / static_cast<double>(opts.bootstrap) - m * m);
    hw = 1.96 * std::sqrt(var);
  }
  r.ci_halfwidth = hw;
  return r;
}

ConcentrationResult conc_ball_mc(const BatchSampler& sampler, std::size_t d, double tau,
                                 std::size_t count, std::uint64_t seed, McOptions opts) {
  if (count < 1000) throw InvalidArgument("conc_ball_mc: count must be at least 1000");
  if (!(tau > 0)) throw InvalidArgument("conc_ball_mc: tau must be positive");
  auto samples = sampler(count, seed);
  if (samples.size() != count) throw InvalidArgument("conc_ball_mc: sampler returned wrong count");
  for (const auto& s : samples)
    if (s.size() != d) throw InvalidArgument("conc_ball_mc: sample dimension mismatch");
  return conc_from_samples(samples, tau, seed, opts);
}

std::pair<Rational, Rational> regularity_factor(const DiscreteDistribution& F, const Rational& mu,
                                                const Rational& lam) {
  if (mu < 0 || lam < 0) throw InvalidArgument("regularity_factor: negative width");
  if (F.dim() > 1 || (mu == 0 && lam == 0)) {
    if (!(mu == 0 && lam == 0)) throw InvalidArgument("regularity_factor: d > 1 needs mu = lam = 0");
    Rational q = *conc_zero(F).exact;
    Integer f;
    mpz_ui_pow_ui(f.get_mpz_t(), 2, F.dim());
    return {q, Rational(f) * q};
  }
  if (lam == 0) throw InvalidArgument("regularity_factor: lam must be positive");
  Rational lhs = *conc_interval(F, mu).exact;
  Rational q = *conc_interval(F, lam).exact;
  Integer f = floor(mu / lam) + 1;
  return {lhs, Rational(f) * q};
}

double esseen_upper(const std::function<double(double)>& char_fn_modulus, double tau,
                    double constant) {
  if (!(tau > 0)) throw InvalidArgument("esseen_upper: tau must be positive");
  if (!(constant > 0)) throw InvalidArgument("esseen_upper: constant must be positive");
  using boost::math::quadrature::gauss_kronrod;
  double err = 0.0;
  auto f = [&](double t) { return std::abs(char_fn_modulus(t)); };
  double integral = gauss_kronrod<double, 61>::integrate(f, -1.0 / tau, 1.0 / tau, 25, 1e-13, &err);
  if (!(err <= 1e-9) || !std::isfinite(integral))
    throw QuadratureFailure("esseen_upper: quadrature error " + std::to_string(err) + " above 1e-9");
  return constant * tau * integral;
}

namespace {

// Poisson(mu) pmf on 0..K with tail below 1e-16.
std::vector<double> poisson_table(double mu) {
  std::vector<double> p;
  if (mu == 0.0) return {1.0};
  std::size_t K = static_cast<std::size_t>(mu + 14.0 * std::sqrt(mu) + 40.0);
  p.resize(K + 1);
  for (std::size_t k = 0; k <= K; ++k)
    p[k] = std::exp(-mu + static_cast<double>(k) * std::log(mu) - std::lgamma(static_cast<double>(k) + 1.0));
  return p;
}

// Skellam pmf indexed by j + K.
std::vector<double> skellam_table(double mu) {
  auto p = poisson_table(mu);
  const std::size_t K = p.size() - 1;
  std::vector<double> s(2 * K + 1, 0.0);
  for (std::size_t x = 0; x <= K; ++x)
    for (std::size_t y = 0; y <= K; ++y) s[x + K - y] += p[x] * p[y];
  return s;
}

}  // namespace

double h_lambda_zero_mass(const WeightVector& a, double lambda) {
  if (a.dim() != 1) throw InvalidArgument("h_lambda_zero_mass requires d = 1");
  if (lambda < 0) throw InvalidArgument("h_lambda_zero_mass: lambda must be nonnegative");
  if (lambda == 0.0) return 1.0;
  // Group |a_k|: E_a + E_{-a} is symmetric, so signs do not matter.
  std::map<Rational, std::size_t> groups;
  for (const auto& x : a.scalar_entries())
    if (x != 0) ++groups[abs(x)];
  Integer den = 1;
  for (const auto& [v, c] : groups) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
  std::map<long, double> dist{{0, 1.0}};
  for (const auto& [v, c] : groups) {
    Integer iv = v.get_num() * (den / v.get_den());
    if (!iv.fits_slong_p()) throw InvalidArgument("h_lambda_zero_mass: weights too spread");
    long step = iv.get_si();
    auto s = skellam_table(lambda / 4.0 * static_cast<double>(c));
    const long K = static_cast<long>(s.size() / 2);
    std::map<long, double> nxt;
    for (const auto& [x, px] : dist)
      for (long j = -K; j <= K; ++j) {
        double q = s[static_cast<std::size_t>(j + K)];
        if (q < 1e-300) continue;
        nxt[x + j * step] += px * q;
      }
    // Drop negligible mass to keep the support bounded.
    dist.clear();
    for (const auto& [x, px] : nxt)
      if (px > 1e-18) dist.emplace(x, px);
    if (dist.size() > 4'000'000) throw AtomCapExceeded("h_lambda_zero_mass: support too large");
  }
  auto it = dist.find(0);
  return it == dist.end() ? 0.0 : it->second;
}

namespace {

double q_h_mc(const WeightVector& a, const Rational& lambda, const Rational& width,
              const Lemma1Options& opts, double* ci) {
  if (lambda == 0) {
    if (ci) *ci = 0.0;
    return 1.0;
  }
  CompoundPoissonSpec spec{a, lambda.get_d()};
  auto samples = sample_H_lambda(spec, opts.samples, opts.seed);
  auto r = conc_from_samples(samples, width.get_d(), opts.seed, {opts.bootstrap, 4096});
  if (ci) *ci = *r.ci_halfwidth;
  return r.value;
}

}  // namespace

Lemma1Result lemma1_pair(const DiscreteDistribution& F, const WeightVector& a, const Rational& tau,
                         const Rational& kappa, const Lemma1Options& opts) {
  if (tau <= 0 || kappa <= 0) throw InvalidArgument("lemma1_pair: tau and kappa must be positive");
  if (a.dim() != 1) throw InvalidArgument("lemma1_pair: exact lhs needs d = 1");
  Lemma1Result r;
  auto Fa = weighted_sum_law(F, a);
  r.lhs = *conc_interval(Fa, tau).exact;
  r.p = tail_mass(symmetrize(F), tau / kappa);
  r.rhs_mc = q_h_mc(a, r.p, kappa, opts, &r.rhs_ci);
  const double lam = r.p.get_d();
  const WeightVector& w = a;
  r.rhs_esseen = esseen_upper(
      [&](double t) {
        double tt[1] = {t};
        return char_fn_H(w, tt, lam);
      },
      kappa.get_d(), opts.esseen_constant);
  r.ratio = r.lhs.get_d() / r.rhs_mc;
  return r;
}

Corollary1Result corollary1_pair(const DiscreteDistribution& F, const WeightVector& a,
                                 const Rational& tau, const Rational& kappa,
                                 const Rational& delta, const Lemma1Options& opts) {
  if (tau <= 0 || kappa <= 0 || delta <= 0)
    throw InvalidArgument("corollary1_pair: tau, kappa, delta must be positive");
  Corollary1Result r;
  auto Fa = weighted_sum_law(F, a);
  r.lhs = *conc_interval(Fa, tau).exact;
  r.p = tail_mass(symmetrize(F), tau / kappa);
  r.factor = Integer(floor(kappa / delta) + 1).get_d();
  r.rhs_mc = r.factor * q_h_mc(a, r.p, delta, opts, nullptr);
  r.ratio = r.lhs.get_d() / r.rhs_mc;
  return r;
}

Lemma2Result lemma2_pair(const DiscreteDistribution& F, const WeightVector& a) {
  Lemma2Result r;
  auto Fa = weighted_sum_law(F, a);
  r.lhs = *conc_zero(Fa).exact;
  r.p0 = tail_mass(symmetrize(F), Rational(0));
  r.h_zero = h_lambda_zero_mass(a, r.p0.get_d());
  r.ratio = r.lhs.get_d() / r.h_zero;
  return r;
}

}  // namespace lostructure
