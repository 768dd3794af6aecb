#include "lostructure/arak.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "lostructure/errors.hpp"

namespace lostructure {

const char* to_string(BetaExactness e) { return e == BetaExactness::exact ? "exact" : "upper_bound"; }

Rational mass_outside(const AtomicMeasure& w, const std::vector<Rational>& sorted_k, const Rational& tau) {
  if (w.dim() != 1) throw InvalidArgument("mass_outside: measure must live on the line");
  Rational out = 0;
  for (const auto& a : w.atoms())
    if (!neighborhood_contains(sorted_k, tau, a.value[0])) out += a.mass;
  return out;
}

SymmetricPolytope interval_body(std::size_t m) {
  if (m == 0) throw InvalidArgument("m must be at least 1");
  std::size_t n = (m - 1) / 2;
  return SymmetricPolytope::box({n == 0 ? Rational(1, 2) : Rational(static_cast<unsigned long>(n))});
}

namespace {

std::vector<Rational> progression(const Rational& h, long n) {
  std::vector<Rational> k;
  for (long nu = -n; nu <= n; ++nu) k.push_back(Rational(nu) * h);
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  return k;
}

// Candidate steps h >= 0 for a rank-one progression with N terms each side.
std::vector<Rational> rank_one_candidates(const AtomicMeasure& w, const Rational& tau, long n) {
  std::set<Rational> c{Rational(0)};
  for (const auto& a : w.atoms()) {
    const Rational& x = a.value[0];
    for (long nu = 1; nu <= n; ++nu) {
      Rational v(nu);
      c.insert(abs(Rational(x / v)));
      c.insert(abs(Rational((x - tau) / v)));
      c.insert(abs(Rational((x + tau) / v)));
    }
  }
  return {c.begin(), c.end()};
}

struct Scored {
  Rational value;
  Rational h;
};

// Exact minimum over the candidate set; ties go to the smallest h.
Scored best_rank_one(const AtomicMeasure& w, const Rational& tau, long n, std::size_t* searched) {
  auto cands = rank_one_candidates(w, tau, n);
  Scored best{w.total() + 1, 0};
  for (const auto& h : cands) {
    Rational v = mass_outside(w, progression(h, n), tau);
    if (v < best.value) best = {v, h};
  }
  if (searched) *searched += cands.size();
  return best;
}

}  // namespace

BetaResult beta(const AtomicMeasure& w, const Rational& tau, int r, std::size_t m,
                const BetaOptions& opts) {
  if (w.dim() != 1) throw InvalidArgument("beta: measure must live on the line");
  if (tau < 0) throw InvalidArgument("beta: tau must be nonnegative");
  if (m == 0) throw InvalidArgument("beta: m must be at least 1");
  if (r < 0) throw InvalidArgument("beta: r must be nonnegative");
  if (r >= 3) throw UnsupportedRank("beta supports r <= 2");

  BetaResult res;
  if (r == 0) {
    res.witness = Cgap::zero();
    res.exactness = BetaExactness::exact;
    res.candidates_searched = 1;
    res.note = "rank 0: the only admissible set is {0}";
  } else if (r == 1) {
    long n = static_cast<long>((m - 1) / 2);
    Scored s = best_rank_one(w, tau, n, &res.candidates_searched);
    res.witness = Cgap({s.h}, interval_body(m));
    res.exactness = BetaExactness::exact;
    res.note = "rank 1: objective is piecewise constant in h with breakpoints in the candidate set";
  } else {
    // Boxes [-N1,N1] x [-N2,N2] with (2N1+1)(2N2+1) <= m, plus the rank-one
    // optimum padded with a trivial second direction.
    long n1max = static_cast<long>((m - 1) / 2);
    Scored r1 = best_rank_one(w, tau, n1max, &res.candidates_searched);
    Rational best_v = r1.value;
    RatVec best_h{r1.h, Rational(0)};
    SymmetricPolytope best_body = SymmetricPolytope::box(
        {n1max == 0 ? Rational(1, 2) : Rational(n1max), Rational(1, 2)});
    for (long n1 = 1; n1 <= n1max; ++n1) {
      for (long n2 = 1; (2 * n1 + 1) * (2 * n2 + 1) <= static_cast<long>(m); ++n2) {
        // Beam of first steps ranked by their rank-one objective at N1.
        auto c1 = rank_one_candidates(w, tau, n1);
        std::vector<Scored> scored;
        for (const auto& h : c1) scored.push_back({mass_outside(w, progression(h, n1), tau), h});
        res.candidates_searched += c1.size();
        std::stable_sort(scored.begin(), scored.end(),
                         [](const Scored& a, const Scored& b) { return a.value < b.value; });
        if (scored.size() > opts.beam) scored.resize(opts.beam);
        for (const auto& s1 : scored) {
          auto base = progression(s1.h, n1);
          std::set<Rational> c2{Rational(0)};
          for (const auto& a : w.atoms()) {
            const Rational& x = a.value[0];
            if (neighborhood_contains(base, tau, x)) continue;
            for (const auto& y : base)
              for (long nu = 1; nu <= n2; ++nu) {
                Rational v(nu);
                c2.insert(abs(Rational((x - y) / v)));
                c2.insert(abs(Rational((x - y - tau) / v)));
                c2.insert(abs(Rational((x - y + tau) / v)));
              }
          }
          for (const auto& h2 : c2) {
            std::vector<Rational> k;
            for (long a1 = -n1; a1 <= n1; ++a1)
              for (long a2 = -n2; a2 <= n2; ++a2) k.push_back(Rational(a1) * s1.h + Rational(a2) * h2);
            std::sort(k.begin(), k.end());
            k.erase(std::unique(k.begin(), k.end()), k.end());
            Rational v = mass_outside(w, k, tau);
            ++res.candidates_searched;
            if (v < best_v) {
              best_v = v;
              best_h = {s1.h, h2};
              best_body = SymmetricPolytope::box({Rational(n1), Rational(n2)});
            }
          }
        }
      }
    }
    res.witness = Cgap(best_h, best_body);
    res.exactness = BetaExactness::upper_bound;
    res.note = "rank 2: beam search over box-shaped bodies";
  }
  // Recompute independently from the witness image.
  auto img = cgap_image(res.witness, opts.cap);
  if (cgap_size(res.witness, opts.cap) > m) throw std::logic_error("beta witness has too many lattice points");
  res.value = mass_outside(w, img, tau);
  return res;
}

RhsValue arak_rhs(double alpha, double beta_val, int r, double m, double c2) {
  if (alpha <= 0 || beta_val < 0 || r < 0 || m < 1 || c2 <= 0)
    throw InvalidArgument("arak_rhs: invalid arguments");
  if (beta_val == 0) return {std::numeric_limits<double>::infinity(), true};
  const double ab = alpha * beta_val;
  const double rr = static_cast<double>(r);
  double v = std::pow(c2, rr + 1) *
             (1.0 / (m * std::sqrt(ab)) + std::pow(rr + 1, 2.5 * rr) / std::pow(ab, (rr + 1) / 2.0));
  return {v, false};
}

RhsValue thm7_rhs(const Thm7Args& a) {
  if (a.r < 0 || a.m < 1 || a.c3 <= 0 || a.beta_val < 0 || a.p_val < 0 || a.tau < 0)
    throw InvalidArgument("thm7_rhs: invalid arguments");
  if (a.tau > 0 && (a.kappa <= 0 || a.delta <= 0))
    throw InvalidArgument("thm7_rhs: kappa and delta must be positive when tau > 0");
  if (a.beta_val == 0 || a.p_val == 0) return {std::numeric_limits<double>::infinity(), true};
  const double pb = a.p_val * a.beta_val;
  const double rr = static_cast<double>(a.r);
  double core = 1.0 / (a.m * std::sqrt(pb)) + std::pow(rr + 1, 2.5 * rr) / std::pow(pb, (rr + 1) / 2.0);
  double factor = a.tau > 0 ? 1.0 + std::floor(a.kappa / a.delta) : 1.0;
  return {std::pow(a.c3, rr + 1) * factor * core, false};
}

BoundReport check_thm2(const CompoundPoissonSpec& spec, const Rational& tau, int r, std::size_t m,
                       double c2, const Thm2Options& opts) {
  if (spec.weight.dim() != 1) throw InvalidArgument("check_thm2: weights must be scalars");
  if (!(spec.lambda > 0)) throw InvalidArgument("check_thm2: lambda must be positive");
  const std::size_t n = spec.weight.size();
  BoundReport rep;
  rep.n = n;
  rep.r = r;
  rep.m = m;
  rep.tau = tau;
  // H^lambda = exp(alpha (W^ - 1)) with alpha = lambda n / 2 and W = M* / (2n).
  rep.alpha = spec.lambda * static_cast<double>(n) / 2.0;
  AtomicMeasure w = levy_measure_star(spec.weight).scaled_mass(Rational(1, 2 * static_cast<unsigned long>(n)));
  auto b = beta(w, tau, r, m);
  rep.beta = b.value;
  auto samples = sample_H_lambda(spec, opts.samples, opts.seed);
  rep.lhs = conc_from_samples(samples, tau.get_d(), opts.seed, {opts.bootstrap, 4096});
  auto rhs = arak_rhs(rep.alpha, b.value.get_d(), r, static_cast<double>(m), c2);
  rep.rhs = rhs.value;
  rep.degenerate = rhs.degenerate;
  rep.slack = rep.rhs / rep.lhs.value;
  rep.constants["c2"] = c2;
  rep.constants["lambda"] = spec.lambda;
  return rep;
}

std::pair<double, double> increment_inequality(const DiscreteDistribution& u, double t, double h) {
  if (u.dim() != 1) throw InvalidArgument("increment_inequality: law must live on the line");
  auto cf = [&](double s) {
    std::complex<double> z = 0;
    for (const auto& a : u.atoms()) z += a.mass.get_d() * std::exp(std::complex<double>(0, s * a.value[0].get_d()));
    return z;
  };
  double lhs = std::norm(cf(t + h) - cf(t));
  double rhs = 2.0 * (1.0 - cf(h).real());
  return {lhs, rhs};
}

}  // namespace lostructure
