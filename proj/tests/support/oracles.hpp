#pragma once

// Brute-force reference implementations. Nothing here calls the library's
// algorithms; only its value types are shared.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "lostructure/distributions.hpp"
#include "lostructure/gap.hpp"
#include "lostructure/polytope.hpp"
#include "lostructure/rational.hpp"

namespace oracle {

using lostructure::Integer;
using lostructure::Rational;
using lostructure::RatVec;

inline Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

inline Integer floor_of(const Rational& x) {
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return f;
}

// Law of sum X_k a_k by enumerating every outcome vector.
inline std::map<Rational, Rational> sum_law(const lostructure::DiscreteDistribution& F,
                                            const std::vector<Rational>& a) {
  std::map<Rational, Rational> out;
  std::function<void(std::size_t, Rational, Rational)> rec = [&](std::size_t k, Rational s, Rational p) {
    if (k == a.size()) {
      out[s] += p;
      return;
    }
    for (const auto& at : F.atoms()) rec(k + 1, s + at.value[0] * a[k], p * at.mass);
  };
  rec(0, 0, 1);
  return out;
}

// sup over windows [x, x + tau] with x ranging over all atoms; O(n^2).
inline Rational window_max(const std::map<Rational, Rational>& law, const Rational& tau) {
  Rational best = 0;
  for (auto i = law.begin(); i != law.end(); ++i) {
    Rational s = 0;
    for (auto j = i; j != law.end() && j->first - i->first <= tau; ++j) s += j->second;
    best = std::max(best, s);
  }
  return best;
}

inline std::map<Rational, Rational> as_map(const lostructure::DiscreteDistribution& F) {
  std::map<Rational, Rational> m;
  for (const auto& a : F.atoms()) m[a.value[0]] += a.mass;
  return m;
}

inline Integer binomial(unsigned n, unsigned k) {
  Integer num = 1, den = 1;
  for (unsigned i = 0; i < k; ++i) {
    num *= n - i;
    den *= i + 1;
  }
  return num / den;
}

// Every coefficient vector m with |m_j| <= floor(L_j), mapped to its point.
inline std::map<RatVec, std::size_t> gap_preimages(const lostructure::Gap& P) {
  std::map<RatVec, std::size_t> hits;
  const std::size_t r = P.rank(), d = P.dim();
  std::vector<long> bound(r);
  for (std::size_t j = 0; j < r; ++j) bound[j] = floor_of(P.dims()[j]).get_si();
  std::vector<long> m(r);
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == r) {
      RatVec x(d, Rational(0));
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t c = 0; c < d; ++c) x[c] += P.generators()[i][c] * m[i];
      ++hits[x];
      return;
    }
    for (m[j] = -bound[j]; m[j] <= bound[j]; ++m[j]) rec(j + 1);
  };
  rec(0);
  return hits;
}

inline std::set<RatVec> gap_image(const lostructure::Gap& P) {
  std::set<RatVec> s;
  for (const auto& [x, c] : gap_preimages(P)) s.insert(x);
  return s;
}

inline std::set<Rational> line_image(const lostructure::Gap& P) {
  std::set<Rational> s;
  for (const auto& [x, c] : gap_preimages(P)) s.insert(x[0]);
  return s;
}

inline Integer gap_vol(const lostructure::Gap& P) {
  Integer v = 1;
  for (const auto& L : P.dims()) v *= 2 * floor_of(L) + 1;
  return v;
}

// Injective iff no point has two preimages.
inline bool gap_proper(const lostructure::Gap& P) {
  for (const auto& [x, c] : gap_preimages(P))
    if (c > 1) return false;
  return true;
}

inline bool in_polytope(const lostructure::SymmetricPolytope& V, const RatVec& x) {
  for (const auto& c : V.constraints()) {
    Rational s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += c.normal[i] * x[i];
    if (abs(s) > c.bound) return false;
  }
  return true;
}

// Scans the cube [-R, R]^r.
inline std::set<RatVec> lattice_points(const lostructure::SymmetricPolytope& V, long R) {
  std::set<RatVec> out;
  const std::size_t r = V.rank();
  RatVec x(r);
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == r) {
      if (in_polytope(V, x)) out.insert(x);
      return;
    }
    for (long v = -R; v <= R; ++v) {
      x[j] = v;
      rec(j + 1);
    }
  };
  rec(0);
  return out;
}

inline std::set<Rational> cgap_image(const lostructure::Cgap& K, long R) {
  if (K.rank() == 0) return {Rational(0)};
  std::set<Rational> out;
  for (const auto& nu : lattice_points(K.body(), R)) {
    Rational s = 0;
    for (std::size_t i = 0; i < nu.size(); ++i) s += nu[i] * K.h()[i];
    out.insert(s);
  }
  return out;
}

inline bool near(const std::set<Rational>& img, const Rational& delta, const Rational& x) {
  for (const auto& y : img)
    if (abs(Rational(x - y)) <= delta) return true;
  return false;
}

inline std::size_t coverage(const std::set<Rational>& img, const Rational& delta, const std::vector<Rational>& a) {
  std::size_t c = 0;
  for (const auto& x : a)
    if (near(img, delta, x)) ++c;
  return c;
}

// W-mass at distance > tau from K.
inline Rational mass_outside(const std::vector<std::pair<Rational, Rational>>& w, const std::set<Rational>& K,
                             const Rational& tau) {
  Rational out = 0;
  for (const auto& [x, m] : w)
    if (!near(K, tau, x)) out += m;
  return out;
}

template <class A, class B>
bool subset(const A& small, const B& big) {
  for (const auto& x : small)
    if (!big.count(x)) return false;
  return true;
}

}  // namespace oracle
