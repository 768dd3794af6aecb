#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lostructure/concentration.hpp"
#include "lostructure/distributions.hpp"
#include "lostructure/gap.hpp"

namespace lostructure {

enum class BetaExactness { exact, upper_bound };
const char* to_string(BetaExactness e);

struct BetaResult {
  Rational value;
  Cgap witness = Cgap::zero();
  BetaExactness exactness = BetaExactness::exact;
  std::size_t candidates_searched = 0;
  std::string note;
};

struct BetaOptions {
  std::size_t beam = 8;  // r = 2 only
  std::size_t cap = kDefaultEnumerationCap;
};

// W{ x : dist(x, K) > tau } for a sorted finite set K.
Rational mass_outside(const AtomicMeasure& w, const std::vector<Rational>& sorted_k, const Rational& tau);

// Interval witness body for r = 1: [-N, N] with N = floor((m-1)/2), or
// [-1/2, 1/2] when N = 0.
SymmetricPolytope interval_body(std::size_t m);

BetaResult beta(const AtomicMeasure& w, const Rational& tau, int r, std::size_t m,
                const BetaOptions& opts = {});

struct RhsValue {
  double value = 0.0;
  bool degenerate = false;  // beta = 0, bound vacuous
};

RhsValue arak_rhs(double alpha, double beta_val, int r, double m, double c2);

struct Thm7Args {
  double kappa = 1.0;
  double delta = 1.0;
  double tau = 0.0;
  double p_val = 1.0;
  int r = 0;
  double m = 1.0;
  double beta_val = 1.0;
  double c3 = 1.0;
};

RhsValue thm7_rhs(const Thm7Args& args);

struct BoundReport {
  std::string id;
  std::size_t n = 0;
  int r = 0;
  std::size_t m = 1;
  Rational tau;
  double alpha = 0.0;
  Rational beta;
  ConcentrationResult lhs;
  double rhs = 0.0;
  bool degenerate = false;
  double slack = 0.0;  // rhs / lhs, recorded even when below 1
  std::map<std::string, double> constants;
};

struct Thm2Options {
  std::size_t samples = 100'000;
  std::uint64_t seed = 1;
  std::size_t bootstrap = 50;
};

BoundReport check_thm2(const CompoundPoissonSpec& spec, const Rational& tau, int r, std::size_t m,
                       double c2, const Thm2Options& opts = {});

// |U(t+h) - U(t)|^2 and 2(1 - Re U(h)) for a discrete law on the line.
std::pair<double, double> increment_inequality(const DiscreteDistribution& u, double t, double h);

}  // namespace lostructure
