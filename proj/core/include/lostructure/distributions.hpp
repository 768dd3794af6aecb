#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lostructure/config.hpp"
#include "lostructure/rational.hpp"

namespace lostructure {

struct Atom {
  RatVec value;
  Rational mass;
};

// Finitely supported probability law on Q^d. Atoms are kept sorted
// lexicographically by value.
class DiscreteDistribution {
 public:
  // Atoms must be distinct with positive masses summing to 1.
  DiscreteDistribution(std::size_t dim, std::vector<Atom> atoms);

  // Same, but merges repeated values first.
  static DiscreteDistribution from_unmerged(std::size_t dim, std::vector<Atom> atoms);
  static DiscreteDistribution point_mass(RatVec value);
  static DiscreteDistribution rademacher();
  // Uniform law on the given scalar values (d = 1).
  static DiscreteDistribution uniform(const std::vector<Rational>& values);
  static DiscreteDistribution uniform_range(long lo, long hi);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }

  Rational mass_at(const RatVec& value) const;
  bool is_symmetric() const;
  DiscreteDistribution marginal(std::size_t j) const;

 private:
  std::size_t dim_;
  std::vector<Atom> atoms_;
};

class WeightVector {
 public:
  WeightVector(std::size_t dim, std::vector<RatVec> entries);
  static WeightVector scalars(const std::vector<Rational>& values);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<RatVec>& entries() const { return entries_; }
  const RatVec& operator[](std::size_t k) const { return entries_[k]; }
  const Rational& squared_norm() const { return sq_norm_; }
  double norm() const;

  // Coordinate projection a^(j). Throws if that coordinate is identically zero.
  bool projection_is_zero(std::size_t j) const;
  WeightVector projection(std::size_t j) const;
  std::vector<Rational> scalar_entries() const;
  WeightVector scaled(const Rational& s) const;

 private:
  std::size_t dim_;
  std::vector<RatVec> entries_;
  Rational sq_norm_;
};

class AtomicMeasure {
 public:
  AtomicMeasure(std::size_t dim, std::vector<Atom> atoms);

  std::size_t dim() const { return dim_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const Rational& total() const { return total_; }
  AtomicMeasure scaled_mass(const Rational& s) const;

 private:
  std::size_t dim_;
  std::vector<Atom> atoms_;
  Rational total_;
};

struct CompoundPoissonSpec {
  WeightVector weight;
  double lambda = 0.0;
};

DiscreteDistribution symmetrize(const DiscreteDistribution& F);

// G{ |z| > delta } with the max-norm.
Rational tail_mass(const DiscreteDistribution& G, const Rational& delta);

// Exact law of sum_k X_k a_k, X_k i.i.d. ~ F.
DiscreteDistribution weighted_sum_law(const DiscreteDistribution& F, const WeightVector& a,
                                      std::size_t atom_cap = kDefaultAtomCap);

// sum_k (E_{a_k} + E_{-a_k})
AtomicMeasure levy_measure_star(const WeightVector& a);
// sum_k E_{a_k}
AtomicMeasure levy_measure(const WeightVector& a);

double char_fn_H(const WeightVector& a, std::span<const double> t, double lambda);

std::vector<std::vector<double>> sample_H_lambda(const CompoundPoissonSpec& spec,
                                                 std::size_t count, std::uint64_t seed);

// Draws from a discrete law; used for Monte Carlo cross-checks.
std::vector<std::vector<double>> sample_distribution(const DiscreteDistribution& F,
                                                     std::size_t count, std::uint64_t seed);

}  // namespace lostructure
