#pragma once

#include <cstddef>
#include <vector>

#include "lostructure/config.hpp"
#include "lostructure/linalg.hpp"
#include "lostructure/rational.hpp"

namespace lostructure {

// |<normal, x>| <= bound
struct Constraint {
  RatVec normal;
  Rational bound;
};

// Origin-symmetric polytope { x in R^r : |<u_i, x>| <= b_i for all i }.
class SymmetricPolytope {
 public:
  // Throws InvalidArgument if a bound is not positive or the body is unbounded.
  SymmetricPolytope(std::size_t rank, std::vector<Constraint> constraints);
  static SymmetricPolytope box(const std::vector<Rational>& half_widths);

  std::size_t rank() const { return rank_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<Rational>& bounding_box() const { return box_; }

  bool contains(const RatVec& x) const;
  // max_i |<u_i, x>| / b_i
  Rational gauge(const RatVec& x) const;

  SymmetricPolytope with_constraint(Constraint c) const;
  SymmetricPolytope scaled(const Rational& s) const;
  // The body { z : B z in V } for a square invertible basis B (columns).
  SymmetricPolytope in_basis(const Matrix& basis) const;

 private:
  std::size_t rank_;
  std::vector<Constraint> constraints_;
  std::vector<Rational> box_;
};

// Z^r cap V, sorted lexicographically.
std::vector<RatVec> lattice_points(const SymmetricPolytope& v,
                                   std::size_t cap = kDefaultEnumerationCap);
// (B Z^r) cap V for a square invertible basis B given by its columns.
std::vector<RatVec> lattice_points(const SymmetricPolytope& v, const Matrix& basis,
                                   std::size_t cap = kDefaultEnumerationCap);

}  // namespace lostructure
