#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lostructure/config.hpp"
#include "lostructure/distributions.hpp"
#include "lostructure/polytope.hpp"
#include "lostructure/rational.hpp"

namespace lostructure {

// Symmetric generalized arithmetic progression (L, g, r) in Q^d.
// Equality is structural: two GAPs with the same image may differ.
class Gap {
 public:
  Gap(std::size_t dim, std::vector<Rational> dims, std::vector<RatVec> generators);
  static Gap zero(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return dims_.size(); }
  const std::vector<Rational>& dims() const { return dims_; }
  const std::vector<RatVec>& generators() const { return gens_; }

  bool operator==(const Gap& o) const {
    return dim_ == o.dim_ && dims_ == o.dims_ && gens_ == o.gens_;
  }

 private:
  std::size_t dim_;
  std::vector<Rational> dims_;
  std::vector<RatVec> gens_;
};

Integer vol(const Gap& p);
// Sorted, de-duplicated image.
std::vector<RatVec> image(const Gap& p, std::size_t cap = kDefaultEnumerationCap);
std::size_t size(const Gap& p, std::size_t cap = kDefaultEnumerationCap);
Gap dilate(const Gap& p, const Rational& t);
bool is_proper(const Gap& p, std::size_t cap = kDefaultEnumerationCap);
bool is_t_proper(const Gap& p, const Rational& t, std::size_t cap = kDefaultEnumerationCap);
// Generators linearly independent over Q, so every dilate is proper.
bool is_infinitely_proper(const Gap& p);
// Smallest t with P^t not proper (rank <= 2), nullopt when none exists.
std::optional<Rational> collision_threshold(const Gap& p);
// x in Image(P)
bool image_contains(const Gap& p, const RatVec& x, std::size_t cap = kDefaultEnumerationCap);

// Convex GAP { <nu, h> : nu in Z^r cap V }.
class Cgap {
 public:
  Cgap(RatVec h, SymmetricPolytope body);
  static Cgap zero();

  std::size_t rank() const { return h_.size(); }
  const RatVec& h() const { return h_; }
  const SymmetricPolytope& body() const { return body_; }

 private:
  RatVec h_;
  SymmetricPolytope body_;
};

std::vector<RatVec> cgap_lattice_points(const Cgap& k, std::size_t cap = kDefaultEnumerationCap);
std::vector<Rational> cgap_image(const Cgap& k, std::size_t cap = kDefaultEnumerationCap);
// Number of lattice points of the body.
std::size_t cgap_size(const Cgap& k, std::size_t cap = kDefaultEnumerationCap);
// Distinct lattice points of the body map to distinct values.
bool cgap_proper_on_body(const Cgap& k, std::size_t cap = kDefaultEnumerationCap);
// Entries of h linearly independent over Q (only possible for rank <= 1 here).
bool cgap_infinitely_proper(const Cgap& k);

class ProductCgap {
 public:
  explicit ProductCgap(std::vector<Cgap> factors);

  std::size_t dim() const { return factors_.size(); }
  std::size_t rank() const;
  const std::vector<Cgap>& factors() const { return factors_; }
  Integer size(std::size_t cap = kDefaultEnumerationCap) const;
  std::vector<RatVec> image(std::size_t cap = kDefaultEnumerationCap) const;

 private:
  std::vector<Cgap> factors_;
};

bool neighborhood_contains(const std::vector<Rational>& sorted_image, const Rational& delta,
                           const Rational& x);
bool neighborhood_contains(const std::vector<RatVec>& image, const Rational& delta, const RatVec& x);
std::size_t coverage_count(const std::vector<Rational>& sorted_image, const Rational& delta,
                           const WeightVector& a);
std::size_t coverage_count(const std::vector<RatVec>& image, const Rational& delta,
                           const WeightVector& a);

struct SandwichResult {
  Gap gap;               // generators in Z^r
  Rational achieved_t;   // V cap Z^r inside Image(gap^t)
  std::size_t lattice_count = 0;
  std::size_t candidates_tried = 0;
};

struct SandwichOptions {
  Rational cap_t = 64;
  std::size_t pool = 24;
  std::size_t cap = kDefaultEnumerationCap;
};

SandwichResult mahler_sandwich(const SymmetricPolytope& v, const SandwichOptions& opts = {});

struct EmbedResult {
  Gap gap;
  bool identity = false;
  double size_ratio = 1.0;    // size(Q) / size(P)
  double lemma_bound = 1.0;   // (2t)^r r^(6 r^2)
};

EmbedResult embed_proper(const Gap& p, const Rational& t, std::size_t cap = kDefaultEnumerationCap);

}  // namespace lostructure
