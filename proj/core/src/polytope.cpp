#include "lostructure/polytope.hpp"

#include <algorithm>
#include <limits>

#include "lostructure/errors.hpp"

namespace lostructure {

namespace {

// All index subsets of size k from 0..n-1.
void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

SymmetricPolytope::SymmetricPolytope(std::size_t rank, std::vector<Constraint> constraints)
    : rank_(rank), constraints_(std::move(constraints)) {
  for (auto& c : constraints_) {
    canonicalize(c.normal);
    c.bound.canonicalize();
    if (c.normal.size() != rank_) throw InvalidArgument("constraint normal has wrong dimension");
    if (c.bound <= 0) throw InvalidArgument("constraint bounds must be positive");
  }
  box_.assign(rank_, Rational(0));
  if (rank_ == 0) return;
  Matrix normals;
  for (const auto& c : constraints_) normals.push_back(c.normal);
  if (matrix_rank(normals) < rank_) throw InvalidArgument("polytope is unbounded");

  // Vertices are solutions of r active constraints at +-b_i.
  std::vector<std::vector<std::size_t>> subs;
  std::vector<std::size_t> cur;
  subsets(constraints_.size(), rank_, 0, cur, subs);
  for (const auto& s : subs) {
    Matrix a;
    for (std::size_t i : s) a.push_back(constraints_[i].normal);
    auto inv = inverse(a);
    if (!inv) continue;
    for (std::size_t mask = 0; mask < (std::size_t{1} << rank_); ++mask) {
      RatVec rhs(rank_);
      for (std::size_t k = 0; k < rank_; ++k)
        rhs[k] = (mask >> k & 1) ? Rational(-constraints_[s[k]].bound) : constraints_[s[k]].bound;
      RatVec x = mat_vec(*inv, rhs);
      if (!contains(x)) continue;
      for (std::size_t k = 0; k < rank_; ++k) box_[k] = std::max(box_[k], abs(x[k]));
    }
  }
}

SymmetricPolytope SymmetricPolytope::box(const std::vector<Rational>& half_widths) {
  std::vector<Constraint> cs;
  for (std::size_t i = 0; i < half_widths.size(); ++i) {
    RatVec u(half_widths.size(), Rational(0));
    u[i] = 1;
    cs.push_back({u, half_widths[i]});
  }
  return SymmetricPolytope(half_widths.size(), std::move(cs));
}

bool SymmetricPolytope::contains(const RatVec& x) const {
  for (const auto& c : constraints_)
    if (abs(dot(c.normal, x)) > c.bound) return false;
  return true;
}

Rational SymmetricPolytope::gauge(const RatVec& x) const {
  Rational g = 0;
  for (const auto& c : constraints_) g = std::max(g, Rational(abs(dot(c.normal, x)) / c.bound));
  return g;
}

SymmetricPolytope SymmetricPolytope::with_constraint(Constraint c) const {
  auto cs = constraints_;
  cs.push_back(std::move(c));
  return SymmetricPolytope(rank_, std::move(cs));
}

SymmetricPolytope SymmetricPolytope::scaled(const Rational& s) const {
  if (s <= 0) throw InvalidArgument("polytope scale must be positive");
  auto cs = constraints_;
  for (auto& c : cs) c.bound *= s;
  return SymmetricPolytope(rank_, std::move(cs));
}

SymmetricPolytope SymmetricPolytope::in_basis(const Matrix& basis) const {
  // <u, B z> = <B^T u, z>
  Matrix bt = transpose(basis);
  std::vector<Constraint> cs;
  for (const auto& c : constraints_) cs.push_back({mat_vec(bt, c.normal), c.bound});
  return SymmetricPolytope(rank_, std::move(cs));
}

namespace {

struct IntConstraint {
  std::vector<long> u;
  long b;
};

}  // namespace

std::vector<RatVec> lattice_points(const SymmetricPolytope& v, std::size_t cap) {
  const std::size_t r = v.rank();
  if (r == 0) return {RatVec{}};
  std::vector<long> hi(r);
  double total = 1.0;
  for (std::size_t k = 0; k < r; ++k) {
    Integer f = floor(v.bounding_box()[k]);
    if (!f.fits_slong_p() || f.get_si() > (1LL << 40))
      throw EnumerationCapExceeded("lattice_points: bounding box too large");
    hi[k] = f.get_si();
    total *= static_cast<double>(2 * hi[k] + 1);
  }
  if (total > static_cast<double>(cap))
    throw EnumerationCapExceeded("lattice_points: bounding box holds " + std::to_string(total) +
                                 " points, cap " + std::to_string(cap));

  // Integer form: |<U, z>| <= floor(b * l) with U = l u integral.
  std::vector<IntConstraint> ics;
  bool small = true;
  for (const auto& c : v.constraints()) {
    Integer l = 1;
    for (const auto& x : c.normal) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    IntConstraint ic;
    Integer reach = 0;
    for (std::size_t k = 0; k < r; ++k) {
      Integer z = c.normal[k].get_num() * (l / c.normal[k].get_den());
      if (!z.fits_slong_p()) small = false;
      reach += Integer(abs(z)) * Integer(hi[k]);
      ic.u.push_back(small ? z.get_si() : 0);
    }
    Integer b = floor(c.bound * l);
    if (!b.fits_slong_p() || reach > Integer(1) << 62) small = false;
    ic.b = small ? b.get_si() : 0;
    ics.push_back(std::move(ic));
  }

  std::vector<RatVec> out;
  std::vector<long> z(r);
  for (std::size_t k = 0; k < r; ++k) z[k] = -hi[k];
  while (true) {
    bool ok = true;
    if (small) {
      for (const auto& ic : ics) {
        long s = 0;
        for (std::size_t k = 0; k < r; ++k) s += ic.u[k] * z[k];
        if (s > ic.b || -s > ic.b) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      RatVec x(r);
      for (std::size_t k = 0; k < r; ++k) x[k] = Rational(z[k]);
      if (small || v.contains(x)) out.push_back(std::move(x));
    }
    std::size_t k = r;
    while (k > 0) {
      --k;
      if (z[k] < hi[k]) {
        ++z[k];
        break;
      }
      z[k] = -hi[k];
      if (k == 0) return out;
    }
  }
}

std::vector<RatVec> lattice_points(const SymmetricPolytope& v, const Matrix& basis,
                                   std::size_t cap) {
  if (basis.size() != v.rank()) throw InvalidArgument("lattice basis has wrong dimension");
  for (const auto& row : basis)
    if (row.size() != v.rank()) throw InvalidArgument("lattice basis must be square");
  if (v.rank() > 0 && matrix_rank(basis) < v.rank()) throw InvalidArgument("lattice basis is singular");
  auto coeffs = lattice_points(v.in_basis(basis), cap);
  std::vector<RatVec> out;
  out.reserve(coeffs.size());
  for (const auto& z : coeffs) out.push_back(mat_vec(basis, z));
  std::sort(out.begin(), out.end(), RatVecLess{});
  return out;
}

}  // namespace lostructure
