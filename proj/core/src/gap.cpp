#include "lostructure/gap.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

#include "lostructure/errors.hpp"
#include "lostructure/linalg.hpp"

namespace lostructure {

Gap::Gap(std::size_t dim, std::vector<Rational> dims, std::vector<RatVec> generators)
    : dim_(dim), dims_(std::move(dims)), gens_(std::move(generators)) {
  if (dim_ == 0) throw InvalidArgument("GAP dimension must be positive");
  if (dims_.size() != gens_.size()) throw InvalidArgument("GAP needs one dimension per generator");
  canonicalize(dims_);
  for (auto& g : gens_) canonicalize(g);
  for (const auto& l : dims_)
    if (l <= 0) throw InvalidArgument("GAP dimensions must be positive");
  for (const auto& g : gens_)
    if (g.size() != dim_) throw InvalidArgument("GAP generator has wrong dimension");
}

Gap Gap::zero(std::size_t dim) { return Gap(dim, {}, {}); }

Integer vol(const Gap& p) {
  Integer v = 1;
  for (const auto& l : p.dims()) v *= 2 * floor(l) + 1;
  return v;
}

namespace {

struct IntegerGap {
  Integer den = 1;                          // common denominator of generators
  std::vector<std::vector<long>> gens; // scaled generators
  std::vector<long> reach;             // floor(L_j)
  bool fits = true;
};

IntegerGap integerize(const Gap& p) {
  IntegerGap ig;
  for (const auto& g : p.generators())
    for (const auto& x : g) mpz_lcm(ig.den.get_mpz_t(), ig.den.get_mpz_t(), x.get_den_mpz_t());
  std::vector<Integer> bound(p.dim(), Integer(0));
  for (std::size_t j = 0; j < p.rank(); ++j) {
    Integer f = floor(p.dims()[j]);
    if (!f.fits_slong_p()) ig.fits = false;
    ig.reach.push_back(ig.fits ? f.get_si() : 0);
    std::vector<long> row;
    for (std::size_t i = 0; i < p.dim(); ++i) {
      const Rational& x = p.generators()[j][i];
      Integer z = x.get_num() * (ig.den / x.get_den());
      if (!z.fits_slong_p()) ig.fits = false;
      row.push_back(ig.fits ? z.get_si() : 0);
      bound[i] += abs(z) * f;
    }
    ig.gens.push_back(std::move(row));
  }
  for (const auto& b : bound)
    if (b > Integer(1) << 62) ig.fits = false;
  return ig;
}

void check_cap(const Gap& p, std::size_t cap) {
  if (vol(p) > Integer(static_cast<unsigned long>(cap)))
    throw EnumerationCapExceeded("GAP volume " + vol(p).get_str() + " exceeds cap " + std::to_string(cap));
}

// Enumerates the box and returns the sorted list of scaled image points
// (with repetitions removed) and whether any repetition occurred.
std::vector<std::vector<long>> enumerate_scaled(const IntegerGap& ig, std::size_t dim, bool& collided) {
  const std::size_t r = ig.gens.size();
  std::vector<std::vector<long>> pts;
  std::vector<long> m(r);
  for (std::size_t j = 0; j < r; ++j) m[j] = -ig.reach[j];
  while (true) {
    std::vector<long> x(dim, 0);
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t i = 0; i < dim; ++i) x[i] += m[j] * ig.gens[j][i];
    pts.push_back(std::move(x));
    std::size_t j = r;
    bool done = true;
    while (j > 0) {
      --j;
      if (m[j] < ig.reach[j]) {
        ++m[j];
        done = false;
        break;
      }
      m[j] = -ig.reach[j];
    }
    if (done) break;
  }
  std::size_t total = pts.size();
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  collided = pts.size() != total;
  return pts;
}

std::vector<RatVec> image_exact(const Gap& p) {
  // Fallback for generators too large for 64-bit sums.
  std::set<RatVec, RatVecLess> pts;
  const std::size_t r = p.rank();
  std::vector<Integer> reach;
  for (const auto& l : p.dims()) reach.push_back(floor(l));
  std::vector<Integer> m(r);
  for (std::size_t j = 0; j < r; ++j) m[j] = -reach[j];
  while (true) {
    RatVec x = zeros(p.dim());
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t i = 0; i < p.dim(); ++i) x[i] += Rational(m[j]) * p.generators()[j][i];
    pts.insert(std::move(x));
    std::size_t j = r;
    bool done = true;
    while (j > 0) {
      --j;
      if (m[j] < reach[j]) {
        ++m[j];
        done = false;
        break;
      }
      m[j] = -reach[j];
    }
    if (done) break;
  }
  return {pts.begin(), pts.end()};
}

bool is_proper_enumerated(const Gap& p, std::size_t cap) {
  check_cap(p, cap);
  IntegerGap ig = integerize(p);
  if (!ig.fits) return Integer(static_cast<unsigned long>(image_exact(p).size())) == vol(p);
  bool collided = false;
  enumerate_scaled(ig, p.dim(), collided);
  return !collided;
}

// Structural answer for rank <= 2 via the primitive integer relation.
std::optional<bool> is_proper_structural(const Gap& p) {
  if (p.rank() == 0) return true;
  if (p.rank() == 1) return is_zero(p.generators()[0]) ? floor(p.dims()[0]) == 0 : true;
  if (p.rank() > 2) return std::nullopt;
  const RatVec& g1 = p.generators()[0];
  const RatVec& g2 = p.generators()[1];
  Integer f1 = floor(p.dims()[0]);
  Integer f2 = floor(p.dims()[1]);
  if (is_zero(g1) && f1 >= 1) return false;
  if (is_zero(g2) && f2 >= 1) return false;
  if (is_zero(g1) || is_zero(g2)) return true;
  if (matrix_rank({g1, g2}) == 2) return true;
  // g2 = c g1, relation q g2 - p g1 = 0 with c = p/q.
  std::size_t i = 0;
  while (g1[i] == 0) ++i;
  Rational c = g2[i] / g1[i];
  Integer pn = abs(Rational(c.get_num())).get_num();
  Integer qd = c.get_den();
  return !(2 * f1 >= pn && 2 * f2 >= qd);
}

}  // namespace

std::vector<RatVec> image(const Gap& p, std::size_t cap) {
  check_cap(p, cap);
  IntegerGap ig = integerize(p);
  if (!ig.fits) return image_exact(p);
  bool collided = false;
  auto pts = enumerate_scaled(ig, p.dim(), collided);
  std::vector<RatVec> out;
  out.reserve(pts.size());
  for (const auto& x : pts) {
    RatVec v(p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i) {
      v[i] = Rational(Integer(x[i]), ig.den);
      v[i].canonicalize();
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::size_t size(const Gap& p, std::size_t cap) { return image(p, cap).size(); }

Gap dilate(const Gap& p, const Rational& t) {
  if (t <= 0) throw InvalidArgument("dilation factor must be positive");
  std::vector<Rational> dims = p.dims();
  for (auto& l : dims) l *= t;
  return Gap(p.dim(), std::move(dims), p.generators());
}

bool is_proper(const Gap& p, std::size_t cap) {
  auto s = is_proper_structural(p);
  if (!s) return is_proper_enumerated(p, cap);
  if (vol(p) <= Integer(static_cast<unsigned long>(cap))) {
    bool e = is_proper_enumerated(p, cap);
    if (e != *s) throw std::logic_error("properness cross-check disagrees");
  }
  return *s;
}

bool is_t_proper(const Gap& p, const Rational& t, std::size_t cap) { return is_proper(dilate(p, t), cap); }

bool is_infinitely_proper(const Gap& p) {
  if (p.rank() == 0) return true;
  if (p.rank() > p.dim()) return false;
  return matrix_rank(p.generators()) == p.rank();
}

std::optional<Rational> collision_threshold(const Gap& p) {
  if (p.rank() > 2) throw UnsupportedRank("collision_threshold supports rank <= 2");
  if (is_infinitely_proper(p)) return std::nullopt;
  if (p.rank() == 1) return Rational(1) / p.dims()[0];
  const RatVec& g1 = p.generators()[0];
  const RatVec& g2 = p.generators()[1];
  const Rational& l1 = p.dims()[0];
  const Rational& l2 = p.dims()[1];
  if (is_zero(g1) && is_zero(g2)) return std::min(Rational(1) / l1, Rational(1) / l2);
  if (is_zero(g1)) return Rational(1) / l1;
  if (is_zero(g2)) return Rational(1) / l2;
  std::size_t i = 0;
  while (g1[i] == 0) ++i;
  Rational c = g2[i] / g1[i];
  // Need 2 floor(t L1) >= |p| and 2 floor(t L2) >= q.
  Integer k1 = (abs(Rational(c.get_num())).get_num() + 1) / 2;
  Integer k2 = (Integer(c.get_den()) + 1) / 2;
  return std::max(Rational(k1) / l1, Rational(k2) / l2);
}

bool image_contains(const Gap& p, const RatVec& x, std::size_t cap) {
  if (x.size() != p.dim()) throw InvalidArgument("image_contains: dimension mismatch");
  if (p.rank() == 0) return is_zero(x);
  if (p.rank() == 1) {
    const RatVec& g = p.generators()[0];
    if (is_zero(g)) return is_zero(x);
    std::size_t i = 0;
    while (g[i] == 0) ++i;
    Rational m = x[i] / g[i];
    if (m.get_den() != 1 || abs(m) > Rational(floor(p.dims()[0]))) return false;
    for (std::size_t k = 0; k < x.size(); ++k)
      if (x[k] != m * g[k]) return false;
    return true;
  }
  auto img = image(p, cap);
  return std::binary_search(img.begin(), img.end(), x, RatVecLess{});
}

Cgap::Cgap(RatVec h, SymmetricPolytope body) : h_(std::move(h)), body_(std::move(body)) {
  if (body_.rank() != h_.size()) throw InvalidArgument("CGAP body rank must match h");
}

Cgap Cgap::zero() { return Cgap({}, SymmetricPolytope(0, {})); }

std::vector<RatVec> cgap_lattice_points(const Cgap& k, std::size_t cap) {
  return lattice_points(k.body(), cap);
}

std::vector<Rational> cgap_image(const Cgap& k, std::size_t cap) {
  std::vector<Rational> out;
  for (const auto& nu : cgap_lattice_points(k, cap)) out.push_back(k.rank() ? dot(nu, k.h()) : Rational(0));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t cgap_size(const Cgap& k, std::size_t cap) { return cgap_lattice_points(k, cap).size(); }

bool cgap_proper_on_body(const Cgap& k, std::size_t cap) {
  return cgap_image(k, cap).size() == cgap_size(k, cap);
}

bool cgap_infinitely_proper(const Cgap& k) {
  if (k.rank() == 0) return true;
  if (k.rank() == 1) return k.h()[0] != 0;
  return false;
}

ProductCgap::ProductCgap(std::vector<Cgap> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw InvalidArgument("product CGAP needs at least one factor");
}

std::size_t ProductCgap::rank() const {
  std::size_t r = 0;
  for (const auto& f : factors_) r += f.rank();
  return r;
}

Integer ProductCgap::size(std::size_t cap) const {
  Integer s = 1;
  for (const auto& f : factors_) s *= static_cast<unsigned long>(cgap_size(f, cap));
  return s;
}

std::vector<RatVec> ProductCgap::image(std::size_t cap) const {
  std::vector<std::vector<Rational>> imgs;
  double total = 1.0;
  for (const auto& f : factors_) {
    imgs.push_back(cgap_image(f, cap));
    total *= static_cast<double>(imgs.back().size());
  }
  if (total > static_cast<double>(cap)) throw EnumerationCapExceeded("product CGAP image exceeds cap");
  std::vector<RatVec> out{RatVec{}};
  for (const auto& img : imgs) {
    std::vector<RatVec> nxt;
    for (const auto& v : out)
      for (const auto& x : img) {
        RatVec w = v;
        w.push_back(x);
        nxt.push_back(std::move(w));
      }
    out.swap(nxt);
  }
  std::sort(out.begin(), out.end(), RatVecLess{});
  return out;
}

bool neighborhood_contains(const std::vector<Rational>& sorted_image, const Rational& delta,
                           const Rational& x) {
  auto it = std::lower_bound(sorted_image.begin(), sorted_image.end(), x - delta);
  return it != sorted_image.end() && *it <= x + delta;
}

bool neighborhood_contains(const std::vector<RatVec>& image, const Rational& delta, const RatVec& x) {
  for (const auto& y : image) {
    bool close = true;
    for (std::size_t i = 0; i < x.size() && close; ++i) close = abs(Rational(x[i] - y[i])) <= delta;
    if (close) return true;
  }
  return false;
}

std::size_t coverage_count(const std::vector<Rational>& sorted_image, const Rational& delta,
                           const WeightVector& a) {
  std::size_t c = 0;
  for (const auto& x : a.scalar_entries())
    if (neighborhood_contains(sorted_image, delta, x)) ++c;
  return c;
}

std::size_t coverage_count(const std::vector<RatVec>& image, const Rational& delta,
                           const WeightVector& a) {
  std::size_t c = 0;
  for (const auto& x : a.entries())
    if (neighborhood_contains(image, delta, x)) ++c;
  return c;
}

namespace {

struct BasisCandidate {
  Matrix gens;                        // l generators in Z^r
  std::vector<std::vector<Integer>> coords;  // coordinates of each lattice point
  std::vector<Integer> max_coord;
};

// Coordinates of every point in the candidate basis, or nullopt if some point
// is not an integral combination.
std::optional<BasisCandidate> try_basis(const Matrix& gens, const std::vector<RatVec>& pts) {
  const std::size_t l = gens.size();
  Matrix cols = transpose(gens);  // r x l
  auto rows = independent_rows(cols);
  if (rows.size() < l) return std::nullopt;
  Matrix sub;
  for (std::size_t i : rows) sub.push_back(cols[i]);
  auto inv = inverse(sub);
  if (!inv) return std::nullopt;
  BasisCandidate bc{gens, {}, std::vector<Integer>(l, Integer(0))};
  for (const auto& s : pts) {
    RatVec rhs;
    for (std::size_t i : rows) rhs.push_back(s[i]);
    RatVec c = mat_vec(*inv, rhs);
    if (!is_integral(c)) return std::nullopt;
    std::vector<Integer> ci;
    for (std::size_t j = 0; j < l; ++j) {
      ci.push_back(c[j].get_num());
      bc.max_coord[j] = std::max(bc.max_coord[j], Integer(abs(c[j]).get_num()));
    }
    bc.coords.push_back(std::move(ci));
  }
  return bc;
}

bool box_fits(const SymmetricPolytope& v, const Matrix& gens, const std::vector<Integer>& n) {
  const std::size_t l = gens.size();
  const std::size_t r = v.rank();
  for (std::size_t mask = 0; mask < (std::size_t{1} << l); ++mask) {
    RatVec x = zeros(r);
    for (std::size_t j = 0; j < l; ++j) {
      Rational c((mask >> j & 1) ? Integer(-n[j]) : n[j]);
      for (std::size_t i = 0; i < r; ++i) x[i] += c * gens[j][i];
    }
    if (!v.contains(x)) return false;
  }
  return true;
}

struct DimsChoice {
  std::vector<Rational> dims;
  Rational t;
};

// Smallest t for which a box of integer half-widths fits in V while the
// lattice points fit in its t-dilate. A zero half-width is stored as L = 1/2.
std::optional<DimsChoice> best_dims(const SymmetricPolytope& v, const BasisCandidate& bc,
                                    const Rational& cap_t) {
  const std::size_t l = bc.gens.size();
  std::vector<Rational> ts;
  for (std::size_t j = 0; j < l; ++j) {
    const Integer& m = bc.max_coord[j];
    if (m == 0) continue;
    for (Integer k = 1; k <= m; ++k) ts.push_back(frac(m, k));
    ts.push_back(Rational(2 * m));
  }
  ts.push_back(Rational(1));
  for (auto& t : ts) t.canonicalize();
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  for (const auto& t : ts) {
    if (t > cap_t) break;
    std::vector<Integer> n(l);
    std::vector<Rational> dims(l);
    Rational achieved = 1;
    for (std::size_t j = 0; j < l; ++j) {
      const Integer& m = bc.max_coord[j];
      if (Rational(2 * m) <= t) {
        n[j] = 0;
        dims[j] = Rational(1, 2);
      } else {
        n[j] = ceil(Rational(m) / t);
        dims[j] = Rational(n[j]);
      }
      achieved = std::max(achieved, Rational(Rational(m) / dims[j]));
    }
    if (box_fits(v, bc.gens, n)) return DimsChoice{dims, achieved};
  }
  return std::nullopt;
}

void combinations(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                  const std::function<bool(const std::vector<std::size_t>&)>& visit, bool& stop) {
  if (stop) return;
  if (cur.size() == k) {
    stop = visit(cur);
    return;
  }
  for (std::size_t i = start; i < n && !stop; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, visit, stop);
    cur.pop_back();
  }
}

}  // namespace

SandwichResult mahler_sandwich(const SymmetricPolytope& v, const SandwichOptions& opts) {
  const std::size_t r = v.rank();
  if (r > 3) throw UnsupportedRank("mahler_sandwich supports rank <= 3");
  auto pts = lattice_points(v, opts.cap);
  std::vector<RatVec> nonzero;
  for (const auto& s : pts)
    if (!is_zero(s)) nonzero.push_back(s);
  if (nonzero.empty()) return {Gap::zero(std::max<std::size_t>(r, 1)), Rational(1), pts.size(), 0};

  // Short vectors (in the gauge of V) up to sign.
  std::vector<RatVec> pool;
  for (const auto& s : nonzero) {
    std::size_t i = 0;
    while (s[i] == 0) ++i;
    if (s[i] > 0) pool.push_back(s);
  }
  std::stable_sort(pool.begin(), pool.end(),
                   [&](const RatVec& a, const RatVec& b) { return v.gauge(a) < v.gauge(b); });
  if (pool.size() > opts.pool) pool.resize(opts.pool);
  const std::size_t l = matrix_rank(nonzero);

  std::optional<DimsChoice> best;
  std::optional<BasisCandidate> best_basis;
  std::size_t tried = 0;
  std::vector<std::size_t> cur;
  bool stop = false;
  combinations(pool.size(), l, 0, cur, [&](const std::vector<std::size_t>& idx) {
    Matrix gens;
    for (std::size_t i : idx) gens.push_back(pool[i]);
    if (matrix_rank(gens) < l) return false;
    ++tried;
    auto bc = try_basis(gens, nonzero);
    if (!bc) return false;
    auto choice = best_dims(v, *bc, opts.cap_t);
    if (!choice) return false;
    if (!best || choice->t < best->t) {
      best = choice;
      best_basis = std::move(bc);
    }
    return best->t == 1;
  }, stop);

  if (!best)
    throw SandwichNotFound("mahler_sandwich: no basis achieves containment within t <= " +
                           opts.cap_t.get_str());
  Gap p(r, best->dims, best_basis->gens);

  // Certify both inclusions explicitly: Image(P) in V, and every lattice
  // point of V has coefficients inside the box of P^t.
  for (const auto& x : image(p, opts.cap))
    if (!v.contains(x)) throw std::logic_error("sandwich certificate failed: Image(P) not in V");
  for (const auto& c : best_basis->coords)
    for (std::size_t j = 0; j < l; ++j)
      if (Rational(abs(c[j])) > Rational(floor(best->t * best->dims[j])))
        throw std::logic_error("sandwich certificate failed: lattice point outside Image(P^t)");
  return {p, best->t, pts.size(), tried};
}

EmbedResult embed_proper(const Gap& p, const Rational& t, std::size_t cap) {
  if (p.dim() != 1) throw UnsupportedRank("embed_proper requires d = 1");
  if (p.rank() > 2) throw UnsupportedRank("embed_proper supports rank <= 2");
  if (t < 1) throw InvalidArgument("embed_proper: t must be at least 1");
  const double r = static_cast<double>(p.rank());
  const double bound = p.rank() == 0 ? 1.0 : std::pow(2.0 * t.get_d(), r) * std::pow(r, 6.0 * r * r);
  if (is_t_proper(p, t, cap)) return {p, true, 1.0, bound};

  // Collapse onto the gcd of the generators that contribute to the image.
  Rational g0 = 0;
  Rational reach = 0;
  for (std::size_t j = 0; j < p.rank(); ++j) {
    Integer f = floor(p.dims()[j]);
    const Rational& g = p.generators()[j][0];
    if (f == 0 || g == 0) continue;
    g0 = g0 == 0 ? abs(g) : rational_gcd(g0, g);
    reach += Rational(f) * abs(g);
  }
  Gap q = g0 == 0 ? Gap::zero(1) : Gap(1, {reach / g0}, {RatVec{g0}});

  auto pimg = image(p, cap);
  for (const auto& x : pimg)
    if (!image_contains(q, x, cap)) throw EmbeddingNotFound("embed_proper: inclusion certificate failed");
  if (!is_t_proper(q, t, cap)) throw EmbeddingNotFound("embed_proper: result is not t-proper");
  double ratio = (2.0 * floor(q.rank() ? q.dims()[0] : Rational(0)).get_d() + 1.0) /
                 static_cast<double>(pimg.size());
  return {q, false, ratio, bound};
}

}  // namespace lostructure
