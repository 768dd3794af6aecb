#include "lostructure/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "lostructure/errors.hpp"

namespace lostructure {

namespace {

void sort_atoms(std::vector<Atom>& atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& x, const Atom& y) { return RatVecLess{}(x.value, y.value); });
}

std::vector<Atom> merge_atoms(std::vector<Atom> atoms) {
  std::map<RatVec, Rational, RatVecLess> acc;
  for (auto& a : atoms) {
    canonicalize(a.value);
    a.mass.canonicalize();
    acc[a.value] += a.mass;
  }
  std::vector<Atom> out;
  out.reserve(acc.size());
  for (auto& [v, m] : acc)
    if (m != 0) out.push_back({v, m});
  return out;
}

RatVec negate(const RatVec& v) {
  RatVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = -v[i];
  return out;
}

Integer lcm_of_denominators(const std::vector<Rational>& xs) {
  Integer l = 1;
  for (const auto& x : xs) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::size_t dim, std::vector<Atom> atoms)
    : dim_(dim), atoms_(std::move(atoms)) {
  if (dim_ == 0) throw InvalidArgument("distribution dimension must be positive");
  if (atoms_.empty()) throw InvalidArgument("distribution needs at least one atom");
  for (auto& a : atoms_) {
    canonicalize(a.value);
    a.mass.canonicalize();
  }
  Rational total = 0;
  for (const auto& a : atoms_) {
    if (a.value.size() != dim_) throw InvalidArgument("atom dimension mismatch");
    if (a.mass <= 0) throw InvalidArgument("atom masses must be positive");
    total += a.mass;
  }
  if (total != 1) throw InvalidArgument("atom masses sum to " + total.get_str() + ", not 1");
  sort_atoms(atoms_);
  for (std::size_t i = 1; i < atoms_.size(); ++i)
    if (atoms_[i].value == atoms_[i - 1].value)
      throw InvalidArgument("duplicate atom " + to_string(atoms_[i].value));
}

DiscreteDistribution DiscreteDistribution::from_unmerged(std::size_t dim,
                                                         std::vector<Atom> atoms) {
  return DiscreteDistribution(dim, merge_atoms(std::move(atoms)));
}

DiscreteDistribution DiscreteDistribution::point_mass(RatVec value) {
  std::size_t d = value.size();
  return DiscreteDistribution(d, {{std::move(value), Rational(1)}});
}

DiscreteDistribution DiscreteDistribution::rademacher() {
  return DiscreteDistribution(1, {{{Rational(-1)}, Rational(1, 2)}, {{Rational(1)}, Rational(1, 2)}});
}

DiscreteDistribution DiscreteDistribution::uniform(const std::vector<Rational>& values) {
  if (values.empty()) throw InvalidArgument("uniform law needs values");
  std::vector<Atom> atoms;
  Rational w(1, values.size());
  for (const auto& v : values) atoms.push_back({{v}, w});
  return from_unmerged(1, std::move(atoms));
}

DiscreteDistribution DiscreteDistribution::uniform_range(long lo, long hi) {
  if (hi < lo) throw InvalidArgument("empty range");
  std::vector<Rational> vals;
  for (long v = lo; v <= hi; ++v) vals.emplace_back(v);
  return uniform(vals);
}

Rational DiscreteDistribution::mass_at(const RatVec& value) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), value,
                             [](const Atom& a, const RatVec& v) { return RatVecLess{}(a.value, v); });
  if (it != atoms_.end() && it->value == value) return it->mass;
  return 0;
}

bool DiscreteDistribution::is_symmetric() const {
  for (const auto& a : atoms_)
    if (mass_at(negate(a.value)) != a.mass) return false;
  return true;
}

DiscreteDistribution DiscreteDistribution::marginal(std::size_t j) const {
  if (j >= dim_) throw InvalidArgument("marginal index out of range");
  std::vector<Atom> atoms;
  for (const auto& a : atoms_) atoms.push_back({{a.value[j]}, a.mass});
  return from_unmerged(1, std::move(atoms));
}

WeightVector::WeightVector(std::size_t dim, std::vector<RatVec> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim_ == 0) throw InvalidArgument("weight dimension must be positive");
  if (entries_.empty()) throw InvalidArgument("weight vector needs n >= 1 entries");
  for (auto& e : entries_) {
    canonicalize(e);
    if (e.size() != dim_) throw InvalidArgument("weight entry dimension mismatch");
    sq_norm_ += lostructure::squared_norm(e);
  }
  if (sq_norm_ == 0) throw InvalidArgument("weight vector must not be identically zero");
}

WeightVector WeightVector::scalars(const std::vector<Rational>& values) {
  std::vector<RatVec> e;
  e.reserve(values.size());
  for (const auto& v : values) e.push_back({v});
  return WeightVector(1, std::move(e));
}

double WeightVector::norm() const { return std::sqrt(sq_norm_.get_d()); }

bool WeightVector::projection_is_zero(std::size_t j) const {
  for (const auto& e : entries_)
    if (e.at(j) != 0) return false;
  return true;
}

WeightVector WeightVector::projection(std::size_t j) const {
  if (j >= dim_) throw InvalidArgument("projection index out of range");
  std::vector<Rational> vals;
  vals.reserve(entries_.size());
  for (const auto& e : entries_) vals.push_back(e[j]);
  return scalars(vals);
}

std::vector<Rational> WeightVector::scalar_entries() const {
  if (dim_ != 1) throw InvalidArgument("scalar_entries requires d = 1");
  std::vector<Rational> vals;
  vals.reserve(entries_.size());
  for (const auto& e : entries_) vals.push_back(e[0]);
  return vals;
}

WeightVector WeightVector::scaled(const Rational& s) const {
  std::vector<RatVec> e = entries_;
  for (auto& v : e)
    for (auto& x : v) x *= s;
  return WeightVector(dim_, std::move(e));
}

AtomicMeasure::AtomicMeasure(std::size_t dim, std::vector<Atom> atoms) : dim_(dim) {
  for (auto& a : atoms) {
    canonicalize(a.value);
    a.mass.canonicalize();
    if (a.value.size() != dim_) throw InvalidArgument("measure atom dimension mismatch");
    if (a.mass < 0) throw InvalidArgument("measure masses must be nonnegative");
  }
  atoms_ = merge_atoms(std::move(atoms));
  for (const auto& a : atoms_) total_ += a.mass;
}

AtomicMeasure AtomicMeasure::scaled_mass(const Rational& s) const {
  std::vector<Atom> atoms = atoms_;
  for (auto& a : atoms) a.mass *= s;
  return AtomicMeasure(dim_, std::move(atoms));
}

DiscreteDistribution symmetrize(const DiscreteDistribution& F) {
  std::vector<Atom> out;
  out.reserve(F.size() * F.size());
  for (const auto& x : F.atoms())
    for (const auto& y : F.atoms()) {
      RatVec v(F.dim());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = x.value[i] - y.value[i];
      out.push_back({std::move(v), x.mass * y.mass});
    }
  return DiscreteDistribution::from_unmerged(F.dim(), std::move(out));
}

Rational tail_mass(const DiscreteDistribution& G, const Rational& delta) {
  if (delta < 0) throw InvalidArgument("tail_mass: delta must be nonnegative");
  Rational p = 0;
  for (const auto& a : G.atoms())
    if (max_norm(a.value) > delta) p += a.mass;
  return p;
}

namespace {

// Exact one-dimensional convolution on an integer grid. Returns false when the
// grid would be too wide, so the caller can fall back to the sparse path.
bool weighted_sum_dense(const DiscreteDistribution& F, const std::vector<Rational>& a,
                        std::size_t atom_cap, std::vector<Atom>& out) {
  constexpr long kMaxWidth = 1LL << 22;
  std::vector<Rational> xs;
  std::vector<Rational> ms;
  for (const auto& at : F.atoms()) {
    xs.push_back(at.value[0]);
    ms.push_back(at.mass);
  }
  Integer dx = lcm_of_denominators(xs);
  Integer da = lcm_of_denominators(a);
  Integer wden = lcm_of_denominators(ms);
  if (!wden.fits_ulong_p()) return false;
  std::vector<long> xi;
  std::vector<unsigned long> wi;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Integer v = xs[i].get_num() * (dx / xs[i].get_den());
    Integer w = ms[i].get_num() * (wden / ms[i].get_den());
    if (!v.fits_slong_p() || !w.fits_ulong_p()) return false;
    xi.push_back(v.get_si());
    wi.push_back(w.get_ui());
  }
  long xmin = *std::min_element(xi.begin(), xi.end());
  long xmax = *std::max_element(xi.begin(), xi.end());

  std::vector<long> ai;
  Integer lo_total = 0;
  Integer hi_total = 0;
  for (const auto& ak : a) {
    Integer v = ak.get_num() * (da / ak.get_den());
    if (!v.fits_slong_p()) return false;
    long vv = v.get_si();
    if (vv == 0) continue;
    ai.push_back(vv);
    Integer p = Integer(xmin) * vv;
    Integer q = Integer(xmax) * vv;
    lo_total += std::min(p, q);
    hi_total += std::max(p, q);
  }
  Integer width = hi_total - lo_total + 1;
  if (!width.fits_slong_p() || width.get_si() > kMaxWidth) return false;
  if (!lo_total.fits_slong_p() || !hi_total.fits_slong_p()) return false;
  std::sort(ai.begin(), ai.end(), [](long p, long q) { return std::labs(p) < std::labs(q); });

  std::vector<Integer> cur(1, Integer(1));
  long lo = 0;
  Integer denom = 1;
  std::vector<long> shifts(xi.size());
  for (long ak : ai) {
    for (std::size_t i = 0; i < xi.size(); ++i) shifts[i] = xi[i] * ak;
    long smin = *std::min_element(shifts.begin(), shifts.end());
    long smax = *std::max_element(shifts.begin(), shifts.end());
    std::vector<Integer> nxt(cur.size() + static_cast<std::size_t>(smax - smin));
    std::size_t nonzero = 0;
    for (std::size_t v = 0; v < cur.size(); ++v) {
      if (sgn(cur[v]) == 0) continue;
      for (std::size_t i = 0; i < xi.size(); ++i) {
        mpz_addmul_ui(nxt[v + static_cast<std::size_t>(shifts[i] - smin)].get_mpz_t(),
                      cur[v].get_mpz_t(), wi[i]);
      }
    }
    for (const auto& c : nxt)
      if (sgn(c) != 0) ++nonzero;
    if (nonzero > atom_cap)
      throw AtomCapExceeded("weighted_sum_law: support of " + std::to_string(nonzero) +
                            " atoms exceeds cap " + std::to_string(atom_cap));
    cur.swap(nxt);
    lo += smin;
    denom *= wden;
  }
  Rational scale(Integer(1), dx * da);
  scale.canonicalize();
  out.clear();
  for (std::size_t v = 0; v < cur.size(); ++v) {
    if (sgn(cur[v]) == 0) continue;
    Rational m(cur[v], denom);
    m.canonicalize();
    out.push_back({{Rational(lo + static_cast<long>(v)) * scale}, m});
  }
  return true;
}

}  // namespace

DiscreteDistribution weighted_sum_law(const DiscreteDistribution& F, const WeightVector& a,
                                      std::size_t atom_cap) {
  if (F.dim() != 1) throw InvalidArgument("weighted_sum_law: F must be a law on the line");
  const std::size_t d = a.dim();
  std::vector<Atom> out;
  if (d == 1 && weighted_sum_dense(F, a.scalar_entries(), atom_cap, out))
    return DiscreteDistribution(1, std::move(out));

  std::vector<RatVec> order = a.entries();
  std::sort(order.begin(), order.end(),
            [](const RatVec& p, const RatVec& q) { return squared_norm(p) < squared_norm(q); });
  std::map<RatVec, Rational, RatVecLess> cur;
  cur[zeros(d)] = 1;
  for (const auto& ak : order) {
    if (is_zero(ak)) continue;
    std::map<RatVec, Rational, RatVecLess> nxt;
    for (const auto& [v, m] : cur) {
      for (const auto& x : F.atoms()) {
        RatVec w = v;
        for (std::size_t i = 0; i < d; ++i) w[i] += x.value[0] * ak[i];
        nxt[std::move(w)] += m * x.mass;
      }
      if (nxt.size() > atom_cap)
        throw AtomCapExceeded("weighted_sum_law: support exceeds cap " + std::to_string(atom_cap));
    }
    cur.swap(nxt);
  }
  for (auto& [v, m] : cur) out.push_back({v, m});
  return DiscreteDistribution(d, std::move(out));
}

AtomicMeasure levy_measure_star(const WeightVector& a) {
  std::vector<Atom> atoms;
  atoms.reserve(2 * a.size());
  for (const auto& e : a.entries()) {
    atoms.push_back({e, Rational(1)});
    atoms.push_back({negate(e), Rational(1)});
  }
  return AtomicMeasure(a.dim(), std::move(atoms));
}

AtomicMeasure levy_measure(const WeightVector& a) {
  std::vector<Atom> atoms;
  for (const auto& e : a.entries()) atoms.push_back({e, Rational(1)});
  return AtomicMeasure(a.dim(), std::move(atoms));
}

double char_fn_H(const WeightVector& a, std::span<const double> t, double lambda) {
  if (t.size() != a.dim()) throw InvalidArgument("char_fn_H: t has wrong dimension");
  if (lambda < 0) throw InvalidArgument("char_fn_H: lambda must be nonnegative");
  double s = 0.0;
  for (const auto& e : a.entries()) {
    double ip = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) ip += t[i] * e[i].get_d();
    double h = std::sin(ip / 2.0);
    s += 2.0 * h * h;  // 1 - cos(ip)
  }
  return std::exp(-lambda / 2.0 * s);
}

std::vector<std::vector<double>> sample_H_lambda(const CompoundPoissonSpec& spec,
                                                 std::size_t count, std::uint64_t seed) {
  if (spec.lambda < 0) throw InvalidArgument("sample_H_lambda: lambda must be nonnegative");
  const std::size_t d = spec.weight.dim();
  // Equal weights pool into one Skellam pair with a scaled rate.
  std::map<RatVec, std::size_t, RatVecLess> groups;
  for (const auto& e : spec.weight.entries())
    if (!is_zero(e)) ++groups[e];
  struct Group {
    std::vector<double> value;
    double rate;
  };
  std::vector<Group> gs;
  for (const auto& [v, c] : groups) gs.push_back({to_double(v), spec.lambda / 4.0 * static_cast<double>(c)});

  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> out(count, std::vector<double>(d, 0.0));
  if (spec.lambda == 0.0) return out;
  std::vector<std::poisson_distribution<long>> pois;
  for (const auto& g : gs) pois.emplace_back(g.rate);
  for (std::size_t s = 0; s < count; ++s) {
    auto& row = out[s];
    for (std::size_t gi = 0; gi < gs.size(); ++gi) {
      long k = pois[gi](rng) - pois[gi](rng);
      if (k == 0) continue;
      for (std::size_t i = 0; i < d; ++i) row[i] += static_cast<double>(k) * gs[gi].value[i];
    }
  }
  return out;
}

std::vector<std::vector<double>> sample_distribution(const DiscreteDistribution& F,
                                                     std::size_t count, std::uint64_t seed) {
  std::vector<double> w;
  for (const auto& a : F.atoms()) w.push_back(a.mass.get_d());
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> out;
  out.reserve(count);
  std::vector<std::vector<double>> values;
  for (const auto& a : F.atoms()) values.push_back(to_double(a.value));
  for (std::size_t s = 0; s < count; ++s) out.push_back(values[pick(rng)]);
  return out;
}

}  // namespace lostructure
