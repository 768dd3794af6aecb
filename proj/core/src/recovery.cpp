#include "lostructure/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "lostructure/concentration.hpp"
#include "lostructure/errors.hpp"

namespace lostructure {

namespace {

double window_constant(const RecoveryParams& p) {
  const double r = static_cast<double>(p.r);
  double c = 2.0 * std::pow(p.constants.c4, r + 1) * std::pow(r + 1, 2.5 * r);
  if (p.tau > 0) return c * p.kappa.get_d() / (p.q.get_d() * p.delta.get_d());
  return c / p.q.get_d();
}

std::vector<Rational> line_image(const Gap& g, std::size_t cap) {
  std::vector<Rational> out;
  for (const auto& v : image(g, cap)) out.push_back(v[0]);
  return out;
}

bool subset_of(const std::vector<Rational>& small, const std::vector<Rational>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// |x| <= 2|a|/sqrt(n') decided exactly.
bool within_slab(const Rational& x, const Rational& a_sq, std::size_t n_prime) {
  return x * x * static_cast<unsigned long>(n_prime) <= 4 * a_sq;
}

// Largest attained |x| inside the slab. When nothing nonzero fits, half of
// the smallest nonzero |x|; nullopt when the set is {0}.
std::optional<Rational> rational_slab(const std::vector<Rational>& values, const Rational& a_sq,
                                      std::size_t n_prime) {
  Rational best = 0;
  std::optional<Rational> smallest;
  for (const auto& x : values) {
    if (x <= 0) continue;
    if (within_slab(x, a_sq, n_prime)) best = std::max(best, x);
    if (!smallest || x < *smallest) smallest = x;
  }
  if (best > 0) return best;
  if (smallest) return *smallest / 2;
  return std::nullopt;
}

Gap map_gap(const Gap& p, const RatVec& h) {
  // Generators w_j in Z^r become <w_j, h>.
  std::vector<RatVec> gens;
  for (const auto& w : p.generators()) gens.push_back({dot(w, h)});
  if (p.rank() == 0) return Gap::zero(1);
  return Gap(1, p.dims(), std::move(gens));
}

bool generators_bounded(const Gap& g, const Rational& bound_sq) {
  for (const auto& v : g.generators())
    if (v[0] * v[0] > bound_sq) return false;
  return true;
}

std::size_t cover(const std::vector<Rational>& img, const Rational& delta, const WeightVector& a) {
  return coverage_count(img, delta, a);
}

}  // namespace

double window_lower(const RecoveryParams& params) {
  if (params.p_val <= 0) return std::numeric_limits<double>::infinity();
  if (params.q <= 0) throw InvalidArgument("window_lower: q must be positive");
  if (params.tau > 0 && params.delta <= 0) throw InvalidArgument("window_lower: delta must be positive when tau > 0");
  const double r = static_cast<double>(params.r);
  return std::pow(window_constant(params), 2.0 / (r + 1)) / params.p_val.get_d();
}

RecoveryParams make_recovery_params(const WeightVector& a, const DiscreteDistribution& F,
                                    const Rational& tau, const Rational& kappa,
                                    const Rational& delta, int r, const Constants& constants,
                                    std::optional<std::size_t> n_prime, std::size_t atom_cap) {
  if (a.dim() != 1) throw InvalidArgument("recovery parameters need d = 1 weights");
  if (tau < 0 || delta < 0) throw InvalidArgument("tau and delta must be nonnegative");
  if (kappa <= 0) throw InvalidArgument("kappa must be positive");
  if (delta > std::max(kappa, tau)) throw InvalidArgument("delta must not exceed max(kappa, tau)");
  if (tau > 0 && delta == 0) throw InvalidArgument("delta must be positive when tau > 0");
  if (r < 0) throw InvalidArgument("r must be nonnegative");
  RecoveryParams p;
  auto Fa = weighted_sum_law(F, a, atom_cap);
  p.q = *conc_interval(Fa, tau).exact;
  p.tau = tau;
  p.kappa = kappa;
  p.delta = delta;
  p.r = r;
  p.p_val = tail_mass(symmetrize(F), tau > 0 ? Rational(tau / kappa) : Rational(0));
  p.constants = constants;
  if (n_prime) {
    p.n_prime = *n_prime;
  } else {
    double lo = window_lower(p);
    p.n_prime = lo < 1e15 ? static_cast<std::size_t>(std::max(1.0, std::ceil(lo))) : a.size() + 1;
  }
  return p;
}

std::size_t select_m(const RecoveryParams& params, std::size_t n) {
  if (params.p_val <= 0) throw InvalidArgument("select_m: p must be positive");
  double lo = window_lower(params);
  double np = static_cast<double>(params.n_prime);
  if (np < lo * (1.0 - 1e-12) || params.n_prime > n || params.n_prime == 0)
    throw InvalidWindow("n' = " + std::to_string(params.n_prime) + " outside window [" +
                        std::to_string(lo) + ", " + std::to_string(n) + "]");
  const double r = static_cast<double>(params.r);
  double y = 2.0 * std::pow(params.constants.c4, r + 1) / (params.q.get_d() * std::sqrt(params.p_val.get_d() * np));
  if (params.tau > 0) y *= params.kappa.get_d() / params.delta.get_d();
  if (!(y < 1e9)) throw InvalidWindow("select_m: m would exceed 1e9");
  return static_cast<std::size_t>(std::floor(y)) + 1;
}

std::vector<std::size_t> magnitude_order(const std::vector<Rational>& a) {
  std::vector<std::size_t> idx(a.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return abs(a[i]) > abs(a[j]); });
  return idx;
}

bool RecoveryReport::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

RecoveryReport recover(const WeightVector& a, const DiscreteDistribution& F,
                       const RecoveryParams& params, const RecoveryOptions& opts) {
  (void)F;  // the law enters through q and p
  if (a.dim() != 1) throw InvalidArgument("recover needs d = 1 weights; use recover_multid");
  const std::size_t cap = opts.caps.enumeration;
  RecoveryReport rep;
  rep.n = a.size();
  rep.params = params;
  const Rational& a_sq = a.squared_norm();
  const std::size_t np = params.n_prime;

  if (params.p_val == 0) {
    rep.flags.push_back("TrivialCase");
    return rep;
  }
  double lo = window_lower(params);
  if (std::ceil(lo * (1.0 - 1e-12)) > static_cast<double>(rep.n)) {
    rep.flags.push_back("NoInformation");
    return rep;
  }
  rep.m = select_m(params, rep.n);
  if (rep.guarantee() <= 0) {
    rep.flags.push_back("NoInformation");
    return rep;
  }
  rep.generator_bound_sq = Rational(4 * params.r * params.r) * a_sq / static_cast<unsigned long>(np);

  // (i) witness
  AtomicMeasure w = levy_measure_star(a);
  BetaResult b = beta(w, params.delta, params.r, rep.m, opts.beta);
  rep.beta_value = b.value;
  rep.beta_exactness = b.exactness;
  rep.K = b.witness;
  if (b.value > Rational(static_cast<unsigned long>(np))) rep.flags.push_back("TheoremWindowViolated");
  auto k_img = cgap_image(rep.K, cap);
  rep.coverage["K"] = cover(k_img, params.delta, a);
  rep.sizes["K"] = cgap_size(rep.K, cap);

  auto finish = [&]() {
    if (rep.coverage["K_star"] < static_cast<std::size_t>(std::max(0L, rep.guarantee())) &&
        !rep.has_flag("TheoremWindowViolated"))
      rep.flags.push_back("CoverageBelowGuarantee");
    for (const auto& [name, ok] : rep.certified)
      if (!ok) rep.flags.push_back("CertificationFailed:" + name);
    return rep;
  };

  // (ii) truncation
  if (params.delta * params.delta * static_cast<unsigned long>(np) > a_sq) {
    rep.degenerate_zero = true;
    std::vector<Rational> zero{Rational(0)};
    for (const char* s : {"K_star", "K_star_star", "bar_P", "barbar_P", "tilde_P"})
      rep.coverage[s] = cover(zero, params.delta, a);
    rep.sizes["K_star"] = rep.sizes["K_star_star"] = 1;
    return finish();
  }

  SymmetricPolytope vstar = rep.K.body();
  if (rep.K.rank() > 0 && !is_zero(rep.K.h())) {
    if (auto t = rational_slab(k_img, a_sq, np)) {
      rep.slab_bound = *t;
      vstar = vstar.with_constraint({rep.K.h(), *t});
    }
  }
  rep.K_star = rep.K.rank() ? Cgap(rep.K.h(), vstar) : Cgap::zero();
  auto ks_img = cgap_image(rep.K_star, cap);
  {
    std::vector<Rational> expect;
    for (const auto& x : k_img)
      if (within_slab(abs(x), a_sq, np)) expect.push_back(x);
    rep.certified["K_star_truncation"] = expect == ks_img;
  }
  rep.coverage["K_star"] = cover(ks_img, params.delta, a);
  rep.sizes["K_star"] = cgap_size(rep.K_star, cap);

  try {
    // (iii) sandwich and bar_P
    if (rep.K_star.rank() > 0) {
      SandwichOptions so;
      so.cap_t = from_double(opts.caps.sandwich_t);
      so.cap = cap;
      auto sw = mahler_sandwich(rep.K_star.body(), so);
      rep.sandwich_t = sw.achieved_t;
      rep.bar_P = map_gap(dilate(sw.gap, sw.achieved_t), rep.K_star.h());
    }
    auto bar_img = line_image(rep.bar_P, cap);
    rep.certified["K_star_in_bar_P"] = subset_of(ks_img, bar_img);
    rep.certified["bar_P_generator_bound"] = generators_bounded(rep.bar_P, rep.generator_bound_sq);
    rep.coverage["bar_P"] = cover(bar_img, params.delta, a);
    rep.sizes["bar_P"] = bar_img.size();

    // (iv) proper embedding at t = 1
    auto emb = embed_proper(rep.bar_P, Rational(1), cap);
    rep.barbar_P = emb.gap;
    auto bb_img = line_image(rep.barbar_P, cap);
    rep.certified["K_star_in_barbar_P"] = subset_of(ks_img, bb_img);
    rep.certified["barbar_P_proper"] = is_proper(rep.barbar_P, cap);
    rep.coverage["barbar_P"] = cover(bb_img, params.delta, a);
    rep.sizes["barbar_P"] = bb_img.size();

    // (v) K** from a t-proper embedding
    const double r = static_cast<double>(params.r);
    double t_want = params.r == 0 ? 1.0 : std::ceil(std::pow(params.constants.c8 * r, 1.5 * r));
    double t_used = std::min(std::max(1.0, t_want), static_cast<double>(opts.dilation_budget));
    if (t_used < t_want) rep.flags.push_back("DilationCapped");
    rep.embed_t = from_double(t_used);
    rep.barbar_P_t = embed_proper(rep.bar_P, rep.embed_t, cap).gap;
    const Gap& bt = rep.barbar_P_t;
    auto bt_img = line_image(bt, cap);
    if (bt.rank() > 0) {
      std::vector<Constraint> cs;
      RatVec u;
      for (std::size_t j = 0; j < bt.rank(); ++j) {
        RatVec e(bt.rank(), Rational(0));
        e[j] = 1;
        cs.push_back({e, bt.dims()[j]});
        u.push_back(bt.generators()[j][0]);
      }
      if (auto t = rational_slab(bt_img, a_sq, np); t && !is_zero(u)) cs.push_back({u, *t});
      rep.K_star_star = Cgap(u, SymmetricPolytope(bt.rank(), std::move(cs)));
    }
    auto kss_img = cgap_image(rep.K_star_star, cap);
    {
      std::vector<Rational> expect;
      for (const auto& x : bt_img)
        if (within_slab(abs(x), a_sq, np)) expect.push_back(x);
      rep.certified["K_star_star_truncation"] = expect == kss_img;
    }
    rep.coverage["K_star_star"] = cover(kss_img, params.delta, a);
    rep.sizes["K_star_star"] = cgap_size(rep.K_star_star, cap);

    // (vi) tilde_P from a sandwich of W*
    if (rep.K_star_star.rank() > 0) {
      SandwichOptions so;
      so.cap_t = from_double(opts.caps.sandwich_t);
      so.cap = cap;
      auto sw = mahler_sandwich(rep.K_star_star.body(), so);
      rep.sandwich_t_tilde = sw.achieved_t;
      rep.tilde_P = map_gap(dilate(sw.gap, sw.achieved_t), rep.K_star_star.h());
    }
    auto tl_img = line_image(rep.tilde_P, cap);
    rep.certified["K_star_star_in_tilde_P"] = subset_of(kss_img, tl_img);
    rep.certified["tilde_P_proper"] = is_proper(rep.tilde_P, cap);
    rep.certified["tilde_P_generator_bound"] = generators_bounded(rep.tilde_P, rep.generator_bound_sq);
    rep.coverage["tilde_P"] = cover(tl_img, params.delta, a);
    rep.sizes["tilde_P"] = tl_img.size();
  } catch (const SandwichNotFound& e) {
    rep.flags.push_back("SandwichNotFound");
  } catch (const EmbeddingNotFound& e) {
    rep.flags.push_back("EmbeddingNotFound");
  } catch (const EnumerationCapExceeded& e) {
    rep.flags.push_back("EnumerationCapExceeded");
  }
  return finish();
}

Gap block_product(const std::vector<Gap>& factors) {
  const std::size_t d = factors.size();
  if (d == 0) throw InvalidArgument("block_product needs factors");
  std::vector<Rational> dims;
  std::vector<RatVec> gens;
  for (std::size_t j = 0; j < d; ++j) {
    if (factors[j].dim() != 1) throw InvalidArgument("block_product factors must be one-dimensional");
    for (std::size_t i = 0; i < factors[j].rank(); ++i) {
      RatVec g = zeros(d);
      g[j] = factors[j].generators()[i][0];
      gens.push_back(std::move(g));
      dims.push_back(factors[j].dims()[i]);
    }
  }
  return Gap(d, std::move(dims), std::move(gens));
}

namespace {

bool one_nonzero_per_generator(const Gap& g, const std::vector<std::size_t>& blocks) {
  for (std::size_t s = 0; s < g.rank(); ++s) {
    std::size_t nz = 0;
    std::size_t where = 0;
    for (std::size_t i = 0; i < g.dim(); ++i)
      if (g.generators()[s][i] != 0) {
        ++nz;
        where = i;
      }
    if (nz != 1) return false;
    // generator s (1-based s+1) must sit in block k with s_{k-1} < s+1 <= s_k
    if (!(blocks[where] < s + 1 && s + 1 <= blocks[where + 1])) return false;
  }
  return true;
}

}  // namespace

ProductReport recover_multid(const WeightVector& a, const DiscreteDistribution& F,
                             const std::vector<RecoveryParams>& params, const RecoveryOptions& opts) {
  const std::size_t d = a.dim();
  const std::size_t n = a.size();
  const std::size_t cap = opts.caps.enumeration;
  if (params.size() != d) throw InvalidArgument("recover_multid needs one parameter set per coordinate");
  ProductReport pr;
  std::vector<std::vector<Rational>> img_ks(d), img_kss(d), img_bar(d), img_bb(d), img_tl(d);
  std::vector<Gap> bars, bbs, tls;
  long sum_np = 0;
  for (std::size_t j = 0; j < d; ++j) {
    RecoveryReport rep;
    bool zero = a.projection_is_zero(j);
    pr.zero_coordinate.push_back(zero);
    if (zero) {
      rep.n = n;
      rep.params = params[j];
      rep.params.n_prime = 0;
      rep.flags.push_back("ZeroCoordinate");
      rep.coverage["K_star"] = n;
    } else {
      rep = recover(a.projection(j), F, params[j], opts);
      sum_np += static_cast<long>(params[j].n_prime);
    }
    for (const auto& f : rep.flags) pr.flags.push_back("coord" + std::to_string(j) + ":" + f);
    img_ks[j] = cgap_image(rep.K_star, cap);
    img_kss[j] = cgap_image(rep.K_star_star, cap);
    img_bar[j] = line_image(rep.bar_P, cap);
    img_bb[j] = line_image(rep.barbar_P, cap);
    img_tl[j] = line_image(rep.tilde_P, cap);
    pr.K_star.push_back(rep.K_star);
    pr.K_star_star.push_back(rep.K_star_star);
    bars.push_back(rep.bar_P);
    bbs.push_back(rep.barbar_P);
    tls.push_back(rep.tilde_P);
    pr.coordinates.push_back(std::move(rep));
  }
  pr.guarantee = static_cast<long>(n) - 2 * sum_np;
  pr.bar_P = block_product(bars);
  pr.barbar_P = block_product(bbs);
  pr.tilde_P = block_product(tls);

  auto joint = [&](const std::vector<std::vector<Rational>>& imgs) {
    std::size_t c = 0;
    for (std::size_t k = 0; k < n; ++k) {
      bool all = true;
      for (std::size_t j = 0; j < d && all; ++j)
        all = neighborhood_contains(imgs[j], params[j].delta, a[k][j]);
      if (all) ++c;
    }
    return c;
  };
  pr.joint_coverage["K_star"] = joint(img_ks);
  pr.joint_coverage["K_star_star"] = joint(img_kss);
  pr.joint_coverage["bar_P"] = joint(img_bar);
  pr.joint_coverage["barbar_P"] = joint(img_bb);
  pr.joint_coverage["tilde_P"] = joint(img_tl);

  // Blocks follow the tilde_P layout; all three products share the check.
  auto blocks_of = [&](const std::vector<Gap>& fs) {
    std::vector<std::size_t> b{0};
    for (const auto& f : fs) b.push_back(b.back() + f.rank());
    return b;
  };
  pr.blocks = blocks_of(tls);
  pr.certified["block_structure"] = one_nonzero_per_generator(pr.bar_P, blocks_of(bars)) &&
                                    one_nonzero_per_generator(pr.barbar_P, blocks_of(bbs)) &&
                                    one_nonzero_per_generator(pr.tilde_P, pr.blocks);
  std::size_t rank_sum = 0;
  for (const auto& f : tls) rank_sum += f.rank();
  pr.certified["rank_additive"] = pr.tilde_P.rank() == rank_sum;

  bool sizes_ok = true;
  try {
    for (const auto* fs : {&bars, &bbs, &tls}) {
      Integer expect = 1;
      for (const auto& f : *fs) expect *= static_cast<unsigned long>(size(f, cap));
      sizes_ok = sizes_ok && Integer(static_cast<unsigned long>(size(block_product(*fs), cap))) == expect;
    }
    ProductCgap kp(pr.K_star);
    Integer expect = 1;
    for (const auto& k : pr.K_star) expect *= static_cast<unsigned long>(cgap_size(k, cap));
    sizes_ok = sizes_ok && kp.size(cap) == expect;
    Integer img_expect = 1;
    for (const auto& im : img_ks) img_expect *= static_cast<unsigned long>(im.size());
    sizes_ok = sizes_ok && Integer(static_cast<unsigned long>(kp.image(cap).size())) == img_expect;
  } catch (const EnumerationCapExceeded&) {
    pr.flags.push_back("EnumerationCapExceeded");
    sizes_ok = false;
  }
  pr.certified["size_multiplicative"] = sizes_ok;
  pr.certified["joint_coverage"] = static_cast<long>(pr.joint_coverage["K_star"]) >= pr.guarantee;
  for (const auto& [name, ok] : pr.certified)
    if (!ok) pr.flags.push_back("CertificationFailed:" + name);
  return pr;
}

Gap fallback_gap(const WeightVector& a, std::size_t n_prime) {
  if (a.dim() != 1) throw InvalidArgument("fallback_gap needs d = 1 weights");
  auto vals = a.scalar_entries();
  auto order = magnitude_order(vals);
  std::vector<Rational> dims;
  std::vector<RatVec> gens;
  for (std::size_t i = n_prime; i < order.size(); ++i) {
    gens.push_back({vals[order[i]]});
    dims.push_back(Rational(1));
  }
  return Gap(1, std::move(dims), std::move(gens));
}

int schedule_rank_thm16(double A, double theta) {
  if (!(A > 0) || !(theta > 0)) throw InvalidSchedule("A and theta must be positive");
  int r = 0;
  while (!(A < theta * (r + 1) / 2.0)) ++r;
  return r;
}

int schedule_rank_thm19(double A, double B, double D, double theta) {
  if (!(theta > D)) throw InvalidSchedule("theta must exceed D");
  if (!(A > 0) || B < 0 || D < 0) throw InvalidSchedule("need A > 0 and B, D >= 0");
  int r = 0;
  while (!(A + B < (theta - D) * (r + 1) / 2.0)) ++r;
  return r;
}

namespace {

ScheduleEntry finish_entry(ScheduleEntry e, const WeightVector& a, std::size_t j, std::size_t n) {
  e.window_ok = e.preconditions_ok && e.window_lower <= e.chain_bound * (1 + 1e-12) &&
                e.chain_bound <= static_cast<double>(e.n_prime) * (1 + 1e-12) && e.n_prime <= n;
  if (!e.window_ok) {
    if (a.projection_is_zero(j)) {
      e.fallback = Gap::zero(1);
    } else {
      e.fallback = fallback_gap(a.projection(j), std::min(e.n_prime, n));
    }
    e.note = "window failed; fallback GAP of the n - n' smallest weights";
  } else {
    e.note = "window holds; run recover with these parameters";
  }
  return e;
}

}  // namespace

std::vector<ScheduleEntry> schedule_thm16(const Thm16Inputs& in, const WeightVector& a) {
  if (in.q.size() != a.dim()) throw InvalidSchedule("need one q per coordinate");
  if (!(in.b_n > 0) || !(in.eps1 > 0) || !(in.eps2 > 0) || !(in.p0 > 0))
    throw InvalidSchedule("b_n, eps1, eps2, p(0) must be positive");
  const int r = schedule_rank_thm16(in.A, in.theta);
  const double rr = r;
  const double k = 2.0 * std::pow(in.c4, rr + 1) * std::pow(rr + 1, 2.5 * rr);
  const std::size_t n = a.size();
  std::vector<ScheduleEntry> out;
  for (std::size_t j = 0; j < a.dim(); ++j) {
    ScheduleEntry e;
    e.coordinate = j;
    e.r = r;
    e.n_prime = static_cast<std::size_t>(std::ceil(in.eps2 * std::pow(in.b_n, in.theta)));
    e.preconditions_ok = in.q[j] >= in.eps1 * std::pow(in.b_n, -in.A);
    e.window_lower = std::pow(k / in.q[j], 2.0 / (rr + 1)) / in.p0;
    e.chain_bound = std::pow(k / in.eps1 * std::pow(in.b_n, in.A), 2.0 / (rr + 1)) / in.p0;
    e.chain_bound = std::max(e.chain_bound, 0.0);
    // chain: lower <= chain_bound <= eps2 b_n^theta <= n'
    if (e.chain_bound > in.eps2 * std::pow(in.b_n, in.theta) * (1 + 1e-12)) e.chain_bound = std::numeric_limits<double>::infinity();
    out.push_back(finish_entry(e, a, j, n));
  }
  return out;
}

std::vector<ScheduleEntry> schedule_thm19(const Thm19Inputs& in, const WeightVector& a) {
  if (in.q.size() != a.dim()) throw InvalidSchedule("need one q per coordinate");
  const int r = schedule_rank_thm19(in.A, in.B, in.D, in.theta);
  if (!(in.b_n > 0) || !(in.eps1 > 0) || !(in.eps2 > 0) || !(in.eps3 > 0) || !(in.eps4 > 0))
    throw InvalidSchedule("b_n and eps1..eps4 must be positive");
  if (!(in.kappa > 0) || !(in.delta > 0) || !(in.p_val > 0))
    throw InvalidSchedule("kappa, delta, p must be positive");
  const double rr = r;
  const double k = 2.0 * std::pow(in.c4, rr + 1) * std::pow(rr + 1, 2.5 * rr);
  const std::size_t n = a.size();
  const bool common_ok = in.p_val >= in.eps3 * std::pow(in.b_n, -in.D) &&
                         in.eps4 * std::pow(in.b_n, -in.B) <= in.rho_n && in.rho_n <= 1.0;
  std::vector<ScheduleEntry> out;
  for (std::size_t j = 0; j < a.dim(); ++j) {
    ScheduleEntry e;
    e.coordinate = j;
    e.r = r;
    e.n_prime = static_cast<std::size_t>(std::ceil(in.eps2 * std::pow(in.b_n, in.theta)));
    e.preconditions_ok = common_ok && in.q[j] >= in.eps1 * std::pow(in.b_n, -in.A);
    e.window_lower = std::pow(k * in.kappa / (in.q[j] * in.delta), 2.0 / (rr + 1)) / in.p_val;
    e.chain_bound = std::pow(k / (in.eps1 * in.eps4) * std::pow(in.b_n, in.A + in.B), 2.0 / (rr + 1)) /
                    (in.eps3 * std::pow(in.b_n, -in.D));
    if (e.chain_bound > in.eps2 * std::pow(in.b_n, in.theta) * (1 + 1e-12)) e.chain_bound = std::numeric_limits<double>::infinity();
    out.push_back(finish_entry(e, a, j, n));
  }
  return out;
}

LogRankReport lograank_construct(const WeightVector& a, const DiscreteDistribution& F,
                                 const Rational& tau, const Rational& kappa, const Rational& delta,
                                 double c8, const LogRankOptions& opts) {
  if (a.dim() != 1) throw InvalidArgument("lograank_construct needs d = 1 weights");
  if (tau < 0 || delta < 0 || kappa <= 0) throw InvalidArgument("lograank_construct: bad widths");
  if (delta > kappa) throw InvalidArgument("lograank_construct: delta must not exceed kappa");
  if (tau > 0 && delta == 0) throw InvalidArgument("lograank_construct: delta must be positive when tau > 0");
  const Rational eff_delta = tau > 0 ? delta : Rational(0);
  LogRankReport rep;
  auto Fa = weighted_sum_law(F, a, opts.atom_cap);
  rep.q = *conc_interval(Fa, tau).exact;
  rep.p = tail_mass(symmetrize(F), tau > 0 ? Rational(tau / kappa) : Rational(0));
  rep.log_term = std::abs(std::log(rep.q.get_d())) + 1.0;
  if (tau > 0) rep.log_term += std::log(kappa.get_d() / delta.get_d());

  const auto vals = a.scalar_entries();
  std::vector<Rational> k{Rational(0)};
  std::vector<Rational> gens;
  // Coverage count, then the summed distance of covered entries to the set.
  auto score = [&](const std::vector<Rational>& img) {
    std::pair<std::size_t, Rational> out{0, Rational(0)};
    for (const auto& x : vals) {
      auto it = std::lower_bound(img.begin(), img.end(), x);
      Rational best = -1;
      if (it != img.end()) best = *it - x;
      if (it != img.begin()) {
        Rational left = x - *std::prev(it);
        if (best < 0 || left < best) best = left;
      }
      if (best <= eff_delta) {
        ++out.first;
        out.second += best;
      }
    }
    return out;
  };
  auto extend = [](const std::vector<Rational>& img, const Rational& g) {
    std::vector<Rational> out;
    out.reserve(img.size() * 3);
    for (const auto& y : img) {
      out.push_back(y - g);
      out.push_back(y);
      out.push_back(y + g);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  std::size_t cur = score(k).first;
  rep.coverage_history.push_back(cur);
  while (gens.size() < opts.max_rank && cur < vals.size() && k.size() * 3 <= 200'000) {
    std::set<Rational> cands;
    for (const auto& x : vals) {
      if (neighborhood_contains(k, eff_delta, x)) continue;
      for (const auto& y : k) {
        Rational diff = x - y;
        for (const Rational& c : {diff, Rational(diff - eff_delta), Rational(diff + eff_delta)})
          if (c != 0) cands.insert(abs(c));
      }
    }
    // Ties on coverage go to generators that occur as weights most often,
    // then to the smallest summed distance, then to the smallest g.
    std::map<Rational, std::size_t> multiplicity;
    for (const auto& x : vals) ++multiplicity[abs(x)];
    std::size_t best = cur, best_mult = 0;
    Rational best_cost = 0;
    Rational best_g = 0;
    for (const auto& g : cands) {
      auto [c, cost] = score(extend(k, g));
      auto it = multiplicity.find(g);
      std::size_t mult = it == multiplicity.end() ? 0 : it->second;
      bool better = c > best;
      if (c == best && best > cur)
        better = mult > best_mult || (mult == best_mult && cost < best_cost);
      if (better) {
        best = c;
        best_mult = mult;
        best_cost = cost;
        best_g = g;
      }
    }
    if (best <= cur) break;
    gens.push_back(best_g);
    k = extend(k, best_g);
    cur = best;
    rep.coverage_history.push_back(cur);
  }
  std::vector<Rational> dims(gens.size(), Rational(1));
  std::vector<RatVec> gv;
  for (const auto& g : gens) gv.push_back({g});
  rep.gap = Gap(1, std::move(dims), std::move(gv));
  rep.r = static_cast<int>(gens.size());
  rep.n_prime = vals.size() - cur;
  rep.r_bound = c8 * rep.log_term;
  rep.n_prime_bound = rep.p > 0 ? c8 / rep.p.get_d() * std::pow(rep.log_term, 3.0)
                                : std::numeric_limits<double>::infinity();
  rep.r_ok = static_cast<double>(rep.r) <= rep.r_bound;
  rep.n_prime_ok = static_cast<double>(rep.n_prime) <= rep.n_prime_bound;
  return rep;
}

LogRankProduct lograank_multid(const WeightVector& a, const DiscreteDistribution& F,
                               const std::vector<Rational>& tau, const std::vector<Rational>& kappa,
                               const std::vector<Rational>& delta, double c8,
                               const LogRankOptions& opts) {
  const std::size_t d = a.dim();
  if (tau.size() != d || kappa.size() != d || delta.size() != d)
    throw InvalidArgument("lograank_multid needs per-coordinate widths");
  LogRankProduct out;
  std::vector<Gap> factors;
  std::vector<std::vector<Rational>> imgs;
  std::vector<Rational> eff;
  for (std::size_t j = 0; j < d; ++j) {
    if (a.projection_is_zero(j)) {
      LogRankReport z;
      z.q = 1;
      z.n_prime = 0;
      z.r_ok = z.n_prime_ok = true;
      out.coordinates.push_back(z);
      factors.push_back(Gap::zero(1));
      imgs.push_back({Rational(0)});
    } else {
      auto rep = lograank_construct(a.projection(j), F, tau[j], kappa[j], delta[j], c8, opts);
      factors.push_back(rep.gap);
      imgs.push_back(line_image(rep.gap, kDefaultEnumerationCap));
      out.coordinates.push_back(std::move(rep));
    }
    eff.push_back(tau[j] > 0 ? delta[j] : Rational(0));
  }
  out.gap = block_product(factors);
  out.blocks.push_back(0);
  for (const auto& f : factors) out.blocks.push_back(out.blocks.back() + f.rank());
  out.total_rank = out.blocks.back();
  for (std::size_t k = 0; k < a.size(); ++k) {
    bool all = true;
    for (std::size_t j = 0; j < d && all; ++j) all = neighborhood_contains(imgs[j], eff[j], a[k][j]);
    if (all) ++out.joint_coverage;
  }
  return out;
}

}  // namespace lostructure
