#include "lostructure/json_io.hpp"

#include <fstream>

#include "lostructure/errors.hpp"

namespace lostructure {

namespace {

template <class T>
Json list(const std::vector<T>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(to_json(x));
  return out;
}

Json atoms_json(const std::vector<Atom>& atoms) {
  Json out = Json::array();
  for (const auto& a : atoms) out.push_back(Json::array({to_json(a.value), to_json(a.mass)}));
  return out;
}

std::vector<Atom> atoms_from(const Json& j) {
  std::vector<Atom> atoms;
  for (const auto& a : j.at("atoms")) {
    if (!a.is_array() || a.size() != 2) throw InvalidArgument("atom must be [value, mass]");
    atoms.push_back({ratvec_from_json(a[0]), rational_from_json(a[1])});
  }
  return atoms;
}

std::size_t dim_of(const Json& j) {
  long d = j.at("dim").get<long>();
  if (d <= 0) throw InvalidArgument("dim must be positive");
  return static_cast<std::size_t>(d);
}

Json flags_json(const std::vector<std::string>& flags) { return Json(flags); }

template <class M>
Json map_json(const M& m) {
  Json out = Json::object();
  for (const auto& [k, v] : m) out[k] = v;
  return out;
}

}  // namespace

Json to_json(const Rational& x) { return to_string(x); }

Json to_json(const RatVec& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw InvalidArgument("expected a rational string, got " + j.dump());
}

RatVec ratvec_from_json(const Json& j) {
  if (!j.is_array()) throw InvalidArgument("expected an array of rationals");
  RatVec v;
  for (const auto& x : j) v.push_back(rational_from_json(x));
  return v;
}

Json to_json(const DiscreteDistribution& f) {
  return {{"dim", f.dim()}, {"atoms", atoms_json(f.atoms())}};
}

DiscreteDistribution distribution_from_json(const Json& j) {
  return DiscreteDistribution::from_unmerged(dim_of(j), atoms_from(j));
}

Json to_json(const WeightVector& a) { return {{"dim", a.dim()}, {"entries", list(a.entries())}}; }

WeightVector weights_from_json(const Json& j) {
  std::vector<RatVec> entries;
  for (const auto& e : j.at("entries")) entries.push_back(ratvec_from_json(e));
  return WeightVector(dim_of(j), std::move(entries));
}

Json to_json(const AtomicMeasure& w) { return {{"dim", w.dim()}, {"atoms", atoms_json(w.atoms())}}; }

AtomicMeasure measure_from_json(const Json& j) { return AtomicMeasure(dim_of(j), atoms_from(j)); }

Json to_json(const Gap& p) {
  return {{"rank", p.rank()}, {"dims", to_json(p.dims())}, {"generators", list(p.generators())}, {"dim", p.dim()}};
}

Gap gap_from_json(const Json& j) {
  std::vector<RatVec> gens;
  for (const auto& g : j.at("generators")) gens.push_back(ratvec_from_json(g));
  Gap p(dim_of(j), ratvec_from_json(j.at("dims")), std::move(gens));
  if (j.contains("rank") && j["rank"].get<std::size_t>() != p.rank()) throw InvalidArgument("GAP rank does not match its dims");
  return p;
}

Json to_json(const SymmetricPolytope& v) {
  Json cs = Json::array();
  for (const auto& c : v.constraints()) cs.push_back({{"u", to_json(c.normal)}, {"b", to_json(c.bound)}});
  return {{"rank", v.rank()}, {"constraints", cs}};
}

SymmetricPolytope polytope_from_json(const Json& j) {
  std::vector<Constraint> cs;
  for (const auto& c : j.at("constraints")) cs.push_back({ratvec_from_json(c.at("u")), rational_from_json(c.at("b"))});
  return SymmetricPolytope(j.at("rank").get<std::size_t>(), std::move(cs));
}

Json to_json(const Cgap& k) {
  Json out = to_json(k.body());
  out["h"] = to_json(k.h());
  return out;
}

Cgap cgap_from_json(const Json& j) {
  if (j.at("rank").get<std::size_t>() == 0) return Cgap::zero();
  return Cgap(ratvec_from_json(j.at("h")), polytope_from_json(j));
}

Json to_json(const ConcentrationResult& c) {
  Json out = {{"mode", to_string(c.mode)}, {"value", c.value}};
  if (c.exact) out["exact"] = to_json(*c.exact);
  if (c.witness) out["witness"] = to_json(*c.witness);
  if (c.center) out["center"] = *c.center;
  if (c.ci_halfwidth) out["ci_halfwidth"] = *c.ci_halfwidth;
  return out;
}

Json to_json(const BetaResult& b) {
  return {{"value", to_json(b.value)},
          {"witness", to_json(b.witness)},
          {"exactness", to_string(b.exactness)},
          {"candidates_searched", b.candidates_searched},
          {"note", b.note}};
}

Json to_json(const BoundReport& b) {
  return {{"id", b.id},   {"n", b.n},           {"r", b.r},     {"m", b.m},
          {"tau", to_json(b.tau)}, {"alpha", b.alpha}, {"beta", to_json(b.beta)},
          {"lhs", to_json(b.lhs)}, {"rhs", b.rhs}, {"degenerate", b.degenerate},
          {"slack", b.slack}, {"constants", map_json(b.constants)}};
}

Json to_json(const RecoveryParams& p) {
  return {{"q", to_json(p.q)},         {"tau", to_json(p.tau)},   {"kappa", to_json(p.kappa)},
          {"delta", to_json(p.delta)}, {"r", p.r},                {"n_prime", p.n_prime},
          {"p", to_json(p.p_val)},     {"c4", p.constants.c4},    {"c8", p.constants.c8}};
}

Json to_json(const RecoveryReport& r) {
  return {{"n", r.n},
          {"params", to_json(r.params)},
          {"m", r.m},
          {"beta", to_json(r.beta_value)},
          {"beta_exactness", to_string(r.beta_exactness)},
          {"K", to_json(r.K)},
          {"degenerate_zero", r.degenerate_zero},
          {"K_star", to_json(r.K_star)},
          {"K_star_star", to_json(r.K_star_star)},
          {"bar_P", to_json(r.bar_P)},
          {"barbar_P", to_json(r.barbar_P)},
          {"barbar_P_t", to_json(r.barbar_P_t)},
          {"tilde_P", to_json(r.tilde_P)},
          {"sandwich_t", to_json(r.sandwich_t)},
          {"sandwich_t_tilde", to_json(r.sandwich_t_tilde)},
          {"embed_t", to_json(r.embed_t)},
          {"slab_bound", to_json(r.slab_bound)},
          {"generator_bound_sq", to_json(r.generator_bound_sq)},
          {"guarantee", r.guarantee()},
          {"coverage", map_json(r.coverage)},
          {"sizes", map_json(r.sizes)},
          {"certified", map_json(r.certified)},
          {"flags", flags_json(r.flags)}};
}

Json to_json(const ProductReport& r) {
  Json coords = Json::array();
  for (const auto& c : r.coordinates) coords.push_back(to_json(c));
  return {{"coordinates", coords},
          {"zero_coordinate", r.zero_coordinate},
          {"K_star", list(r.K_star)},
          {"K_star_star", list(r.K_star_star)},
          {"bar_P", to_json(r.bar_P)},
          {"barbar_P", to_json(r.barbar_P)},
          {"tilde_P", to_json(r.tilde_P)},
          {"blocks", r.blocks},
          {"joint_coverage", map_json(r.joint_coverage)},
          {"guarantee", r.guarantee},
          {"certified", map_json(r.certified)},
          {"flags", flags_json(r.flags)}};
}

Json to_json(const ScheduleEntry& e) {
  Json out = {{"coordinate", e.coordinate},       {"r", e.r},
              {"n_prime", e.n_prime},             {"window_lower", e.window_lower},
              {"chain_bound", e.chain_bound},     {"preconditions_ok", e.preconditions_ok},
              {"window_ok", e.window_ok},         {"note", e.note}};
  if (e.fallback) out["fallback"] = to_json(*e.fallback);
  return out;
}

Json to_json(const LogRankReport& r) {
  return {{"gap", to_json(r.gap)},
          {"r", r.r},
          {"n_prime", r.n_prime},
          {"coverage_history", r.coverage_history},
          {"q", to_json(r.q)},
          {"p", to_json(r.p)},
          {"log_term", r.log_term},
          {"r_bound", r.r_bound},
          {"n_prime_bound", r.n_prime_bound},
          {"r_ok", r.r_ok},
          {"n_prime_ok", r.n_prime_ok}};
}

Json to_json(const LogRankProduct& r) {
  Json coords = Json::array();
  for (const auto& c : r.coordinates) coords.push_back(to_json(c));
  return {{"coordinates", coords},
          {"gap", to_json(r.gap)},
          {"blocks", r.blocks},
          {"joint_coverage", r.joint_coverage},
          {"total_rank", r.total_rank}};
}

Thm16Inputs thm16_inputs_from_json(const Json& j) {
  Thm16Inputs in;
  in.A = j.value("A", in.A);
  in.theta = j.value("theta", in.theta);
  in.eps1 = j.value("eps1", in.eps1);
  in.eps2 = j.value("eps2", in.eps2);
  in.b_n = j.value("b_n", in.b_n);
  in.q = j.value("q", in.q);
  in.p0 = j.value("p0", in.p0);
  in.c4 = j.value("c4", in.c4);
  return in;
}

Thm19Inputs thm19_inputs_from_json(const Json& j) {
  Thm19Inputs in;
  in.A = j.value("A", in.A);
  in.B = j.value("B", in.B);
  in.D = j.value("D", in.D);
  in.theta = j.value("theta", in.theta);
  in.eps1 = j.value("eps1", in.eps1);
  in.eps2 = j.value("eps2", in.eps2);
  in.eps3 = j.value("eps3", in.eps3);
  in.eps4 = j.value("eps4", in.eps4);
  in.b_n = j.value("b_n", in.b_n);
  in.rho_n = j.value("rho_n", in.rho_n);
  in.p_val = j.value("p", in.p_val);
  in.kappa = j.value("kappa", in.kappa);
  in.delta = j.value("delta", in.delta);
  in.q = j.value("q", in.q);
  in.c4 = j.value("c4", in.c4);
  return in;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

void write_json_file(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw InvalidArgument("write failed for " + path);
}

}  // namespace lostructure
