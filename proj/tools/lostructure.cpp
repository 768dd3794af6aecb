#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>

#include "lostructure/arak.hpp"
#include "lostructure/concentration.hpp"
#include "lostructure/errors.hpp"
#include "lostructure/gap.hpp"
#include "lostructure/harness.hpp"
#include "lostructure/json_io.hpp"
#include "lostructure/recovery.hpp"

using namespace lostructure;

namespace {

struct Globals {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out = ".";
};

Config load(const Globals& g) {
  Config cfg = g.config_path.empty() ? Config{} : load_config(g.config_path);
  if (g.seed_set) cfg.seed = g.seed;
  return cfg;
}

std::string out_path(const Globals& g, const std::string& name) {
  std::filesystem::create_directories(g.out);
  return (std::filesystem::path(g.out) / name).string();
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

Rational opt_rational(const std::string& s) { return parse_rational(s); }

// Width parameters may be a single rational or one per coordinate.
std::vector<Rational> per_coordinate(const Json& j, const char* key, std::size_t d) {
  if (!j.contains(key)) throw InvalidArgument(std::string("params missing '") + key + "'");
  if (j[key].is_array()) {
    auto v = ratvec_from_json(j[key]);
    if (v.size() != d) throw InvalidArgument(std::string("'") + key + "' needs one entry per coordinate");
    return v;
  }
  return std::vector<Rational>(d, rational_from_json(j[key]));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concentration functions, GAP toolkit and structure recovery for weighted sums"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "Config JSON (constants, caps, Monte Carlo sizes)");
  app.add_option_function<std::uint64_t>("--seed", [&](std::uint64_t s) { g.seed = s, g.seed_set = true; }, "Seed override");
  app.add_option("--out", g.out, "Directory for CSV and generated files");

  // conc
  auto* conc = app.add_subcommand("conc", "Concentration function of a law or of a weighted sum");
  std::string dist_file, weights_file, tau_s = "0", conc_mode = "exact";
  std::size_t samples = 0;
  conc->add_option("--dist", dist_file, "Distribution JSON")->required();
  conc->add_option("--weights", weights_file, "Weight vector JSON; the law becomes that of sum X_k a_k");
  conc->add_option("--tau", tau_s, "Window width (rational)");
  conc->add_option("--mode", conc_mode, "exact|mc")->check(CLI::IsMember({"exact", "mc"}));
  conc->add_option("--samples", samples, "Monte Carlo sample count");

  // gap
  auto* gapc = app.add_subcommand("gap", "GAP operations");
  std::string gap_verb, gap_file, poly_file, t_s = "1";
  gapc->add_option("verb", gap_verb, "image|proper|dilate|sandwich|embed")
      ->required()
      ->check(CLI::IsMember({"image", "proper", "dilate", "sandwich", "embed"}));
  gapc->add_option("--gap", gap_file, "GAP JSON");
  gapc->add_option("--polytope", poly_file, "Symmetric polytope or CGAP JSON (sandwich)");
  gapc->add_option("--t", t_s, "Dilation factor (rational)");

  // beta
  auto* betac = app.add_subcommand("beta", "Arak beta functional of a finite measure");
  std::string measure_file, beta_mode = "exact";
  int r = 1;
  std::size_t m = 1;
  betac->add_option("--measure", measure_file, "Measure JSON")->required();
  betac->add_option("--tau", tau_s, "Neighborhood radius (rational)");
  betac->add_option("--r", r, "Rank");
  betac->add_option("--m", m, "Lattice-size budget");
  betac->add_option("--mode", beta_mode, "exact|search (search allows r = 2 upper bounds)")
      ->check(CLI::IsMember({"exact", "search"}));

  // check-thm2
  auto* thm2 = app.add_subcommand("check-thm2", "Compare Q(H^lambda, tau) with the Arak bound");
  double lambda = 1.0;
  double c2_override = 0.0;
  std::string report_id = "check-thm2";
  thm2->add_option("--weights", weights_file, "Weight vector JSON (d = 1)")->required();
  thm2->add_option("--tau", tau_s, "Window width (rational)");
  thm2->add_option("--r", r, "Rank");
  thm2->add_option("--m", m, "Lattice-size budget");
  thm2->add_option("--lambda", lambda, "Poisson intensity");
  thm2->add_option("--samples", samples, "Monte Carlo sample count");
  thm2->add_option("--c2", c2_override, "Override the configured c2");
  thm2->add_option("--id", report_id, "Row id for the CSV ledger");

  // recover
  auto* rec = app.add_subcommand("recover", "Structure recovery");
  std::string inst_file, params_file, rec_mode = "thm4";
  rec->add_option("--instance", inst_file, "Instance JSON")->required();
  rec->add_option("--params", params_file, "Parameter JSON")->required();
  rec->add_option("--mode", rec_mode, "thm4|lograank|thm16|thm19")
      ->check(CLI::IsMember({"thm4", "lograank", "thm16", "thm19"}));

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a planted instance");
  std::string kind = "ap", gen_params_file;
  GenParams gp;
  std::string g_s = "1";
  gen->add_option("--kind", kind, "ap|gap2|outliers|dense_random|product_d|signsum")
      ->check(CLI::IsMember({"ap", "gap2", "outliers", "dense_random", "product_d", "signsum"}));
  gen->add_option("--params", gen_params_file, "GenParams JSON; replaces the flags below");
  gen->add_option("--n", gp.n, "Number of weights");
  gen->add_option("--g", g_s, "Generator (rational)");
  gen->add_option("--L", gp.L, "Coefficient range");
  gen->add_option("--outliers", gp.outliers, "Number of outliers");
  gen->add_option("--law", gp.law, "rademacher or uniform:lo:hi");
  bool gen_to_file = false;
  gen->add_flag("--write", gen_to_file, "Write <out>/<id>.json instead of stdout");

  // suite
  auto* suite = app.add_subcommand("suite", "Run a property suite");
  std::string suite_name = "all";
  std::size_t suite_instances = 0, threads = 0;
  suite->add_option("name", suite_name, "regularity|lemma1|beta_oracle|gap_laws|thm4|thm5|lograank|all");
  suite->add_option("--instances", suite_instances, "Override the instance count");
  suite->add_option("--threads", threads, "Worker threads (0 = hardware)");

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "Find the smallest constants under which the suites pass");
  std::string cal_out = "calibrated.json";
  std::size_t cal4 = 50, cal5 = 10;
  cal->add_option("--write", cal_out, "Output config path");
  cal->add_option("--thm4-instances", cal4, "Instances from the single-coordinate family");
  cal->add_option("--thm5-instances", cal5, "Instances from the two-coordinate family");

  CLI11_PARSE(app, argc, argv);

  try {
    Config cfg = load(g);

    if (*conc) {
      auto F = distribution_from_json(read_json_file(dist_file));
      if (!weights_file.empty()) F = weighted_sum_law(F, weights_from_json(read_json_file(weights_file)), cfg.caps.atoms);
      Rational tau = opt_rational(tau_s);
      if (conc_mode == "exact") {
        if (tau == 0) emit(to_json(conc_zero(F)));
        else if (F.dim() == 1) emit(to_json(conc_interval(F, tau)));
        else throw InvalidArgument("exact mode with tau > 0 needs d = 1; use --mode mc");
      } else {
        std::size_t count = samples ? samples : cfg.mc.samples;
        BatchSampler s = [&](std::size_t c, std::uint64_t seed) { return sample_distribution(F, c, seed); };
        emit(to_json(conc_ball_mc(s, F.dim(), tau.get_d(), count, cfg.seed, {cfg.mc.bootstrap, 4096})));
      }
      return 0;
    }

    if (*gapc) {
      Rational t = opt_rational(t_s);
      if (gap_verb == "sandwich") {
        if (poly_file.empty()) throw InvalidArgument("sandwich needs --polytope");
        auto pj = read_json_file(poly_file);
        SymmetricPolytope body = polytope_from_json(pj);
        SandwichOptions so;
        so.cap_t = from_double(cfg.caps.sandwich_t);
        so.cap = cfg.caps.enumeration;
        auto res = mahler_sandwich(body, so);
        Json j = {{"gap", to_json(res.gap)},
                  {"achieved_t", to_json(res.achieved_t)},
                  {"lattice_count", res.lattice_count},
                  {"candidates_tried", res.candidates_tried}};
        if (pj.contains("h")) j["image_gap"] = to_json(Gap(1, dilate(res.gap, res.achieved_t).dims(), [&] {
          std::vector<RatVec> gs;
          RatVec h = ratvec_from_json(pj["h"]);
          for (const auto& w : res.gap.generators()) gs.push_back({dot(w, h)});
          return gs;
        }()));
        emit(j);
        return 0;
      }
      if (gap_file.empty()) throw InvalidArgument("gap " + gap_verb + " needs --gap");
      Gap P = gap_from_json(read_json_file(gap_file));
      if (gap_verb == "image") {
        Json pts = Json::array();
        for (const auto& x : image(P, cfg.caps.enumeration)) pts.push_back(to_json(x));
        emit({{"size", pts.size()}, {"vol", vol(P).get_str()}, {"image", pts}});
      } else if (gap_verb == "proper") {
        Json j = {{"proper", is_proper(P, cfg.caps.enumeration)},
                  {"t", to_json(t)},
                  {"t_proper", is_t_proper(P, t, cfg.caps.enumeration)},
                  {"infinitely_proper", is_infinitely_proper(P)},
                  {"size", size(P, cfg.caps.enumeration)},
                  {"vol", vol(P).get_str()}};
        if (auto th = collision_threshold(P)) j["collision_threshold"] = to_json(*th);
        emit(j);
      } else if (gap_verb == "dilate") {
        emit(to_json(dilate(P, t)));
      } else {
        auto e = embed_proper(P, t, cfg.caps.enumeration);
        emit({{"gap", to_json(e.gap)}, {"identity", e.identity}, {"size_ratio", e.size_ratio}, {"lemma_bound", e.lemma_bound}});
      }
      return 0;
    }

    if (*betac) {
      if (beta_mode == "exact" && r > 1) throw UnsupportedRank("exact beta is available for r <= 1; use --mode search");
      auto res = beta(measure_from_json(read_json_file(measure_file)), opt_rational(tau_s), r, m);
      emit(to_json(res));
      return 0;
    }

    if (*thm2) {
      auto a = weights_from_json(read_json_file(weights_file));
      Thm2Options to;
      to.samples = samples ? samples : cfg.mc.samples;
      to.seed = cfg.seed;
      double c2 = c2_override > 0 ? c2_override : cfg.constants.c2;
      auto rep = check_thm2(CompoundPoissonSpec{a, lambda}, opt_rational(tau_s), r, m, c2, to);
      rep.id = report_id;
      emit(to_json(rep));
      CsvRow row{"check-thm2", rep.id, rep.n, 1, std::to_string(rep.r), std::to_string(rep.m), to_string(rep.tau),
                 "", "", std::to_string(rep.lhs.value), std::to_string(rep.rhs), std::to_string(rep.slack), "",
                 rep.degenerate ? "degenerate" : ""};
      report_csv({row}, out_path(g, "bounds.csv"));
      return 0;
    }

    if (*rec) {
      Instance inst = instance_from_json(read_json_file(inst_file));
      Json pj = read_json_file(params_file);
      const auto& a = inst.weight;
      const std::size_t d = a.dim();
      CsvRow row{"recover-" + rec_mode, inst.id, a.size(), d, "", "", "", "", "", "", "", "", "", ""};
      if (rec_mode == "thm4") {
        auto taus = per_coordinate(pj, "tau", d), kappas = per_coordinate(pj, "kappa", d),
             deltas = per_coordinate(pj, "delta", d);
        int rr = pj.value("r", 1);
        std::optional<std::size_t> np;
        if (pj.contains("n_prime")) np = pj["n_prime"].get<std::size_t>();
        RecoveryOptions ro;
        ro.caps = cfg.caps;
        row.r = std::to_string(rr);
        if (d == 1) {
          auto params = make_recovery_params(a, inst.law, taus[0], kappas[0], deltas[0], rr, cfg.constants, np, cfg.caps.atoms);
          auto rep = recover(a, inst.law, params, ro);
          emit(to_json(rep));
          row.m = std::to_string(rep.m);
          row.tau = to_string(taus[0]);
          row.kappa = to_string(kappas[0]);
          row.delta = to_string(deltas[0]);
          row.lhs = to_string(rep.beta_value);
          row.rhs = std::to_string(params.n_prime);
          row.coverage = rep.coverage.count("K_star") ? std::to_string(rep.coverage.at("K_star")) : "";
          for (const auto& f : rep.flags) row.flags += f + ";";
        } else {
          std::vector<RecoveryParams> ps;
          for (std::size_t j = 0; j < d; ++j) {
            if (a.projection_is_zero(j)) {
              RecoveryParams z;
              z.tau = taus[j], z.kappa = kappas[j], z.delta = deltas[j];
              ps.push_back(z);
            } else {
              ps.push_back(make_recovery_params(a.projection(j), inst.law, taus[j], kappas[j], deltas[j], rr,
                                                cfg.constants, np, cfg.caps.atoms));
            }
          }
          auto rep = recover_multid(a, inst.law, ps, ro);
          emit(to_json(rep));
          row.coverage = std::to_string(rep.joint_coverage.at("K_star"));
          row.rhs = std::to_string(rep.guarantee);
          for (const auto& f : rep.flags) row.flags += f + ";";
        }
      } else if (rec_mode == "lograank") {
        auto taus = per_coordinate(pj, "tau", d), kappas = per_coordinate(pj, "kappa", d),
             deltas = per_coordinate(pj, "delta", d);
        LogRankOptions lo;
        lo.atom_cap = cfg.caps.atoms;
        lo.max_rank = pj.value("max_rank", lo.max_rank);
        if (d == 1) {
          auto rep = lograank_construct(a, inst.law, taus[0], kappas[0], deltas[0], cfg.constants.c8, lo);
          emit(to_json(rep));
          row.r = std::to_string(rep.r);
          row.coverage = std::to_string(a.size() - rep.n_prime);
          row.flags = std::string(rep.r_ok ? "" : "r_bound_exceeded;") + (rep.n_prime_ok ? "" : "n_prime_bound_exceeded");
        } else {
          auto rep = lograank_multid(a, inst.law, taus, kappas, deltas, cfg.constants.c8, lo);
          emit(to_json(rep));
          row.r = std::to_string(rep.total_rank);
          row.coverage = std::to_string(rep.joint_coverage);
        }
      } else {
        Json entries = Json::array();
        auto fill_q = [&](std::vector<double>& q, const Rational& tau) {
          if (!q.empty()) return;
          for (std::size_t j = 0; j < d; ++j) {
            if (a.projection_is_zero(j)) {
              q.push_back(1.0);
              continue;
            }
            auto Fa = weighted_sum_law(inst.law, d == 1 ? a : a.projection(j), cfg.caps.atoms);
            q.push_back(tau == 0 ? conc_zero(Fa).value : conc_interval(Fa, tau).value);
          }
        };
        if (rec_mode == "thm16") {
          auto in = thm16_inputs_from_json(pj);
          in.c4 = pj.value("c4", cfg.constants.c4);
          fill_q(in.q, Rational(0));
          for (const auto& e : schedule_thm16(in, a)) entries.push_back(to_json(e));
        } else {
          auto in = thm19_inputs_from_json(pj);
          in.c4 = pj.value("c4", cfg.constants.c4);
          fill_q(in.q, pj.contains("tau") ? rational_from_json(pj["tau"]) : from_double(in.kappa));
          for (const auto& e : schedule_thm19(in, a)) entries.push_back(to_json(e));
        }
        emit({{"mode", rec_mode}, {"schedule", entries}});
        row.r = entries.empty() ? "" : std::to_string(entries[0]["r"].get<int>());
      }
      report_csv({row}, out_path(g, "recover.csv"));
      return 0;
    }

    if (*gen) {
      if (!gen_params_file.empty()) gp = gen_params_from_json(read_json_file(gen_params_file));
      else gp.g = opt_rational(g_s);
      auto inst = gen_planted(kind, gp, cfg.seed);
      if (gen_to_file) {
        auto path = out_path(g, inst.id + ".json");
        write_json_file(to_json(inst), path);
        std::cout << path << '\n';
      } else {
        emit(to_json(inst));
      }
      return 0;
    }

    if (*suite) {
      std::vector<std::string> names = suite_name == "all" ? suite_names() : std::vector<std::string>{suite_name};
      bool ok = true;
      SuiteOptions so{suite_instances, threads};
      for (const auto& name : names) {
        auto rep = run_suite(name, cfg, so);
        std::cout << name << ": " << rep.passes << "/" << rep.instances << " passed\n";
        for (const auto& [id, why] : rep.failures) std::cout << "  " << id << ": " << why << '\n';
        for (const auto& [k, v] : rep.calibration) std::cout << "  " << k << " = " << v << '\n';
        std::filesystem::remove(out_path(g, "suite_" + name + ".csv"));
        report_csv(rep.rows, out_path(g, "suite_" + name + ".csv"));
        write_json_file(to_json(rep), out_path(g, "suite_" + name + ".json"));
        ok = ok && rep.failures.empty();
      }
      return ok ? 0 : 1;
    }

    if (*cal) {
      auto res = calibrate(cfg, cal4, cal5);
      save_config(res.config, cal_out);
      for (const auto& [k, v] : res.observed) std::cout << k << " = " << v << '\n';
      for (const auto& n : res.notes) std::cout << "note: " << n << '\n';
      std::cout << "wrote " << cal_out << '\n';
      return res.observed.count("c4") ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
