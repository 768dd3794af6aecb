#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "lostructure/config.hpp"
#include "lostructure/errors.hpp"
#include "lostructure/harness.hpp"
#include "lostructure/json_io.hpp"
#include "oracles.hpp"

using namespace lostructure;
using oracle::q;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "lostructure_tests";
  fs::create_directories(dir);
  auto p = dir / name;
  fs::remove(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool same_law(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.atoms()[i].value != b.atoms()[i].value || a.atoms()[i].mass != b.atoms()[i].mass) return false;
  return true;
}

}  // namespace

TEST(Gen, DeterministicForSeed) {
  GenParams p;
  p.n = 30;
  p.outliers = 3;
  p.L = 2;
  for (const std::string kind : {"ap", "gap2", "outliers", "dense_random", "product_d", "signsum"}) {
    auto a = gen_planted(kind, p, 42);
    auto b = gen_planted(kind, p, 42);
    EXPECT_EQ(a.weight.entries(), b.weight.entries()) << kind;
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump()) << kind;
  }
  EXPECT_NE(gen_planted("dense_random", p, 1).weight.entries(), gen_planted("dense_random", p, 2).weight.entries());
  EXPECT_THROW(gen_planted("nonsense", p, 1), InvalidArgument);
}

TEST(Gen, PlantedStructureIsConsistent) {
  GenParams p;
  p.n = 60;
  p.L = 2;
  p.outliers = 4;
  p.g = q(5, 7);
  for (const std::string kind : {"ap", "gap2", "outliers"}) {
    auto inst = gen_planted(kind, p, 7);
    ASSERT_TRUE(inst.planted.has_value());
    auto img = oracle::gap_image(inst.planted->gap);
    std::set<std::size_t> out(inst.planted->outliers.begin(), inst.planted->outliers.end());
    EXPECT_EQ(out.size(), 4u);
    const auto& e = inst.weight.entries();
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (out.count(k)) continue;
      bool near = false;
      for (const auto& x : img) near = near || abs(x[0] - e[k][0]) <= inst.planted->delta0;
      EXPECT_TRUE(near) << kind << " element " << k;
    }
  }
}

TEST(Gen, OutliersAreFar) {
  GenParams p;
  p.n = 50;
  p.L = 1;
  p.outliers = 5;
  p.outlier_lo = 5;
  p.outlier_hi = 8;
  auto inst = gen_planted("outliers", p, 3);
  for (auto k : inst.planted->outliers) EXPECT_GE(abs(inst.weight.entries()[k][0]), 5);
}

TEST(Gen, LawNames) {
  EXPECT_TRUE(same_law(law_from_name("rademacher"), DiscreteDistribution::rademacher()));
  EXPECT_TRUE(same_law(law_from_name("uniform:0:4"), DiscreteDistribution::uniform_range(0, 4)));
  EXPECT_THROW(law_from_name("cauchy"), InvalidArgument);
}

TEST(Json, InstanceRoundTrip) {
  GenParams p;
  p.n = 20;
  p.outliers = 2;
  p.g = q(7, 3);
  auto inst = gen_planted("outliers", p, 9);
  auto back = instance_from_json(Json::parse(to_json(inst).dump()));
  EXPECT_EQ(back.weight.entries(), inst.weight.entries());
  EXPECT_TRUE(same_law(back.law, inst.law));
  ASSERT_TRUE(back.planted.has_value());
  EXPECT_EQ(back.planted->gap, inst.planted->gap);
  EXPECT_EQ(back.planted->outliers, inst.planted->outliers);
}

TEST(Json, ObjectsRoundTrip) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 20; ++i) {
    auto G = random_gap(rng);
    EXPECT_EQ(gap_from_json(to_json(G)), G);
    auto F = random_law(rng);
    EXPECT_TRUE(same_law(distribution_from_json(to_json(F)), F));
    auto V = random_polytope2(rng);
    EXPECT_EQ(lattice_points(polytope_from_json(to_json(V))), lattice_points(V));
  }
  EXPECT_EQ(rational_from_json(to_json(q(-22, 7))), q(-22, 7));
  EXPECT_EQ(rational_from_json(Json("6/4")), q(3, 2));
}

TEST(Json, ConfigRoundTrip) {
  auto path = scratch("cfg.json");
  Config c;
  c.constants.c4 = 0.25;
  c.caps.enumeration = 1234;
  c.seed = 77;
  save_config(c, path.string());
  auto back = load_config(path.string());
  EXPECT_DOUBLE_EQ(back.constants.c4, 0.25);
  EXPECT_EQ(back.caps.enumeration, 1234u);
  EXPECT_EQ(back.seed, 77u);
}

TEST(Csv, EmptyReportWritesHeaderOnly) {
  auto path = scratch("empty.csv");
  report_csv({}, path.string());
  EXPECT_EQ(slurp(path), std::string(kCsvHeader) + "\n");
  report_csv({}, path.string());
  EXPECT_EQ(slurp(path), std::string(kCsvHeader) + "\n");
}

TEST(Csv, RowsAreDeterministic) {
  Config cfg;
  SuiteOptions o;
  o.instances = 20;
  o.threads = 4;
  auto a = run_suite("gap_laws", cfg, o);
  o.threads = 1;
  auto b = run_suite("gap_laws", cfg, o);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(csv_line(a.rows[i]), csv_line(b.rows[i]));
  auto p1 = scratch("a.csv"), p2 = scratch("b.csv");
  report_csv(a.rows, p1.string());
  report_csv(b.rows, p2.string());
  EXPECT_EQ(slurp(p1), slurp(p2));
}

TEST(Csv, FieldsNeverSplitColumns) {
  CsvRow r;
  r.suite = "x";
  r.id = "a,b";
  r.flags = "F1,F2\nF3";
  auto line = csv_line(r);
  EXPECT_EQ(std::count(line.begin(), line.end(), ','), 13);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_EQ(line.rfind("x,a;b,", 0), 0u);
}

TEST(Suites, SmallRunsPass) {
  auto cfg = load_config(LOSTRUCTURE_CALIBRATED_CONFIG);
  SuiteOptions o;
  o.instances = 5;
  for (const std::string name : {"regularity", "beta_oracle", "gap_laws"}) {
    auto rep = run_suite(name, cfg, o);
    EXPECT_EQ(rep.passes, rep.instances) << name;
  }
  EXPECT_THROW(run_suite("bogus", cfg, o), InvalidArgument);
}
