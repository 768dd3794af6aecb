#include "lostructure/config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "lostructure/errors.hpp"

namespace lostructure {

namespace {

template <class T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("malformed config " + path + ": " + e.what());
  }
  Config cfg;
  if (j.contains("constants")) {
    const auto& c = j.at("constants");
    read_opt(c, "c2", cfg.constants.c2);
    read_opt(c, "c3", cfg.constants.c3);
    read_opt(c, "c4", cfg.constants.c4);
    read_opt(c, "c5", cfg.constants.c5);
    read_opt(c, "c6", cfg.constants.c6);
    read_opt(c, "c7", cfg.constants.c7);
    read_opt(c, "c8", cfg.constants.c8);
    read_opt(c, "esseen", cfg.constants.esseen);
  }
  if (j.contains("caps")) {
    const auto& c = j.at("caps");
    read_opt(c, "atoms", cfg.caps.atoms);
    read_opt(c, "enumeration", cfg.caps.enumeration);
    read_opt(c, "sandwich_t", cfg.caps.sandwich_t);
    read_opt(c, "embed_t", cfg.caps.embed_t);
  }
  if (j.contains("mc")) {
    const auto& c = j.at("mc");
    read_opt(c, "samples", cfg.mc.samples);
    read_opt(c, "bootstrap", cfg.mc.bootstrap);
    read_opt(c, "beta_probes", cfg.mc.beta_probes);
  }
  read_opt(j, "seed", cfg.seed);
  return cfg;
}

void save_config(const Config& cfg, const std::string& path) {
  nlohmann::json j;
  j["constants"] = {{"c2", cfg.constants.c2}, {"c3", cfg.constants.c3},
                    {"c4", cfg.constants.c4}, {"c5", cfg.constants.c5},
                    {"c6", cfg.constants.c6}, {"c7", cfg.constants.c7},
                    {"c8", cfg.constants.c8}, {"esseen", cfg.constants.esseen}};
  j["caps"] = {{"atoms", cfg.caps.atoms},
               {"enumeration", cfg.caps.enumeration},
               {"sandwich_t", cfg.caps.sandwich_t},
               {"embed_t", cfg.caps.embed_t}};
  j["mc"] = {{"samples", cfg.mc.samples},
             {"bootstrap", cfg.mc.bootstrap},
             {"beta_probes", cfg.mc.beta_probes}};
  j["seed"] = cfg.seed;
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write config: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace lostructure
