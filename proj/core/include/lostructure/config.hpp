#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace lostructure {

inline constexpr std::size_t kDefaultAtomCap = 1'000'000;
inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

struct Constants {
  double c2 = 1.0;
  double c3 = 1.0;
  double c4 = 1.0;
  double c5 = 1.0;
  double c6 = 1.0;
  double c7 = 1.0;
  double c8 = 1.0;
  double esseen = 1.0;
};

struct Caps {
  std::size_t atoms = kDefaultAtomCap;
  std::size_t enumeration = kDefaultEnumerationCap;
  // Largest dilation accepted from a sandwich search.
  double sandwich_t = 64.0;
  // Largest dilation a proper embedding is asked to certify.
  double embed_t = 64.0;
};

struct MonteCarlo {
  std::size_t samples = 100'000;
  std::size_t bootstrap = 200;
  std::size_t beta_probes = 10'000;
};

struct Config {
  Constants constants;
  Caps caps;
  MonteCarlo mc;
  std::uint64_t seed = 20240601;
};

Config load_config(const std::string& path);
void save_config(const Config& cfg, const std::string& path);

}  // namespace lostructure
