#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lamina/automorphism.hpp"
#include "lamina/traintrack.hpp"
#include "lamina/word.hpp"

namespace lamina {

enum class Hyperbolicity { unknown, declared };

struct SubgroupSpec {
  std::string name;
  std::vector<Word> generators;
};

// Everything an experiment run needs. See docs/FORMATS.md for the file
// grammar.
struct ExperimentConfig {
  std::vector<std::string> experiments;  // filling, qc, factor
  Hyperbolicity hyperbolic = Hyperbolicity::unknown;
  std::optional<Automorphism> automorphism;
  std::optional<MarkedGraphMap> map;
  std::optional<MarkedGraphMap> inverse_map;
  std::vector<SubgroupSpec> subgroups;
  std::vector<SubgroupSpec> factors;
  std::vector<std::string> seeds;  // edge names; empty = every edge

  int n_max = 14;
  int r_max = 8;
  int conjugator_bound = 4;
  int witness_n = 8;
  int witness_radius = 0;  // exact G-length for witnesses up to this radius; 0 = off
  int depth_segments = 4;  // geodesic realizations per subject
  int plateau_window = 4;
  double residual_threshold = 0.25;
  int fit_min_radius = 3;
  std::size_t max_states = 10'000'000;
  std::size_t intrinsic_cap = 1'000'000;

  // The rank of the free group the experiments live in.
  int rank() const;
  // Map used for leaves: the configured map, else the rose of the
  // automorphism.
  MarkedGraphMap leaf_map() const;
  // Checks rank consistency and global caps; throws MalformedInput.
  void validate() const;
};

inline constexpr int kMaxIterations = 40;
inline constexpr int kMaxRadius = 16;

// Parses the sectioned config text. base_dir resolves "file = ..." entries.
ExperimentConfig parse_config(std::string_view text, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace lamina
