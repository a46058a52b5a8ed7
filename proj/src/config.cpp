#include "lamina/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "lamina/ball.hpp"
#include "lamina/error.hpp"

namespace lamina {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return std::string(s);
}

struct Section {
  std::string kind;
  std::string name;
  std::vector<std::string> lines;  // comments stripped, blank lines dropped
  int first_line = 0;
};

std::vector<Section> split_sections(std::string_view text) {
  std::vector<Section> sections;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw MalformedInput("config line " + std::to_string(line_no) + ": unterminated section");
      }
      std::istringstream header(line.substr(1, line.size() - 2));
      Section s;
      header >> s.kind;
      std::getline(header, s.name);
      s.name = trim(s.name);
      s.first_line = line_no;
      sections.push_back(std::move(s));
      continue;
    }
    if (sections.empty()) {
      throw MalformedInput("config line " + std::to_string(line_no) + ": text before any section");
    }
    sections.back().lines.push_back(line);
  }
  return sections;
}

std::map<std::string, std::string> key_values(const Section& s) {
  std::map<std::string, std::string> kv;
  for (const auto& line : s.lines) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw MalformedInput("section [" + s.kind + "]: expected 'key = value', got '" + line + "'");
    }
    kv[trim(std::string_view(line).substr(0, eq))] = trim(std::string_view(line).substr(eq + 1));
  }
  return kv;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::istringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) {
      out.push_back(item);
    }
  }
  return out;
}

// Body text of a raw section, or the referenced file for "file = path".
std::string section_body(const Section& s, const std::string& base_dir) {
  if (s.lines.size() == 1 && s.lines.front().starts_with("file")) {
    const auto eq = s.lines.front().find('=');
    if (eq != std::string::npos && trim(std::string_view(s.lines.front()).substr(0, eq)) == "file") {
      std::filesystem::path p = trim(std::string_view(s.lines.front()).substr(eq + 1));
      if (p.is_relative()) {
        p = std::filesystem::path(base_dir) / p;
      }
      return read_file(p.string());
    }
  }
  std::string body;
  for (const auto& l : s.lines) {
    body += l + "\n";
  }
  return body;
}

int to_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) {
      throw std::invalid_argument(value);
    }
    return v;
  } catch (const std::exception&) {
    throw MalformedInput("config key '" + key + "' expects an integer, got '" + value + "'");
  }
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot read " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int ExperimentConfig::rank() const {
  if (automorphism) {
    return automorphism->rank();
  }
  if (map) {
    return map->rank();
  }
  throw MalformedInput("config defines neither an automorphism nor a map");
}

MarkedGraphMap ExperimentConfig::leaf_map() const {
  if (map) {
    return *map;
  }
  if (automorphism) {
    return MarkedGraphMap::rose(*automorphism);
  }
  throw MalformedInput("config defines neither an automorphism nor a map");
}

void ExperimentConfig::validate() const {
  const int r = rank();
  if (automorphism && map && map->rank() != r) {
    throw MalformedInput("map rank " + std::to_string(map->rank()) +
                         " differs from automorphism rank " + std::to_string(r));
  }
  if (inverse_map && inverse_map->rank() != r) {
    throw MalformedInput("inverse map rank differs from the automorphism rank");
  }
  for (const auto* list : {&subgroups, &factors}) {
    for (const auto& s : *list) {
      for (const auto& g : s.generators) {
        if (g.max_generator() > r) {
          throw MalformedInput("subgroup '" + s.name + "' uses a generator beyond rank " +
                               std::to_string(r));
        }
      }
    }
  }
  if (n_max < 0 || n_max > kMaxIterations) {
    throw MalformedInput("n_max must lie in 0.." + std::to_string(kMaxIterations));
  }
  if (r_max < 0 || r_max > kMaxRadius) {
    throw MalformedInput("r_max must lie in 0.." + std::to_string(kMaxRadius));
  }
  if (witness_n < 0 || witness_n > kMaxIterations) {
    throw MalformedInput("witness_n must lie in 0.." + std::to_string(kMaxIterations));
  }
  if (witness_radius < 0 || witness_radius > 2 * kMaxRadius) {
    throw MalformedInput("witness_radius out of range");
  }
  if (conjugator_bound < 0 || conjugator_bound > 8) {
    throw MalformedInput("conjugator_bound must lie in 0..8");
  }
  if (plateau_window < 2) {
    throw MalformedInput("plateau_window must be at least 2");
  }
  if (residual_threshold <= 0.0) {
    throw MalformedInput("residual_threshold must be positive");
  }
  if (max_states == 0) {
    throw MalformedInput("max_states must be positive");
  }
}

ExperimentConfig parse_config(std::string_view text, const std::string& base_dir) {
  ExperimentConfig cfg;
  std::optional<std::size_t> configured_states;
  for (const Section& s : split_sections(text)) {
    if (s.kind == "experiment") {
      for (const auto& [k, v] : key_values(s)) {
        if (k == "run") {
          cfg.experiments = split_list(v);
        } else if (k == "hyperbolic") {
          if (v == "declared") {
            cfg.hyperbolic = Hyperbolicity::declared;
          } else if (v == "unknown") {
            cfg.hyperbolic = Hyperbolicity::unknown;
          } else {
            throw MalformedInput("hyperbolic must be 'declared' or 'unknown'");
          }
        } else {
          throw MalformedInput("unknown key '" + k + "' in [experiment]");
        }
      }
    } else if (s.kind == "automorphism") {
      cfg.automorphism = Automorphism::parse(section_body(s, base_dir));
    } else if (s.kind == "map") {
      cfg.map = MarkedGraphMap::parse(section_body(s, base_dir));
    } else if (s.kind == "inverse_map") {
      cfg.inverse_map = MarkedGraphMap::parse(section_body(s, base_dir));
    } else if (s.kind == "subgroup" || s.kind == "factor") {
      if (s.name.empty()) {
        throw MalformedInput("[" + s.kind + "] needs a name, e.g. [" + s.kind + " K1]");
      }
      auto kv = key_values(s);
      if (!kv.contains("gens")) {
        throw MalformedInput("[" + s.kind + " " + s.name + "] lacks gens");
      }
      SubgroupSpec spec{s.name, parse_word_list(kv["gens"])};
      (s.kind == "subgroup" ? cfg.subgroups : cfg.factors).push_back(std::move(spec));
    } else if (s.kind == "caps") {
      for (const auto& [k, v] : key_values(s)) {
        if (k == "n_max") {
          cfg.n_max = to_int(k, v);
        } else if (k == "r_max") {
          cfg.r_max = to_int(k, v);
        } else if (k == "conjugator_bound") {
          cfg.conjugator_bound = to_int(k, v);
        } else if (k == "witness_n") {
          cfg.witness_n = to_int(k, v);
        } else if (k == "witness_radius") {
          cfg.witness_radius = to_int(k, v);
        } else if (k == "depth_segments") {
          cfg.depth_segments = to_int(k, v);
        } else if (k == "plateau_window") {
          cfg.plateau_window = to_int(k, v);
        } else if (k == "fit_min_radius") {
          cfg.fit_min_radius = to_int(k, v);
        } else if (k == "residual_threshold") {
          cfg.residual_threshold = std::stod(v);
        } else if (k == "max_states") {
          configured_states = static_cast<std::size_t>(std::stoull(v));
        } else if (k == "intrinsic_cap") {
          cfg.intrinsic_cap = static_cast<std::size_t>(std::stoull(v));
        } else if (k == "seeds") {
          cfg.seeds = split_list(v);
        } else {
          throw MalformedInput("unknown key '" + k + "' in [caps]");
        }
      }
    } else {
      throw MalformedInput("unknown section [" + s.kind + "]");
    }
  }
  if (configured_states) {
    cfg.max_states = *configured_states;
  }
  // the environment wins over the file
  if (std::getenv("LAMINA_MAX_STATES") != nullptr) {
    cfg.max_states = default_max_states();
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(read_file(path), dir.empty() ? "." : dir.string());
}

}  // namespace lamina
