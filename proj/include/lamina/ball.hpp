#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lamina/automorphism.hpp"
#include "lamina/extension.hpp"
#include "lamina/subgroup.hpp"

namespace lamina {

inline constexpr std::size_t kDefaultMaxStates = 10'000'000;

// kDefaultMaxStates, or LAMINA_MAX_STATES when set to a positive integer.
std::size_t default_max_states();

struct BallOptions {
  std::size_t max_states = default_max_states();
  // Return the ball up to the last complete radius instead of throwing
  // ResourceLimit when the state cap is hit.
  bool allow_partial = false;
};

// The ball B(R) around the identity of G in the word metric of the
// generators a, A, b, B, ..., t, T. Elements are stored breadth-first, so
// indices [level_begin(r), level_begin(r+1)) form the sphere of radius r.
class Ball {
 public:
  int rank() const { return rank_; }
  int requested_radius() const { return requested_radius_; }
  int radius() const { return radius_; }
  bool complete() const { return radius_ == requested_radius_; }

  std::size_t size() const { return t_exp_.size(); }
  std::size_t count_within(int r) const;
  std::size_t count_at(int r) const;
  std::size_t level_begin(int r) const { return level_start_[r]; }

  std::optional<int> distance(const NormalForm& x) const;
  int distance_of(std::size_t i) const { return dist_[i]; }
  int t_exp_of(std::size_t i) const { return t_exp_[i]; }
  std::span<const std::int8_t> tail_of(std::size_t i) const {
    return {letters_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  NormalForm element(std::size_t i) const;

 private:
  friend Ball build_ball(const Automorphism& phi, int radius, const BallOptions& options);
  friend class BallBuilder;

  std::optional<std::size_t> find(int t_exp, std::span<const std::int8_t> tail,
                                  std::uint64_t hash) const;
  void insert_slot(std::size_t i);
  void rehash(std::size_t capacity);

  int rank_ = 0;
  int requested_radius_ = 0;
  int radius_ = 0;
  std::vector<std::int8_t> letters_;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<std::int32_t> t_exp_;
  std::vector<std::uint8_t> dist_;
  std::vector<std::uint64_t> hashes_;
  std::vector<std::size_t> level_start_;
  std::vector<std::uint32_t> slots_;  // open addressing; 0 = empty, else index + 1
};

// Breadth-first construction; each frontier block is expanded in parallel
// (OpenMP) and merged in a fixed order, so the result does not depend on the
// thread count.
Ball build_ball(const Automorphism& phi, int radius, const BallOptions& options = {});

// Reference construction with std::unordered_map and multiply(); single
// threaded. Maps each element to its distance.
std::unordered_map<NormalForm, int> build_ball_reference(const Automorphism& phi, int radius);

// Subject of a distortion computation: H itself or a subgroup given by
// generators.
struct Subject {
  std::string name;
  bool whole_group = true;
  std::vector<Word> generators;

  static Subject whole(std::string name = "H") { return {std::move(name), true, {}}; }
  static Subject generated_by(std::string name, std::vector<Word> gens) {
    return {std::move(name), false, std::move(gens)};
  }
};

struct DistortionSample {
  int radius = 0;
  std::size_t count = 0;   // |B(R)|
  std::size_t disto = 0;   // max intrinsic length over the subject inside B(R)
  std::size_t members = 0; // subject elements inside B(R)
  // Some intrinsic length was beyond the search cap; disto is a lower bound.
  bool flagged = false;
  // A subject element realizing disto.
  Word witness;
};

struct DistortionProfile {
  std::string subject;
  std::vector<DistortionSample> samples;
};

DistortionProfile distortion_profile(const Subject& subject, const Ball& ball,
                                     std::size_t intrinsic_cap = 1'000'000);
DistortionProfile distortion_profile(const Subject& subject, const Automorphism& phi,
                                     int max_radius, const BallOptions& options = {});

}  // namespace lamina
