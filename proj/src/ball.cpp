#include "lamina/ball.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <string>

#include <omp.h>

#include "lamina/error.hpp"

namespace lamina {

std::size_t default_max_states() {
  if (const char* env = std::getenv("LAMINA_MAX_STATES")) {
    try {
      const long long v = std::stoll(env);
      if (v > 0) {
        return static_cast<std::size_t>(v);
      }
    } catch (const std::exception&) {
    }
  }
  return kDefaultMaxStates;
}

namespace {

constexpr std::size_t kBlock = 1 << 15;

std::uint64_t hash_state(std::int32_t t_exp, std::span<const std::int8_t> tail) {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(t_exp));
  for (std::int8_t c : tail) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ull;
  }
  h ^= h >> 31;
  h *= 0xbf58476d1ce4e5b9ull;
  h ^= h >> 29;
  return h;
}

using Images = std::vector<std::vector<std::int8_t>>;

Images encode(const std::vector<Word>& images) {
  Images out(images.size() + 1);
  for (std::size_t g = 0; g < images.size(); ++g) {
    for (Letter x : images[g]) {
      out[g + 1].push_back(static_cast<std::int8_t>(x.code()));
    }
  }
  return out;
}

void push_code(std::vector<std::int8_t>& out, std::int8_t c) {
  if (!out.empty() && out.back() == -c) {
    out.pop_back();
  } else {
    out.push_back(c);
  }
}

void substitute(std::vector<std::int8_t>& out, std::span<const std::int8_t> tail, const Images& img) {
  out.clear();
  for (std::int8_t c : tail) {
    if (c > 0) {
      for (std::int8_t y : img[c]) {
        push_code(out, y);
      }
    } else {
      const auto& w = img[-c];
      for (auto it = w.rbegin(); it != w.rend(); ++it) {
        push_code(out, static_cast<std::int8_t>(-*it));
      }
    }
  }
}

struct Candidate {
  std::uint64_t hash;
  std::int32_t t_exp;
  std::uint32_t offset;
  std::uint32_t length;
};

struct CandidateBuffer {
  std::vector<Candidate> items;
  std::vector<std::int8_t> letters;

  void add(std::int32_t t_exp, std::span<const std::int8_t> tail) {
    items.push_back({hash_state(t_exp, tail), t_exp, static_cast<std::uint32_t>(letters.size()),
                     static_cast<std::uint32_t>(tail.size())});
    letters.insert(letters.end(), tail.begin(), tail.end());
  }
  void clear() {
    items.clear();
    letters.clear();
  }
};

}  // namespace

class BallBuilder {
 public:
  BallBuilder(Ball& ball, const Automorphism& phi)
      : ball_(ball), forward_(encode(phi.images())), backward_(encode(phi.inverse_images())) {}

  // Neighbors of states [begin, end) in generator order, state-major.
  void expand(std::size_t begin, std::size_t end, CandidateBuffer& out) const {
    const int rank = ball_.rank_;
    std::vector<std::int8_t> scratch;
    scratch.reserve(64);
    for (std::size_t i = begin; i < end; ++i) {
      const auto tail = ball_.tail_of(i);
      const std::int32_t t = ball_.t_exp_[i];
      for (int idx = 0; idx < 2 * rank; ++idx) {
        const auto code = static_cast<std::int8_t>(Letter::from_index(idx).code());
        scratch.assign(tail.begin(), tail.end());
        push_code(scratch, code);
        out.add(t, scratch);
      }
      // (t^k u) t = t^(k+1) phi^-1(u);  (t^k u) t^-1 = t^(k-1) phi(u)
      substitute(scratch, tail, backward_);
      out.add(t + 1, scratch);
      substitute(scratch, tail, forward_);
      out.add(t - 1, scratch);
    }
  }

 private:
  Ball& ball_;
  Images forward_;
  Images backward_;
};

std::size_t Ball::count_within(int r) const {
  r = std::min(r, radius_);
  return r < 0 ? 0 : level_start_[r + 1];
}

std::size_t Ball::count_at(int r) const {
  if (r < 0 || r > radius_) {
    return 0;
  }
  return level_start_[r + 1] - level_start_[r];
}

NormalForm Ball::element(std::size_t i) const {
  std::vector<Letter> letters;
  for (std::int8_t c : tail_of(i)) {
    letters.push_back(Letter::from_code(c));
  }
  return {t_exp_[i], Word::from_reduced(std::move(letters))};
}

std::optional<std::size_t> Ball::find(int t_exp, std::span<const std::int8_t> tail,
                                      std::uint64_t hash) const {
  if (slots_.empty()) {
    return std::nullopt;
  }
  const std::size_t mask = slots_.size() - 1;
  for (std::size_t pos = hash & mask;; pos = (pos + 1) & mask) {
    const std::uint32_t s = slots_[pos];
    if (s == 0) {
      return std::nullopt;
    }
    const std::size_t i = s - 1;
    if (hashes_[i] == hash && t_exp_[i] == t_exp) {
      const auto other = tail_of(i);
      if (other.size() == tail.size() &&
          std::memcmp(other.data(), tail.data(), tail.size()) == 0) {
        return i;
      }
    }
  }
}

void Ball::insert_slot(std::size_t i) {
  const std::size_t mask = slots_.size() - 1;
  std::size_t pos = hashes_[i] & mask;
  while (slots_[pos] != 0) {
    pos = (pos + 1) & mask;
  }
  slots_[pos] = static_cast<std::uint32_t>(i + 1);
}

void Ball::rehash(std::size_t capacity) {
  slots_.assign(capacity, 0);
  for (std::size_t i = 0; i < hashes_.size(); ++i) {
    insert_slot(i);
  }
}

std::optional<int> Ball::distance(const NormalForm& x) const {
  std::vector<std::int8_t> codes;
  for (Letter l : x.tail) {
    if (l.generator() > rank_) {
      return std::nullopt;
    }
    codes.push_back(static_cast<std::int8_t>(l.code()));
  }
  if (auto i = find(x.t_exp, codes, hash_state(x.t_exp, codes))) {
    return dist_[*i];
  }
  return std::nullopt;
}

Ball build_ball(const Automorphism& phi, int radius, const BallOptions& options) {
  if (radius < 0 || radius > 255) {
    throw MalformedInput("ball radius must lie in 0..255");
  }
  if (options.max_states >= (std::size_t{1} << 32) - 1) {
    throw MalformedInput("ball state cap must stay below 2^32");
  }
  Ball ball;
  ball.rank_ = phi.rank();
  ball.requested_radius_ = radius;
  ball.t_exp_.push_back(0);
  ball.dist_.push_back(0);
  ball.hashes_.push_back(hash_state(0, {}));
  ball.offsets_ = {0, 0};
  ball.level_start_ = {0, 1};
  ball.rehash(1024);

  BallBuilder builder(ball, phi);
  const int threads = std::max(1, omp_get_max_threads());
  std::vector<CandidateBuffer> buffers(threads);

  auto abandon_level = [&](int r) {
    const std::size_t keep = ball.level_start_[r];
    ball.t_exp_.resize(keep);
    ball.dist_.resize(keep);
    ball.hashes_.resize(keep);
    ball.offsets_.resize(keep + 1);
    ball.letters_.resize(ball.offsets_.back());
    ball.rehash(ball.slots_.size());
    ball.radius_ = r - 1;
  };

  for (int r = 1; r <= radius; ++r) {
    const std::size_t level_begin = ball.level_start_[r - 1];
    const std::size_t level_end = ball.level_start_[r];
    for (std::size_t block = level_begin; block < level_end; block += kBlock) {
      const std::size_t block_end = std::min(level_end, block + kBlock);
      std::string failure;
#pragma omp parallel num_threads(threads)
      {
        const int tid = omp_get_thread_num();
        const int nt = omp_get_num_threads();
        const std::size_t span = block_end - block;
        const std::size_t lo = block + span * tid / nt;
        const std::size_t hi = block + span * (tid + 1) / nt;
        buffers[tid].clear();
        try {
          builder.expand(lo, hi, buffers[tid]);
        } catch (const std::exception& ex) {
#pragma omp critical
          failure = ex.what();
        }
      }
      if (!failure.empty()) {
        throw Error("ball expansion failed: " + failure);
      }
      for (const CandidateBuffer& buf : buffers) {
        for (const Candidate& c : buf.items) {
          std::span<const std::int8_t> tail(buf.letters.data() + c.offset, c.length);
          if (ball.find(c.t_exp, tail, c.hash)) {
            continue;
          }
          if (ball.size() >= options.max_states) {
            abandon_level(r);
            if (options.allow_partial) {
              return ball;
            }
            throw ResourceLimit("ball exceeded " + std::to_string(options.max_states) + " states",
                                r - 1);
          }
          ball.t_exp_.push_back(c.t_exp);
          ball.dist_.push_back(static_cast<std::uint8_t>(r));
          ball.hashes_.push_back(c.hash);
          ball.letters_.insert(ball.letters_.end(), tail.begin(), tail.end());
          ball.offsets_.push_back(ball.letters_.size());
          if (2 * ball.size() > ball.slots_.size()) {
            ball.rehash(2 * ball.slots_.size());
          } else {
            ball.insert_slot(ball.size() - 1);
          }
        }
      }
    }
    ball.level_start_.push_back(ball.size());
    ball.radius_ = r;
  }
  return ball;
}

std::unordered_map<NormalForm, int> build_ball_reference(const Automorphism& phi, int radius) {
  std::unordered_map<NormalForm, int> dist{{NormalForm::identity(), 0}};
  std::vector<NormalForm> frontier{NormalForm::identity()};
  std::vector<NormalForm> gens;
  for (GLetter s : g_generators(phi.rank())) {
    gens.push_back(as_element(s));
  }
  for (int r = 1; r <= radius; ++r) {
    std::vector<NormalForm> next;
    for (const NormalForm& x : frontier) {
      for (const NormalForm& s : gens) {
        NormalForm y = multiply(x, s, phi);
        if (dist.try_emplace(y, r).second) {
          next.push_back(std::move(y));
        }
      }
    }
    frontier = std::move(next);
  }
  return dist;
}

DistortionProfile distortion_profile(const Subject& subject, const Ball& ball,
                                     std::size_t intrinsic_cap) {
  DistortionProfile profile;
  profile.subject = subject.name;
  const int rank = ball.rank();
  std::optional<CoreGraph> core;
  std::optional<IntrinsicMetric> metric;
  if (!subject.whole_group) {
    core = CoreGraph::fold(subject.generators, rank);
    metric.emplace(subject.generators, rank, intrinsic_cap);
  }
  const int radius = ball.radius();
  std::vector<std::size_t> best(radius + 1, 0);
  std::vector<std::size_t> members(radius + 1, 0);
  std::vector<bool> flagged(radius + 1, false);
  std::vector<Word> witness(radius + 1);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    if (ball.t_exp_of(i) != 0) {
      continue;
    }
    const int d = ball.distance_of(i);
    const Word u = ball.element(i).tail;
    std::optional<std::size_t> len;
    if (subject.whole_group) {
      len = u.size();
    } else {
      if (!membership(*core, u)) {
        continue;
      }
      len = metric->length(u);
    }
    ++members[d];
    if (!len) {
      flagged[d] = true;
      continue;
    }
    if (*len > best[d] || (best[d] == 0 && witness[d].empty() && *len == 0)) {
      best[d] = *len;
      witness[d] = u;
    }
  }
  DistortionSample running;
  for (int r = 0; r <= radius; ++r) {
    running.radius = r;
    running.count = ball.count_within(r);
    running.members += members[r];
    running.flagged = running.flagged || flagged[r];
    if (best[r] > running.disto) {
      running.disto = best[r];
      running.witness = witness[r];
    }
    profile.samples.push_back(running);
  }
  return profile;
}

DistortionProfile distortion_profile(const Subject& subject, const Automorphism& phi,
                                     int max_radius, const BallOptions& options) {
  return distortion_profile(subject, build_ball(phi, max_radius, options));
}

}  // namespace lamina
