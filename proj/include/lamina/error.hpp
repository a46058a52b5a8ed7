#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lamina {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedInput : public Error {
 public:
  using Error::Error;
};

class RankMismatch : public Error {
 public:
  using Error::Error;
};

// An input violates a mathematical hypothesis (non-primitive matrix, a factor
// that is not invariant, ...). The CLI maps this to exit code 2.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

class NotATrainTrack : public Error {
 public:
  using Error::Error;
};

class LengthOverflow : public Error {
 public:
  LengthOverflow(const std::string& what, std::size_t cap)
      : Error(what + " (cap " + std::to_string(cap) + " letters)"), cap_(cap) {}
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

// A search ran out of its state budget. attained_radius is the last radius
// that was explored completely.
class ResourceLimit : public Error {
 public:
  ResourceLimit(const std::string& what, int attained_radius)
      : Error(what + " (attained radius " + std::to_string(attained_radius) + ")"),
        attained_radius_(attained_radius) {}
  int attained_radius() const noexcept { return attained_radius_; }

 private:
  int attained_radius_;
};

}  // namespace lamina
