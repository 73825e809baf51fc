#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrw {

/// Bad caller input: sizes, parameter ranges, malformed specs.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public InvalidArgument {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InvalidArgument("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The requested goal has no satisfying configuration on this graph.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StateCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Some transient states can never reach an absorbing state, so (I - B) is singular.
/// `stuck` lists the offending transient indices when reachability analysis found them;
/// it is empty when singularity was only detected numerically.
class NonAbsorbing : public std::runtime_error {
 public:
  NonAbsorbing(const std::string& what, std::vector<std::size_t> stuck)
      : std::runtime_error(what), stuck_(std::move(stuck)) {}
  const std::vector<std::size_t>& stuck_states() const noexcept { return stuck_; }

 private:
  std::vector<std::size_t> stuck_;
};

}  // namespace lrw
