#pragma once

#include <stdexcept>
#include <string>

namespace sandwich {

/// Violated precondition or malformed input. CLI exit code 1.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Broken internal invariant: a bug, never expected on any input. CLI exit
/// code 2.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InputError(what);
}

inline void check_invariant(bool cond, const std::string& what) {
  if (!cond) throw InternalError(what);
}

}  // namespace sandwich
