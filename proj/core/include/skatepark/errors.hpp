#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace skatepark {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed config, out-of-range parameters. CLI exit status 2.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
  ValidationError(const std::string& summary, std::vector<std::string> items);
  const std::vector<std::string>& items() const { return items_; }

 private:
  std::vector<std::string> items_;
};

// A physical precondition does not hold (no trap, no cooling, Heisenberg
// bound broken, numerics failed to converge). CLI exit status 3.
class PhysicsError : public Error {
 public:
  using Error::Error;
};

}  // namespace skatepark
