#pragma once

#include <stdexcept>
#include <string>

namespace vhmc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A trajectory left the finite region (non-finite value or |entry| > 1e10).
class DivergenceError : public Error {
 public:
  DivergenceError(std::string stage, int step)
      : Error("divergent trajectory in " + stage + " at step " + std::to_string(step)),
        stage_(std::move(stage)),
        step_(step) {}

  const std::string& stage() const { return stage_; }
  int step() const { return step_; }

 private:
  std::string stage_;
  int step_;
};

class EnvelopeError : public Error {
 public:
  explicit EnvelopeError(long trials)
      : Error("envelope constant too small (no acceptance after " + std::to_string(trials) +
              " trials)") {}
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace vhmc
