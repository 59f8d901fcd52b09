#pragma once

#include <stdexcept>
#include <string>

namespace demax {

/// Nonlinear solve failed to reach tolerance; carries the final residual so
/// callers can decide whether to retry with a smaller time step.
class NonConvergenceError : public std::runtime_error {
public:
  NonConvergenceError(const std::string& what, double residual, int iterations,
                      const std::string& hint = "")
      : std::runtime_error(what + " (residual " + std::to_string(residual) +
                           " after " + std::to_string(iterations) +
                           " iterations" + (hint.empty() ? "" : "; " + hint) +
                           ")"),
        residual_(residual), iterations_(iterations) {}

  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

private:
  double residual_;
  int iterations_;
};

/// Invalid configuration; field_path identifies the offending key.
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& field_path, const std::string& what)
      : std::runtime_error("config error at '" + field_path + "': " + what),
        field_path_(field_path) {}

  const std::string& field_path() const { return field_path_; }

private:
  std::string field_path_;
};

} // namespace demax
