#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace chronos {

using complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// Thrown when a scenario/CLI configuration is rejected. Maps to exit code 2.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an algorithm fails to meet its accuracy or convergence
// contract. Maps to exit code 3.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chronos
