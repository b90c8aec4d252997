#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace triodflow {

/// Malformed arguments: too few points, out-of-range parameters, unknown names.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A finite-difference stencil collapsed, or two consecutive nodes coincide.
class DegenerateGeometry : public std::runtime_error {
 public:
  explicit DegenerateGeometry(const std::string& what, std::optional<int> curve = std::nullopt)
      : std::runtime_error(what), curve_(curve) {}

  /// Index of the offending curve inside a network, when known.
  std::optional<int> curve() const { return curve_; }

 private:
  std::optional<int> curve_;
};

/// Nodes of one curve collided during a flow run.
class PinchOff : public DegenerateGeometry {
 public:
  PinchOff(const std::string& what, int curve, double time)
      : DegenerateGeometry(what, curve), time_(time) {}

  double time() const { return time_; }

 private:
  double time_;
};

/// A density probe whose singular time is not strictly in the future.
class InvalidProbe : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace triodflow
