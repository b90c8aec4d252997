#pragma once

#include <array>

#include "triodflow/geometry.hpp"

namespace triodflow {

using Triple = std::array<double, 3>;

/// Three curves meeting at a common first point (the junction); the last
/// point of each curve is a fixed endpoint.
class Triod {
 public:
  /// Throws InvalidInput unless the first points agree bit-exactly and the
  /// three last points are pairwise distinct.
  explicit Triod(std::array<DiscreteCurve, 3> curves);

  const DiscreteCurve& curve(int i) const { return curves_[static_cast<std::size_t>(i)]; }
  const std::array<DiscreteCurve, 3>& curves() const { return curves_; }
  Point junction() const { return curves_[0].front(); }
  Point endpoint(int i) const { return curve(i).back(); }

  /// +1 when the branches leave the junction in counterclockwise order,
  /// -1 otherwise.
  int orientation() const;

  Network network() const;

  friend bool operator==(const Triod&, const Triod&) = default;

 private:
  std::array<DiscreteCurve, 3> curves_;
};

/// Build a triod from a network with `junction` set and three curves.
Triod to_triod(const Network& network);

/// One-sided curvatures k^i at the junction.
Triple junction_curvatures(const Triod& triod);

/// lambda^i = (k^{i-1} - k^{i+1}) / sqrt(3), superscripts cyclic mod 3.
///
/// This is the relation for branches indexed counterclockwise around the
/// junction; for clockwise triods multiply by -1 (see junction_lambdas).
Triple lambda_from_k(const Triple& k);

/// Tangential speeds at the junction from the curvatures, orientation aware.
Triple junction_lambdas(const Triod& triod, const Triple& k);

struct JunctionReport {
  Triple k{};
  Triple lambda{};
  double sum_k = 0.0;
  double sum_lambda = 0.0;
  /// sum k^2 - sum lambda^2
  double sum_sq_difference = 0.0;
  double sum_k_lambda = 0.0;
  /// |tau^1(0) + tau^2(0) + tau^3(0)|
  double angle_defect = 0.0;
};

JunctionReport junction_identities(const Triod& triod);

/// |sum of unit tangents at the junction|.
double angle_defect(const Triod& triod);

/// Per-branch junction velocities k^i nu^i + lambda^i tau^i.
std::array<Point, 3> junction_velocities(const Triod& triod);

struct CompatibilityReport {
  double tolerance = 0.0;
  // order 0
  bool concurrent = false;
  bool distinct_endpoints = false;
  // order 1
  double angle_defect = 0.0;
  // order 2
  double max_endpoint_velocity = 0.0;
  double max_junction_velocity_mismatch = 0.0;

  bool order0() const { return concurrent && distinct_endpoints; }
  bool order1() const { return angle_defect <= tolerance; }
  bool order2_endpoints() const { return max_endpoint_velocity <= tolerance; }
  bool order2_junction() const { return max_junction_velocity_mismatch <= tolerance; }
  bool order2() const { return order2_endpoints() && order2_junction(); }
};

/// Check the compatibility conditions of order 0, 1 and 2 on raw curves,
/// which need not form a valid Triod.
CompatibilityReport compatibility_report(const std::array<DiscreteCurve, 3>& curves,
                                         double tol = 1e-6);
CompatibilityReport compatibility_report(const Triod& triod, double tol = 1e-6);

/// max(|k|, |lambda|) at each fixed endpoint.
Triple endpoint_conditions(const Triod& triod);

struct AngleRelaxation {
  double tolerance = 1e-8;
  int max_sweeps = 8;
};

struct JunctionEnforcement {
  Triod triod;
  double initial_defect = 0.0;
  double final_defect = 0.0;
  int sweeps = 0;
  /// False when the final defect is above 10x the tolerance.
  bool converged = true;
};

/// Move the junction to `new_junction`, then rotate the first interior node
/// of each branch about the junction (radius held) until the one-sided
/// tangents sum to zero. Endpoints are never touched.
JunctionEnforcement enforce_junction(const Triod& triod, Point new_junction,
                                     const AngleRelaxation& options = {});

}  // namespace triodflow
