#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "triodflow/functionals.hpp"
#include "triodflow/geometry.hpp"

namespace triodflow {

enum class BlowupClass { type_i, type_ii, no_blowup };

std::string_view to_string(BlowupClass c);

/// Samples (t, max k^2) along a run.
struct CurvatureSample {
  double t = 0.0;
  double max_k_sq = 0.0;
};

struct BlowupOptions {
  /// Type I accepted when the RMS residual of the 1/max k^2 line fit,
  /// relative to the mean of 1/max k^2, is below this.
  double fit_tolerance = 0.05;
  /// Type II when max k^2 (T - t) grows by more than this factor across the
  /// window.
  double trend_factor = 2.0;
  /// Series whose last/first ratio of max k^2 is below this are treated as
  /// bounded.
  double growth_floor = 1.05;
};

struct BlowupFit {
  double T = 0.0;
  double C = 0.0;
  double fit_residual = 0.0;
  /// max k^2 (T - t) at the last sample divided by the first.
  double trend = 1.0;
  /// Power-law exponent alpha of max k^2 ~ (T - t)^-alpha, when fitted.
  double exponent = 1.0;
  BlowupClass classification = BlowupClass::no_blowup;
};

/// Needs at least 8 samples.
BlowupFit estimate_blowup(std::span<const CurvatureSample> series,
                          const BlowupOptions& options = {});

std::vector<CurvatureSample> curvature_series(std::span<const TrajectorySample> trajectory);

/// Parabolically rescaled geometry (F - x0) / sqrt(2 (T - t)).
struct RescaledState {
  Network geometry;
  double rescaled_time = 0.0;
  Point origin;
  double scale = 1.0;
};

RescaledState rescale_huisken(const Network& geometry, double t, Point x0, double T);

struct HamiltonOptions {
  int first_rung = 4;
  int max_rungs = 12;
};

/// One rung of the Type II blow-up ladder.
struct HamiltonSnapshot {
  int n = 0;
  std::size_t sample = 0;
  double t = 0.0;
  int curve = 0;
  std::size_t node = 0;
  /// |k| at the marked point in the original flow.
  double curvature = 0.0;
  /// k (F - F(p_n)) at rescaled time 0.
  Network geometry;
  double marked_curvature = 0.0;
  double max_abs_curvature = 0.0;
  /// Later stored samples in [t_n, T - 1/n] mapped to rescaled time
  /// k^2 (t - t_n), closed by a state interpolated linearly in time at
  /// T - 1/n.
  std::vector<std::pair<double, Network>> frames;
};

/// For n = first_rung, 2 first_rung, ... choose the stored sample and node
/// maximizing k^2 (T - 1/n - t) over samples with t <= T - 1/n, and rescale
/// around it. Throws InvalidInput when the trajectory shows no curvature
/// growth.
std::vector<HamiltonSnapshot> hamilton_rescale(std::span<const TrajectorySample> trajectory,
                                               double T, const HamiltonOptions& options = {});

/// max over nodes of |k + <x, nu>|.
double shrinker_residual(const Network& geometry);

/// max over nodes of |k - <w, nu>|.
double translator_residual(const Network& geometry, Point w);

/// The translator moving with velocity w: the graph x = -log(cos y) over
/// |y| <= y_max, dilated by 1/|w| and rotated onto w. Nodes are spaced
/// uniformly in arclength and ordered from y = y_max to y = -y_max, so
/// that k = <w, nu> > 0.
DiscreteCurve grim_reaper(Point w, std::size_t n, double y_max);

/// Exact position at time t of a point of the grim reaper with velocity w
/// that starts at `start`.
inline Point translate(Point start, Point w, double t) { return start + t * w; }

enum class DensityClass { half, one, three_halves, unclassified };

std::string_view to_string(DensityClass c);

DensityClass classify_density(double theta, double tol);

/// Fermat point by Weiszfeld iteration, absent when a triangle angle is
/// 120 degrees or more. Throws InvalidInput for collinear input.
std::optional<Point> steiner_point(Point a, Point b, Point c);

struct SteinerDistance {
  double hausdorff = 0.0;
  double length_gap = 0.0;
  Point fermat_point;
};

/// Throws InvalidInput when the Steiner point does not exist.
SteinerDistance steiner_distance(const Network& geometry, Point a, Point b, Point c);

/// Symmetric Hausdorff distance between two sets of polylines.
double hausdorff_distance(const std::vector<std::vector<Point>>& a,
                          const std::vector<std::vector<Point>>& b);

}  // namespace triodflow
