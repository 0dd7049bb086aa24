#pragma once

#include <cstddef>
#include <vector>

#include "radiotomo/geometry.hpp"

namespace rti {

/// One manually surveyed link: its length and its compass angle, in degrees
/// clockwise from geomagnetic North. Convention used throughout: North = +y,
/// East = +x, so East is 90 degrees.
struct SurveyMeasurement {
  LinkKey link;
  double length_m = 0.0;
  double angle_deg = 0.0;
};

struct SurveyNoiseConfig {
  double sigma2_d = 0.5;      // variance of the length measurement, m^2
  double sigma2_alpha = 5.0;  // variance of the angle measurement, deg^2
};

struct SurveyFit {
  std::vector<NodeRecord> nodes;
  bool converged = false;
  std::size_t iterations = 0;
  double objective = 0.0;
  /// Objective value after each accepted refinement step, starting with the
  /// chained initial estimate. Non-increasing by construction.
  std::vector<double> objective_history;
};

struct SurveySolverOptions {
  double rel_tolerance = 1e-9;
  std::size_t max_iterations = 200;
};

/// Compass angle of the direction from -> to, degrees clockwise from North,
/// normalized to [0, 360).
double link_angle_deg(const Position& from, const Position& to);

/// Wraps an angle difference to (-180, 180].
double wrap_angle_deg(double delta);

/// Node position estimation from length-angle survey measurements.
///
/// The reference node is pinned at (0,0). Initial estimates are chained from
/// measurements in survey order along a spanning path, then refined with
/// damped Gauss-Newton on the weighted least squares objective
///   sum (d - d_hat)^2 / sigma2_d + sum wrap(alpha - alpha_hat)^2 / sigma2_alpha.
/// Steps that do not decrease the objective are retried with stronger
/// damping, so the reported objective history is non-increasing.
///
/// Throws std::invalid_argument when the survey graph does not connect all
/// nodes or the reference node never appears. Non-convergence within
/// max_iterations is reported through `converged` and the final objective.
SurveyFit estimate_node_positions(const std::vector<SurveyMeasurement>& survey,
                                  const SurveyNoiseConfig& noise,
                                  int reference_node,
                                  const SurveySolverOptions& options = {});

}  // namespace rti
