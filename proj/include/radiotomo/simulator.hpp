#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "radiotomo/geometry.hpp"
#include "radiotomo/rng.hpp"

namespace rti {

/// Environmental noise law. The standard deviation of the RSS perturbation
/// is sigma(F, w) = w * sigma_max * g(F) with
/// g(F) = clamp(1 - F/f0, g_min, g_max): deep-fade pairs (F < 0) are noisy,
/// anti-fade pairs settle at g_min. Successive frames are correlated with
/// AR(1) coefficient phi to emulate wind gusts lasting several seconds; the
/// marginal standard deviation stays sigma(F, w).
struct NoiseLaw {
  double sigma_max_db = 3.0;
  double f0_db = 10.0;
  double g_min = 0.1;
  double g_max = 3.0;
  double phi = 0.9;

  double g(double fade_db) const;
  double sigma(double fade_db, double wind) const;
};

/// One independent zero-mean draw with standard deviation sigma(F, w).
double wind_noise_sample(double fade_db, double wind, const NoiseLaw& law, Rng& rng);

/// Ground-truth log-distance path loss used to synthesize RSS, per
/// transmitter: P(d) = p0 - 10 * eta * log10(d / d0), d0 = 1 m.
struct PlantedPathLoss {
  struct Entry {
    double eta = 2.4;
    double p0_dbm = -36.0;
  };
  std::map<int, Entry> per_node;

  double predict(int tx_id, double distance_m) const;
  bool empty() const { return per_node.empty(); }

  static PlantedPathLoss uniform(const Deployment& dep, double eta, double p0_dbm);
  static PlantedPathLoss random(const Deployment& dep, std::uint64_t seed,
                                double eta_lo = 2.1, double eta_hi = 2.7,
                                double p0_lo = -38.0, double p0_hi = -34.0);
};

struct Waypoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
};

struct WindSegment {
  double t = 0.0;  // segment start; the intensity holds until the next segment
  double w = 0.0;  // in [0, 1]
};

struct ScenarioConfig {
  Deployment deployment;
  double duration_s = 60.0;
  double t_s = 0.34;
  double a_h_db = 12.0;    // attenuation of one person inside the ellipse
  double lambda_m = 2.0;   // sensitivity ellipse width
  std::vector<std::vector<Waypoint>> walkers;
  std::vector<WindSegment> wind;  // empty = calm throughout
  NoiseLaw noise;
  PlantedPathLoss planted;        // generated from the seed when empty
  double offset_low_db = -10.0;   // static multipath offset, per (link, channel)
  double offset_high_db = 6.0;
  double sensitivity_dbm = -97.0;  // grey-region onset: samples below start dropping
  double floor_dbm = -110.0;       // certain loss; also the trace clamp floor
  double ceil_dbm = 10.0;
  std::uint64_t seed = 1;
};

struct RssSample {
  std::size_t frame = 0;
  double t = 0.0;
  int tx = 0;
  int rx = 0;
  int channel = 0;
  double rss_dbm = 0.0;
};

/// One sample per (link, channel) per completed TDMA cycle; dropped packets
/// are simply absent.
struct RssTrace {
  std::vector<RssSample> samples;
  double t_s = 0.34;
  std::size_t frames = 0;
};

struct TruthFrame {
  std::size_t frame = 0;
  double t = 0.0;
  std::vector<Position> people;
  std::vector<bool> moving;  // parallel to people
};

struct TruthTrace {
  std::vector<TruthFrame> frames;
  double t_s = 0.34;
};

double wind_at(const std::vector<WindSegment>& profile, double t);

/// Walker position at time t, or nullopt outside the trajectory's time span.
/// Positions are linearly interpolated between waypoints; the motion flag is
/// "standing" exactly when the surrounding waypoints coincide.
std::optional<std::pair<Position, bool>> walker_state(
    const std::vector<Waypoint>& trajectory, double t);

/// Forward model: for every frame and (link, channel) pair,
///   rss = planted_path_loss(d) + static_offset - a_h * persons_in_ellipse + noise.
/// Same seed, same config => bit-identical output; the random stream does not
/// depend on walker placement, so walker-free frames match the walker-free
/// trace exactly.
std::pair<RssTrace, TruthTrace> generate_trace(const ScenarioConfig& scenario);

}  // namespace rti
