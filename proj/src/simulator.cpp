#include "radiotomo/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rti {

namespace {

constexpr std::uint64_t kOffsetStream = 0;
constexpr std::uint64_t kPlantedStream = 1;
constexpr std::uint64_t kFrameStream = 2;

void validate_scenario(const ScenarioConfig& sc) {
  sc.deployment.validate();
  if (!(sc.t_s > 0.0)) throw std::invalid_argument("sample interval must be positive");
  if (!(sc.duration_s > 0.0)) throw std::invalid_argument("duration must be positive");
  if (sc.a_h_db < 0.0) throw std::invalid_argument("human attenuation must be >= 0");
  if (!(sc.lambda_m > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (sc.offset_high_db < sc.offset_low_db) {
    throw std::invalid_argument("offset range inverted");
  }
  for (const auto& seg : sc.wind) {
    if (seg.w < 0.0 || seg.w > 1.0) {
      throw std::invalid_argument("wind intensity must be in [0, 1]");
    }
  }
  for (const auto& traj : sc.walkers) {
    double prev = -1e300;
    for (const auto& wp : traj) {
      if (wp.t <= prev) {
        throw std::invalid_argument("walker waypoint times must be strictly increasing");
      }
      prev = wp.t;
      if (!sc.deployment.area.contains({wp.x, wp.y})) {
        throw std::invalid_argument("walker trajectory leaves the deployment area");
      }
    }
  }
}

}  // namespace

double NoiseLaw::g(double fade_db) const {
  return std::clamp(1.0 - fade_db / f0_db, g_min, g_max);
}

double NoiseLaw::sigma(double fade_db, double wind) const {
  return wind * sigma_max_db * g(fade_db);
}

double wind_noise_sample(double fade_db, double wind, const NoiseLaw& law, Rng& rng) {
  if (wind < 0.0 || wind > 1.0) {
    throw std::invalid_argument("wind intensity must be in [0, 1]");
  }
  const double eps = rng.normal();
  return law.sigma(fade_db, wind) * eps;
}

double PlantedPathLoss::predict(int tx_id, double distance_m) const {
  const auto it = per_node.find(tx_id);
  if (it == per_node.end()) {
    throw std::out_of_range("no planted path loss entry for node " +
                            std::to_string(tx_id));
  }
  return it->second.p0_dbm - 10.0 * it->second.eta * std::log10(distance_m);
}

PlantedPathLoss PlantedPathLoss::uniform(const Deployment& dep, double eta,
                                         double p0_dbm) {
  PlantedPathLoss out;
  for (const auto& n : dep.nodes) out.per_node[n.id] = {eta, p0_dbm};
  return out;
}

PlantedPathLoss PlantedPathLoss::random(const Deployment& dep, std::uint64_t seed,
                                        double eta_lo, double eta_hi, double p0_lo,
                                        double p0_hi) {
  PlantedPathLoss out;
  Rng rng = Rng::stream(seed, kPlantedStream);
  for (const auto& n : dep.nodes) {
    out.per_node[n.id] = {rng.uniform(eta_lo, eta_hi), rng.uniform(p0_lo, p0_hi)};
  }
  return out;
}

double wind_at(const std::vector<WindSegment>& profile, double t) {
  double w = 0.0;
  for (const auto& seg : profile) {
    if (t >= seg.t) w = seg.w;
  }
  return w;
}

std::optional<std::pair<Position, bool>> walker_state(
    const std::vector<Waypoint>& trajectory, double t) {
  if (trajectory.empty()) return std::nullopt;
  if (t < trajectory.front().t || t > trajectory.back().t) return std::nullopt;
  if (trajectory.size() == 1) {
    return std::make_pair(Position{trajectory[0].x, trajectory[0].y}, false);
  }
  std::size_t i = 0;
  while (i + 2 < trajectory.size() && t >= trajectory[i + 1].t) ++i;
  const auto& a = trajectory[i];
  const auto& b = trajectory[i + 1];
  const double span = b.t - a.t;
  const double f = span > 0.0 ? std::clamp((t - a.t) / span, 0.0, 1.0) : 0.0;
  const Position pos{a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
  const bool standing = (a.x == b.x && a.y == b.y);
  return std::make_pair(pos, !standing);
}

std::pair<RssTrace, TruthTrace> generate_trace(const ScenarioConfig& scenario) {
  validate_scenario(scenario);
  const Deployment& dep = scenario.deployment;
  const auto links = enumerate_links(dep);
  const std::size_t n_links = links.size();
  const std::size_t n_chan = dep.channels.size();
  const std::size_t n_frames =
      static_cast<std::size_t>(std::floor(scenario.duration_s / scenario.t_s));

  const PlantedPathLoss planted =
      scenario.planted.empty() ? PlantedPathLoss::random(dep, scenario.seed)
                               : scenario.planted;

  // Static multipath offsets, one per (link, channel), fixed for the scenario.
  std::vector<double> offset(n_links * n_chan, 0.0);
  {
    Rng rng = Rng::stream(scenario.seed, kOffsetStream);
    for (double& o : offset) {
      o = rng.uniform(scenario.offset_low_db, scenario.offset_high_db);
    }
  }

  std::vector<double> base(n_links, 0.0);
  for (std::size_t l = 0; l < n_links; ++l) {
    base[l] = planted.predict(links[l].tx, dep.link_length(links[l]));
  }

  RssTrace trace;
  trace.t_s = scenario.t_s;
  trace.frames = n_frames;
  TruthTrace truth;
  truth.t_s = scenario.t_s;
  truth.frames.reserve(n_frames);

  Rng rng = Rng::stream(scenario.seed, kFrameStream);
  const NoiseLaw& law = scenario.noise;
  std::vector<double> ar_state(n_links * n_chan, 0.0);
  std::vector<bool> ar_started(n_links * n_chan, false);
  const double phi = std::clamp(law.phi, 0.0, 0.999999);
  const double innov_scale = std::sqrt(1.0 - phi * phi);

  std::vector<Position> people;
  std::vector<bool> moving;
  std::vector<int> persons_on_link(n_links, 0);

  for (std::size_t k = 0; k < n_frames; ++k) {
    const double t = static_cast<double>(k) * scenario.t_s;
    const double w = wind_at(scenario.wind, t);

    people.clear();
    moving.clear();
    for (const auto& traj : scenario.walkers) {
      const auto state = walker_state(traj, t);
      if (state) {
        people.push_back(state->first);
        moving.push_back(state->second);
      }
    }
    truth.frames.push_back({k, t, people, moving});

    std::fill(persons_on_link.begin(), persons_on_link.end(), 0);
    if (!people.empty()) {
      for (std::size_t l = 0; l < n_links; ++l) {
        const Position tx = dep.node_pos(links[l].tx);
        const Position rx = dep.node_pos(links[l].rx);
        for (const auto& person : people) {
          if (link_ellipse_contains(tx, rx, person, scenario.lambda_m)) {
            ++persons_on_link[l];
          }
        }
      }
    }

    // Fixed draw order (channel-major, then canonical links) regardless of
    // walker placement or drops, so the stream stays aligned across scenarios
    // that share a seed.
    for (std::size_t ci = 0; ci < n_chan; ++ci) {
      for (std::size_t l = 0; l < n_links; ++l) {
        const std::size_t cell = l * n_chan + ci;
        const double eps = rng.normal();
        const double u_drop = rng.uniform();

        const double fade = offset[cell];
        const double sig = law.sigma(fade, w);
        double noise;
        if (w <= 0.0) {
          ar_state[cell] = 0.0;
          ar_started[cell] = false;
          noise = 0.0;
        } else if (!ar_started[cell]) {
          ar_state[cell] = sig * eps;
          ar_started[cell] = true;
          noise = ar_state[cell];
        } else {
          ar_state[cell] = phi * ar_state[cell] + innov_scale * sig * eps;
          noise = ar_state[cell];
        }

        double rss = base[l] + offset[cell] -
                     scenario.a_h_db * persons_on_link[l] + noise;
        rss = std::min(rss, scenario.ceil_dbm);

        if (rss <= scenario.floor_dbm) continue;
        if (rss < scenario.sensitivity_dbm) {
          const double p_drop = (scenario.sensitivity_dbm - rss) /
                                (scenario.sensitivity_dbm - scenario.floor_dbm);
          if (u_drop < p_drop) continue;
        }
        trace.samples.push_back(
            {k, t, links[l].tx, links[l].rx, dep.channels[ci], rss});
      }
    }
  }
  return {std::move(trace), std::move(truth)};
}

}  // namespace rti
