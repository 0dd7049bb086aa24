#include "radiotomo/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace rti {

LinkChannelStats::LinkChannelStats(std::vector<LinkKey> links, std::vector<int> channels)
    : links_(std::move(links)),
      channels_(std::move(channels)),
      cells_(links_.size() * channels_.size()) {}

std::size_t LinkChannelStats::link_index(const LinkKey& link) const {
  const auto it = std::lower_bound(links_.begin(), links_.end(), link);
  if (it == links_.end() || !(*it == link)) {
    throw std::out_of_range("link not part of this deployment");
  }
  return static_cast<std::size_t>(it - links_.begin());
}

std::size_t LinkChannelStats::channel_index(int channel) const {
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    if (channels_[i] == channel) return i;
  }
  throw std::out_of_range("channel " + std::to_string(channel) + " not measured");
}

const std::optional<PairStats>& LinkChannelStats::at(std::size_t link_idx,
                                                     std::size_t chan_idx) const {
  return cells_.at(link_idx * channels_.size() + chan_idx);
}

std::optional<PairStats>& LinkChannelStats::at(std::size_t link_idx,
                                               std::size_t chan_idx) {
  return cells_.at(link_idx * channels_.size() + chan_idx);
}

std::size_t LinkChannelStats::measured_pairs() const {
  std::size_t n = 0;
  for (const auto& c : cells_) {
    if (c.has_value()) ++n;
  }
  return n;
}

LinkChannelStats estimate_stats(const RssTrace& trace, const Deployment& dep,
                                const CalibrationWindow& window) {
  if (window.end_frame <= window.start_frame) {
    throw std::invalid_argument("calibration window is empty");
  }
  LinkChannelStats stats(enumerate_links(dep), dep.channels);

  // Welford accumulators per cell.
  const std::size_t n_cells = stats.pair_count();
  std::vector<std::size_t> count(n_cells, 0);
  std::vector<double> mean(n_cells, 0.0);
  std::vector<double> m2(n_cells, 0.0);

  const std::size_t n_chan = stats.channel_count();
  for (const auto& s : trace.samples) {
    if (s.frame < window.start_frame || s.frame >= window.end_frame) continue;
    const std::size_t l = stats.link_index({s.tx, s.rx});
    const std::size_t c = stats.channel_index(s.channel);
    const std::size_t cell = l * n_chan + c;
    ++count[cell];
    const double delta = s.rss_dbm - mean[cell];
    mean[cell] += delta / static_cast<double>(count[cell]);
    m2[cell] += delta * (s.rss_dbm - mean[cell]);
  }

  for (std::size_t l = 0; l < stats.link_count(); ++l) {
    for (std::size_t c = 0; c < n_chan; ++c) {
      const std::size_t cell = l * n_chan + c;
      if (count[cell] == 0) continue;
      PairStats ps;
      ps.mean_dbm = mean[cell];
      ps.n = count[cell];
      ps.var_db2 = count[cell] > 1
                       ? m2[cell] / static_cast<double>(count[cell] - 1)
                       : 0.0;
      stats.at(l, c) = ps;
    }
  }
  return stats;
}

double PathLossEntry::predict(double distance_m) const {
  return p0_dbm - 10.0 * eta * std::log10(distance_m / d0_m);
}

double PathLossModel::predict(int tx_id, double distance_m) const {
  if (mode == PathLossMode::Global) {
    if (!global) throw std::out_of_range("global path loss entry missing");
    return global->predict(distance_m);
  }
  const auto it = per_node.find(tx_id);
  if (it == per_node.end()) {
    throw std::out_of_range("no path loss entry for transmitter " +
                            std::to_string(tx_id));
  }
  return it->second.predict(distance_m);
}

bool PathLossModel::covers(int tx_id) const {
  if (mode == PathLossMode::Global) return global.has_value();
  return per_node.count(tx_id) > 0;
}

namespace {

struct FitAccum {
  // Regression of y on x = -10*log10(d): y = p0 + eta * x.
  std::vector<double> xs;
  std::vector<double> ys;
  std::set<long long> distinct_d;  // distances keyed at micrometer resolution

  void add(double distance, double mean_dbm) {
    xs.push_back(-10.0 * std::log10(distance));
    ys.push_back(mean_dbm);
    distinct_d.insert(static_cast<long long>(std::llround(distance * 1e6)));
  }

  bool determined() const { return distinct_d.size() >= 2; }

  PathLossEntry solve() const {
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    PathLossEntry e;
    e.eta = sxy / sxx;
    e.p0_dbm = my - e.eta * mx;
    e.d0_m = 1.0;
    return e;
  }
};

}  // namespace

PathLossModel fit_path_loss(const LinkChannelStats& stats, const Deployment& dep,
                            PathLossMode mode) {
  PathLossModel model;
  model.mode = mode;

  if (mode == PathLossMode::Global) {
    FitAccum acc;
    for (std::size_t l = 0; l < stats.link_count(); ++l) {
      const double d = dep.link_length(stats.links()[l]);
      for (std::size_t c = 0; c < stats.channel_count(); ++c) {
        if (const auto& ps = stats.at(l, c)) acc.add(d, ps->mean_dbm);
      }
    }
    if (!acc.determined()) {
      throw std::invalid_argument(
          "global path loss fit needs measured means at two distinct distances");
    }
    model.global = acc.solve();
    return model;
  }

  std::map<int, FitAccum> per_tx;
  for (std::size_t l = 0; l < stats.link_count(); ++l) {
    const LinkKey& link = stats.links()[l];
    const double d = dep.link_length(link);
    for (std::size_t c = 0; c < stats.channel_count(); ++c) {
      if (const auto& ps = stats.at(l, c)) per_tx[link.tx].add(d, ps->mean_dbm);
    }
  }
  for (const auto& [tx, acc] : per_tx) {
    if (acc.determined()) {
      model.per_node[tx] = acc.solve();
    } else {
      model.underdetermined.push_back(tx);
    }
  }
  return model;
}

LinkChannelStats fade_levels(const LinkChannelStats& stats, const PathLossModel& model,
                             const Deployment& dep) {
  LinkChannelStats out = stats;
  for (std::size_t l = 0; l < out.link_count(); ++l) {
    const LinkKey& link = out.links()[l];
    const double d = dep.link_length(link);
    for (std::size_t c = 0; c < out.channel_count(); ++c) {
      auto& cell = out.at(l, c);
      if (!cell) continue;
      cell->fade_db = cell->mean_dbm - model.predict(link.tx, d);
    }
  }
  return out;
}

}  // namespace rti
