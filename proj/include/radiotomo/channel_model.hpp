#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "radiotomo/geometry.hpp"
#include "radiotomo/simulator.hpp"

namespace rti {

/// Frame range [start_frame, end_frame) of an empty-area measurement interval.
struct CalibrationWindow {
  std::size_t start_frame = 0;
  std::size_t end_frame = 0;
};

struct PairStats {
  double mean_dbm = 0.0;
  double var_db2 = 0.0;  // unbiased sample variance; 0 for a single sample
  std::size_t n = 0;
  std::optional<double> fade_db;
};

/// Per (link, channel) calibration statistics, indexed in enumerate_links
/// order x deployment channel order. Pairs that never received a packet in
/// the window are absent.
class LinkChannelStats {
 public:
  LinkChannelStats(std::vector<LinkKey> links, std::vector<int> channels);

  std::size_t link_count() const { return links_.size(); }
  std::size_t channel_count() const { return channels_.size(); }
  std::size_t pair_count() const { return links_.size() * channels_.size(); }

  const std::vector<LinkKey>& links() const { return links_; }
  const std::vector<int>& channels() const { return channels_; }

  std::size_t link_index(const LinkKey& link) const;
  std::size_t channel_index(int channel) const;

  const std::optional<PairStats>& at(std::size_t link_idx, std::size_t chan_idx) const;
  std::optional<PairStats>& at(std::size_t link_idx, std::size_t chan_idx);

  std::size_t measured_pairs() const;

 private:
  std::vector<LinkKey> links_;
  std::vector<int> channels_;
  std::vector<std::optional<PairStats>> cells_;
};

/// Sample mean and unbiased variance per (link, channel) over the frames of
/// the calibration window.
LinkChannelStats estimate_stats(const RssTrace& trace, const Deployment& dep,
                                const CalibrationWindow& window);

enum class PathLossMode { NodeSpecific, Global };

struct PathLossEntry {
  double eta = 0.0;
  double p0_dbm = 0.0;
  double d0_m = 1.0;

  double predict(double distance_m) const;
};

/// Fitted log-distance model. In node-specific mode there is one entry per
/// transmitter; transmitters whose fit is underdetermined (fewer than two
/// distinct distances with measured means) are listed instead of fitted.
struct PathLossModel {
  PathLossMode mode = PathLossMode::NodeSpecific;
  std::map<int, PathLossEntry> per_node;
  std::optional<PathLossEntry> global;
  std::vector<int> underdetermined;

  /// Prediction for a link transmitted by `tx_id`; throws std::out_of_range
  /// when the covering entry is missing.
  double predict(int tx_id, double distance_m) const;
  bool covers(int tx_id) const;
};

/// Ordinary least squares of mean RSS against -10*log10(d), d0 fixed at 1 m.
/// Node-specific mode pools all channels of the links transmitted by each
/// node; global mode fits one line over every measured pair. A global fit
/// with fewer than two distinct distances throws std::invalid_argument.
PathLossModel fit_path_loss(const LinkChannelStats& stats, const Deployment& dep,
                            PathLossMode mode);

/// Returns a copy of `stats` with F = mean - P(d) filled for every measured
/// pair. Throws std::out_of_range when the model does not cover a
/// transmitter that has measured pairs.
LinkChannelStats fade_levels(const LinkChannelStats& stats, const PathLossModel& model,
                             const Deployment& dep);

}  // namespace rti
