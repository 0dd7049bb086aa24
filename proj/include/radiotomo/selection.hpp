#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "radiotomo/channel_model.hpp"

namespace rti {

/// Link-channel selection strategies.
///
///   OutPlus  per-link best weight F/sigma^2 over {F>0, mean>threshold}
///   OutW     all of {F>0, mean>threshold}, weighted-average change
///   ComPlus / ComW   same rules with fade levels from a global model
///   FlbU     every measured pair, unweighted average
///   FlbW     {mean>threshold, F>0}, weights F
///   FlbPlus  {mean>threshold}, per-link max F
///   RflP     {F_rel>0}, weights F_rel
///   RflF     {mean>threshold, F_rel>0}, weights F_rel
///   RflPlus  {mean>threshold}, per-link max F_rel
enum class Strategy {
  OutPlus,
  OutW,
  ComPlus,
  ComW,
  FlbU,
  FlbW,
  FlbPlus,
  RflP,
  RflF,
  RflPlus,
};

std::string strategy_name(Strategy s);
Strategy parse_strategy(const std::string& name);
const std::vector<Strategy>& all_strategies();

/// Model mode the strategy's fade levels must come from; nullopt for the
/// relative-fade strategies, which need no path loss model.
std::optional<PathLossMode> required_model_mode(Strategy s);

/// True for strategies that keep one channel per link.
bool is_single_channel(Strategy s);

struct PairRef {
  std::size_t link_index = 0;
  std::size_t channel_index = 0;

  bool operator==(const PairRef&) const = default;
};

struct WeightedPair {
  std::size_t link_index = 0;
  std::size_t channel_index = 0;
  double weight = 0.0;
};

/// Selection outcome. `chosen` is the final set L with its weights;
/// `per_link` gives, for each link in canonical order, the channels feeding
/// that link's RSS-change estimate. The audit sets satisfy
/// L subset Ls = Lp intersect Lr; criteria that a strategy does not apply
/// admit every measured pair into the corresponding set.
struct SelectionSet {
  Strategy strategy = Strategy::OutPlus;
  double upsilon_r = -90.0;
  std::optional<PathLossMode> model_mode;
  std::size_t n_links = 0;
  std::size_t n_channels = 0;

  std::vector<WeightedPair> chosen;
  std::vector<std::vector<WeightedPair>> per_link;
  std::vector<PairRef> lp;
  std::vector<PairRef> lr;
  std::vector<PairRef> ls;

  std::size_t total_pairs() const { return n_links * n_channels; }
  bool empty() const { return chosen.empty(); }
};

/// Eq.-style pair weight: F/sigma^2 for members of Ls, zero otherwise.
/// Member variances are floored at 0.01 dB^2 to keep calm-window pairs finite.
double pair_weight(double fade_db, double var_db2, bool member_of_ls);

/// F_rel(l,c) = mean(l,c) - min over measured channels of mean(l,.); zero on
/// each link's weakest channel, nullopt where the pair is unmeasured.
std::vector<std::vector<std::optional<double>>> relative_fade_levels(
    const LinkChannelStats& stats);

/// Applies `strategy` to calibration statistics whose fade levels were
/// produced by the required model mode (`model_mode` is recorded for audit).
/// Ties in per-link argmax steps break toward the lowest channel number.
/// An empty selection is legal; the pipeline then images a zero vector.
SelectionSet select(const LinkChannelStats& stats, Strategy strategy,
                    double upsilon_r,
                    std::optional<PathLossMode> model_mode_used = std::nullopt);

/// Fraction of link-channel TDMA slots left unused by the selection:
/// 1 - selected / (N(N-1)|C|).
double energy_coefficient(std::size_t selected_pairs, std::size_t n_nodes,
                          std::size_t n_channels);

}  // namespace rti
