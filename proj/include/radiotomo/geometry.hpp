#pragma once

#include <compare>
#include <cstddef>
#include <vector>

namespace rti {

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Position& a, const Position& b);

struct Rect {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  bool contains(const Position& p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
};

struct NodeRecord {
  int id = 0;
  double x = 0.0;
  double y = 0.0;

  Position pos() const { return {x, y}; }
};

/// A directed transmitter -> receiver pair.
struct LinkKey {
  int tx = 0;
  int rx = 0;

  auto operator<=>(const LinkKey&) const = default;
};

/// Static RF sensor deployment: node positions, the measured 802.15.4
/// channels, the monitored rectangle and the image pixel width.
struct Deployment {
  std::vector<NodeRecord> nodes;
  std::vector<int> channels;
  Rect area;
  double pixel_width = 0.65;

  /// Throws std::invalid_argument when any structural invariant is broken
  /// (fewer than 3 nodes, duplicate ids, empty or out-of-range channel set,
  /// degenerate area, non-positive pixel width).
  void validate() const;

  std::size_t node_count() const { return nodes.size(); }
  const NodeRecord& node(int id) const;
  std::size_t node_index(int id) const;
  std::size_t channel_index(int channel) const;
  Position node_pos(int id) const { return node(id).pos(); }
  double link_length(const LinkKey& link) const;
};

/// All N(N-1) directed links in canonical order: ascending (tx, rx) by the
/// node ordering of the deployment, skipping tx == rx. This ordering defines
/// the row indexing of every per-link vector and matrix in the pipeline.
std::vector<LinkKey> enumerate_links(const Deployment& dep);

/// Center frequency in MHz of an IEEE 802.15.4 channel (11..26).
double channel_center_frequency_mhz(int channel);

/// True when `q` lies strictly inside the link's sensitivity ellipse, i.e.
/// dist(q, tx) + dist(q, rx) < link_length + lambda. Foci closer than 1 mm
/// are rejected as a degenerate link.
bool link_ellipse_contains(const Position& tx, const Position& rx,
                           const Position& q, double lambda);

/// Analytic area of the sensitivity ellipse: semi-major a = (d + lambda)/2,
/// semi-minor b = sqrt(a^2 - (d/2)^2).
double link_ellipse_area(double link_length, double lambda);

/// Regular pixel grid over a rectangle. Pixels are indexed row-major from
/// the lower-left corner: q = iy * nx + ix.
struct PixelGrid {
  Rect area;
  double pixel = 1.0;
  std::size_t nx = 0;
  std::size_t ny = 0;

  static PixelGrid make(const Rect& area, double pixel_width);

  std::size_t size() const { return nx * ny; }
  std::size_t index(std::size_t ix, std::size_t iy) const { return iy * nx + ix; }
  Position center(std::size_t q) const;
};

}  // namespace rti
