#include "radiotomo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace rti {

double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void Deployment::validate() const {
  if (nodes.size() < 3) {
    throw std::invalid_argument("deployment needs at least 3 nodes");
  }
  std::set<int> ids;
  for (const auto& n : nodes) {
    if (!std::isfinite(n.x) || !std::isfinite(n.y)) {
      throw std::invalid_argument("node " + std::to_string(n.id) +
                                  " has non-finite coordinates");
    }
    if (!ids.insert(n.id).second) {
      throw std::invalid_argument("duplicate node id " + std::to_string(n.id));
    }
  }
  if (channels.empty()) {
    throw std::invalid_argument("channel set is empty");
  }
  std::set<int> chan_set;
  for (int c : channels) {
    if (c < 11 || c > 26) {
      throw std::invalid_argument("channel " + std::to_string(c) +
                                  " outside 802.15.4 range 11..26");
    }
    if (!chan_set.insert(c).second) {
      throw std::invalid_argument("duplicate channel " + std::to_string(c));
    }
  }
  if (!(area.width() > 0.0) || !(area.height() > 0.0)) {
    throw std::invalid_argument("monitored area must have positive extent");
  }
  if (!(pixel_width > 0.0)) {
    throw std::invalid_argument("pixel width must be positive");
  }
}

const NodeRecord& Deployment::node(int id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return n;
  }
  throw std::out_of_range("unknown node id " + std::to_string(id));
}

std::size_t Deployment::node_index(int id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) return i;
  }
  throw std::out_of_range("unknown node id " + std::to_string(id));
}

std::size_t Deployment::channel_index(int channel) const {
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (channels[i] == channel) return i;
  }
  throw std::out_of_range("channel " + std::to_string(channel) +
                          " not part of this deployment");
}

double Deployment::link_length(const LinkKey& link) const {
  return distance(node_pos(link.tx), node_pos(link.rx));
}

std::vector<LinkKey> enumerate_links(const Deployment& dep) {
  std::vector<int> ids;
  ids.reserve(dep.nodes.size());
  for (const auto& n : dep.nodes) ids.push_back(n.id);
  std::sort(ids.begin(), ids.end());

  std::vector<LinkKey> links;
  links.reserve(ids.size() * (ids.size() - 1));
  for (int tx : ids) {
    for (int rx : ids) {
      if (tx == rx) continue;
      links.push_back({tx, rx});
    }
  }
  return links;
}

double channel_center_frequency_mhz(int channel) {
  if (channel < 11 || channel > 26) {
    throw std::out_of_range("802.15.4 channel must be in 11..26, got " +
                            std::to_string(channel));
  }
  return 2400.0 + 5.0 * (channel - 10);
}

bool link_ellipse_contains(const Position& tx, const Position& rx,
                           const Position& q, double lambda) {
  const double d = distance(tx, rx);
  if (d < 1e-3) {
    throw std::invalid_argument("link endpoints coincide");
  }
  return distance(q, tx) + distance(q, rx) < d + lambda;
}

double link_ellipse_area(double link_length, double lambda) {
  if (link_length <= 0.0 || lambda <= 0.0) {
    throw std::invalid_argument("ellipse area needs positive length and lambda");
  }
  const double a = 0.5 * (link_length + lambda);
  const double half_d = 0.5 * link_length;
  const double b = std::sqrt(a * a - half_d * half_d);
  return M_PI * a * b;
}

PixelGrid PixelGrid::make(const Rect& area, double pixel_width) {
  if (!(pixel_width > 0.0) || !(area.width() > 0.0) || !(area.height() > 0.0)) {
    throw std::invalid_argument("grid needs positive area and pixel width");
  }
  PixelGrid g;
  g.area = area;
  g.pixel = pixel_width;
  g.nx = static_cast<std::size_t>(std::ceil(area.width() / pixel_width - 1e-9));
  g.ny = static_cast<std::size_t>(std::ceil(area.height() / pixel_width - 1e-9));
  g.nx = std::max<std::size_t>(g.nx, 1);
  g.ny = std::max<std::size_t>(g.ny, 1);
  return g;
}

Position PixelGrid::center(std::size_t q) const {
  const std::size_t iy = q / nx;
  const std::size_t ix = q % nx;
  return {area.xmin + (static_cast<double>(ix) + 0.5) * pixel,
          area.ymin + (static_cast<double>(iy) + 0.5) * pixel};
}

}  // namespace rti
