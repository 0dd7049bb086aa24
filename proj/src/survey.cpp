#include "radiotomo/survey.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace rti {

namespace {

constexpr double kDegPerRad = 180.0 / M_PI;

struct Problem {
  std::vector<int> ids;              // all node ids, reference first
  std::map<int, std::size_t> index;  // id -> slot in ids
  const std::vector<SurveyMeasurement>* survey = nullptr;
  double wd = 1.0;  // 1/sigma_d
  double wa = 1.0;  // 1/sigma_alpha
};

double objective_value(const Problem& p, const std::vector<Position>& pos) {
  double obj = 0.0;
  for (const auto& m : *p.survey) {
    const Position& a = pos[p.index.at(m.link.tx)];
    const Position& b = pos[p.index.at(m.link.rx)];
    const double d_hat = distance(a, b);
    const double rd = m.length_m - d_hat;
    const double ra = wrap_angle_deg(m.angle_deg - link_angle_deg(a, b));
    obj += rd * rd * p.wd * p.wd + ra * ra * p.wa * p.wa;
  }
  return obj;
}

// Residual vector and Jacobian w.r.t. the free coordinates (every node but
// the reference). Parameter layout: [x_1, y_1, x_2, y_2, ...] for ids[1..].
void residuals_and_jacobian(const Problem& p, const std::vector<Position>& pos,
                            Eigen::VectorXd& r, Eigen::MatrixXd& jac) {
  const std::size_t n_meas = p.survey->size();
  const std::size_t n_free = p.ids.size() - 1;
  r.resize(static_cast<Eigen::Index>(2 * n_meas));
  jac.setZero(static_cast<Eigen::Index>(2 * n_meas),
              static_cast<Eigen::Index>(2 * n_free));

  for (std::size_t k = 0; k < n_meas; ++k) {
    const auto& m = (*p.survey)[k];
    const std::size_t ia = p.index.at(m.link.tx);
    const std::size_t ib = p.index.at(m.link.rx);
    const Position& a = pos[ia];
    const Position& b = pos[ib];
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double d2 = std::max(dx * dx + dy * dy, 1e-12);
    const double d_hat = std::sqrt(d2);

    const double rd = (m.length_m - d_hat) * p.wd;
    const double ra = wrap_angle_deg(m.angle_deg - link_angle_deg(a, b)) * p.wa;
    r(static_cast<Eigen::Index>(2 * k)) = rd;
    r(static_cast<Eigen::Index>(2 * k + 1)) = ra;

    // d_hat derivatives: d(d_hat)/db = (dx, dy)/d_hat, d/da = -that.
    // angle = atan2(dx, dy) in degrees: d/d(dx) = dy/d2, d/d(dy) = -dx/d2.
    const double gdx = dx / d_hat;
    const double gdy = dy / d_hat;
    const double adx = kDegPerRad * dy / d2;
    const double ady = -kDegPerRad * dx / d2;

    auto add = [&](std::size_t node_slot, double fx, double fy, Eigen::Index row,
                   double weight) {
      if (node_slot == 0) return;  // reference node is fixed
      const Eigen::Index col = static_cast<Eigen::Index>(2 * (node_slot - 1));
      jac(row, col) += fx * weight;
      jac(row, col + 1) += fy * weight;
    };

    // r_d = (d - d_hat)*wd -> d r_d/db = -(gdx, gdy)*wd, d/da = +(gdx, gdy)*wd
    add(ib, -gdx, -gdy, static_cast<Eigen::Index>(2 * k), p.wd);
    add(ia, gdx, gdy, static_cast<Eigen::Index>(2 * k), p.wd);
    // r_a = wrap(alpha - alpha_hat)*wa -> d r_a/db = -(adx, ady)*wa
    add(ib, -adx, -ady, static_cast<Eigen::Index>(2 * k + 1), p.wa);
    add(ia, adx, ady, static_cast<Eigen::Index>(2 * k + 1), p.wa);
  }
}

// Chains initial positions along measurements taken in survey order,
// starting from the reference node.
std::vector<Position> chain_initial_estimates(const Problem& p) {
  std::vector<Position> pos(p.ids.size(), Position{0.0, 0.0});
  std::vector<bool> placed(p.ids.size(), false);
  placed[0] = true;

  bool progress = true;
  std::size_t n_placed = 1;
  while (progress && n_placed < p.ids.size()) {
    progress = false;
    for (const auto& m : *p.survey) {
      const std::size_t ia = p.index.at(m.link.tx);
      const std::size_t ib = p.index.at(m.link.rx);
      const double rad = m.angle_deg / kDegPerRad;
      const double ux = std::sin(rad);
      const double uy = std::cos(rad);
      if (placed[ia] && !placed[ib]) {
        pos[ib] = {pos[ia].x + m.length_m * ux, pos[ia].y + m.length_m * uy};
        placed[ib] = true;
        ++n_placed;
        progress = true;
      } else if (placed[ib] && !placed[ia]) {
        pos[ia] = {pos[ib].x - m.length_m * ux, pos[ib].y - m.length_m * uy};
        placed[ia] = true;
        ++n_placed;
        progress = true;
      }
    }
  }
  if (n_placed < p.ids.size()) {
    std::string missing;
    for (std::size_t i = 0; i < p.ids.size(); ++i) {
      if (!placed[i]) missing += " " + std::to_string(p.ids[i]);
    }
    throw std::invalid_argument("survey graph does not connect nodes:" + missing);
  }
  return pos;
}

}  // namespace

double link_angle_deg(const Position& from, const Position& to) {
  const double deg = kDegPerRad * std::atan2(to.x - from.x, to.y - from.y);
  return deg < 0.0 ? deg + 360.0 : deg;
}

double wrap_angle_deg(double delta) {
  delta = std::fmod(delta, 360.0);
  if (delta > 180.0) delta -= 360.0;
  if (delta <= -180.0) delta += 360.0;
  return delta;
}

SurveyFit estimate_node_positions(const std::vector<SurveyMeasurement>& survey,
                                  const SurveyNoiseConfig& noise,
                                  int reference_node,
                                  const SurveySolverOptions& options) {
  if (survey.empty()) {
    throw std::invalid_argument("empty survey");
  }
  if (!(noise.sigma2_d > 0.0) || !(noise.sigma2_alpha > 0.0)) {
    throw std::invalid_argument("survey noise variances must be positive");
  }
  for (const auto& m : survey) {
    if (!(m.length_m > 0.0)) {
      throw std::invalid_argument("survey lengths must be positive");
    }
    if (m.link.tx == m.link.rx) {
      throw std::invalid_argument("survey link endpoints coincide");
    }
  }

  Problem p;
  p.survey = &survey;
  p.wd = 1.0 / std::sqrt(noise.sigma2_d);
  p.wa = 1.0 / std::sqrt(noise.sigma2_alpha);

  std::set<int> seen;
  for (const auto& m : survey) {
    seen.insert(m.link.tx);
    seen.insert(m.link.rx);
  }
  if (!seen.count(reference_node)) {
    throw std::invalid_argument("reference node " + std::to_string(reference_node) +
                                " does not appear in the survey");
  }
  p.ids.push_back(reference_node);
  for (int id : seen) {
    if (id != reference_node) p.ids.push_back(id);
  }
  for (std::size_t i = 0; i < p.ids.size(); ++i) p.index[p.ids[i]] = i;

  std::vector<Position> pos = chain_initial_estimates(p);

  SurveyFit fit;
  double obj = objective_value(p, pos);
  fit.objective_history.push_back(obj);

  const std::size_t n_free = p.ids.size() - 1;
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  double mu = 1e-3;

  std::size_t iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    residuals_and_jacobian(p, pos, r, jac);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;

    bool accepted = false;
    for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
      Eigen::MatrixXd damped = jtj;
      damped.diagonal().array() += mu;
      const Eigen::VectorXd step = damped.ldlt().solve(jtr);

      std::vector<Position> trial = pos;
      for (std::size_t i = 0; i < n_free; ++i) {
        trial[i + 1].x += step(static_cast<Eigen::Index>(2 * i));
        trial[i + 1].y += step(static_cast<Eigen::Index>(2 * i + 1));
      }
      const double trial_obj = objective_value(p, trial);
      if (trial_obj <= obj) {
        const double improvement = obj - trial_obj;
        pos = std::move(trial);
        obj = trial_obj;
        fit.objective_history.push_back(obj);
        mu = std::max(mu * 0.3, 1e-12);
        accepted = true;
        if (improvement <= options.rel_tolerance * std::max(obj, 1e-30)) {
          fit.converged = true;
        }
      } else {
        mu *= 10.0;
      }
    }
    if (!accepted || fit.converged) {
      if (!accepted) fit.converged = true;  // damping exhausted, local optimum
      ++iter;
      break;
    }
  }

  fit.iterations = iter;
  fit.objective = obj;
  fit.nodes.reserve(p.ids.size());
  for (std::size_t i = 0; i < p.ids.size(); ++i) {
    fit.nodes.push_back({p.ids[i], pos[i].x, pos[i].y});
  }
  std::sort(fit.nodes.begin(), fit.nodes.end(),
            [](const NodeRecord& a, const NodeRecord& b) { return a.id < b.id; });
  return fit;
}

}  // namespace rti
