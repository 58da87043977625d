#include "liouville/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "liouville/error.hpp"
#include "liouville/kernels.hpp"

namespace liouville {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Smallest node of a log grid relative to r_max.
constexpr double kLogFloor = 1e-8;

void check_samples(const Grid& grid, std::span<const double> g) {
  if (g.size() != grid.size()) {
    throw Error("integrate_radial: " + std::to_string(g.size()) + " samples for a grid of " +
                std::to_string(grid.size()) + " nodes");
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) {
      std::ostringstream msg;
      msg << "integrate_radial: non-finite sample " << g[i] << " at node " << i
          << " (r = " << grid[i] << ")";
      throw Error(msg.str());
    }
  }
}

}  // namespace

Grid::Grid(std::vector<double> nodes, Grading grading)
    : nodes_(std::move(nodes)), grading_(grading) {
  const std::size_t n = nodes_.size();
  if (n < 2) throw Error("grid needs at least two nodes");
  if (!(nodes_.front() > 0.0)) throw Error("grid: first node must be strictly positive");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(nodes_[i] > nodes_[i - 1]) || !std::isfinite(nodes_[i])) {
      throw Error("grid: nodes must be finite and strictly increasing (node " +
                  std::to_string(i) + ")");
    }
  }
  body_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = nodes_[i + 1] - nodes_[i];
    body_[i] += 0.5 * h * nodes_[i];
    body_[i + 1] += 0.5 * h * nodes_[i + 1];
  }
  for (double& w : body_) w *= kTwoPi;
  weights_ = body_;
  weights_[0] += origin_cell(1.0, nodes_[0], OriginModel{});
}

Grid Grid::make(double r_max, std::size_t n_nodes, Grading grading, double power) {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw Error("make_grid: r_max must be positive");
  if (n_nodes < 16) throw Error("make_grid: need at least 16 nodes");
  std::vector<double> nodes(n_nodes);
  const double n = static_cast<double>(n_nodes);
  switch (grading) {
    case Grading::Uniform:
      for (std::size_t i = 0; i < n_nodes; ++i) nodes[i] = r_max * static_cast<double>(i + 1) / n;
      break;
    case Grading::Log: {
      const double decades = -std::log10(kLogFloor);
      for (std::size_t i = 0; i < n_nodes; ++i) {
        const double frac = static_cast<double>(i) / (n - 1.0);
        nodes[i] = r_max * std::pow(10.0, -decades * (1.0 - frac));
      }
      nodes.back() = r_max;
      break;
    }
    case Grading::Power:
      if (!(power >= 1.0)) throw Error("make_grid: power grading needs exponent >= 1");
      for (std::size_t i = 0; i < n_nodes; ++i) {
        nodes[i] = r_max * std::pow(static_cast<double>(i + 1) / n, power);
      }
      break;
  }
  return Grid(std::move(nodes), grading);
}

Grid Grid::log_spaced(double r_min, double r_max, std::size_t n_nodes) {
  if (!(r_min > 0.0) || !(r_max > r_min)) throw Error("log grid: need 0 < r_min < r_max");
  if (n_nodes < 16) throw Error("log grid: need at least 16 nodes");
  std::vector<double> nodes(n_nodes);
  const double a = std::log(r_min);
  const double b = std::log(r_max);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(n_nodes - 1);
    nodes[i] = std::exp(a + (b - a) * frac);
  }
  nodes.front() = r_min;
  nodes.back() = r_max;
  return Grid(std::move(nodes), Grading::Log);
}

Grid Grid::from_nodes(std::vector<double> nodes, Grading grading) {
  return Grid(std::move(nodes), grading);
}

Grid Grid::with_node(double r) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), r);
  if (it != nodes_.end() && *it == r) return *this;
  std::vector<double> nodes(nodes_);
  nodes.insert(nodes.begin() + (it - nodes_.begin()), r);
  return Grid(std::move(nodes), grading_);
}

double origin_cell(double g0, double r0, OriginModel origin) {
  if (g0 == 0.0) return 0.0;
  const double r0sq = r0 * r0;
  if (origin.log_power == 0.0) {
    if (!(origin.power > -2.0)) throw Error("origin model: power must exceed -2");
    return kTwoPi * g0 * r0sq / (origin.power + 2.0);
  }
  const double big_l = -std::log(r0);
  if (!(big_l > 0.0)) throw Error("origin model: logarithmic model needs r0 < 1");
  if (origin.power == -2.0) {
    if (!(origin.log_power > 1.0)) throw Error("origin model: r^-2 singularity needs log power > 1");
    return kTwoPi * g0 * r0sq * big_l / (origin.log_power - 1.0);
  }
  if (!(origin.power > -2.0)) throw Error("origin model: power must exceed -2");
  // Two-term asymptotic expansion of the incomplete gamma function.
  const double a = origin.power + 2.0;
  return kTwoPi * g0 * r0sq / a * (1.0 - origin.log_power / (a * big_l));
}

double integrate_radial(const Grid& grid, std::span<const double> g, OriginModel origin) {
  check_samples(grid, g);
  return kernels::dot(grid.body_, g) + origin_cell(g[0], grid.nodes_[0], origin);
}

std::vector<double> cumulative_radial(const Grid& grid, std::span<const double> g,
                                      OriginModel origin) {
  check_samples(grid, g);
  const auto r = grid.nodes();
  std::vector<double> out(g.size());
  double acc = origin_cell(g[0], r[0], origin);
  out[0] = acc;
  for (std::size_t i = 1; i < g.size(); ++i) {
    acc += std::numbers::pi * (r[i] - r[i - 1]) * (g[i - 1] * r[i - 1] + g[i] * r[i]);
    out[i] = acc;
  }
  return out;
}

std::string to_string(Grading grading) {
  switch (grading) {
    case Grading::Uniform: return "uniform";
    case Grading::Log: return "log";
    case Grading::Power: return "power";
  }
  return "unknown";
}

}  // namespace liouville
