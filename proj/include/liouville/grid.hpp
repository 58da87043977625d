#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace liouville {

enum class Grading { Uniform, Log, Power };

// Local model of an integrand on the origin cell [0, r0]:
//   g(r) ~ g(r0) * (r/r0)^power * (log r / log r0)^(-log_power)
// The plain power model (log_power == 0) needs power > -2. The logarithmic
// model is only supported for power == -2 with log_power > 1 (an integrable
// r^-2 (-log r)^-p singularity).
struct OriginModel {
  double power = 0.0;
  double log_power = 0.0;
};

// Radial mesh on (0, r_max] with composite-trapezoid weights for integrals of
// the form 2*pi * int g(r) r dr. Node r0 is always strictly positive; the
// cell [0, r0] is handled by an OriginModel.
class Grid {
 public:
  static Grid make(double r_max, std::size_t n_nodes, Grading grading, double power = 2.0);
  static Grid log_spaced(double r_min, double r_max, std::size_t n_nodes);
  static Grid from_nodes(std::vector<double> nodes, Grading grading = Grading::Log);

  std::span<const double> nodes() const { return nodes_; }
  // Weights with the default (power 0) origin cell folded into the first node;
  // sum(weights) == pi * r_max^2.
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }
  double r_min() const { return nodes_.front(); }
  double r_max() const { return nodes_.back(); }
  Grading grading() const { return grading_; }
  double operator[](std::size_t i) const { return nodes_[i]; }

  // Copy of this grid with `r` inserted as a node (no-op if already present).
  Grid with_node(double r) const;

 private:
  Grid(std::vector<double> nodes, Grading grading);

  std::vector<double> nodes_;
  std::vector<double> body_;  // trapezoid weights without the origin cell
  std::vector<double> weights_;
  Grading grading_;

  friend double integrate_radial(const Grid&, std::span<const double>, OriginModel);
  friend std::vector<double> cumulative_radial(const Grid&, std::span<const double>, OriginModel);
};

// 2*pi * int_0^{r_max} g(r) r dr from node samples of g.
double integrate_radial(const Grid& grid, std::span<const double> g, OriginModel origin = {});

// Running integral 2*pi * int_0^{r_i} g r dr at every node.
std::vector<double> cumulative_radial(const Grid& grid, std::span<const double> g,
                                      OriginModel origin = {});

// Contribution 2*pi * int_0^{r0} g r dr of the origin cell given g(r0).
double origin_cell(double g0, double r0, OriginModel origin);

std::string to_string(Grading grading);

}  // namespace liouville
