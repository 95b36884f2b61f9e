#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "newton_critic/expr.hpp"
#include "newton_critic/puiseux.hpp"

namespace nc {

// gamma(v, theta) as a double function, with the series when known.
struct Germ {
  std::function<double(double, double)> eval;
  std::optional<PuiseuxPoly> poly;
  std::string label;

  double operator()(double v, double theta) const { return eval(v, theta); }
  static Germ from_poly(const PuiseuxPoly& g);
  // Evaluates the expression itself (exp included); poly is its expansion.
  static Germ from_expression(std::string_view text, unsigned order = kDefaultOrder);
};

// Nodal values on [-1,1]^2 with step h = 2^-level; (2^(level+1)+1)^2 nodes.
class GridFunction {
 public:
  explicit GridFunction(unsigned level);
  static GridFunction from(unsigned level, const std::function<double(double, double)>& f);

  unsigned level() const { return level_; }
  double step() const { return h_; }
  std::size_t side() const { return n_; }
  double coordinate(std::size_t i) const { return -1.0 + static_cast<double>(i) * h_; }
  double& at(std::size_t i, std::size_t j) { return values_[j * n_ + i]; }
  double at(std::size_t i, std::size_t j) const { return values_[j * n_ + i]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  // Bilinear; points outside the grid take the value of the nearest edge.
  double interpolate(double x, double y) const;
  // (h^2 sum |f|^p)^(1/p)
  double lp_norm(double p) const;
  bool vanishes_on_boundary() const;

 private:
  unsigned level_;
  double h_;
  std::size_t n_;
  std::vector<double> values_;
};

struct MaxOperatorConfig {
  double eps = 0.25;
  unsigned v_samples = 256;
  unsigned theta_samples = 512;
  unsigned workers = 0;  // 0: hardware concurrency
};

// sup over the v-samples of |midpoint rule in theta of f(x - theta, y - gamma(v, theta))|,
// v and theta in [-eps, eps].
GridFunction maximal_function(const Germ& gamma, const GridFunction& f, const MaxOperatorConfig& config = {});
// Same values by interpolating at every node; used as an independent route.
GridFunction maximal_function_direct(const Germ& gamma, const GridFunction& f,
                                     const MaxOperatorConfig& config = {});

// ||M f||_p / ||f||_p
double discrete_max_operator(const Germ& gamma, const GridFunction& f, double eps, unsigned v_samples,
                             unsigned theta_samples, double p);

struct ProbeReport {
  std::string kind;
  std::string parameter_name;
  std::vector<double> parameters;
  std::vector<double> ratios;
  double p = 2;
  // least squares over the fitted tail
  std::size_t fit_from = 0;
  double fitted_slope = 0;
  double residual = 0;
  Rational predicted_slope;
  std::string provenance;
  double tolerance = 0;
  bool within_tolerance = false;
  std::vector<std::string> notes;
};

struct KnappConfig {
  unsigned grid_level = 9;  // 1024 cells per side
  MaxOperatorConfig op;
  double tolerance = 0.15;
};

std::vector<double> default_knapp_deltas();

// f = indicator of the ball of radius delta; slope of log ratio against log delta.
ProbeReport knapp_probe(const Germ& gamma, double p, const std::vector<double>& deltas = default_knapp_deltas(),
                        const KnappConfig& config = {});

struct ScalingConfig {
  unsigned grid_level = 9;
  // v_samples is replaced by v_per_box * 2^height: the swept band is
  // resolved well below the box height
  MaxOperatorConfig op;
  unsigned v_per_box = 16;
  Rational zeta = Rational(1, 8);
  // box heights 2^-(e j2) relative to the curve range
  std::vector<double> log2_heights = {2, 3, 4, 5, 6};
  // |y| <= core: the part of the swept band (|y| <= 3/4) where the norm is taken
  double core = 0.6;
  double tolerance = 0.15;
};

struct ScalingSetup {
  Rational p0;
  ExponentPair vertex;
  Rational mu;        // j1 / j2 before adding zeta
  Rational exponent;  // q_i + (p_i - p0)(mu + zeta)
  Rational d;         // same with zeta = 0
};

// Vertex of the reduced polyhedron used by the dyadic scaling test.
ScalingSetup scaling_setup(const PuiseuxPoly& g, const Rational& zeta);

// Restricts v ~ 2^-j1, theta ~ 2^-j2 with j1 = (mu + zeta) j2 and compares
// the measured slope in j2 with exponent / p - 1.
ProbeReport scaling_probe(const PuiseuxPoly& g, double p, const ScalingConfig& config = {});

enum class TubeFamily { Lines, Horizontal };
const char* tube_family_name(TubeFamily family);

// Union of 2^k line tubes of width 2^-k with slopes spread over [-1/4, 1/4).
GridFunction line_tubes(unsigned k, unsigned grid_level);
// {|x| <= 1/4, |y| <= 2^-k / 2}
GridFunction horizontal_tube(unsigned k, unsigned grid_level);

struct BlowupConfig {
  unsigned first = 3;
  double p = 3;
  // grid step 2^-(k + extra_levels)
  unsigned extra_levels = 4;
  double eps = 0.25;
  unsigned workers = 0;
};

struct BlowupReport {
  std::string family;
  bool degenerate = false;
  int degenerate_case = 0;
  double p = 3;
  std::vector<unsigned> refinements;
  std::vector<double> widths;
  std::vector<double> ratios;
  std::vector<double> growth;  // ratios[i+1] / ratios[i]
  bool increasing = false;
  double max_over_min = 0;
};

BlowupReport blowup_probe(const Germ& gamma, TubeFamily family, unsigned refinements,
                          const BlowupConfig& config = {});
// Family from the classification: horizontal tubes for case 3, lines otherwise.
BlowupReport degenerate_blowup_probe(const ExpandedGerm& g, const Germ& gamma, unsigned refinements,
                                     const BlowupConfig& config = {});

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y, double* residual = nullptr);

void write_tsv(std::ostream& os, const ProbeReport& report);
void write_tsv(std::ostream& os, const BlowupReport& report);

}  // namespace nc
