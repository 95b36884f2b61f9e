#include "newton_critic/probe.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <thread>

#include "newton_critic/degeneracy.hpp"
#include "newton_critic/error.hpp"
#include "newton_critic/newton.hpp"

namespace nc {

Germ Germ::from_poly(const PuiseuxPoly& g) {
  auto compiled = std::make_shared<CompiledGerm>(g);
  return {[compiled](double v, double t) { return (*compiled)(v, t); }, g, g.to_string()};
}

Germ Germ::from_expression(std::string_view text, unsigned order) {
  ExprAst ast = parse(text);
  return {[ast](double v, double t) { return evaluate_ast(ast, v, t); }, expand(ast, order).poly, to_string(ast)};
}

GridFunction::GridFunction(unsigned level)
    : level_(level), h_(std::ldexp(1.0, -static_cast<int>(level))), n_((std::size_t{2} << level) + 1) {
  if (level > 13) fail(ErrorCode::InvalidArgument, "grid level above 13");
  values_.assign(n_ * n_, 0.0);
}

GridFunction GridFunction::from(unsigned level, const std::function<double(double, double)>& f) {
  GridFunction g(level);
  for (std::size_t j = 0; j < g.n_; ++j)
    for (std::size_t i = 0; i < g.n_; ++i) g.at(i, j) = f(g.coordinate(i), g.coordinate(j));
  return g;
}

double GridFunction::interpolate(double x, double y) const {
  auto locate = [&](double c, std::size_t& i, double& t) {
    double u = (c + 1.0) / h_;
    double top = static_cast<double>(n_ - 1);
    if (u <= 0) {
      i = 0;
      t = 0;
    } else if (u >= top) {
      i = n_ - 2;
      t = 1;
    } else {
      double fl = std::floor(u);
      i = static_cast<std::size_t>(fl);
      if (i > n_ - 2) i = n_ - 2;
      t = u - static_cast<double>(i);
    }
  };
  std::size_t i, j;
  double s, t;
  locate(x, i, s);
  locate(y, j, t);
  return (1 - s) * (1 - t) * at(i, j) + s * (1 - t) * at(i + 1, j) + (1 - s) * t * at(i, j + 1) +
         s * t * at(i + 1, j + 1);
}

double GridFunction::lp_norm(double p) const {
  double sum = 0;
  for (double x : values_) sum += std::pow(std::fabs(x), p);
  return std::pow(sum * h_ * h_, 1.0 / p);
}

bool GridFunction::vanishes_on_boundary() const {
  for (std::size_t k = 0; k < n_; ++k)
    if (at(k, 0) != 0 || at(k, n_ - 1) != 0 || at(0, k) != 0 || at(n_ - 1, k) != 0) return false;
  return true;
}

namespace {

struct Samples {
  std::vector<double> v, theta;
  double dtheta = 0;
  // gamma at (v[a], theta[b]), row a
  std::vector<double> table;
};

Samples make_samples(const Germ& gamma, const MaxOperatorConfig& c) {
  if (!(c.eps > 0) || c.eps > 0.25) fail(ErrorCode::InvalidArgument, "eps must lie in (0, 1/4]");
  if (c.v_samples == 0 || c.theta_samples == 0) fail(ErrorCode::InvalidArgument, "sample counts must be positive");
  Samples s;
  double dv = 2 * c.eps / c.v_samples;
  s.dtheta = 2 * c.eps / c.theta_samples;
  for (unsigned a = 0; a < c.v_samples; ++a) s.v.push_back(-c.eps + (a + 0.5) * dv);
  for (unsigned b = 0; b < c.theta_samples; ++b) s.theta.push_back(-c.eps + (b + 0.5) * s.dtheta);
  s.table.resize(s.v.size() * s.theta.size());
  for (std::size_t a = 0; a < s.v.size(); ++a)
    for (std::size_t b = 0; b < s.theta.size(); ++b) {
      double g = gamma(s.v[a], s.theta[b]);
      if (!std::isfinite(g)) fail(ErrorCode::InvalidArgument, "gamma is not finite on the sample window");
      s.table[a * s.theta.size() + b] = g;
    }
  return s;
}

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned w = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(jobs, 1)));
}

// Runs body(worker, job) for job = worker, worker + W, ...
template <class Body>
void parallel_strided(unsigned workers, std::size_t jobs, Body body) {
  if (workers <= 1) {
    for (std::size_t j = 0; j < jobs; ++j) body(0u, j);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t j = w; j < jobs; j += workers) body(w, j);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

GridFunction maximal_function_direct(const Germ& gamma, const GridFunction& f, const MaxOperatorConfig& config) {
  Samples s = make_samples(gamma, config);
  GridFunction out(f.level());
  std::size_t n = f.side(), nt = s.theta.size();
  unsigned workers = worker_count(config.workers, n);
  parallel_strided(workers, n, [&](unsigned, std::size_t j) {
    double y = f.coordinate(j);
    for (std::size_t i = 0; i < n; ++i) {
      double x = f.coordinate(i), best = 0;
      for (std::size_t a = 0; a < s.v.size(); ++a) {
        const double* row = &s.table[a * nt];
        double sum = 0;
        for (std::size_t b = 0; b < nt; ++b) sum += f.interpolate(x - s.theta[b], y - row[b]);
        best = std::max(best, std::fabs(sum));
      }
      out.at(i, j) = best * s.dtheta;
    }
  });
  return out;
}

GridFunction maximal_function(const Germ& gamma, const GridFunction& f, const MaxOperatorConfig& config) {
  if (!f.vanishes_on_boundary()) return maximal_function_direct(gamma, f, config);
  Samples s = make_samples(gamma, config);
  const std::size_t n = f.side(), nt = s.theta.size();
  const long ln = static_cast<long>(n);
  const double h = f.step();

  // maximal runs of equal nonzero values along rows
  struct Run {
    long i, j, len;
    double value;
  };
  std::vector<Run> support;
  long i_lo = ln, i_hi = -1, j_lo = ln, j_hi = -1;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n;) {
      double x = f.at(i, j);
      if (x == 0) {
        ++i;
        continue;
      }
      std::size_t e = i + 1;
      while (e < n && f.at(e, j) == x) ++e;
      support.push_back({static_cast<long>(i), static_cast<long>(j), static_cast<long>(e - i), x});
      i_lo = std::min(i_lo, static_cast<long>(i));
      i_hi = std::max(i_hi, static_cast<long>(e - 1));
      j_lo = std::min(j_lo, static_cast<long>(j));
      j_hi = std::max(j_hi, static_cast<long>(j));
      i = e;
    }
  GridFunction out(f.level());
  if (support.empty()) return out;

  // Bilinear interpolation at node - shift equals spreading each support value
  // with the same weights to the four nodes around support + shift.
  unsigned workers = worker_count(config.workers, s.v.size());
  std::vector<std::vector<double>> best(workers, std::vector<double>(n * n, 0.0));
  std::vector<std::vector<double>> acc(workers, std::vector<double>(n * n, 0.0));
  parallel_strided(workers, s.v.size(), [&](unsigned w, std::size_t a) {
    std::vector<double>& A = acc[w];
    long bi_lo = ln, bi_hi = -1, bj_lo = ln, bj_hi = -1;
    for (std::size_t b = 0; b < nt; ++b) {
      double ux = s.theta[b] / h, uy = s.table[a * nt + b] / h;
      double fx = std::floor(ux), fy = std::floor(uy);
      long ix = static_cast<long>(fx), iy = static_cast<long>(fy);
      double tx = ux - fx, ty = uy - fy;
      double w00 = (1 - tx) * (1 - ty), w10 = tx * (1 - ty), w01 = (1 - tx) * ty, w11 = tx * ty;
      long ti_lo = i_lo + ix, ti_hi = i_hi + ix + 1, tj_lo = j_lo + iy, tj_hi = j_hi + iy + 1;
      if (ti_hi < 0 || tj_hi < 0 || ti_lo >= ln || tj_lo >= ln) continue;
      bi_lo = std::min(bi_lo, std::max(ti_lo, 0L));
      bi_hi = std::max(bi_hi, std::min(ti_hi, ln - 1));
      bj_lo = std::min(bj_lo, std::max(tj_lo, 0L));
      bj_hi = std::max(bj_hi, std::min(tj_hi, ln - 1));
      if (ti_lo >= 0 && tj_lo >= 0 && ti_hi < ln && tj_hi < ln) {
        long off = iy * ln + ix;
        for (const Run& r : support) {
          double* r0 = &A[static_cast<std::size_t>(r.j * ln + r.i + off)];
          double* r1 = r0 + n;
          double a = w00 * r.value, b = w10 * r.value, c = w01 * r.value, d = w11 * r.value;
          double ab = a + b, cd = c + d;
          r0[0] += a;
          r1[0] += c;
          for (long m = 1; m < r.len; ++m) {
            r0[m] += ab;
            r1[m] += cd;
          }
          r0[r.len] += b;
          r1[r.len] += d;
        }
      } else {
        auto add = [&](long i, long j, double x) {
          if (i >= 0 && j >= 0 && i < ln && j < ln) A[static_cast<std::size_t>(j * ln + i)] += x;
        };
        for (const Run& r : support)
          for (long m = 0; m < r.len; ++m) {
            long i = r.i + m + ix, j = r.j + iy;
            add(i, j, w00 * r.value);
            add(i + 1, j, w10 * r.value);
            add(i, j + 1, w01 * r.value);
            add(i + 1, j + 1, w11 * r.value);
          }
      }
    }
    std::vector<double>& B = best[w];
    for (long j = bj_lo; j <= bj_hi; ++j)
      for (long i = bi_lo; i <= bi_hi; ++i) {
        std::size_t k = static_cast<std::size_t>(j * ln + i);
        B[k] = std::max(B[k], std::fabs(A[k]));
        A[k] = 0;
      }
  });
  for (std::size_t k = 0; k < n * n; ++k) {
    double m = 0;
    for (unsigned w = 0; w < workers; ++w) m = std::max(m, best[w][k]);
    out.values()[k] = m * s.dtheta;
  }
  return out;
}

double discrete_max_operator(const Germ& gamma, const GridFunction& f, double eps, unsigned v_samples,
                             unsigned theta_samples, double p) {
  if (!(p >= 1)) fail(ErrorCode::InvalidArgument, "p must be at least 1");
  double denom = f.lp_norm(p);
  if (denom == 0) fail(ErrorCode::InvalidArgument, "f vanishes on the grid");
  MaxOperatorConfig c;
  c.eps = eps;
  c.v_samples = v_samples;
  c.theta_samples = theta_samples;
  return maximal_function(gamma, f, c).lp_norm(p) / denom;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y, double* residual) {
  if (x.size() != y.size() || x.size() < 2) fail(ErrorCode::InvalidArgument, "slope fit needs two points");
  double n = static_cast<double>(x.size()), mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) fail(ErrorCode::InvalidArgument, "slope fit needs distinct abscissae");
  double slope = sxy / sxx;
  if (residual) {
    double r = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double e = y[i] - (my + slope * (x[i] - mx));
      r += e * e;
    }
    *residual = std::sqrt(r);
  }
  return slope;
}

namespace {

// p as a rational when it is a multiple of 1/64
Rational exact_exponent(double p) {
  double k = std::round(p * 64);
  if (std::fabs(k - p * 64) > 1e-9) fail(ErrorCode::InvalidArgument, "p must be a multiple of 1/64");
  return make_rational(static_cast<long>(k), 64);
}

void fit_tail(ProbeReport& r, const std::vector<double>& x, const std::vector<double>& y) {
  std::size_t n = x.size(), keep = (n + 1) / 2;
  r.fit_from = n - keep;
  if (keep < 2) r.fit_from = n >= 2 ? n - 2 : 0;
  std::vector<double> xs(x.begin() + static_cast<long>(r.fit_from), x.end());
  std::vector<double> ys(y.begin() + static_cast<long>(r.fit_from), y.end());
  r.fitted_slope = least_squares_slope(xs, ys, &r.residual);
  r.within_tolerance = std::fabs(r.fitted_slope - to_double(r.predicted_slope)) <= r.tolerance;
}

bool depends_on_v(const Germ& gamma, double eps) {
  if (gamma.poly) return !d_v(*gamma.poly).is_zero();
  for (int a = 1; a <= 8; ++a)
    for (int b = -8; b <= 8; ++b) {
      double v = eps * a / 8, t = eps * b / 8;
      double g0 = gamma(0, t), g1 = gamma(v, t), g2 = gamma(-v, t);
      double scale = std::max({1.0, std::fabs(g0), std::fabs(g1), std::fabs(g2)});
      if (std::fabs(g1 - g0) > 1e-12 * scale || std::fabs(g2 - g0) > 1e-12 * scale) return true;
    }
  return false;
}

}  // namespace

std::vector<double> default_knapp_deltas() { return {0.125, 0.0625, 0.03125, 0.015625}; }

ProbeReport knapp_probe(const Germ& gamma, double p, const std::vector<double>& deltas, const KnappConfig& config) {
  if (!(p >= 1)) fail(ErrorCode::InvalidArgument, "p must be at least 1");
  if (deltas.size() < 3) fail(ErrorCode::InvalidArgument, "the Knapp probe needs at least three radii");
  if (!depends_on_v(gamma, config.op.eps))
    fail(ErrorCode::DegenerateInput, "the Jacobian d gamma / d v vanishes identically");
  ProbeReport r;
  r.kind = "knapp";
  r.parameter_name = "delta";
  r.p = p;
  r.tolerance = config.tolerance;
  r.predicted_slope = Rational(1) - Rational(2) / exact_exponent(p);
  r.provenance = "ball indicator: M f >~ delta on a set of measure ~ 1, so the ratio ~ delta^(1 - 2/p)";
  std::vector<double> lx, ly;
  for (double d : deltas) {
    if (!(d > 0) || d >= 0.5) fail(ErrorCode::InvalidArgument, "radii must lie in (0, 1/2)");
    GridFunction f = GridFunction::from(config.grid_level, [d](double x, double y) {
      return x * x + y * y <= d * d ? 1.0 : 0.0;
    });
    if (f.lp_norm(1) == 0) fail(ErrorCode::InvalidArgument, "radius below the grid step");
    double ratio = maximal_function(gamma, f, config.op).lp_norm(p) / f.lp_norm(p);
    r.parameters.push_back(d);
    r.ratios.push_back(ratio);
    lx.push_back(std::log(d));
    ly.push_back(std::log(ratio));
  }
  fit_tail(r, lx, ly);
  return r;
}

ScalingSetup scaling_setup(const PuiseuxPoly& g, const Rational& zeta) {
  if (!(zeta > 0)) fail(ErrorCode::InvalidArgument, "zeta must be positive");
  ExtRational ep0 = p0(g);
  if (ep0.is_infinite()) fail(ErrorCode::InvalidArgument, "no pure-v term: the scaling test needs p0 < infinity");
  NewtonDiagram d = reduced_diagram(g);
  if (d.vertices.empty()) fail(ErrorCode::EmptyReducedSupport, "reduced support is empty");
  ScalingSetup s;
  s.p0 = ep0.value();
  if (s.p0 < d.vertices.front().p)
    fail(ErrorCode::UnboundedDistance, "the vertical line through p0 misses the reduced polyhedron");
  std::size_t i = 0;
  while (i + 1 < d.vertices.size() && d.vertices[i + 1].p <= s.p0) ++i;
  s.vertex = d.vertices[i];
  if (i + 1 < d.vertices.size()) {
    const ExponentPair& next = d.vertices[i + 1];
    s.mu = Rational(static_cast<long>(s.vertex.q) - static_cast<long>(next.q)) / (next.p - s.vertex.p);
  } else {
    s.mu = Rational(0);
  }
  s.d = Rational(s.vertex.q) + (s.vertex.p - s.p0) * s.mu;
  s.exponent = Rational(s.vertex.q) + (s.vertex.p - s.p0) * (s.mu + zeta);
  ExtRational entry = entry_height(d, s.p0);
  if (entry.is_infinite() || entry.value() != s.d)
    fail(ErrorCode::InvariantViolation, "scaling vertex disagrees with the entry height");
  return s;
}

ProbeReport scaling_probe(const PuiseuxPoly& g, double p, const ScalingConfig& config) {
  if (!(p >= 1)) fail(ErrorCode::InvalidArgument, "p must be at least 1");
  if (config.log2_heights.size() < 3) fail(ErrorCode::InvalidArgument, "the scaling probe needs three heights");
  ScalingSetup s = scaling_setup(g, config.zeta);
  if (!(s.exponent > 0)) fail(ErrorCode::InvalidArgument, "scaling exponent is not positive; decrease zeta");
  double c0 = g.coefficient(s.p0, 0).to_double();
  double p0d = to_double(s.p0), e = to_double(s.exponent), mu = to_double(s.mu + config.zeta);
  double eps = config.op.eps;
  double v_hi = std::pow(2.0, 1.0 / p0d);
  double sy = 1.5 / std::fabs(c0), mid = 1.5 * c0;

  struct Term {
    double c, p;
    unsigned q;
  };
  std::vector<Term> terms;
  {
    const PuiseuxPoly::Terms& ts = g.terms();
    for (const auto& [k, c] : ts) terms.push_back({c.to_double(), to_double(k.p), k.q});
  }

  ProbeReport r;
  r.kind = "scaling";
  r.parameter_name = "j2";
  r.p = p;
  r.tolerance = config.tolerance;
  r.predicted_slope = s.exponent / exact_exponent(p) - Rational(1);
  r.provenance = "vertex (" + to_string(s.vertex.p) + ", " + std::to_string(s.vertex.q) + "), p0 = " +
                 to_string(s.p0) + ", j1/j2 = " + to_string(s.mu) + " + " + to_string(config.zeta) +
                 ": slope = (" + to_string(s.exponent) + ")/p - 1";
  std::vector<double> xs, ys;
  for (double L : config.log2_heights) {
    double j2 = L / e, j1 = mu * j2;
    std::vector<Term> scaled = terms;
    for (Term& t : scaled) t.c *= std::exp2((p0d - t.p) * j1 - t.q * j2);
    Germ scaled_germ;
    scaled_germ.eval = [scaled, eps, v_hi, sy, mid](double v, double t) {
      double vv = 1 + (v + eps) / (2 * eps) * (v_hi - 1), tt = 1.5 + t / (2 * eps);
      double sum = 0;
      for (const Term& term : scaled) sum += term.c * std::pow(vv, term.p) * std::pow(tt, static_cast<double>(term.q));
      return sy * (sum - mid);
    };
    double half = sy * std::exp2(-L) / 2;
    GridFunction f = GridFunction::from(config.grid_level, [&](double x, double y) {
      return std::fabs(x) <= eps && std::fabs(y) <= half ? 1.0 : 0.0;
    });
    if (f.lp_norm(1) == 0) fail(ErrorCode::InvalidArgument, "box below the grid step");
    // M f >~ const on the band swept by the pure-v term; the norm is taken there.
    MaxOperatorConfig op = config.op;
    op.v_samples = static_cast<unsigned>(std::min(65536.0, std::ceil(config.v_per_box * std::exp2(L))));
    GridFunction m = maximal_function(scaled_germ, f, op);
    for (std::size_t j = 0; j < m.side(); ++j)
      if (std::fabs(m.coordinate(j)) > config.core)
        for (std::size_t i = 0; i < m.side(); ++i) m.at(i, j) = 0;
    double ratio = m.lp_norm(p) / f.lp_norm(p);
    r.parameters.push_back(j2);
    r.ratios.push_back(std::exp2(-j2) * ratio);
    xs.push_back(j2);
    ys.push_back(std::log2(r.ratios.back()));
  }
  fit_tail(r, xs, ys);
  return r;
}

const char* tube_family_name(TubeFamily family) {
  return family == TubeFamily::Lines ? "lines" : "horizontal";
}

GridFunction line_tubes(unsigned k, unsigned grid_level) {
  if (k == 0 || k > 12) fail(ErrorCode::InvalidArgument, "tube level out of range");
  unsigned N = 1u << k;
  // Y = s X + a(s), X in [0, 1]: offsets a(s) = -sum_i eps_i 2^-i (i/k) over the
  // binary digits of s compress the union of the tubes to area ~ 1/k.
  std::vector<double> slope(N), offset(N);
  for (unsigned j = 0; j < N; ++j) {
    slope[j] = static_cast<double>(j) / N;
    double a = 0;
    for (unsigned i = 1; i <= k; ++i)
      if ((j >> (k - i)) & 1u) a -= std::ldexp(1.0, -static_cast<int>(i)) * i / k;
    offset[j] = a;
  }
  const double width = std::ldexp(1.0, -static_cast<int>(k));
  return GridFunction::from(grid_level, [&](double x, double y) {
    double X = x + 0.5;
    if (X < 0 || X > 1) return 0.0;
    // x = X - 1/2, y = (Y - X/2)/2 + 1/4: slopes (s - 1/2)/2 in [-1/4, 1/4)
    for (unsigned j = 0; j < N; ++j) {
      double yl = (slope[j] * X + offset[j] - X / 2) / 2 + 0.25;
      if (std::fabs(y - yl) <= width / 2) return 1.0;
    }
    return 0.0;
  });
}

GridFunction horizontal_tube(unsigned k, unsigned grid_level) {
  double half = std::ldexp(1.0, -static_cast<int>(k)) / 2;
  return GridFunction::from(grid_level, [half](double x, double y) {
    return std::fabs(x) <= 0.25 && std::fabs(y) <= half ? 1.0 : 0.0;
  });
}

BlowupReport blowup_probe(const Germ& gamma, TubeFamily family, unsigned refinements, const BlowupConfig& config) {
  if (refinements < 3) fail(ErrorCode::InvalidArgument, "the blow-up probe needs at least three refinements");
  if (!(config.p >= 1)) fail(ErrorCode::InvalidArgument, "p must be at least 1");
  BlowupReport r;
  r.family = tube_family_name(family);
  r.p = config.p;
  for (unsigned t = 0; t < refinements; ++t) {
    unsigned k = config.first + t, level = k + config.extra_levels;
    GridFunction f = family == TubeFamily::Lines ? line_tubes(k, level) : horizontal_tube(k, level);
    MaxOperatorConfig op;
    op.eps = config.eps;
    op.theta_samples = static_cast<unsigned>(std::ceil(4 * config.eps / f.step()));
    op.v_samples = std::max(1u, op.theta_samples / 2);
    op.workers = config.workers;
    double ratio = maximal_function(gamma, f, op).lp_norm(config.p) / f.lp_norm(config.p);
    r.refinements.push_back(k);
    r.widths.push_back(std::ldexp(1.0, -static_cast<int>(k)));
    r.ratios.push_back(ratio);
  }
  r.increasing = true;
  for (std::size_t i = 1; i < r.ratios.size(); ++i) {
    r.growth.push_back(r.ratios[i] / r.ratios[i - 1]);
    if (!(r.ratios[i] > r.ratios[i - 1])) r.increasing = false;
  }
  auto [lo, hi] = std::minmax_element(r.ratios.begin(), r.ratios.end());
  r.max_over_min = *hi / *lo;
  return r;
}

BlowupReport degenerate_blowup_probe(const ExpandedGerm& g, const Germ& gamma, unsigned refinements,
                                     const BlowupConfig& config) {
  Classification c = classify(g);
  TubeFamily family = c.degenerate() && c.degenerate_case == 3 ? TubeFamily::Horizontal : TubeFamily::Lines;
  BlowupReport r = blowup_probe(gamma, family, refinements, config);
  r.degenerate = c.degenerate();
  r.degenerate_case = c.degenerate_case;
  return r;
}

void write_tsv(std::ostream& os, const ProbeReport& report) {
  os << report.parameter_name << "\tratio\n" << std::setprecision(17);
  for (std::size_t i = 0; i < report.parameters.size(); ++i)
    os << report.parameters[i] << '\t' << report.ratios[i] << '\n';
}

void write_tsv(std::ostream& os, const BlowupReport& report) {
  os << "k\twidth\tratio\n" << std::setprecision(17);
  for (std::size_t i = 0; i < report.ratios.size(); ++i)
    os << report.refinements[i] << '\t' << report.widths[i] << '\t' << report.ratios[i] << '\n';
}

}  // namespace nc
