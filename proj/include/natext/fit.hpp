#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "natext/lexicon.hpp"
#include "natext/walks.hpp"

namespace natext {

namespace detail {

// Ordinary least squares for up to four coefficients, solved from the normal
// equations in extended precision. rows[i] holds the regressors of point i.
template <std::size_t P>
struct LinearFitResult {
  std::array<double, P> coef{};
  std::array<double, P> se{};
  double sse = 0;
  double sst = 0;
  double r2 = 1;
  std::size_t n = 0;
};

template <std::size_t P>
LinearFitResult<P> linear_least_squares(std::span<const std::array<double, P>> rows,
                                        std::span<const double> y) {
  const std::size_t n = rows.size();
  if (n < P) throw std::invalid_argument("not enough points for the requested fit");

  std::array<std::array<long double, P>, P> ata{};
  std::array<long double, P> atb{};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < P; ++a) {
      atb[a] += static_cast<long double>(rows[i][a]) * y[i];
      for (std::size_t b = a; b < P; ++b)
        ata[a][b] += static_cast<long double>(rows[i][a]) * rows[i][b];
    }
  }
  for (std::size_t a = 0; a < P; ++a)
    for (std::size_t b = 0; b < a; ++b) ata[a][b] = ata[b][a];

  // Gauss-Jordan with partial pivoting, keeping the inverse for the SEs.
  std::array<std::array<long double, 2 * P>, P> m{};
  for (std::size_t i = 0; i < P; ++i) {
    for (std::size_t j = 0; j < P; ++j) m[i][j] = ata[i][j];
    m[i][P + i] = 1;
  }
  for (std::size_t col = 0; col < P; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < P; ++r)
      if (std::abs(static_cast<double>(m[r][col])) > std::abs(static_cast<double>(m[piv][col])))
        piv = r;
    if (m[piv][col] == 0) throw std::invalid_argument("degenerate design matrix");
    std::swap(m[piv], m[col]);
    const long double d = m[col][col];
    for (auto& v : m[col]) v /= d;
    for (std::size_t r = 0; r < P; ++r) {
      if (r == col) continue;
      const long double f = m[r][col];
      if (f == 0) continue;
      for (std::size_t j = 0; j < 2 * P; ++j) m[r][j] -= f * m[col][j];
    }
  }

  LinearFitResult<P> out;
  out.n = n;
  for (std::size_t a = 0; a < P; ++a) {
    long double c = 0;
    for (std::size_t b = 0; b < P; ++b) c += m[a][P + b] * atb[b];
    out.coef[a] = static_cast<double>(c);
  }

  long double sse = 0, sy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    long double pred = 0;
    for (std::size_t a = 0; a < P; ++a) pred += static_cast<long double>(out.coef[a]) * rows[i][a];
    const long double r = y[i] - pred;
    sse += r * r;
    sy += y[i];
    syy += static_cast<long double>(y[i]) * y[i];
  }
  const long double sst = syy - sy * sy / static_cast<long double>(n);
  out.sse = static_cast<double>(sse);
  out.sst = static_cast<double>(sst);
  out.r2 = sst > 0 ? static_cast<double>(1.0L - sse / sst) : 1.0;
  const long double sigma2 = n > P ? sse / static_cast<long double>(n - P) : 0.0L;
  for (std::size_t a = 0; a < P; ++a)
    out.se[a] = static_cast<double>(std::sqrt(static_cast<double>(sigma2 * m[a][P + a])));
  return out;
}

struct Line {
  double slope = 0, intercept = 0, sse = 0, sst = 0, r2 = 1, se_slope = 0;
  std::size_t n = 0;
};

inline Line fit_line(std::span<const double> x, std::span<const double> y) {
  std::vector<std::array<double, 2>> rows(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) rows[i] = {1.0, x[i]};
  auto r = linear_least_squares<2>(rows, y);
  return {r.coef[1], r.coef[0], r.sse, r.sst, r.r2, r.se[1], r.n};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Power law  y ~ K x^beta
// ---------------------------------------------------------------------------

struct PowerLawFit {
  double amplitude = 0;      // K
  double exponent = 0;       // beta
  double r2 = 1;             // about the mean of the fitted response
  double se_log_amplitude = 0;
  double se_exponent = 0;
};

enum class PowerLawWeighting {
  log_equal,     // OLS on (log x, log y): every decade point counts equally
  linear_scale,  // least squares on y itself: the large-amplitude tail dominates
};

inline PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y,
                                 PowerLawWeighting weighting = PowerLawWeighting::log_equal) {
  if (x.size() != y.size()) throw std::invalid_argument("mismatched point arrays");
  if (x.size() < 2) throw std::invalid_argument("power-law fit needs at least two points");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] <= 0 || y[i] <= 0)
      throw std::domain_error("power-law fit requires positive data");

  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const auto line = detail::fit_line(lx, ly);
  PowerLawFit fit;
  fit.amplitude = std::exp(line.intercept);
  fit.exponent = line.slope;
  fit.r2 = line.r2;
  fit.se_exponent = line.se_slope;
  {
    std::vector<std::array<double, 2>> rows(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) rows[i] = {1.0, lx[i]};
    fit.se_log_amplitude = detail::linear_least_squares<2>(rows, ly).se[0];
  }
  if (weighting == PowerLawWeighting::log_equal) return fit;

  // Refine in linear space with damped Gauss-Newton, seeded by the log fit.
  double logK = line.intercept, beta = line.slope;
  auto sse_of = [&](double lk, double b) {
    long double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const long double r = y[i] - std::exp(lk + b * lx[i]);
      s += r * r;
    }
    return static_cast<double>(s);
  };
  double sse = sse_of(logK, beta);
  for (int iter = 0; iter < 200; ++iter) {
    // Jacobian of the model f = exp(logK + beta lx) wrt (logK, beta).
    long double jtj00 = 0, jtj01 = 0, jtj11 = 0, jtr0 = 0, jtr1 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const long double f = std::exp(logK + beta * lx[i]);
      const long double r = y[i] - f;
      const long double j0 = f, j1 = f * lx[i];
      jtj00 += j0 * j0;
      jtj01 += j0 * j1;
      jtj11 += j1 * j1;
      jtr0 += j0 * r;
      jtr1 += j1 * r;
    }
    const long double det = jtj00 * jtj11 - jtj01 * jtj01;
    if (det == 0) break;
    double dk = static_cast<double>((jtj11 * jtr0 - jtj01 * jtr1) / det);
    double db = static_cast<double>((jtj00 * jtr1 - jtj01 * jtr0) / det);
    double step = 1;
    while (step > 1e-12 && sse_of(logK + step * dk, beta + step * db) > sse)
      step /= 2;
    logK += step * dk;
    beta += step * db;
    const double next = sse_of(logK, beta);
    const bool tiny = std::abs(step * dk) < 1e-12 && std::abs(step * db) < 1e-12;
    sse = next;
    if (tiny) break;
  }
  fit.amplitude = std::exp(logK);
  fit.exponent = beta;
  long double sy = 0, syy = 0;
  for (double v : y) {
    sy += v;
    syy += static_cast<long double>(v) * v;
  }
  const long double sst = syy - sy * sy / static_cast<long double>(y.size());
  fit.r2 = sst > 0 ? static_cast<double>(1.0L - static_cast<long double>(sse) / sst) : 1.0;
  return fit;
}

// ---------------------------------------------------------------------------
// Quadratic-in-log rank-frequency fit  log f = a (log r)^2 + b log r + c
// ---------------------------------------------------------------------------

struct QuadraticLogFit {
  double quadratic = 0;  // a
  double linear = 0;     // b
  double constant = 0;   // c
  double r2 = 1;
  double log_base = 10;
};

inline QuadraticLogFit fit_log_quadratic(std::span<const double> x, std::span<const double> y,
                                         double log_base) {
  if (x.size() != y.size()) throw std::invalid_argument("mismatched point arrays");
  if (x.size() < 4) throw std::invalid_argument("quadratic log fit needs at least four points");
  const double lb = std::log(log_base);
  std::vector<std::array<double, 3>> rows(x.size());
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0 || y[i] <= 0) throw std::domain_error("log fit requires positive data");
    const double lr = std::log(x[i]) / lb;
    rows[i] = {1.0, lr, lr * lr};
    ly[i] = std::log(y[i]) / lb;
  }
  const auto r = detail::linear_least_squares<3>(rows, ly);
  return {r.coef[2], r.coef[1], r.coef[0], r.r2, log_base};
}

inline QuadraticLogFit fit_zipf_quadratic(const RankSpectrum& spectrum, double log_base = 10.0) {
  std::vector<double> r, f;
  for (std::size_t i = 0; i < spectrum.entries.size(); ++i) {
    if (spectrum.entries[i].frequency <= 0) continue;
    r.push_back(static_cast<double>(i + 1));
    f.push_back(spectrum.entries[i].frequency);
  }
  return fit_log_quadratic(r, f, log_base);
}

// ---------------------------------------------------------------------------
// Two-segment power law with a crossover
// ---------------------------------------------------------------------------

struct SegmentedFit {
  double gamma1 = 0, gamma2 = 0;     // slopes in log-log
  double crossover = 0;              // first lag of the upper segment
  double intercept1 = 0, intercept2 = 0;  // log10 intercepts
  double r2_low = 1, r2_high = 1;
  double sse = 0;                    // total over both segments
  double half_width1 = 0, half_width2 = 0;  // 95% normal half-widths
  bool crossover_detected = false;
};

// Grid search of the breakpoint over the observed lags with at least four
// points per side; each side gets an independent line in log-log. Equal-SSE
// ties resolve to the smallest crossover. When splitting improves the
// one-line SSE by less than 5%, the curve is reported as crossover-free.
inline SegmentedFit fit_segmented(const MsdCurve& curve) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < curve.lags.size(); ++i) {
    if (curve.values[i] <= 0) continue;
    x.push_back(std::log10(static_cast<double>(curve.lags[i])));
    y.push_back(std::log10(curve.values[i]));
  }
  const std::size_t m = x.size();
  if (m < 8) throw std::invalid_argument("segmented fit needs at least eight positive lags");
  if (x.back() - x.front() < 2.0)
    throw std::invalid_argument("segmented fit needs lags spanning two decades");

  const auto whole = detail::fit_line(x, y);

  constexpr std::size_t kMinSide = 4;
  struct Best {
    double sse = std::numeric_limits<double>::infinity();
    std::size_t split = 0;
    detail::Line low, high;
  } best;
  for (std::size_t s = kMinSide; s + kMinSide <= m; ++s) {
    const auto low = detail::fit_line(std::span(x).first(s), std::span(y).first(s));
    const auto high = detail::fit_line(std::span(x).subspan(s), std::span(y).subspan(s));
    const double total = low.sse + high.sse;
    if (total < best.sse) best = {total, s, low, high};
  }

  SegmentedFit fit;
  fit.gamma1 = best.low.slope;
  fit.gamma2 = best.high.slope;
  fit.intercept1 = best.low.intercept;
  fit.intercept2 = best.high.intercept;
  fit.r2_low = best.low.r2;
  fit.r2_high = best.high.r2;
  fit.sse = best.sse;
  fit.crossover = std::pow(10.0, x[best.split]);
  fit.half_width1 = 1.96 * best.low.se_slope;
  fit.half_width2 = 1.96 * best.high.se_slope;
  fit.crossover_detected = best.sse < 0.95 * whole.sse;
  if (!fit.crossover_detected) {
    // Single-regime curve: both exponents are the common slope.
    fit.gamma1 = fit.gamma2 = whole.slope;
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Auxiliary parametric fits
// ---------------------------------------------------------------------------

// h(n) ~ a + b log2(log2 n)
struct EntropyGrowthFit {
  double offset = 0;  // a
  double slope = 0;   // b
  double r2 = 1;
};

inline EntropyGrowthFit fit_entropy_growth(std::span<const double> n, std::span<const double> h) {
  if (n.size() != h.size()) throw std::invalid_argument("mismatched point arrays");
  if (n.size() < 3) throw std::invalid_argument("entropy growth fit needs at least three points");
  std::vector<double> u(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] < 3) throw std::domain_error("entropy growth fit needs n >= 3");
    u[i] = std::log2(std::log2(n[i]));
  }
  const double u0 = u.front();
  const bool constant_u =
      std::all_of(u.begin(), u.end(), [&](double v) { return std::abs(v - u0) < 1e-12; });
  if (constant_u) {
    double mean = 0;
    for (double v : h) mean += v;
    return {mean / static_cast<double>(h.size()), 0.0, 1.0};
  }
  const auto line = detail::fit_line(u, h);
  return {line.intercept, line.slope, line.r2};
}

// CR(n) ~ a + b/n^c + d/log n
struct CrCurveFit {
  double a = 0, b = 0, c = 0, d = 0;
  double sse = 0;
  double r2 = 1;
  bool converged = false;
  bool degenerate = false;
  int iterations = 0;
};

// Damped Gauss-Newton over the single nonlinear parameter c with an inner
// linear solve for (a, b, d); multi-started over a few initial exponents.
inline CrCurveFit fit_cr_curve(std::span<const double> n, std::span<const double> cr) {
  if (n.size() != cr.size()) throw std::invalid_argument("mismatched point arrays");
  if (n.size() < 5) throw std::invalid_argument("CR curve fit needs at least five points");
  for (double v : n)
    if (v <= 1) throw std::domain_error("CR curve fit needs n > 1");

  long double sy = 0, syy = 0;
  for (double v : cr) {
    sy += v;
    syy += static_cast<long double>(v) * v;
  }
  const long double sst = syy - sy * sy / static_cast<long double>(cr.size());
  if (sst <= 0) {
    CrCurveFit flat;
    flat.a = static_cast<double>(sy / static_cast<long double>(cr.size()));
    flat.degenerate = true;
    flat.converged = true;
    return flat;
  }

  auto inner = [&](double c) {
    std::vector<std::array<double, 3>> rows(n.size());
    for (std::size_t i = 0; i < n.size(); ++i)
      rows[i] = {1.0, std::pow(n[i], -c), 1.0 / std::log(n[i])};
    return detail::linear_least_squares<3>(rows, cr);
  };

  CrCurveFit best;
  best.sse = std::numeric_limits<double>::infinity();
  for (double c0 : {0.25, 0.5, 1.0, 2.0}) {
    double c = c0;
    auto lin = inner(c);
    double sse = lin.sse;
    bool converged = false;
    int iter = 0;
    for (; iter < 1000; ++iter) {
      // Residual derivative wrt c: d/dc [b n^-c] = -b ln(n) n^-c.
      const double b = lin.coef[1];
      long double jtj = 0, jtr = 0;
      for (std::size_t i = 0; i < n.size(); ++i) {
        const double pred =
            lin.coef[0] + b * std::pow(n[i], -c) + lin.coef[2] / std::log(n[i]);
        const double r = cr[i] - pred;
        const double j = -b * std::log(n[i]) * std::pow(n[i], -c);
        jtj += static_cast<long double>(j) * j;
        jtr += static_cast<long double>(j) * r;
      }
      if (jtj == 0) break;
      double dc = static_cast<double>(jtr / jtj);
      double step = 1;
      while (step > 1e-14) {
        const double cand = c + step * dc;
        if (cand > 0 && cand < 64) {
          const auto trial = inner(cand);
          if (trial.sse <= sse) break;
        }
        step /= 2;
      }
      const double applied = step * dc;
      c += applied;
      lin = inner(c);
      sse = lin.sse;
      if (std::abs(applied) < 1e-10) {
        converged = true;
        break;
      }
    }
    if (sse < best.sse) {
      best.a = lin.coef[0];
      best.b = lin.coef[1];
      best.c = c;
      best.d = lin.coef[2];
      best.sse = sse;
      best.converged = converged;
      best.iterations = iter;
    }
  }
  best.r2 = static_cast<double>(1.0L - static_cast<long double>(best.sse) / sst);
  return best;
}

}  // namespace natext
