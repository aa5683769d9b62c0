#include "anytime/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace anytime {

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("binary_entropy: x outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double binary_entropy_inv(double y) {
  if (y < 0.0 || y > 1.0) throw std::invalid_argument("binary_entropy_inv: y outside [0,1]");
  if (y == 0.0) return 0.0;
  if (y == 1.0) return 0.5;
  double lo = 0.0, hi = 0.5;
  // H is increasing on [0, 1/2]; plain bisection is plenty accurate.
  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    double mid = 0.5 * (lo + hi);
    (binary_entropy(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double kl_bits(double a, double b) {
  if (a < 0.0 || a > 1.0 || b < 0.0 || b > 1.0)
    throw std::invalid_argument("kl_bits: arguments outside [0,1]");
  auto term = [](double p, double q) {
    if (p == 0.0) return 0.0;
    if (q == 0.0) return std::numeric_limits<double>::infinity();
    return p * std::log2(p / q);
  };
  return term(a, b) + term(1.0 - a, 1.0 - b);
}

double bhattacharyya(const ChannelSpec& ch) {
  if (ch.eps < 0.0 || ch.eps > 1.0)
    throw std::invalid_argument("bhattacharyya: eps outside [0,1]");
  switch (ch.kind) {
    case ChannelKind::BEC:
      return ch.eps;
    case ChannelKind::BSC:
      return 2.0 * std::sqrt(ch.eps * (1.0 - ch.eps));
  }
  throw std::invalid_argument("bhattacharyya: unknown channel kind");
}

CodeRegion ensemble_region(double zeta, double p, double R) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("ensemble_region: p outside (0,1)");
  if (zeta < 0.0 || zeta >= 1.0)
    throw std::invalid_argument("ensemble_region: zeta outside [0,1)");
  if (R < 0.0 || R > 1.0) throw std::invalid_argument("ensemble_region: R outside [0,1]");
  CodeRegion out;
  const double denom = std::log2(1.0 / (1.0 - p));
  out.rate_max = 1.0 - std::log2(1.0 + zeta) / denom;
  const double gap = std::pow(1.0 - p, -(1.0 - R)) - 1.0;
  out.exponent_max =
      zeta == 0.0 ? std::numeric_limits<double>::infinity()
                  : binary_entropy_inv(1.0 - R) * (std::log2(1.0 / zeta) + std::log2(gap));
  out.feasible = R < out.rate_max;
  return out;
}

CodeRegion bsc_ml_region(double eps, double R) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("bsc_ml_region: eps outside (0,1)");
  if (R < 0.0 || R > 1.0) throw std::invalid_argument("bsc_ml_region: R outside [0,1]");
  CodeRegion out;
  out.rate_max = 1.0 - binary_entropy(eps);
  out.exponent_max = kl_bits(binary_entropy_inv(1.0 - R), std::min(eps, 1.0 - eps));
  out.feasible = R < out.rate_max;
  return out;
}

double spectral_radius_nonneg(const std::vector<double>& c, double tol) {
  double sum = 0.0;
  for (double v : c) {
    if (v < 0.0) throw std::invalid_argument("spectral_radius_nonneg: negative coefficient");
    sum += v;
  }
  if (sum == 0.0) return 0.0;
  // f(x) = x^m - sum c_i x^{m-i} is negative at 0+ and positive past the
  // unique positive root; f(1 + sum) > 0 by the Cauchy bound.
  auto f = [&](double x) {
    double acc = 1.0;
    for (double v : c) acc = acc * x - v;
    return acc;
  };
  double lo = 0.0, hi = std::max(1.0, 1.0 + sum);
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // double resolution exhausted
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<std::complex<double>> poly_roots(const std::vector<double>& c) {
  const std::size_t m = c.size();
  if (m == 0) return {};
  using C = std::complex<double>;
  auto eval = [&](C x) {
    C acc(1.0, 0.0);
    for (double v : c) acc = acc * x + v;
    return acc;
  };
  double scale = 1.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  auto rel_residual = [&](C z) {
    double mag = 1.0, denom = 1.0;
    for (double v : c) {
      denom = denom * std::abs(z) + std::abs(v);
      mag = mag * std::abs(z);
    }
    (void)mag;
    return std::abs(eval(z)) / std::max(denom, 1.0);
  };

  std::vector<C> z(m);
  const C seed(0.4, 0.9);  // standard asymmetric start, avoids real-axis traps
  C acc(1.0, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    acc *= seed;
    z[i] = acc * std::max(1.0, std::pow(scale, 1.0 / static_cast<double>(m)));
  }

  for (int it = 0; it < 2000; ++it) {
    double step = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      C denom(1.0, 0.0);
      for (std::size_t j = 0; j < m; ++j)
        if (j != i) denom *= z[i] - z[j];
      if (std::abs(denom) == 0.0) {
        z[i] += C(1e-8, 1e-8);
        continue;
      }
      C delta = eval(z[i]) / denom;
      z[i] -= delta;
      step = std::max(step, std::abs(delta));
    }
    if (step < 1e-14 * std::max(1.0, std::abs(z[0]))) break;
  }

  double worst = 0.0;
  for (C r : z) worst = std::max(worst, rel_residual(r));
  if (worst > 1e-9)
    throw std::runtime_error("poly_roots: iteration did not converge, residual " +
                             std::to_string(worst));
  return z;
}

double spectral_radius(const std::vector<double>& a) {
  double r = 0.0;
  for (const auto& z : poly_roots(a)) r = std::max(r, std::abs(z));
  return r;
}

double fujiwara_bound(const std::vector<double>& c) {
  const std::size_t m = c.size();
  if (m == 0) return 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i)
    best = std::max(best, std::pow(std::abs(c[i]), 1.0 / static_cast<double>(i + 1)));
  best = std::max(best, std::pow(std::abs(c[m - 1]) / 2.0, 1.0 / static_cast<double>(m)));
  return 2.0 * best;
}

SpectralReport spectral_report(const std::vector<double>& a) {
  if (a.empty()) throw std::invalid_argument("spectral_report: empty plant");
  SpectralReport rep;
  rep.coeffs = a;
  std::vector<double> mag(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) mag[i] = std::abs(a[i]);
  rep.lambda_fbar = spectral_radius_nonneg(mag);
  rep.lambda_f = spectral_radius(a);
  rep.fujiwara = fujiwara_bound(a);
  return rep;
}

namespace {

// Smallest r in [0, 64/n] with radius(r) < 1, to 1e-6. radius() must be
// nonincreasing in r.
template <typename F>
double bisect_rate(unsigned n, F radius) {
  double lo = 0.0, hi = 64.0 / n;
  if (radius(lo) < 1.0) return 0.0;
  if (radius(hi) >= 1.0) return hi;
  while (hi - lo > 1e-6 / n) {
    double mid = 0.5 * (lo + hi);
    (radius(mid) < 1.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ThresholdReport cuboid_thresholds(const std::vector<double>& a, unsigned n,
                                  bool observer_knows_u, double rho) {
  if (a.empty() || n == 0) throw std::invalid_argument("cuboid_thresholds: bad inputs");
  const std::size_t m = a.size();
  std::vector<double> mag(m);
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) sum += mag[i] = std::abs(a[i]);

  ThresholdReport rep;
  rep.formula = observer_knows_u ? "cuboid-known-u" : "cuboid";
  rep.n = n;
  rep.rho = rho;
  rep.lambda = spectral_radius_nonneg(mag);
  rep.exponent = (rho / n) * std::log2(std::max(rep.lambda, 1e-300));
  if (!observer_knows_u) {
    rep.rate = std::log2(sum) / n;
    rep.rate_upper = rep.rate;
    return rep;
  }
  rep.rate = bisect_rate(n, [&](double r) {
    std::vector<double> c(mag);
    const double shrink = std::exp2(-static_cast<double>(n) * r);
    for (double& v : c) v *= shrink;
    return spectral_radius_nonneg(c);
  });
  double peak = mag[m - 1] * std::exp2(static_cast<double>(m - 1));
  for (std::size_t i = 0; i + 1 < m; ++i)
    peak = std::max(peak, mag[i] * std::exp2(static_cast<double>(i + 1)));
  rep.rate_upper = std::log2(peak) / n;
  return rep;
}

ThresholdReport ellipsoid_thresholds(const std::vector<double>& a, unsigned n,
                                     bool observer_knows_u, double rho) {
  if (a.empty() || n == 0) throw std::invalid_argument("ellipsoid_thresholds: bad inputs");
  const std::size_t m = a.size();
  if (m < 2)
    throw std::invalid_argument(
        "ellipsoid_thresholds: need m >= 2; the box thresholds cover scalar plants");
  const double theta = static_cast<double>(m) / (m - 1.0);
  std::vector<double> mag(m);
  for (std::size_t i = 0; i < m; ++i) mag[i] = std::abs(a[i]);

  ThresholdReport rep;
  rep.formula = observer_knows_u ? "ellipsoid-known-u" : "ellipsoid";
  rep.n = n;
  rep.rho = rho;
  rep.lambda = spectral_radius(a);
  rep.exponent = (rho / n) * std::log2(std::max(rep.lambda, 1e-300));
  if (!observer_knows_u) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum += mag[i] * std::pow(theta, static_cast<double>(i));
    rep.rate = std::log2(0.5 * std::sqrt(static_cast<double>(m)) * sum) / n;
    rep.rate_upper = rep.rate;
    return rep;
  }
  // First column of Fbar D picks up sqrt(m) 2^{-nr}; the sqrt(theta)
  // superdiagonal contributes theta^{(i-1)/2} to the i-th characteristic
  // coefficient.
  rep.rate = bisect_rate(n, [&](double r) {
    std::vector<double> c(m);
    const double lead = std::sqrt(static_cast<double>(m)) * std::exp2(-static_cast<double>(n) * r);
    for (std::size_t i = 0; i < m; ++i)
      c[i] = lead * mag[i] * std::pow(theta, 0.5 * static_cast<double>(i));
    return spectral_radius_nonneg(c);
  });
  double peak = mag[m - 1] * std::pow(2.0 * theta, static_cast<double>(m - 1));
  for (std::size_t i = 0; i + 1 < m; ++i)
    peak = std::max(peak, 2.0 * mag[i] * std::pow(2.0 * theta, static_cast<double>(i)));
  rep.rate_upper = (0.5 * std::log2(static_cast<double>(m)) + std::log2(peak)) / n;
  return rep;
}

LimitValues limiting_values(const std::vector<double>& mu) {
  LimitValues out;
  double top = 0.0;
  for (double v : mu) {
    double m = std::abs(v);
    if (m > 1.0) out.rate += std::log2(m);
    top = std::max(top, m);
  }
  out.exponent = top > 0.0 ? 2.0 * std::log2(top) : 0.0;
  return out;
}

std::vector<double> monic_from_roots(const std::vector<double>& roots) {
  std::vector<double> c;  // running coefficients of prod (x - r)
  for (double r : roots) {
    c.push_back(0.0);
    for (std::size_t i = c.size() - 1; i > 0; --i) c[i] -= r * c[i - 1];
    c[0] -= r;
  }
  return c;
}

unsigned min_bits(double rate, unsigned n) {
  double k = std::ceil(static_cast<double>(n) * rate - 1e-9);
  return k < 1.0 ? 1u : static_cast<unsigned>(k);
}

}  // namespace anytime
