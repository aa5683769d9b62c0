#pragma once
// Closed-form thresholds: existence region of the random Toeplitz ensemble,
// rate/exponent conditions for the box and ellipsoid filters (both feedback
// modes), their limiting values under mode splitting, and the spectral
// machinery they need (positive-companion bisection, Durand-Kerner roots,
// Fujiwara's bound).
//
// Conventions. A plant is given by the coefficients a_1..a_m of its
// characteristic polynomial z^m + a_1 z^{m-1} + ... + a_m; F is the companion
// matrix with first column -a_i and identity superdiagonal, Fbar its
// entrywise absolute value. Rates and exponents are per channel use (the
// reliability statement P <= eta 2^{-n beta d}); callers wanting the per-step
// figures multiply by n.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace anytime {

// H(x) in bits; H(0) = H(1) = 0.
double binary_entropy(double x);

// Smaller root of H(x) = y, i.e. the inverse on [0, 1/2]. Bisection, accurate
// to |H(x) - y| <= 1e-10.
double binary_entropy_inv(double y);

// Bernoulli relative entropy KL(a || b) in bits.
double kl_bits(double a, double b);

enum class ChannelKind { BEC, BSC };

struct ChannelSpec {
  ChannelKind kind = ChannelKind::BEC;
  double eps = 0.0;
};

// Channel figure of merit: eps for the erasure channel, 2 sqrt(eps(1-eps))
// for the symmetric channel.
double bhattacharyya(const ChannelSpec& ch);

// Existence region of the Bernoulli(p) ensemble at rate R and channel
// parameter zeta:
//   rate_max     = 1 - log2(1+zeta) / log2(1/(1-p))
//   exponent_max = Hinv(1-R) * (log2(1/zeta) + log2((1-p)^{-(1-R)} - 1))
// The two are consistent: exponent_max > 0 exactly when R < rate_max, so an
// infeasible request reports a non-positive exponent along with the flag.
struct CodeRegion {
  double rate_max = 0.0;
  double exponent_max = 0.0;
  bool feasible = false;
};
CodeRegion ensemble_region(double zeta, double p, double R);

// Strengthened region for the symmetric channel under exact ML decoding:
// R < 1 - H(eps), beta < KL(Hinv(1-R) || min{eps, 1-eps}).
CodeRegion bsc_ml_region(double eps, double R);

// Unique positive root of x^m - sum_i c_i x^{m-i} with c_i >= 0, found by
// bisection on [0, max(1, 1 + sum c_i)] to `tol`. This is the spectral radius
// of the companion matrix whose first column is c. Returns 0 if all c_i = 0.
double spectral_radius_nonneg(const std::vector<double>& c, double tol = 1e-9);

// All roots of x^m + c[0] x^{m-1} + ... + c[m-1] by Durand-Kerner iteration.
// Throws std::runtime_error with the worst residual if iteration fails to
// reach a normalized residual of 1e-9.
std::vector<std::complex<double>> poly_roots(const std::vector<double>& c);

// Spectral radius of the companion matrix of z^m + a_1 z^{m-1} + ... + a_m.
double spectral_radius(const std::vector<double>& a);

// Fujiwara's root bound for the monic polynomial above:
//   K = 2 max{ |c_1|, |c_2|^{1/2}, ..., |c_{m-1}|^{1/(m-1)}, |c_m/2|^{1/m} }.
// Every root has modulus at most K.
double fujiwara_bound(const std::vector<double>& c);

struct SpectralReport {
  double lambda_f = 0.0;     // spectral radius of F
  double lambda_fbar = 0.0;  // spectral radius of Fbar
  double fujiwara = 0.0;     // Fujiwara bound on the characteristic poly
  std::vector<double> coeffs;
};
SpectralReport spectral_report(const std::vector<double>& a);

// Stabilization threshold pair for one filter/feedback combination.
// `formula` identifies the source: "cuboid", "cuboid-known-u", "ellipsoid",
// "ellipsoid-known-u". `rho` is the moment order of the stability criterion;
// the theorems behind these numbers are mean-square (rho = 2) but first-moment
// variants are obtained by scaling, beta = (rho/n) log2 lambda.
struct ThresholdReport {
  std::string formula;
  unsigned n = 0;
  double rho = 2.0;
  double rate = 0.0;        // per channel use
  double rate_upper = 0.0;  // closed-form bound on the bisected rate
  double exponent = 0.0;    // per channel use
  double lambda = 0.0;      // spectral radius entering the exponent
};

// Box-filter thresholds. Without observer access to the inputs the rate is
// the closed form (1/n) log2 sum |a_i|; with access it is the smallest r with
// lambda(Fbar D_{nr}) < 1, D_{nr} = diag(2^{-nr}, 1, ..., 1), bisected to
// 1e-6, together with the closed-form upper bound
// (1/n) log2 max{|a_m| 2^{m-1}, max_{i<m} |a_i| 2^i}. Exponent uses
// lambda(Fbar) in both modes.
ThresholdReport cuboid_thresholds(const std::vector<double>& a, unsigned n,
                                  bool observer_knows_u, double rho = 2.0);

// Ellipsoid-filter thresholds, m >= 2 (for m = 1 the box figures coincide and
// this throws, directing the caller there). Without input access the rate is
// (1/n) log2[(sqrt(m)/2) sum |a_i| theta^{i-1}], theta = m/(m-1); with access
// it bisects lambda(Fbar D) < 1 for D = diag(sqrt(m) 2^{-nr}, sqrt(theta),
// ..., sqrt(theta)) and reports the closed-form upper bound
// (1/2n) log2 m + (1/n) log2 max{|a_m|(2 theta)^{m-1},
//                                max_{i<m} 2|a_i|(2 theta)^{i-1}}.
// Exponent uses lambda(F), the smaller radius.
ThresholdReport ellipsoid_thresholds(const std::vector<double>& a, unsigned n,
                                     bool observer_knows_u, double rho = 2.0);

// Rate/exponent in the limit of encoding every l-th step, driven by the mode
// magnitudes mu_i of the one-step system: rate = sum_{|mu|>1} log2 |mu|,
// exponent = 2 log2 max |mu|.
struct LimitValues {
  double rate = 0.0;
  double exponent = 0.0;
};
LimitValues limiting_values(const std::vector<double>& mu);

// Coefficients c_1..c_m of prod_i (x - r_i) for real roots r, i.e. the plant
// whose modes are exactly r. Supports the convergence harness lambda_i =
// mu_i^n.
std::vector<double> monic_from_roots(const std::vector<double>& roots);

// Smallest integer bit budget k with k/n meeting `rate` (boundary included,
// matching how the worked examples round), never below 1.
unsigned min_bits(double rate, unsigned n);

}  // namespace anytime
