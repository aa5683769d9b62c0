#pragma once
// Set-membership estimation from quantized measurements. Two interchangeable
// set shapes: axis-aligned boxes with exact width recursions, and ellipsoids
// tightened by minimum-volume covering of ellipsoid-slab intersections. The
// box filter comes with a replayable session so a revised bin history can
// rewind past measurement updates; that is what the closed loop runs on.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

namespace anytime {

// Companion-form plant x' = Fx + (input) + w, y = x_1 + v. F carries -a_1..
// -a_m in its first column and an identity superdiagonal; noises are
// per-coordinate boxes, |w_i| <= w_width/2 and |v| <= v_width/2.
struct PlantModel {
  std::vector<double> a;
  double w_width = 0.0;
  double v_width = 0.0;

  unsigned m() const { return static_cast<unsigned>(a.size()); }
  Eigen::MatrixXd f() const;
  Eigen::MatrixXd fbar() const;
  void validate() const;
};

struct QuantizerConfig {
  unsigned bits = 1;
  double delta = 1.0;

  std::uint64_t levels() const { return std::uint64_t{1} << bits; }
  void validate() const;
};

// Lattice bin of y: floor(y/delta) mod levels, floor toward minus infinity.
std::uint64_t quantize(double y, const QuantizerConfig& q);

struct Slab {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

// Result of mapping a lattice bin index back to a real interval. The index
// only pins the bin modulo `levels`, so the caller's predicted interval picks
// the period; zero or several candidate bins leave `ok` false (desync) and
// `ambiguous` says which way it failed.
struct BinSlab {
  bool ok = false;
  bool ambiguous = false;
  Slab slab;
};
BinSlab dequantize_bin(std::uint64_t index, const Slab& predicted, const QuantizerConfig& q);

struct Hypercuboid {
  Eigen::VectorXd x_min, x_max;

  unsigned dim() const { return static_cast<unsigned>(x_min.size()); }
  Eigen::VectorXd width() const { return x_max - x_min; }
  Eigen::VectorXd center() const { return 0.5 * (x_min + x_max); }
  bool contains(const Eigen::VectorXd& x, double tol = 0.0) const;
  static Hypercuboid centered(const Eigen::VectorXd& c, const Eigen::VectorXd& width);
};

// Exact image of {Fx + u + w : x in cub, |w_i| <= W/2}; widths obey
// width' = Fbar * width + W * 1 up to roundoff.
Hypercuboid cuboid_time_update(const Hypercuboid& cub, const Eigen::VectorXd& u,
                               const PlantModel& plant);

struct CuboidMeas {
  Hypercuboid cub;
  bool desync = false;  // set when the bin did not intersect the prior
};

// Lattice-quantizer update: coordinate 1 is intersected with the decoded bin
// widened by the measurement noise. An empty intersection or an undecidable
// bin keeps the prior and flags desync.
CuboidMeas cuboid_meas_update_nofeedback(const Hypercuboid& cub, const BinSlab& bin,
                                         double v_width);

// Shared-reference update: the predicted measurement interval (coordinate-1
// width + V) is split into 2^bits equal sub-bins and coordinate 1 is replaced
// by the chosen sub-bin widened by V/2 on both sides. Posterior width is
// exactly V + 2^-bits (width_1 + V), independent of the bin value.
Hypercuboid cuboid_meas_update_feedback(const Hypercuboid& cub, std::uint64_t index,
                                        const QuantizerConfig& q, double v_width);

// Sub-bin the measurement falls into, under the same split the update uses.
std::uint64_t feedback_bin(double y, const Hypercuboid& cub, const QuantizerConfig& q,
                           double v_width);

// Stationary prior widths of the lattice-quantizer loop,
// delta_inf_i = (delta + V) sum_{j>=i} |a_j| + W (m - i + 1), plus the level
// count the quantizer must strictly exceed for the recursion to hold from an
// initial coordinate-1 width.
struct SteadyStateReport {
  Eigen::VectorXd delta_inf;
  double required_levels = 0.0;
  bool feasible = false;
};
SteadyStateReport steady_state_width(const PlantModel& plant, const QuantizerConfig& q,
                                     double initial_width1 = 0.0);

// {x : <x - c, P^{-1}(x - c)> <= 1} with P symmetric positive definite.
struct EllipsoidState {
  Eigen::MatrixXd p;
  Eigen::VectorXd c;

  unsigned dim() const { return static_cast<unsigned>(c.size()); }
  bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const;
};

// Minimum-volume ellipsoid covering the part of the unit ball between the
// hyperplanes <e,y> = gamma and <e,y> = delta (unit-metric coordinates,
// gamma <= delta). The result reshapes a ball into semi-axis scale `a` along
// e, `b` across, centered xi along e:
//   gamma*delta <= -1/m        : untouched (a = b = 1, xi = 0)
//   gamma + delta = 0, else    : xi = 0, a = m delta^2, b = m(1-delta^2)/(m-1)
//   otherwise                  : D = m^2(delta^2-gamma^2)^2
//                                    + 4(1-gamma^2)(1-delta^2)
//                                xi = [m(gamma+delta)^2 + 2(1+gamma delta)
//                                      - sqrt(D)] / [2(m+1)(gamma+delta)]
//                                a = m (xi-gamma)(delta-xi)
//                                b = a(1-gamma^2) / (a - (xi-gamma)^2)
// The slab is clamped to [-1,1] first; |delta| < |gamma| is handled by
// reflection. m >= 2.
struct MinVolCoeffs {
  double a = 1.0;
  double b = 1.0;
  double xi = 0.0;
};
MinVolCoeffs min_vol_coeffs(unsigned m, double gamma, double delta);

// Covering ellipsoid of {Fx + u + w : x in E, |w_i| <= W/2}:
// P' = (1+eps) F P F^T + (1+1/eps)(m W^2/4) I with eps minimizing trace(P'),
// c' = F c + u.
EllipsoidState ellipsoid_time_update(const EllipsoidState& e, const PlantModel& plant,
                                     const Eigen::VectorXd& u);

struct EllipsoidMeas {
  EllipsoidState e;
  bool desync = false;
};

// Minimum-volume cover of E intersected with {slab.lo <= x_1 <= slab.hi}.
// A slab missing the ellipsoid entirely keeps the prior and flags desync.
// Eigenvalues of the result are floored at 1e-12 trace/m to keep P invertible
// when an axis collapses.
EllipsoidMeas ellipsoid_meas_update(const EllipsoidState& e, const Slab& slab);

// One endpoint's box-filter timeline. Records the prior, consumed bin and
// applied input of every completed step; replay_from rewinds to a past step
// and reruns the recorded inputs against a corrected bin history, which is
// how decoder revisions reach the filter. Bin geometry depends only on
// widths, so two sessions fed the same inputs stay width-identical even while
// their bin values disagree.
class CuboidSession {
 public:
  CuboidSession(const PlantModel& plant, const QuantizerConfig& q, bool observer_knows_u,
                Hypercuboid init);

  std::size_t next_time() const { return steps_.size() + 1; }
  const Hypercuboid& prior() const { return prior_; }
  const Hypercuboid& posterior() const;

  // Predicted interval for the next measurement: prior coordinate 1 widened
  // by the measurement noise.
  Slab predicted() const;

  // Mode-appropriate bin index for a raw measurement against this session's
  // current prior.
  std::uint64_t bin_for(double y) const;

  // Consume the bin for step next_time(). Returns false when the update had
  // to be skipped (lattice mode failing to disambiguate); the skip itself is
  // recorded so replays re-evaluate it.
  bool measure(std::uint64_t bin);

  // Finish the step: record (prior, bin, u), propagate to the next prior.
  void advance(const Eigen::VectorXd& u);

  // Rewind to `from` (1-based, must be a completed step) and re-run the
  // recorded inputs against the corrected bins for steps from..last. Bin
  // applicability is re-decided per step.
  void replay_from(std::size_t from, const std::vector<std::uint64_t>& bins);

  struct StepRecord {
    Hypercuboid prior;
    std::uint64_t bin = 0;
    bool applied = false;
    bool desync = false;
    Eigen::VectorXd u;
  };
  const std::vector<StepRecord>& steps() const { return steps_; }

 private:
  PlantModel plant_;
  QuantizerConfig q_;
  bool knows_u_;
  Hypercuboid prior_;
  std::optional<Hypercuboid> post_;
  std::uint64_t pending_bin_ = 0;
  bool pending_applied_ = false;
  bool pending_desync_ = false;
  std::vector<StepRecord> steps_;
};

}  // namespace anytime
