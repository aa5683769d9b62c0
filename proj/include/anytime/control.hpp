#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "anytime/channel.hpp"
#include "anytime/code.hpp"
#include "anytime/decoder.hpp"
#include "anytime/estimation.hpp"

namespace anytime {

// How the observer turns a measurement into a bin index.
//   NoFeedback:     memoryless lattice quantizer; the decoder can lose sync.
//   ObserverKnowsU: the observer runs a replica of the controller's filter
//                   (it sees the applied inputs) and sends the sub-bin of its
//                   own predicted interval, so no sync is ever lost.
enum class LoopMode { NoFeedback, ObserverKnowsU };

enum class NoiseKind {
  UniformBox,  // uniform over [-width/2, width/2] per coordinate
  TruncGauss,  // standard normal conditioned on [-cut, cut] per coordinate
};

// u_t is a function of the controller's one-step prediction xhat_{t|t-1}.
//   Deadbeat:  u = -F xhat   (cancels the predicted state; B = I)
//   NegCenter: u = -xhat     (kept for comparison; does not stabilize |a|>1)
//   Gain:      u = K xhat
enum class ControlLaw { Deadbeat, NegCenter, Gain };

struct SimConfig {
  PlantModel plant;
  CodeParams code;
  double eps = 0.0;  // channel erasure probability
  QuantizerConfig quantizer;
  LoopMode mode = LoopMode::NoFeedback;
  std::size_t horizon = 100;
  ControlLaw law = ControlLaw::Deadbeat;
  Eigen::MatrixXd gain;    // m x m, used when law == Gain
  NoiseKind noise = NoiseKind::UniformBox;
  double gauss_cut = 2.5;  // truncation for TruncGauss
  double init_width = 0.0; // side of the initial box around x_1 = 0
  std::uint64_t seed = 0;  // master seed; trials fan out from it
  std::size_t trials = 1;
  unsigned threads = 1;

  // Message bits carry exactly the bin index, so code.k must equal
  // quantizer.bits. Truncated gaussian support must fit the declared
  // noise widths or the filters would be unsound.
  void validate() const;
};

struct TrajectoryRecord {
  std::vector<Eigen::VectorXd> x;      // plant state, t = 1..T
  std::vector<Eigen::VectorXd> u;      // applied input
  std::vector<Eigen::VectorXd> xhat;   // controller prediction x̂_{t|t-1}
  std::vector<Eigen::VectorXd> width;  // controller prior widths
  std::vector<std::size_t> delay;      // decoder delay after step t
  std::vector<std::uint8_t> desync;    // controller skipped the update at t
  std::size_t revisions = 0;           // replays triggered by late decoding
};

// (1/(2T)) sum_t (|x_t|^2 + |u_t|^2)
double lqr_cost(const TrajectoryRecord& traj);

// sup over t of |x_t|
double sup_norm(const TrajectoryRecord& traj);

// One deterministic episode: everything is a pure function of cfg and the
// trial index (channel, message and noise streams derive from cfg.seed).
TrajectoryRecord run_closed_loop(const SimConfig& cfg, std::uint64_t trial);

struct MetricsSummary {
  std::size_t trials = 0;
  double sup_mean_x = 0.0;  // sup over t of the per-time mean of |x_t|
  double mean_lqr = 0.0;
  std::vector<double> per_trial_lqr;
  std::vector<double> per_trial_sup;
};

// cfg.trials episodes of cfg's single code, parallel over cfg.threads.
MetricsSummary run_trials(const SimConfig& cfg);

enum class MetricKind { SupMeanX, MeanLqr };

struct SweepRow {
  std::uint64_t code_seed = 0;
  double metric = 0.0;
};

// Samples `codes` codes from the ensemble (seeds derived from cfg.seed), runs
// cfg.trials episodes of each and reports one metric per code, in code order.
std::vector<SweepRow> run_code_sweep(const SimConfig& cfg, std::size_t codes,
                                     MetricKind kind);

// Fraction of rows with metric below the threshold: one point of the
// empirical CDF.
double fraction_below(const std::vector<SweepRow>& rows, double threshold);

// t,x_1..x_m,u_1..u_m,xhat_1..xhat_m,width_1..width_m,d,desync
void write_trajectory_csv(const TrajectoryRecord& traj, std::ostream& os);

// code_seed,metric
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os);

}  // namespace anytime
