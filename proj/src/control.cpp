#include "anytime/control.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace anytime {

void SimConfig::validate() const {
  plant.validate();
  anytime::validate(code);
  quantizer.validate();
  if (code.k != quantizer.bits)
    throw std::invalid_argument("sim: message bits must equal quantizer bits");
  anytime::validate(ChannelConfig{eps, 0});
  if (horizon < 1) throw std::invalid_argument("sim: horizon must be positive");
  if (trials < 1) throw std::invalid_argument("sim: need at least one trial");
  if (threads < 1) throw std::invalid_argument("sim: need at least one thread");
  if (!(init_width >= 0.0) || !std::isfinite(init_width))
    throw std::invalid_argument("sim: bad initial width");
  const unsigned m = plant.m();
  if (law == ControlLaw::Gain &&
      (gain.rows() != static_cast<int>(m) || gain.cols() != static_cast<int>(m)))
    throw std::invalid_argument("sim: gain must be m x m");
  if (noise == NoiseKind::TruncGauss) {
    if (!(gauss_cut > 0.0)) throw std::invalid_argument("sim: truncation must be positive");
    // a declared width below the support would break the filters
    if (plant.w_width > 0.0 && plant.w_width < 2.0 * gauss_cut)
      throw std::invalid_argument("sim: process noise width below truncated support");
    if (plant.v_width > 0.0 && plant.v_width < 2.0 * gauss_cut)
      throw std::invalid_argument("sim: measurement noise width below truncated support");
  }
}

namespace {

std::vector<std::uint8_t> bin_to_bits(std::uint64_t bin, unsigned k) {
  std::vector<std::uint8_t> bits(k);
  for (unsigned i = 0; i < k; ++i) bits[i] = static_cast<std::uint8_t>((bin >> i) & 1);
  return bits;
}

std::uint64_t bits_to_bin(const std::vector<std::uint8_t>& bits) {
  std::uint64_t bin = 0;
  for (std::size_t i = 0; i < bits.size(); ++i)
    bin |= static_cast<std::uint64_t>(bits[i] & 1) << i;
  return bin;
}

double draw_noise(const SimConfig& cfg, double width, std::uint64_t seed,
                  std::uint64_t domain, std::uint64_t t, std::uint64_t i) {
  if (width <= 0.0) return 0.0;
  if (cfg.noise == NoiseKind::TruncGauss)
    return rng::trunc_gauss(cfg.gauss_cut, seed, domain, t, i);
  return rng::uniform(-0.5 * width, 0.5 * width, seed, domain, t, i);
}

Eigen::VectorXd control_input(const SimConfig& cfg, const Eigen::MatrixXd& f,
                              const Eigen::VectorXd& xhat) {
  switch (cfg.law) {
    case ControlLaw::Deadbeat:
      return -(f * xhat);
    case ControlLaw::NegCenter:
      return -xhat;
    case ControlLaw::Gain:
      return cfg.gain * xhat;
  }
  return Eigen::VectorXd::Zero(xhat.size());
}

}  // namespace

TrajectoryRecord run_closed_loop(const SimConfig& cfg, std::uint64_t trial) {
  cfg.validate();
  const unsigned m = cfg.plant.m();
  const std::size_t horizon = cfg.horizon;
  const Eigen::MatrixXd f = cfg.plant.f();
  const bool feedback = cfg.mode == LoopMode::ObserverKnowsU;

  const ChannelConfig chan{cfg.eps, rng::derive(cfg.seed, "channel", trial)};
  const std::uint64_t wseed = rng::derive(cfg.seed, "noise-w", trial);
  const std::uint64_t vseed = rng::derive(cfg.seed, "noise-v", trial);

  ToeplitzCode code(cfg.code);
  EncoderState enc(code);
  DecoderState dec(code);

  const Hypercuboid init = Hypercuboid::centered(
      Eigen::VectorXd::Zero(m), Eigen::VectorXd::Constant(m, cfg.init_width));
  CuboidSession ctrl(cfg.plant, cfg.quantizer, feedback, init);
  CuboidSession obs(cfg.plant, cfg.quantizer, feedback, init);  // used in feedback mode

  TrajectoryRecord rec;
  rec.x.reserve(horizon);
  rec.u.reserve(horizon);
  rec.xhat.reserve(horizon);
  rec.width.reserve(horizon);
  rec.delay.reserve(horizon);
  rec.desync.reserve(horizon);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  std::size_t firm = 0;  // leading steps whose consumed bins can no longer change

  for (std::size_t t = 1; t <= horizon; ++t) {
    const double v = draw_noise(cfg, cfg.plant.v_width, vseed, rng::kDomNoiseV, t, 0);
    const double y = x(0) + v;

    // observer side: pick the bin, encode, push through the channel
    std::uint64_t sent;
    if (feedback) {
      sent = obs.bin_for(y);
      obs.measure(sent);
    } else {
      sent = quantize(y, cfg.quantizer);
    }
    const DecodeReport rep =
        dec.observe_step(transmit(chan, enc.encode_step(bin_to_bits(sent, cfg.code.k)), t));

    // controller side: first fold in any revised past bins
    std::size_t revise_at = 0;
    for (std::size_t tau = firm + 1; tau < t; ++tau) {
      if (bits_to_bin(dec.message_estimate(tau).bits) != ctrl.steps()[tau - 1].bin) {
        revise_at = tau;
        break;
      }
    }
    if (revise_at != 0) {
      std::vector<std::uint64_t> bins;
      bins.reserve(t - revise_at);
      for (std::size_t tau = revise_at; tau < t; ++tau)
        bins.push_back(bits_to_bin(dec.message_estimate(tau).bits));
      ctrl.replay_from(revise_at, bins);
      ++rec.revisions;
    }
    while (firm + 1 < t) {
      const DecoderState::Estimate est = dec.message_estimate(firm + 1);
      if (est.status == BitStatus::Tentative ||
          bits_to_bin(est.bits) != ctrl.steps()[firm].bin)
        break;
      ++firm;
    }

    const Eigen::VectorXd xhat = ctrl.prior().center();  // x̂_{t|t-1}
    rec.xhat.push_back(xhat);
    rec.width.push_back(ctrl.prior().width());

    const bool applied = ctrl.measure(bits_to_bin(dec.message_estimate(t).bits));
    const Eigen::VectorXd u = control_input(cfg, f, xhat);

    rec.x.push_back(x);
    rec.u.push_back(u);
    rec.delay.push_back(rep.d);
    rec.desync.push_back(applied ? 0 : 1);

    ctrl.advance(u);
    if (feedback) obs.advance(u);

    Eigen::VectorXd w(m);
    for (unsigned i = 0; i < m; ++i)
      w(i) = draw_noise(cfg, cfg.plant.w_width, wseed, rng::kDomNoiseW, t, i);
    x = f * x + u + w;
  }
  return rec;
}

double lqr_cost(const TrajectoryRecord& traj) {
  const std::size_t horizon = traj.x.size();
  if (horizon == 0) throw std::invalid_argument("lqr_cost: empty trajectory");
  double sum = 0.0;
  for (std::size_t t = 0; t < horizon; ++t)
    sum += traj.x[t].squaredNorm() + traj.u[t].squaredNorm();
  return sum / (2.0 * static_cast<double>(horizon));
}

double sup_norm(const TrajectoryRecord& traj) {
  double sup = 0.0;
  for (const Eigen::VectorXd& x : traj.x) sup = std::max(sup, x.norm());
  return sup;
}

MetricsSummary run_trials(const SimConfig& cfg) {
  cfg.validate();
  MetricsSummary out;
  out.trials = cfg.trials;
  out.per_trial_lqr.resize(cfg.trials);
  out.per_trial_sup.resize(cfg.trials);
  std::vector<double> mean_abs(cfg.horizon, 0.0);

  const unsigned nthreads =
      static_cast<unsigned>(std::min<std::size_t>(cfg.threads, cfg.trials));
  std::vector<std::vector<double>> partial(nthreads,
                                           std::vector<double>(cfg.horizon, 0.0));
  auto work = [&](unsigned who) {
    for (std::size_t trial = who; trial < cfg.trials; trial += nthreads) {
      TrajectoryRecord traj = run_closed_loop(cfg, trial);
      out.per_trial_lqr[trial] = lqr_cost(traj);
      out.per_trial_sup[trial] = sup_norm(traj);
      for (std::size_t t = 0; t < cfg.horizon; ++t) partial[who][t] += traj.x[t].norm();
    }
  };
  if (nthreads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned who = 0; who < nthreads; ++who) pool.emplace_back(work, who);
    for (std::thread& th : pool) th.join();
  }
  for (unsigned who = 0; who < nthreads; ++who)
    for (std::size_t t = 0; t < cfg.horizon; ++t) mean_abs[t] += partial[who][t];

  for (std::size_t t = 0; t < cfg.horizon; ++t)
    out.sup_mean_x =
        std::max(out.sup_mean_x, mean_abs[t] / static_cast<double>(cfg.trials));
  for (double c : out.per_trial_lqr) out.mean_lqr += c;
  out.mean_lqr /= static_cast<double>(cfg.trials);
  return out;
}

std::vector<SweepRow> run_code_sweep(const SimConfig& cfg, std::size_t codes,
                                     MetricKind kind) {
  cfg.validate();
  if (codes == 0) return {};
  std::vector<SweepRow> rows(codes);
  const unsigned nthreads =
      static_cast<unsigned>(std::min<std::size_t>(cfg.threads, codes));
  auto work = [&](unsigned who) {
    for (std::size_t ci = who; ci < codes; ci += nthreads) {
      SimConfig local = cfg;
      local.code.seed = rng::derive(cfg.seed, "code", ci);
      local.seed = local.code.seed;  // disjoint noise streams per code
      local.threads = 1;
      MetricsSummary ms = run_trials(local);
      rows[ci] = SweepRow{local.code.seed,
                          kind == MetricKind::SupMeanX ? ms.sup_mean_x : ms.mean_lqr};
    }
  };
  if (nthreads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned who = 0; who < nthreads; ++who) pool.emplace_back(work, who);
    for (std::thread& th : pool) th.join();
  }
  return rows;
}

double fraction_below(const std::vector<SweepRow>& rows, double threshold) {
  if (rows.empty()) return 0.0;
  std::size_t hits = 0;
  for (const SweepRow& r : rows)
    if (r.metric < threshold) ++hits;
  return static_cast<double>(hits) / static_cast<double>(rows.size());
}

namespace {

void put_number(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

}  // namespace

void write_trajectory_csv(const TrajectoryRecord& traj, std::ostream& os) {
  const std::size_t horizon = traj.x.size();
  const unsigned m = horizon ? static_cast<unsigned>(traj.x[0].size()) : 0;
  os << 't';
  for (const char* name : {"x", "u", "xhat", "width"})
    for (unsigned i = 1; i <= m; ++i) os << ',' << name << '_' << i;
  os << ",d,desync\n";
  for (std::size_t t = 0; t < horizon; ++t) {
    os << (t + 1);
    for (const std::vector<Eigen::VectorXd>* col : {&traj.x, &traj.u, &traj.xhat, &traj.width})
      for (unsigned i = 0; i < m; ++i) {
        os << ',';
        put_number(os, (*col)[t](i));
      }
    os << ',' << traj.delay[t] << ',' << static_cast<int>(traj.desync[t]) << '\n';
  }
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
  os << "code_seed,metric\n";
  for (const SweepRow& r : rows) {
    os << r.code_seed << ',';
    put_number(os, r.metric);
    os << '\n';
  }
}

}  // namespace anytime
