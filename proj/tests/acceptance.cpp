// End-to-end acceptance harness. Each check prints one pass/fail line with the
// measured numbers; the process exits nonzero if any check fails. Tolerances
// are pinned here, next to the checks they guard.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "anytime/bounds.hpp"
#include "anytime/channel.hpp"
#include "anytime/code.hpp"
#include "anytime/control.hpp"
#include "anytime/decoder.hpp"
#include "anytime/estimation.hpp"
#include "anytime/rng.hpp"

using namespace anytime;

namespace {

const std::uint64_t kDomAcc = rng::fnv1a("acceptance");

bool g_all_pass = true;

void report(int idx, bool pass, const std::string& name, const std::string& detail) {
  std::printf("[%s] %d. %s: %s\n", pass ? "PASS" : "FAIL", idx, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) g_all_pass = false;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. The streaming decoder's determined-bit set must equal the consensus over
// every codeword sequence consistent with the received symbols, found by
// exhaustively encoding all message prefixes. Small code, short horizons.

bool check_decoder_consensus(std::string& detail) {
  const std::uint64_t master = 9101;
  std::size_t episodes = 0, mismatches = 0;
  for (std::uint64_t ep = 0; ep < 200; ++ep) {
    const std::size_t T = 1 + ep % 8;
    ToeplitzCode code(CodeParams{3, 1, 0.5, rng::derive(master, "code", ep)});
    EncoderState enc(code);
    DecoderState dec(code);
    ChannelConfig chan{0.5, rng::derive(master, "channel", ep)};
    const std::uint64_t msg_seed = rng::derive(master, "message", ep);

    std::vector<std::vector<Sym>> recv;
    for (std::size_t t = 1; t <= T; ++t) {
      std::vector<std::uint8_t> m{
          rng::bernoulli(0.5, msg_seed, rng::kDomMessage, t, 0) ? std::uint8_t{1}
                                                                : std::uint8_t{0}};
      recv.push_back(transmit(chan, enc.encode_step(m), t));
      dec.observe_step(recv.back());

      // Exhaustive consensus over all 2^t message prefixes.
      std::vector<std::uint8_t> seen0(t * 3, 0), seen1(t * 3, 0);
      std::size_t consistent = 0;
      for (std::uint64_t pfx = 0; pfx < (std::uint64_t{1} << t); ++pfx) {
        EncoderState cand(code);
        std::vector<std::vector<std::uint8_t>> cw;
        for (std::size_t tau = 1; tau <= t; ++tau)
          cw.push_back(cand.encode_step({static_cast<std::uint8_t>((pfx >> (tau - 1)) & 1)}));
        bool ok = true;
        for (std::size_t tau = 0; tau < t && ok; ++tau)
          for (unsigned i = 0; i < 3 && ok; ++i) {
            if (recv[tau][i] == Sym::Erased) continue;
            if ((recv[tau][i] == Sym::One) != (cw[tau][i] != 0)) ok = false;
          }
        if (!ok) continue;
        ++consistent;
        for (std::size_t tau = 0; tau < t; ++tau)
          for (unsigned i = 0; i < 3; ++i)
            (cw[tau][i] ? seen1 : seen0)[tau * 3 + i] = 1;
      }
      if (consistent == 0) ++mismatches;  // true message is always consistent

      for (std::size_t tau = 1; tau <= t; ++tau)
        for (unsigned i = 0; i < 3; ++i) {
          const bool agree = seen0[(tau - 1) * 3 + i] + seen1[(tau - 1) * 3 + i] == 1;
          const BitStatus st = dec.bit_status(tau, i);
          if (recv[tau - 1][i] != Sym::Erased) {
            if (st != BitStatus::Known) ++mismatches;
            continue;
          }
          if ((st == BitStatus::Determined) != agree) {
            ++mismatches;
            continue;
          }
          if (agree && dec.bit_value(tau, i) != (seen1[(tau - 1) * 3 + i] != 0))
            ++mismatches;
        }
      ++episodes;
    }
  }
  detail = "200 episodes, " + std::to_string(episodes) + " decode instants, " +
           std::to_string(mismatches) + " mismatches";
  return mismatches == 0;
}

// ---------------------------------------------------------------------------
// 2. Delay profile of a sampled (15,3) code over the 0.3-erasure channel:
// enough pooled samples, a non-increasing tail, and a strictly negative
// fitted slope. The specific slope is recorded, not asserted.

ReliabilityCurve g_curve;  // shared with check 7

bool check_delay_profile(std::string& detail) {
  ReliabilityConfig rc;
  rc.code = CodeParams{15, 3, 0.5, rng::derive(9102, "code", 0)};
  rc.eps = 0.3;
  rc.horizon = 60;
  // This code resolves so fast that errors at delay >= 2 occur at roughly
  // 1e-6 per instant; the trial count buys a populated multi-delay tail.
  rc.trials = 40000;
  rc.seed = 9102;
  rc.threads = 1;
  g_curve = estimate_reliability(rc);

  bool pass = g_curve.samples >= 20000;
  std::vector<double> tail = g_curve.tail();
  std::size_t populated = 0;
  for (std::size_t d = 1; d < g_curve.count.size(); ++d)
    if (g_curve.count[d]) populated = d;
  for (std::size_t d = 1; d + 1 < tail.size(); ++d)
    if (tail[d + 1] > tail[d] + 1e-15) pass = false;
  if (!(g_curve.slope < 0.0)) pass = false;
  if (populated < 2) pass = false;  // need at least two delays to see decay

  detail = std::to_string(g_curve.samples) + " samples, delays populated through " +
           std::to_string(populated) + ", slope=" + fmt("%.4f", g_curve.slope) +
           ", eta=" + fmt("%.4g", std::exp2(g_curve.intercept)) +
           ", onset=" + std::to_string(g_curve.onset);
  return pass;
}

// ---------------------------------------------------------------------------
// 3. Scalar plant (a=-2, w in [-30,30], v in [-1,1]) over the 0.3-erasure
// channel, 20 sampled (15,k) codes x 200 trials each, horizon 100, dead-beat
// control. At k=3, delta=16 at least 85% of codes must keep the per-code mean
// of sup_t |x_t| under 200; the coarser-protection point k=6, delta=2 is
// expected to pass a strictly smaller fraction of codes.

struct EnsemblePoint {
  double frac_supmean = 0.0;  // fraction of codes: sup_t mean_trials |x_t| < 200
  double frac_meansup = 0.0;  // fraction of codes: mean_trials sup_t |x_t| < 200
  double worst_supmean = 0.0;
  double worst_meansup = 0.0;
};

EnsemblePoint scalar_ensemble_point(unsigned k, double delta) {
  SimConfig cfg;
  cfg.plant = PlantModel{{-2.0}, 60.0, 2.0};
  cfg.code = CodeParams{15, k, 0.5, 7};
  cfg.eps = 0.3;
  cfg.quantizer = QuantizerConfig{k, delta};
  cfg.mode = LoopMode::NoFeedback;
  cfg.horizon = 100;
  cfg.law = ControlLaw::Deadbeat;
  cfg.init_width = 64.0;
  cfg.seed = 9103;
  cfg.trials = 200;
  cfg.threads = 1;

  EnsemblePoint pt;
  int below_sm = 0, below_ms = 0;
  for (std::uint64_t ci = 0; ci < 20; ++ci) {
    SimConfig local = cfg;
    local.code.seed = rng::derive(cfg.seed, "code", ci);
    local.seed = local.code.seed;
    MetricsSummary s = run_trials(local);
    double mean_sup =
        std::accumulate(s.per_trial_sup.begin(), s.per_trial_sup.end(), 0.0) /
        static_cast<double>(s.per_trial_sup.size());
    if (s.sup_mean_x < 200.0) ++below_sm;
    if (mean_sup < 200.0) ++below_ms;
    pt.worst_supmean = std::max(pt.worst_supmean, s.sup_mean_x);
    pt.worst_meansup = std::max(pt.worst_meansup, mean_sup);
  }
  pt.frac_supmean = below_sm / 20.0;
  pt.frac_meansup = below_ms / 20.0;
  return pt;
}

bool check_scalar_ensemble(std::string& detail) {
  const EnsemblePoint p3 = scalar_ensemble_point(3, 16.0);
  const EnsemblePoint p6 = scalar_ensemble_point(6, 2.0);
  const bool margin = p3.frac_supmean >= 0.85;
  // expected ordering: the low-rate point passes a strictly larger fraction
  // than the high-rate point, under either aggregation of |x_t|
  const bool ordered =
      p6.frac_supmean < p3.frac_supmean || p6.frac_meansup < p3.frac_meansup;
  detail = "fraction under 200 (sup of per-time mean): k=3 " +
           fmt("%.2f", p3.frac_supmean) + ", k=6 " + fmt("%.2f", p6.frac_supmean) +
           "; (mean of per-trial sup): k=3 " + fmt("%.2f", p3.frac_meansup) +
           ", k=6 " + fmt("%.2f", p6.frac_meansup) + "; worst code k=3 " +
           fmt("%.3g", p3.worst_supmean) + "/" + fmt("%.3g", p3.worst_meansup) +
           ", k=6 " + fmt("%.3g", p6.worst_supmean) + "/" +
           fmt("%.3g", p6.worst_meansup);
  if (!ordered)
    detail += "; no strict ordering at this threshold: bin revisions heal decode "
              "lapses before they compound, so every sampled code stays far below "
              "200 in both settings";
  return margin && ordered;
}

// ---------------------------------------------------------------------------
// 4. Third-order plant (modes 2, -0.5, 0.5): threshold calculator figures,
// then closed-loop sweeps at k = 2..5 in shared-reference mode with truncated
// gaussian noise, all costs finite, per-code cost tables written out.

bool check_vector_pipeline(std::string& detail) {
  const std::vector<double> a{-2.0, -0.25, 0.5};
  ThresholdReport rep = cuboid_thresholds(a, 15, true);
  bool pass = std::abs(rep.lambda - 2.215) <= 1e-3;
  if (std::abs(15.0 * rep.exponent - 2.29) > 1e-2) pass = false;
  const unsigned kmin = min_bits(rep.rate, 15);
  if (kmin != 2) pass = false;

  std::filesystem::create_directories("acceptance_out");
  std::string costs;
  for (unsigned k = 2; k <= 5; ++k) {
    SimConfig cfg;
    cfg.plant = PlantModel{a, 5.0, 5.0};
    cfg.code = CodeParams{15, k, 0.5, 7};
    cfg.eps = 0.3;
    cfg.quantizer = QuantizerConfig{k, 1.0};
    cfg.mode = LoopMode::ObserverKnowsU;
    cfg.horizon = 100;
    cfg.law = ControlLaw::Deadbeat;
    cfg.noise = NoiseKind::TruncGauss;
    cfg.init_width = 10.0;
    cfg.seed = 9104;
    cfg.trials = 20;
    cfg.threads = 1;
    std::vector<SweepRow> rows = run_code_sweep(cfg, 10, MetricKind::MeanLqr);
    double worst = 0.0;
    for (const SweepRow& r : rows) {
      if (!std::isfinite(r.metric)) pass = false;
      worst = std::max(worst, r.metric);
    }
    std::ofstream out("acceptance_out/vector_k" + std::to_string(k) + "_lqr.csv");
    write_sweep_csv(rows, out);
    costs += " k" + std::to_string(k) + "<=" + fmt("%.3g", worst);
  }
  detail = "lambda=" + fmt("%.4f", rep.lambda) + ", n*beta=" +
           fmt("%.4f", 15.0 * rep.exponent) + ", k_min=" + std::to_string(kmin) +
           ", worst cost per k:" + costs;
  return pass;
}

// ---------------------------------------------------------------------------
// 5. Threshold calculator cross-checks: the ensemble rate ceiling, agreement
// of the bisected and closed-form box-filter rates, the root-bound and
// radius sandwiches, and convergence of the sparse-in-time rate toward its
// limit.

bool check_threshold_calculator(std::string& detail) {
  bool pass = true;

  const CodeRegion reg = ensemble_region(0.3, 0.5, 0.1);
  const double want = 1.0 - std::log2(1.3);
  if (std::abs(reg.rate_max - want) > 1e-9) pass = false;

  double max_gap = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const unsigned m = 1 + static_cast<unsigned>(s % 6);
    std::vector<double> a(m);
    double sum = 0.0;
    for (unsigned i = 0; i < m; ++i)
      sum += std::abs(a[i] = rng::uniform(-3.0, 3.0, 9105, kDomAcc, s, i));
    if (sum < 1.05)  // keep the closed-form rate positive
      for (double& v : a) v *= 1.2 / std::max(sum, 1e-9);

    const double closed = 15.0 * cuboid_thresholds(a, 15, false).rate;
    const double bisected = 15.0 * cuboid_thresholds(a, 15, true).rate;
    max_gap = std::max(max_gap, std::abs(closed - bisected));

    SpectralReport rep = spectral_report(a);
    if (rep.lambda_f > rep.fujiwara + 1e-9) pass = false;
    if (rep.fujiwara > 2.0 * rep.lambda_fbar + 1e-9) pass = false;
    if (rep.lambda_f > rep.lambda_fbar + 1e-9) pass = false;
    if (rep.lambda_fbar > rep.lambda_f / (std::exp2(1.0 / m) - 1.0) + 1e-9) pass = false;
  }
  if (max_gap > 1e-6) pass = false;

  const double n64 = 64.0;
  std::vector<double> c = monic_from_roots({std::pow(1.3, n64), std::pow(1.1, n64)});
  double csum = 0.0;
  for (double v : c) csum += std::abs(v);
  const double r64 = std::log2(csum) / n64;
  const double rstar = limiting_values({1.3, 1.1}).rate;
  const double conv = std::abs(r64 / rstar - 1.0);
  if (!(conv < 0.05)) pass = false;

  detail = "rate ceiling gap " + fmt("%.2g", std::abs(reg.rate_max - want)) +
           ", bisected-vs-closed gap " + fmt("%.2g", max_gap) +
           ", sandwiches on 100 plants, |R_64/R*-1|=" + fmt("%.3g", conv);
  return pass;
}

// ---------------------------------------------------------------------------
// 6. Filter soundness over long noiseless-channel runs: the true state never
// leaves either filter's set, box widths follow their recursions at machine
// precision, and the slab-cover coefficients cover sampled points.

bool box_lattice_run(const PlantModel& plant, const QuantizerConfig& q,
                     const Eigen::VectorXd& init_width, const Eigen::VectorXd& steady,
                     std::uint64_t seed, std::size_t steps, std::size_t& viol) {
  const unsigned m = plant.m();
  const Eigen::MatrixXd F = plant.f();
  CuboidSession ses(plant, q, false,
                    Hypercuboid::centered(Eigen::VectorXd::Zero(m), init_width));
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  bool exact = true;
  for (std::size_t t = 1; t <= steps; ++t) {
    const Hypercuboid prior = ses.prior();
    if (!prior.contains(x, 1e-7)) ++viol;
    // steady-state envelope: widths start below the fixed point and the
    // measurement intersection can only shrink them, so it holds throughout
    for (unsigned i = 0; i < m; ++i)
      if (prior.width()(i) > steady(i) * (1.0 + 1e-12)) ++viol;

    const double v = rng::uniform(-plant.v_width / 2, plant.v_width / 2, seed, kDomAcc,
                                  t, 1000 + 0);
    const double y = x(0) + v;
    const std::uint64_t bin = ses.bin_for(y);
    if (!ses.measure(bin)) ++viol;  // interior bins always resolve here
    const Hypercuboid post = ses.posterior();
    if (!post.contains(x, 1e-7)) ++viol;

    // the measurement replaces coordinate 1 by intersection with the widened
    // bin and leaves the rest alone; recompute it independently
    BinSlab bs = dequantize_bin(bin,
                                Slab{prior.x_min(0) - plant.v_width / 2,
                                     prior.x_max(0) + plant.v_width / 2},
                                q);
    if (!bs.ok) ++viol;
    const double lo = std::max(prior.x_min(0), bs.slab.lo - plant.v_width / 2);
    const double hi = std::min(prior.x_max(0), bs.slab.hi + plant.v_width / 2);
    if (post.x_min(0) != lo || post.x_max(0) != hi) exact = false;
    for (unsigned i = 1; i < m; ++i)
      if (post.x_min(i) != prior.x_min(i) || post.x_max(i) != prior.x_max(i))
        exact = false;

    const Eigen::VectorXd u = -F * prior.center();
    ses.advance(u);

    // one-step width recursion, recomputed from the posterior
    const Eigen::VectorXd pw = post.width();
    for (unsigned i = 0; i < m; ++i) {
      const double nw = std::abs(plant.a[i]) * pw(0) + (i + 1 < m ? pw(i + 1) : 0.0) +
                        plant.w_width;
      if (std::abs(ses.prior().width()(i) - nw) > 1e-12 * std::max(1.0, nw))
        exact = false;
    }

    Eigen::VectorXd w(m);
    for (unsigned i = 0; i < m; ++i)
      w(i) = rng::uniform(-plant.w_width / 2, plant.w_width / 2, seed, kDomAcc, t, i);
    x = F * x + u + w;
  }
  return exact;
}

bool check_filter_soundness(std::string& detail) {
  bool pass = true;
  std::size_t viol = 0;

  // scalar and third-order lattice sessions; steady widths from the fixed
  // point of the width recursion
  if (!box_lattice_run(PlantModel{{-2.0}, 60.0, 2.0}, QuantizerConfig{3, 16.0},
                       Eigen::VectorXd::Constant(1, 64.0),
                       Eigen::VectorXd::Constant(1, 96.0), 9106, 10000, viol))
    pass = false;
  Eigen::VectorXd steady3(3);
  steady3 << 72.75, 25.75, 15.5;
  if (!box_lattice_run(PlantModel{{-2.0, -0.25, 0.5}, 5.0, 5.0}, QuantizerConfig{3, 16.0},
                       Eigen::VectorXd::Constant(3, 10.0), steady3, 9107, 10000, viol))
    pass = false;

  // shared-reference mode: the posterior coordinate-1 width is an exact map
  // of the prior width, independent of the measured value
  {
    PlantModel plant{{-2.0}, 60.0, 2.0};
    QuantizerConfig q{3, 16.0};
    const Eigen::MatrixXd F = plant.f();
    CuboidSession ses(plant, q, true,
                      Hypercuboid::centered(Eigen::VectorXd::Zero(1),
                                            Eigen::VectorXd::Constant(1, 64.0)));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(1);
    for (std::size_t t = 1; t <= 10000; ++t) {
      const double w1 = ses.prior().width()(0);
      if (!ses.prior().contains(x, 1e-7)) ++viol;
      const double v =
          rng::uniform(-plant.v_width / 2, plant.v_width / 2, 9108, kDomAcc, t, 1000);
      ses.measure(ses.bin_for(x(0) + v));
      if (!ses.posterior().contains(x, 1e-7)) ++viol;
      const double want_post = (w1 + plant.v_width) / 8.0 + plant.v_width;
      if (std::abs(ses.posterior().width()(0) - want_post) > 1e-12 * want_post)
        pass = false;
      const Eigen::VectorXd u = -F * ses.prior().center();
      ses.advance(u);
      const double want_next = 2.0 * want_post + plant.w_width;
      if (std::abs(ses.prior().width()(0) - want_next) > 1e-12 * want_next) pass = false;
      if (t >= 60 && std::abs(ses.prior().width()(0) - 86.0) > 1e-6) pass = false;
      const double wn =
          rng::uniform(-plant.w_width / 2, plant.w_width / 2, 9108, kDomAcc, t, 0);
      x = F * x + u + Eigen::VectorXd::Constant(1, wn);
    }
  }

  // ellipsoid endpoint: adaptive split of the predicted measurement range,
  // tightest-cover update, trace-optimal propagation
  std::size_t desync = 0;
  double max_trace = 0.0;
  {
    PlantModel plant{{-2.0, -0.25, 0.5}, 5.0, 5.0};
    const unsigned m = plant.m();
    const Eigen::MatrixXd F = plant.f();
    const std::uint64_t L = 8;
    EllipsoidState e{Eigen::MatrixXd::Identity(m, m) * 75.0, Eigen::VectorXd::Zero(m)};
    Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
    for (std::size_t t = 1; t <= 10000; ++t) {
      const double v =
          rng::uniform(-plant.v_width / 2, plant.v_width / 2, 9109, kDomAcc, t, 1000);
      const double y = x(0) + v;
      const double s = std::sqrt(std::max(e.p(0, 0), 0.0));
      const double lo = e.c(0) - s - plant.v_width / 2;
      const double sub = (2 * s + plant.v_width) / static_cast<double>(L);
      auto idx = static_cast<std::int64_t>(std::floor((y - lo) / sub));
      idx = std::clamp<std::int64_t>(idx, 0, static_cast<std::int64_t>(L) - 1);
      EllipsoidMeas meas = ellipsoid_meas_update(
          e, Slab{lo + static_cast<double>(idx) * sub - plant.v_width / 2,
                  lo + static_cast<double>(idx + 1) * sub + plant.v_width / 2});
      if (meas.desync) ++desync;
      if (!meas.e.contains(x, 1e-6)) ++viol;
      const Eigen::VectorXd u = -F * meas.e.c;
      e = ellipsoid_time_update(meas.e, plant, u);
      Eigen::VectorXd w(m);
      for (unsigned i = 0; i < m; ++i)
        w(i) = rng::uniform(-plant.w_width / 2, plant.w_width / 2, 9109, kDomAcc, t, i);
      x = F * x + u + w;
      if (!e.contains(x, 1e-6)) ++viol;
      max_trace = std::max(max_trace, e.p.trace());
    }
  }
  if (desync != 0) pass = false;
  if (!(max_trace < 1e5)) pass = false;

  // slab-cover coefficients: sampled points of (unit ball) ∩ (slab) must land
  // inside the returned ellipse, over a spread of slab geometries
  struct Case {
    unsigned m;
    double gamma, delta;
  };
  const Case cases[] = {{2, -0.5, 0.5}, {3, 0.0, 0.4}, {2, -0.2, 0.9},
                        {4, 0.3, 0.8},  {3, -1.0, 0.3}};
  std::size_t cover_viol = 0;
  std::uint64_t draw = 0;
  for (const Case& cs : cases) {
    const MinVolCoeffs mv = min_vol_coeffs(cs.m, cs.gamma, cs.delta);
    std::size_t kept = 0;
    while (kept < 10000) {
      Eigen::VectorXd z(cs.m);
      for (unsigned i = 0; i < cs.m; ++i)
        z(i) = rng::uniform(-1.0, 1.0, 9110, kDomAcc, draw, i), ++draw;
      if (z.squaredNorm() > 1.0 || z(0) < cs.gamma || z(0) > cs.delta) continue;
      ++kept;
      const double along = (z(0) - mv.xi) * (z(0) - mv.xi) / mv.a;
      const double across = (z.squaredNorm() - z(0) * z(0)) / mv.b;
      if (along + across > 1.0 + 1e-9) ++cover_viol;
    }
  }
  if (cover_viol != 0) pass = false;
  if (viol != 0) pass = false;

  detail = std::to_string(viol) + " containment violations over 4x10^4 steps, " +
           std::to_string(desync) + " desyncs, width recursions exact, " +
           std::to_string(cover_viol) + " cover misses over 5x10^4 points";
  return pass;
}

// ---------------------------------------------------------------------------
// 7. The per-step earliest-unresolved delay must have a geometric tail:
// counts two delays apart drop by at least half beyond the median. The window
// the decoder re-reduces each step has rows/cols proportional to that delay,
// so cubic work against a geometric tail keeps the expected per-step cost
// bounded; this check is what licenses treating the decoder as constant
// average work per step.

bool check_delay_tail(std::string& detail) {
  const std::vector<std::uint64_t>& hist = g_curve.step_delay_hist;
  const std::uint64_t total = std::accumulate(hist.begin(), hist.end(), std::uint64_t{0});
  if (total == 0) {
    detail = "no delay samples";
    return false;
  }
  std::size_t median = 0;
  std::uint64_t cum = 0;
  for (std::size_t d = 0; d < hist.size(); ++d) {
    cum += hist[d];
    if (2 * cum >= total) {
      median = d;
      break;
    }
  }
  std::size_t checked = 0, bad = 0;
  for (std::size_t d = median + 1; d + 2 < hist.size(); ++d) {
    if (hist[d] < 20) continue;  // too few samples for a stable ratio
    ++checked;
    if (2 * hist[d + 2] > hist[d]) ++bad;
  }
  detail = "median delay " + std::to_string(median) + ", " + std::to_string(checked) +
           " ratio checks, " + std::to_string(bad) + " above half";
  return checked > 0 && bad == 0;
}

}  // namespace

int main() {
  std::string detail;

  bool p1 = check_decoder_consensus(detail);
  report(1, p1, "streaming decode equals exhaustive consensus", detail);

  bool p2 = check_delay_profile(detail);
  report(2, p2, "error probability decays with decoding delay", detail);

  bool p3 = check_scalar_ensemble(detail);
  report(3, p3, "scalar plant stabilized across the code ensemble", detail);

  bool p4 = check_vector_pipeline(detail);
  report(4, p4, "third-order plant thresholds and cost sweeps", detail);

  bool p5 = check_threshold_calculator(detail);
  report(5, p5, "threshold calculator identities and sandwiches", detail);

  bool p6 = check_filter_soundness(detail);
  report(6, p6, "filters stay sound over long noiseless runs", detail);

  bool p7 = check_delay_tail(detail);
  report(7, p7, "decoder delay histogram has a geometric tail", detail);

  std::printf("%s\n", g_all_pass ? "acceptance: all checks passed"
                                 : "acceptance: FAILURES PRESENT");
  return g_all_pass ? 0 : 1;
}
