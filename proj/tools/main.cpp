#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "anytime/bounds.hpp"
#include "anytime/control.hpp"
#include "anytime/decoder.hpp"
#include "anytime/manifest.hpp"

namespace fs = std::filesystem;
using namespace anytime;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

struct Global {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out_dir = ".";
  unsigned threads = 1;

  fs::path prepare() const {
    fs::path dir(out_dir);
    fs::create_directories(dir);
    return dir;
  }
};

void print_threshold(const ThresholdReport& rep) {
  std::cout << "filter=" << rep.formula << " rate=" << fmt(rep.rate)
            << " n_rate=" << fmt(rep.rate * rep.n)
            << " k_min=" << min_bits(rep.rate, rep.n);
  if (rep.rate_upper > 0.0) std::cout << " rate_upper=" << fmt(rep.rate_upper);
  std::cout << " exponent=" << fmt(rep.exponent)
            << " n_beta=" << fmt(rep.exponent * rep.n) << " lambda=" << fmt(rep.lambda)
            << '\n';
}

int cmd_bounds(const std::vector<double>& a, unsigned n, unsigned moment,
               const std::string& channel, double eps, double density) {
  const auto m = a.size();
  const double rho = static_cast<double>(moment);

  std::cout << "plant: m=" << m << " a=(";
  for (std::size_t i = 0; i < m; ++i) std::cout << (i ? "," : "") << fmt(a[i]);
  std::cout << ") n=" << n << " rho=" << moment << '\n';

  const SpectralReport sr = spectral_report(a);
  std::cout << "spectrum: lambda_f=" << fmt(sr.lambda_f)
            << " lambda_fbar=" << fmt(sr.lambda_fbar)
            << " fujiwara=" << fmt(sr.fujiwara) << '\n';

  std::vector<double> mags;
  for (const auto& z : poly_roots(a)) mags.push_back(std::abs(z));
  const LimitValues lim = limiting_values(mags);
  std::cout << "limit: rate_bits_per_step=" << fmt(lim.rate)
            << " exponent_bits_per_step=" << fmt(lim.exponent) << '\n';

  const ThresholdReport box = cuboid_thresholds(a, n, false, rho);
  print_threshold(box);
  print_threshold(cuboid_thresholds(a, n, true, rho));
  if (m >= 2) {
    print_threshold(ellipsoid_thresholds(a, n, false, rho));
    print_threshold(ellipsoid_thresholds(a, n, true, rho));
  }

  if (!channel.empty()) {
    const ChannelSpec spec{channel == "bec" ? ChannelKind::BEC : ChannelKind::BSC, eps};
    const double zeta = bhattacharyya(spec);
    const CodeRegion top = ensemble_region(zeta, density, 0.0);
    std::cout << "channel: kind=" << channel << " eps=" << fmt(eps)
              << " zeta=" << fmt(zeta) << '\n';
    std::cout << "ensemble: p=" << fmt(density) << " rate_max=" << fmt(top.rate_max)
              << " n_rate_max=" << fmt(top.rate_max * n) << '\n';
    const double need = box.exponent * n;
    const unsigned kmin = min_bits(box.rate, n);
    for (unsigned k = kmin; k < n && k < kmin + 6; ++k) {
      const double rate = static_cast<double>(k) / n;
      const CodeRegion reg = ensemble_region(zeta, density, rate);
      const bool meets = reg.feasible && reg.exponent_max * n >= need;
      std::cout << "k=" << k << " R=" << fmt(rate)
                << " code_n_beta_max=" << fmt(reg.exponent_max * n)
                << " filter_n_beta=" << fmt(need) << " meets_box="
                << (meets ? "yes" : "no") << '\n';
      if (channel == "bsc") {
        const CodeRegion ml = bsc_ml_region(eps, rate);
        std::cout << "k=" << k << " bsc_ml_n_beta_max=" << fmt(ml.exponent_max * n)
                  << " feasible=" << (ml.feasible ? "yes" : "no") << '\n';
      }
    }
  }
  return 0;
}

int cmd_sample_code(const Global& g, unsigned n, unsigned k, double p, unsigned blocks) {
  CodeParams prm{n, k, p, g.seed};
  validate(prm);
  const fs::path dir = g.prepare();
  const std::string text = serialize(prm);
  write_file(dir / "code.txt", text);
  std::cout << text;

  RunManifest man;
  man.command = "sample-code";
  man.seed = g.seed;
  man.threads = g.threads;
  nlohmann::json cfg{{"n", n}, {"k", k}, {"p", p}, {"seed", g.seed}, {"blocks", blocks}};
  man.config = cfg.dump();
  man.add_output(dir / "code.txt");

  if (blocks > 0) {
    ToeplitzCode code(prm);
    std::ostringstream os;
    for (unsigned tau = 1; tau <= blocks; ++tau) {
      const BitMatrix& h = code.block(tau);
      for (std::size_t r = 0; r < h.rows(); ++r) {
        for (std::size_t c = 0; c < h.cols(); ++c) os << (h.get(r, c) ? '1' : '0');
        os << '\n';
      }
      os << '\n';
    }
    write_file(dir / "blocks.txt", os.str());
    man.add_output(dir / "blocks.txt");
  }
  man.write(dir / "manifest.json");
  return 0;
}

int cmd_encode(const Global& g, const std::string& code_file, unsigned steps,
               const std::vector<std::string>& bits) {
  const std::string text = read_file(code_file);
  const CodeParams prm = parse_code(text);
  ToeplitzCode code(prm);
  EncoderState enc(code);

  std::vector<std::vector<std::uint8_t>> msgs;
  if (!bits.empty()) {
    for (const std::string& word : bits) {
      if (word.size() != prm.k)
        throw std::runtime_error("message '" + word + "' is not " +
                                 std::to_string(prm.k) + " bits");
      std::vector<std::uint8_t> msg;
      for (char c : word) {
        if (c != '0' && c != '1') throw std::runtime_error("message bits must be 0/1");
        msg.push_back(static_cast<std::uint8_t>(c - '0'));
      }
      msgs.push_back(std::move(msg));
    }
  } else {
    if (steps == 0) throw std::runtime_error("need --steps or --bits");
    for (unsigned t = 1; t <= steps; ++t) {
      std::vector<std::uint8_t> msg(prm.k);
      for (unsigned i = 0; i < prm.k; ++i)
        msg[i] = rng::bernoulli(0.5, g.seed, rng::kDomMessage, t, i) ? 1 : 0;
      msgs.push_back(std::move(msg));
    }
  }

  std::ostringstream os;
  for (const auto& msg : msgs) {
    const std::vector<std::uint8_t> cw = enc.encode_step(msg);
    for (std::uint8_t b : cw) os << static_cast<char>('0' + b);
    os << '\n';
  }
  const fs::path dir = g.prepare();
  write_file(dir / "codewords.txt", os.str());
  std::cout << os.str();

  RunManifest man;
  man.command = "encode";
  man.seed = g.seed;
  man.threads = g.threads;
  nlohmann::json cfg{{"code", code_file}, {"steps", msgs.size()}};
  man.config = cfg.dump();
  man.add_output(dir / "codewords.txt");
  man.write(dir / "manifest.json");
  return 0;
}

int cmd_simulate(const Global& g, const std::string& config_file) {
  const std::string text = read_file(config_file);
  SimConfig cfg = parse_sim_config(text);
  if (g.seed_given) cfg.seed = g.seed;
  cfg.threads = g.threads;

  const fs::path dir = g.prepare();
  {
    const TrajectoryRecord traj = run_closed_loop(cfg, 0);
    std::ofstream out(dir / "trajectory.csv");
    write_trajectory_csv(traj, out);
  }
  const MetricsSummary ms = run_trials(cfg);
  {
    std::ofstream out(dir / "metrics.csv");
    out << "trial,lqr,sup\n";
    for (std::size_t i = 0; i < ms.per_trial_lqr.size(); ++i)
      out << i << ',' << fmt17(ms.per_trial_lqr[i]) << ',' << fmt17(ms.per_trial_sup[i])
          << '\n';
  }

  RunManifest man;
  man.command = "simulate";
  man.seed = cfg.seed;
  man.threads = cfg.threads;
  man.config = text;
  man.add_output(dir / "trajectory.csv");
  man.add_output(dir / "metrics.csv");
  man.write(dir / "manifest.json");

  std::cout << "trials=" << ms.trials << " mean_lqr=" << fmt(ms.mean_lqr)
            << " sup_mean_x=" << fmt(ms.sup_mean_x) << '\n';
  return 0;
}

int cmd_reliability(const Global& g, unsigned n, unsigned k, double p,
                    std::uint64_t code_seed, double eps, std::size_t horizon,
                    std::size_t trials) {
  ReliabilityConfig cfg;
  cfg.code = CodeParams{n, k, p, code_seed};
  cfg.eps = eps;
  cfg.horizon = horizon;
  cfg.trials = trials;
  cfg.seed = g.seed;
  cfg.threads = g.threads;
  const ReliabilityCurve curve = estimate_reliability(cfg);

  const fs::path dir = g.prepare();
  {
    std::ofstream out(dir / "reliability.csv");
    write_reliability_csv(curve, out);
  }
  {
    std::ofstream out(dir / "step_hist.csv");
    out << "d,count\n";
    for (std::size_t d = 0; d < curve.step_delay_hist.size(); ++d)
      out << d << ',' << curve.step_delay_hist[d] << '\n';
  }

  RunManifest man;
  man.command = "reliability";
  man.seed = g.seed;
  man.threads = g.threads;
  nlohmann::json cfg_echo{{"code", {{"n", n}, {"k", k}, {"p", p}, {"seed", code_seed}}},
                          {"eps", eps},
                          {"horizon", horizon},
                          {"trials", trials}};
  man.config = cfg_echo.dump();
  man.add_output(dir / "reliability.csv");
  man.add_output(dir / "step_hist.csv");
  man.write(dir / "manifest.json");

  std::cout << "samples=" << curve.samples << " onset=" << curve.onset
            << " slope=" << fmt(curve.slope) << " intercept=" << fmt(curve.intercept)
            << " eta=" << fmt(std::exp2(curve.intercept)) << '\n';
  return 0;
}

int cmd_sweep(const Global& g, const std::string& config_file) {
  const std::string text = read_file(config_file);
  SweepSpec spec = parse_sweep_config(text);
  if (g.seed_given) spec.sim.seed = g.seed;
  spec.sim.threads = g.threads;

  const std::vector<SweepRow> rows = run_code_sweep(spec.sim, spec.codes, spec.metric);
  const fs::path dir = g.prepare();
  {
    std::ofstream out(dir / "sweep.csv");
    write_sweep_csv(rows, out);
  }

  RunManifest man;
  man.command = "sweep";
  man.seed = spec.sim.seed;
  man.threads = spec.sim.threads;
  man.config = text;
  man.add_output(dir / "sweep.csv");
  man.write(dir / "manifest.json");

  const SweepRow* best = &rows[0];
  const SweepRow* worst = &rows[0];
  for (const SweepRow& r : rows) {
    if (r.metric < best->metric) best = &r;
    if (r.metric > worst->metric) worst = &r;
  }
  std::cout << "codes=" << rows.size() << " best_seed=" << best->code_seed
            << " best=" << fmt(best->metric) << " worst=" << fmt(worst->metric) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anytime coding, estimation and control toolkit"};
  app.require_subcommand(1);
  app.fallthrough(true);

  Global g;
  CLI::Option* seed_opt = app.add_option("--seed", g.seed, "master seed");
  app.add_option("--out-dir", g.out_dir, "directory for output files");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);

  // bounds
  std::vector<double> ba;
  unsigned bn = 15, bmoment = 2;
  std::string bchannel;
  double beps = 0.0, bdensity = 0.5;
  CLI::App* bounds_cmd = app.add_subcommand("bounds", "stabilization thresholds for a plant");
  bounds_cmd->add_option("--a", ba, "plant coefficients a_1..a_m")
      ->delimiter(',')
      ->required();
  bounds_cmd->add_option("--n", bn, "channel uses per step")->check(CLI::PositiveNumber);
  bounds_cmd->add_option("--moment", bmoment, "moment order rho (1 or 2)")
      ->check(CLI::Range(1u, 2u));
  bounds_cmd->add_option("--channel", bchannel, "channel kind")
      ->check(CLI::IsMember({"bec", "bsc"}));
  CLI::Option* eps_opt = bounds_cmd->add_option("--eps", beps, "channel parameter")
                             ->check(CLI::Range(0.0, 1.0));
  bounds_cmd->add_option("--p", bdensity, "ensemble density")->check(CLI::Range(0.0, 0.5));
  double bbec = -1.0, bbsc = -1.0;
  bounds_cmd->add_option("--bec", bbec, "shorthand for --channel bec --eps");
  bounds_cmd->add_option("--bsc", bbsc, "shorthand for --channel bsc --eps");

  // sample-code
  unsigned scn = 0, sck = 0, scblocks = 0;
  double scp = 0.5;
  CLI::App* sample_cmd = app.add_subcommand("sample-code", "draw a code from the ensemble");
  sample_cmd->add_option("--n", scn, "codeword bits")->required();
  sample_cmd->add_option("--k", sck, "message bits")->required();
  sample_cmd->add_option("--p", scp, "ensemble density");
  sample_cmd->add_option("--blocks", scblocks, "also dump this many parity blocks");

  // encode
  std::string enc_code;
  unsigned enc_steps = 0;
  std::vector<std::string> enc_bits;
  CLI::App* encode_cmd = app.add_subcommand("encode", "systematic encoding of a message stream");
  encode_cmd->add_option("--code", enc_code, "code file from sample-code")->required();
  encode_cmd->add_option("--steps", enc_steps, "encode this many random messages");
  encode_cmd->add_option("--bits", enc_bits, "explicit messages, e.g. 101,110")
      ->delimiter(',');

  // simulate
  std::string sim_config;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "closed-loop episodes from a JSON config");
  sim_cmd->add_option("--config", sim_config, "JSON config file")->required();

  // reliability
  unsigned rn = 15, rk = 3;
  double rp = 0.5, reps = 0.0;
  std::uint64_t rcode_seed = 0;
  std::size_t rhorizon = 200, rtrials = 100;
  CLI::App* rel_cmd = app.add_subcommand("reliability", "empirical delay-error profile");
  rel_cmd->add_option("--n", rn, "codeword bits")->required();
  rel_cmd->add_option("--k", rk, "message bits")->required();
  rel_cmd->add_option("--p", rp, "ensemble density");
  rel_cmd->add_option("--code-seed", rcode_seed, "code identity");
  rel_cmd->add_option("--eps", reps, "erasure probability")->required();
  rel_cmd->add_option("--horizon", rhorizon, "stream length per trial");
  rel_cmd->add_option("--trials", rtrials, "independent streams");

  // sweep
  std::string sweep_config;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "per-code metric CDF from a JSON config");
  sweep_cmd->add_option("--config", sweep_config, "JSON config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  g.seed_given = seed_opt->count() > 0;

  try {
    if (bounds_cmd->parsed()) {
      if (bbec >= 0.0) {
        bchannel = "bec";
        beps = bbec;
      } else if (bbsc >= 0.0) {
        bchannel = "bsc";
        beps = bbsc;
      }
      if (!bchannel.empty() && eps_opt->count() == 0 && bbec < 0.0 && bbsc < 0.0) {
        std::cerr << "bounds: --channel needs --eps\n";
        return 2;
      }
      return cmd_bounds(ba, bn, bmoment, bchannel, beps, bdensity);
    }
    if (sample_cmd->parsed()) return cmd_sample_code(g, scn, sck, scp, scblocks);
    if (encode_cmd->parsed()) return cmd_encode(g, enc_code, enc_steps, enc_bits);
    if (sim_cmd->parsed()) return cmd_simulate(g, sim_config);
    if (rel_cmd->parsed())
      return cmd_reliability(g, rn, rk, rp, rcode_seed, reps, rhorizon, rtrials);
    if (sweep_cmd->parsed()) return cmd_sweep(g, sweep_config);
  } catch (const SchemaError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 2;
}
