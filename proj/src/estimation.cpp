#include "anytime/estimation.hpp"

#include <cmath>
#include <stdexcept>

namespace anytime {

Eigen::MatrixXd PlantModel::f() const {
  const unsigned n = m();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (unsigned i = 0; i < n; ++i) {
    out(i, 0) = -a[i];
    if (i + 1 < n) out(i, i + 1) = 1.0;
  }
  return out;
}

Eigen::MatrixXd PlantModel::fbar() const { return f().cwiseAbs(); }

void PlantModel::validate() const {
  if (a.empty()) throw std::invalid_argument("plant: no coefficients");
  for (double v : a)
    if (!std::isfinite(v)) throw std::invalid_argument("plant: non-finite coefficient");
  if (!(w_width >= 0.0) || !(v_width >= 0.0) || !std::isfinite(w_width) ||
      !std::isfinite(v_width))
    throw std::invalid_argument("plant: noise widths must be finite and nonnegative");
}

void QuantizerConfig::validate() const {
  if (bits < 1 || bits > 32) throw std::invalid_argument("quantizer: bits outside [1,32]");
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("quantizer: delta must be positive");
}

std::uint64_t quantize(double y, const QuantizerConfig& q) {
  q.validate();
  const double levels = static_cast<double>(q.levels());
  double bin = std::floor(y / q.delta);
  double r = std::fmod(bin, levels);
  if (r < 0.0) r += levels;
  return static_cast<std::uint64_t>(r);
}

BinSlab dequantize_bin(std::uint64_t index, const Slab& predicted, const QuantizerConfig& q) {
  q.validate();
  if (index >= q.levels()) throw std::out_of_range("dequantize_bin: index out of range");
  BinSlab out;
  if (!(predicted.hi >= predicted.lo)) return out;
  const double d = q.delta;
  const long long period = static_cast<long long>(q.levels());
  // Two full periods inside the interval means two complete candidate bins.
  if (predicted.width() >= 2.0 * d * static_cast<double>(period)) {
    out.ambiguous = true;
    return out;
  }
  long long start = static_cast<long long>(std::floor(predicted.lo / d)) - 1;
  long long r = (static_cast<long long>(index) - start) % period;
  if (r < 0) r += period;
  int hits = 0;
  double lo = 0.0;
  for (long long j = start + r; static_cast<double>(j) * d <= predicted.hi; j += period) {
    // bin [jd, (j+1)d) meets the closed interval
    if (static_cast<double>(j + 1) * d > predicted.lo) {
      ++hits;
      lo = static_cast<double>(j) * d;
    }
  }
  if (hits == 1) {
    out.ok = true;
    out.slab = Slab{lo, lo + d};
  } else if (hits > 1) {
    out.ambiguous = true;
  }
  return out;
}

bool Hypercuboid::contains(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != x_min.size()) return false;
  return (x.array() >= x_min.array() - tol).all() && (x.array() <= x_max.array() + tol).all();
}

Hypercuboid Hypercuboid::centered(const Eigen::VectorXd& c, const Eigen::VectorXd& width) {
  return Hypercuboid{c - 0.5 * width, c + 0.5 * width};
}

Hypercuboid cuboid_time_update(const Hypercuboid& cub, const Eigen::VectorXd& u,
                               const PlantModel& plant) {
  const unsigned m = plant.m();
  if (cub.dim() != m || u.size() != m)
    throw std::invalid_argument("cuboid_time_update: dimension mismatch");
  Eigen::VectorXd c = cub.center(), wd = cub.width();
  Eigen::VectorXd nc(m), nw(m);
  for (unsigned i = 0; i < m; ++i) {
    // row i of the companion form: x'_i = -a_i x_1 + x_{i+1} + u_i + w_i
    nc(i) = -plant.a[i] * c(0) + (i + 1 < m ? c(i + 1) : 0.0) + u(i);
    nw(i) = std::abs(plant.a[i]) * wd(0) + (i + 1 < m ? wd(i + 1) : 0.0) + plant.w_width;
  }
  return Hypercuboid::centered(nc, nw);
}

CuboidMeas cuboid_meas_update_nofeedback(const Hypercuboid& cub, const BinSlab& bin,
                                         double v_width) {
  if (!bin.ok) return CuboidMeas{cub, true};
  const double lo = std::max(cub.x_min(0), bin.slab.lo - 0.5 * v_width);
  const double hi = std::min(cub.x_max(0), bin.slab.hi + 0.5 * v_width);
  if (lo > hi) return CuboidMeas{cub, true};
  CuboidMeas out{cub, false};
  out.cub.x_min(0) = lo;
  out.cub.x_max(0) = hi;
  return out;
}

Hypercuboid cuboid_meas_update_feedback(const Hypercuboid& cub, std::uint64_t index,
                                        const QuantizerConfig& q, double v_width) {
  if (index >= q.levels())
    throw std::out_of_range("cuboid_meas_update_feedback: bin index out of range");
  const double width = (cub.x_max(0) - cub.x_min(0)) + v_width;
  const double sub = width / static_cast<double>(q.levels());
  const double slo = (cub.x_min(0) - 0.5 * v_width) + static_cast<double>(index) * sub;
  Hypercuboid out = cub;
  out.x_min(0) = slo - 0.5 * v_width;
  out.x_max(0) = (slo + sub) + 0.5 * v_width;
  return out;
}

std::uint64_t feedback_bin(double y, const Hypercuboid& cub, const QuantizerConfig& q,
                           double v_width) {
  const double lo = cub.x_min(0) - 0.5 * v_width;
  const double width = (cub.x_max(0) - cub.x_min(0)) + v_width;
  const double sub = width / static_cast<double>(q.levels());
  if (!(sub > 0.0)) return 0;
  double idx = std::floor((y - lo) / sub);
  if (idx < 0.0) idx = 0.0;
  const double top = static_cast<double>(q.levels() - 1);
  if (idx > top) idx = top;
  return static_cast<std::uint64_t>(idx);
}

SteadyStateReport steady_state_width(const PlantModel& plant, const QuantizerConfig& q,
                                     double initial_width1) {
  plant.validate();
  q.validate();
  const unsigned m = plant.m();
  SteadyStateReport rep;
  rep.delta_inf.resize(m);
  double tail = 0.0;
  for (unsigned i = m; i-- > 0;) {
    tail += std::abs(plant.a[i]);
    rep.delta_inf(i) = (q.delta + plant.v_width) * tail + plant.w_width * (m - i);
  }
  const double suma = tail;
  rep.required_levels =
      std::max(suma + (plant.v_width + plant.v_width * suma + m * plant.w_width) / q.delta,
               initial_width1 / q.delta);
  rep.feasible = static_cast<double>(q.levels()) > rep.required_levels;
  return rep;
}

bool EllipsoidState::contains(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != c.size()) return false;
  Eigen::VectorXd d = x - c;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(p);
  if (ldlt.info() != Eigen::Success) return false;
  return d.dot(ldlt.solve(d)) <= 1.0 + tol;
}

MinVolCoeffs min_vol_coeffs(unsigned m, double gamma, double delta) {
  if (m < 2) throw std::invalid_argument("min_vol_coeffs: m >= 2 required");
  if (!(gamma <= delta)) throw std::invalid_argument("min_vol_coeffs: gamma > delta");
  gamma = std::max(gamma, -1.0);
  delta = std::min(delta, 1.0);
  // keep a sliver of width so the degenerate tangential slab stays finite
  if (delta - gamma < 1e-12) {
    delta = std::min(1.0, gamma + 1e-12);
    gamma = delta - 1e-12;
  }
  const bool reflect = std::abs(delta) < std::abs(gamma);
  if (reflect) {
    double g = -delta;
    delta = -gamma;
    gamma = g;
  }
  const double md = static_cast<double>(m);
  MinVolCoeffs out;
  const double gd = gamma * delta;
  if (gd <= -1.0 / md) return out;  // slab spans the widest section; nothing to gain
  if (std::abs(gamma + delta) < 1e-12) {
    out.xi = 0.0;
    out.a = md * delta * delta;
    out.b = md * (1.0 - delta * delta) / (md - 1.0);
  } else {
    const double s = gamma + delta;
    const double dd = delta * delta - gamma * gamma;
    const double disc = md * md * dd * dd + 4.0 * (1.0 - gamma * gamma) * (1.0 - delta * delta);
    out.xi = (md * s * s + 2.0 * (1.0 + gd) - std::sqrt(disc)) / (2.0 * (md + 1.0) * s);
    out.a = md * (out.xi - gamma) * (delta - out.xi);
    out.b = out.a * (1.0 - gamma * gamma) / (out.a - (out.xi - gamma) * (out.xi - gamma));
  }
  if (reflect) out.xi = -out.xi;
  if (!(out.a > 0.0) || !(out.b > 0.0) || !std::isfinite(out.a) || !std::isfinite(out.b) ||
      !std::isfinite(out.xi))
    throw std::runtime_error("min_vol_coeffs: degenerate slab geometry");
  return out;
}

namespace {

Eigen::MatrixXd spd_floor(Eigen::MatrixXd p) {
  p = 0.5 * (p + p.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p);
  const double tr = std::max(p.trace(), 0.0);
  const double lim = std::max(1e-12 * tr / static_cast<double>(p.rows()), 1e-300);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(lim);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

EllipsoidState ellipsoid_time_update(const EllipsoidState& e, const PlantModel& plant,
                                     const Eigen::VectorXd& u) {
  const unsigned m = plant.m();
  if (e.dim() != m || u.size() != m)
    throw std::invalid_argument("ellipsoid_time_update: dimension mismatch");
  const Eigen::MatrixXd f = plant.f();
  const Eigen::MatrixXd fp = f * e.p * f.transpose();
  // noise hypercube sits inside the ball of radius sqrt(m) W/2; eps trades
  // the two trace terms and sqrt(tn/tf) minimizes their sum
  const double tn = 0.25 * m * m * plant.w_width * plant.w_width;
  const double tf = std::max(fp.trace(), 1e-300);
  const double eps = std::max(std::sqrt(tn / tf), 1e-9);
  EllipsoidState out;
  out.p = spd_floor((1.0 + eps) * fp +
                    ((1.0 + 1.0 / eps) * 0.25 * m * plant.w_width * plant.w_width) *
                        Eigen::MatrixXd::Identity(m, m));
  out.c = f * e.c + u;
  return out;
}

EllipsoidMeas ellipsoid_meas_update(const EllipsoidState& e, const Slab& slab) {
  const unsigned m = e.dim();
  if (m < 2) throw std::invalid_argument("ellipsoid_meas_update: m >= 2 required");
  const double p00 = e.p(0, 0);
  if (!(p00 > 0.0)) throw std::invalid_argument("ellipsoid_meas_update: P not positive");
  const double s = std::sqrt(p00);
  const double gamma = (slab.lo - e.c(0)) / s;
  const double delta = (slab.hi - e.c(0)) / s;
  if (gamma > 1.0 || delta < -1.0) return EllipsoidMeas{e, true};

  const MinVolCoeffs mv = min_vol_coeffs(m, gamma, delta);
  const Eigen::VectorXd pe = e.p.col(0);
  EllipsoidMeas out;
  out.e.p = spd_floor(mv.b * e.p - ((mv.b - mv.a) / p00) * (pe * pe.transpose()));
  out.e.c = e.c + (mv.xi / s) * pe;
  return out;
}

CuboidSession::CuboidSession(const PlantModel& plant, const QuantizerConfig& q,
                             bool observer_knows_u, Hypercuboid init)
    : plant_(plant), q_(q), knows_u_(observer_knows_u), prior_(std::move(init)) {
  plant_.validate();
  q_.validate();
  if (prior_.dim() != plant_.m())
    throw std::invalid_argument("session: initial set has the wrong dimension");
}

const Hypercuboid& CuboidSession::posterior() const {
  if (!post_) throw std::logic_error("session: no measurement consumed this step");
  return *post_;
}

Slab CuboidSession::predicted() const {
  return Slab{prior_.x_min(0) - 0.5 * plant_.v_width, prior_.x_max(0) + 0.5 * plant_.v_width};
}

std::uint64_t CuboidSession::bin_for(double y) const {
  return knows_u_ ? feedback_bin(y, prior_, q_, plant_.v_width) : quantize(y, q_);
}

bool CuboidSession::measure(std::uint64_t bin) {
  if (post_) throw std::logic_error("session: measurement already consumed this step");
  if (knows_u_) {
    post_ = cuboid_meas_update_feedback(prior_, bin, q_, plant_.v_width);
    pending_applied_ = true;
    pending_desync_ = false;
  } else {
    BinSlab bs = dequantize_bin(bin, predicted(), q_);
    CuboidMeas r = cuboid_meas_update_nofeedback(prior_, bs, plant_.v_width);
    post_ = r.cub;
    pending_applied_ = !r.desync;
    pending_desync_ = r.desync;
  }
  pending_bin_ = bin;
  return pending_applied_;
}

void CuboidSession::advance(const Eigen::VectorXd& u) {
  if (!post_) throw std::logic_error("session: advance without a measurement");
  steps_.push_back(StepRecord{prior_, pending_bin_, pending_applied_, pending_desync_, u});
  prior_ = cuboid_time_update(*post_, u, plant_);
  post_.reset();
}

void CuboidSession::replay_from(std::size_t from, const std::vector<std::uint64_t>& bins) {
  if (post_) throw std::logic_error("session: replay between measure and advance");
  if (from == 0 || from > steps_.size())
    throw std::out_of_range("session: replay point outside the recorded horizon");
  if (bins.size() != steps_.size() - (from - 1))
    throw std::invalid_argument("session: replay needs one bin per redone step");
  std::vector<Eigen::VectorXd> inputs;
  inputs.reserve(bins.size());
  for (std::size_t i = from - 1; i < steps_.size(); ++i) inputs.push_back(steps_[i].u);
  prior_ = steps_[from - 1].prior;
  steps_.resize(from - 1);
  for (std::size_t i = 0; i < bins.size(); ++i) {
    measure(bins[i]);
    advance(inputs[i]);
  }
}

}  // namespace anytime
