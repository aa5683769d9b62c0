#include "anytime/decoder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace anytime {

namespace {

std::size_t popcount_words(const std::vector<std::uint64_t>& w) {
  std::size_t acc = 0;
  for (std::uint64_t x : w) acc += std::popcount(x);
  return acc;
}

inline bool get_bit(const std::vector<std::uint64_t>& w, std::size_t i) {
  return (w[i / 64] >> (i % 64)) & 1u;
}
inline void set_bit(std::vector<std::uint64_t>& w, std::size_t i, bool v) {
  if (v)
    w[i / 64] |= std::uint64_t{1} << (i % 64);
  else
    w[i / 64] &= ~(std::uint64_t{1} << (i % 64));
}

}  // namespace

DecoderState::DecoderState(const ToeplitzCode& code)
    : code_(&code), wpr_(gf2::words_for(code.n())) {}

const DecoderState::Slot& DecoderState::slot(std::size_t time) const {
  if (time == 0 || time > t_)
    throw std::out_of_range("decoder: no symbols at time " + std::to_string(time));
  return slots_[time - 1];
}

bool DecoderState::fully_resolved(const Slot& s) const {
  const unsigned n = code_->n();
  for (std::size_t w = 0; w < wpr_; ++w) {
    std::uint64_t full = ~std::uint64_t{0};
    if (w == wpr_ - 1 && n % 64 != 0) full = (std::uint64_t{1} << (n % 64)) - 1;
    if ((s.res[w] & full) != full) return false;
  }
  return true;
}

DecodeReport DecoderState::observe_step(const std::vector<Sym>& symbols) {
  const unsigned n = code_->n(), nb = code_->nbar();
  if (symbols.size() != n)
    throw std::invalid_argument("decoder: expected " + std::to_string(n) +
                                " symbols, got " + std::to_string(symbols.size()));
  ++t_;
  const std::size_t T = t_;

  Slot s;
  s.val.assign(wpr_, 0);
  s.res.assign(wpr_, 0);
  s.known.assign(wpr_, 0);
  for (unsigned i = 0; i < n; ++i) {
    switch (symbols[i]) {
      case Sym::Erased:
        cols_.push_back(Pos{static_cast<std::uint32_t>(T), i});
        break;
      case Sym::One:
        set_bit(s.val, i, true);
        [[fallthrough]];
      case Sym::Zero:
        set_bit(s.res, i, true);
        set_bit(s.known, i, true);
        break;
    }
  }
  slots_.push_back(std::move(s));

  const std::size_t words = std::max<std::size_t>(1, gf2::words_for(cols_.size()));
  for (Row& row : rows_) row.a.resize(words, 0);

  // Syndrome of the new parity block: every resolved bit in the stream
  // contributes through the matching Toeplitz block.
  std::vector<std::uint8_t> syn(nb, 0);
  std::vector<std::uint64_t> tmp(wpr_);
  for (std::size_t j = 1; j <= T; ++j) {
    const Slot& sj = slots_[j - 1];
    bool any = false;
    for (std::size_t w = 0; w < wpr_; ++w) {
      tmp[w] = sj.val[w] & sj.res[w];
      any = any || tmp[w] != 0;
    }
    if (!any) continue;
    const BitMatrix& blk = code_->block(T - j + 1);
    for (unsigned r = 0; r < nb; ++r)
      syn[r] ^= gf2::dot(blk.row(r), tmp.data(), wpr_) ? 1 : 0;
  }

  const std::size_t old_rows = rows_.size();
  rows_.resize(old_rows + nb);
  for (unsigned r = 0; r < nb; ++r) {
    rows_[old_rows + r].a.assign(words, 0);
    rows_[old_rows + r].rhs = syn[r];
  }
  for (std::size_t ci = 0; ci < cols_.size(); ++ci) {
    const Pos& pos = cols_[ci];
    const BitMatrix& blk = code_->block(T - pos.time + 1);
    for (unsigned r = 0; r < nb; ++r)
      if (blk.get(r, pos.bit)) set_bit(rows_[old_rows + r].a, ci, true);
  }

  DecodeReport rep;
  rep.t = T;
  rep.window_rows = rows_.size();
  rep.window_cols = cols_.size();

  reduce();
  rep.newly_determined = harvest();

  while (r_ <= T && fully_resolved(slots_[r_ - 1])) ++r_;
  rep.d = (r_ <= T) ? (T - r_ + 1) : 0;
  return rep;
}

void DecoderState::reduce() {
  const std::size_t C = cols_.size();
  piv_.clear();
  std::size_t pr = 0;
  for (std::size_t c = 0; c < C && pr < rows_.size(); ++c) {
    std::size_t sel = rows_.size();
    for (std::size_t r = pr; r < rows_.size(); ++r)
      if (get_bit(rows_[r].a, c)) {
        sel = r;
        break;
      }
    if (sel == rows_.size()) continue;
    std::swap(rows_[pr], rows_[sel]);
    for (std::size_t r = 0; r < rows_.size(); ++r)
      if (r != pr && get_bit(rows_[r].a, c)) {
        gf2::xor_into(rows_[r].a.data(), rows_[pr].a.data(), rows_[pr].a.size());
        rows_[r].rhs ^= rows_[pr].rhs;
      }
    piv_.push_back(c);
    ++pr;
  }
  // Rows below the profile have zero coefficients; a set rhs there means the
  // observed symbols violate the code, which no channel output can produce.
  for (std::size_t r = pr; r < rows_.size(); ++r)
    if (rows_[r].rhs) throw std::runtime_error("decoder: inconsistent syndromes");
  rows_.resize(pr);
}

std::size_t DecoderState::harvest() {
  std::size_t newly = 0;
  std::vector<char> col_dead(cols_.size(), 0), row_dead(rows_.size(), 0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (popcount_words(rows_[i].a) != 1) continue;
    const Pos& pos = cols_[piv_[i]];
    Slot& s = slots_[pos.time - 1];
    set_bit(s.val, pos.bit, rows_[i].rhs != 0);
    set_bit(s.res, pos.bit, true);
    col_dead[piv_[i]] = 1;
    row_dead[i] = 1;
    ++newly;
  }

  if (newly > 0) {
    // Compact columns; surviving rows have zero coefficients on dead columns
    // (each was the lone support of its own pivot row), so a gather suffices.
    std::vector<std::size_t> remap(cols_.size());
    std::vector<Pos> live_cols;
    live_cols.reserve(cols_.size() - newly);
    for (std::size_t c = 0; c < cols_.size(); ++c) {
      remap[c] = live_cols.size();
      if (!col_dead[c]) live_cols.push_back(cols_[c]);
    }
    const std::size_t new_words = std::max<std::size_t>(1, gf2::words_for(live_cols.size()));
    std::vector<Row> live_rows;
    std::vector<std::size_t> live_piv;
    live_rows.reserve(rows_.size() - newly);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (row_dead[i]) continue;
      Row nr;
      nr.a.assign(new_words, 0);
      nr.rhs = rows_[i].rhs;
      for (std::size_t w = 0; w < rows_[i].a.size(); ++w) {
        std::uint64_t bits = rows_[i].a[w];
        while (bits) {
          std::size_t c = w * 64 + std::countr_zero(bits);
          bits &= bits - 1;
          set_bit(nr.a, remap[c], true);
        }
      }
      live_piv.push_back(remap[piv_[i]]);
      live_rows.push_back(std::move(nr));
    }
    cols_ = std::move(live_cols);
    rows_ = std::move(live_rows);
    piv_ = std::move(live_piv);
  }

  // Tentative fill: free coordinates to 0, pivots to their reduced rhs.
  for (const Pos& pos : cols_) set_bit(slots_[pos.time - 1].val, pos.bit, false);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Pos& pos = cols_[piv_[i]];
    set_bit(slots_[pos.time - 1].val, pos.bit, rows_[i].rhs != 0);
  }
  return newly;
}

BitStatus DecoderState::bit_status(std::size_t time, std::size_t i) const {
  const Slot& s = slot(time);
  if (get_bit(s.known, i)) return BitStatus::Known;
  if (get_bit(s.res, i)) return BitStatus::Determined;
  return BitStatus::Tentative;
}

bool DecoderState::bit_value(std::size_t time, std::size_t i) const {
  return get_bit(slot(time).val, i);
}

DecoderState::Estimate DecoderState::message_estimate(std::size_t time) const {
  const Slot& s = slot(time);
  const unsigned k = code_->k();
  Estimate e;
  e.bits.resize(k);
  e.status = BitStatus::Known;
  for (unsigned j = 0; j < k; ++j) {
    e.bits[j] = get_bit(s.val, j) ? 1 : 0;
    BitStatus st = get_bit(s.known, j)  ? BitStatus::Known
                   : get_bit(s.res, j) ? BitStatus::Determined
                                       : BitStatus::Tentative;
    e.status = std::min(e.status, st);
  }
  return e;
}

DecoderState::Estimate DecoderState::codeword_estimate(std::size_t time) const {
  const Slot& s = slot(time);
  const unsigned n = code_->n();
  Estimate e;
  e.bits.resize(n);
  e.status = BitStatus::Known;
  for (unsigned j = 0; j < n; ++j) {
    e.bits[j] = get_bit(s.val, j) ? 1 : 0;
    BitStatus st = get_bit(s.known, j)  ? BitStatus::Known
                   : get_bit(s.res, j) ? BitStatus::Determined
                                       : BitStatus::Tentative;
    e.status = std::min(e.status, st);
  }
  return e;
}

// ---------------------------------------------------------------------------

std::vector<double> ReliabilityCurve::tail() const {
  std::vector<double> out(count.size(), 0.0);
  std::uint64_t acc = 0;
  for (std::size_t d = count.size(); d-- > 1;) {
    acc += count[d];
    out[d] = samples ? static_cast<double>(acc) / static_cast<double>(samples) : 0.0;
  }
  return out;  // index 0 unused, delays start at 1
}

ReliabilityCurve estimate_reliability(const ReliabilityConfig& cfg) {
  validate(cfg.code);
  if (!(cfg.eps >= 0.0 && cfg.eps < 1.0))
    throw std::invalid_argument("reliability: eps must lie in [0, 1)");
  if (cfg.horizon == 0 || cfg.trials == 0)
    throw std::invalid_argument("reliability: horizon and trials must be positive");

  const ToeplitzCode code(cfg.code);
  code.block(cfg.horizon);  // pre-extend so worker threads only read
  const std::size_t T = cfg.horizon;
  const std::size_t t_lo = std::max<std::size_t>(1, T / 2);

  struct Local {
    std::vector<std::uint64_t> count;      // index d, size T+1
    std::vector<std::uint64_t> step_hist;  // index d, size T+1
    std::size_t samples = 0;
  };

  auto run_range = [&](std::size_t lo, std::size_t hi, Local& acc) {
    acc.count.assign(T + 1, 0);
    acc.step_hist.assign(T + 1, 0);
    for (std::size_t trial = lo; trial < hi; ++trial) {
      std::uint64_t msg_seed = rng::derive(cfg.seed, "message", trial);
      ChannelConfig chan{cfg.eps, rng::derive(cfg.seed, "channel", trial)};
      EncoderState enc(code);
      DecoderState dec(code);
      std::vector<std::vector<std::uint8_t>> msgs(T);
      for (std::size_t t = 1; t <= T; ++t) {
        std::vector<std::uint8_t>& m = msgs[t - 1];
        m.resize(cfg.code.k);
        for (unsigned j = 0; j < cfg.code.k; ++j)
          m[j] = rng::bernoulli(0.5, msg_seed, rng::kDomMessage, t, j) ? 1 : 0;
        DecodeReport rep = dec.observe_step(transmit(chan, enc.encode_step(m), t));
        ++acc.step_hist[rep.d];
        if (t < t_lo) continue;
        ++acc.samples;
        for (std::size_t tau = 1; tau <= t; ++tau)
          if (dec.message_estimate(tau).bits != msgs[tau - 1]) {
            ++acc.count[t - tau + 1];
            break;
          }
      }
    }
  };

  unsigned threads = std::max(1u, cfg.threads);
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(1, cfg.trials)));
  std::vector<Local> locals(threads);
  if (threads == 1) {
    run_range(0, cfg.trials, locals[0]);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (cfg.trials + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      std::size_t lo = w * chunk, hi = std::min<std::size_t>(cfg.trials, lo + chunk);
      pool.emplace_back(run_range, lo, hi, std::ref(locals[w]));
    }
    for (auto& th : pool) th.join();
  }

  ReliabilityCurve curve;
  curve.count.assign(T + 1, 0);
  curve.step_delay_hist.assign(T + 1, 0);
  for (const Local& l : locals) {
    curve.samples += l.samples;
    for (std::size_t d = 0; d <= T; ++d) {
      curve.count[d] += d < l.count.size() ? l.count[d] : 0;
      curve.step_delay_hist[d] += d < l.step_hist.size() ? l.step_hist[d] : 0;
    }
  }

  // Fit log2 tail against d from the mode of the delay histogram through the
  // last populated delay.
  std::vector<double> tail = curve.tail();
  std::uint64_t best = 0;
  curve.onset = 1;
  for (std::size_t d = 1; d < curve.count.size(); ++d)
    if (curve.count[d] > best) {
      best = curve.count[d];
      curve.onset = d;
    }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t pts = 0;
  for (std::size_t d = curve.onset; d < tail.size(); ++d) {
    if (tail[d] <= 0.0) break;
    double x = static_cast<double>(d), y = std::log2(tail[d]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++pts;
  }
  if (pts >= 2) {
    double denom = pts * sxx - sx * sx;
    curve.slope = (pts * sxy - sx * sy) / denom;
    curve.intercept = (sy - curve.slope * sx) / pts;
  }
  return curve;
}

void write_reliability_csv(const ReliabilityCurve& curve, std::ostream& os) {
  os << "d,count,freq,log2freq\n";
  std::vector<double> tail = curve.tail();
  char buf[64];
  for (std::size_t d = 1; d < curve.count.size(); ++d) {
    if (tail[d] <= 0.0) break;
    os << d << ',' << curve.count[d] << ',';
    std::snprintf(buf, sizeof buf, "%.17g", tail[d]);
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", std::log2(tail[d]));
    os << buf << '\n';
  }
}

}  // namespace anytime
