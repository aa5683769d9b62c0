#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "anytime/channel.hpp"
#include "anytime/code.hpp"

namespace anytime {

enum class BitStatus : std::uint8_t {
  Tentative = 0,  // free coordinate pinned to 0, or forced by such a choice
  Determined = 1, // every assignment consistent with the observations agrees
  Known = 2,      // received unerased
};

struct DecodeReport {
  std::size_t t = 0;
  std::size_t d = 0;            // earliest-unresolved delay after the step, 0 if none
  std::size_t window_rows = 0;  // equations handed to this step's elimination
  std::size_t window_cols = 0;  // unresolved erased positions entering it
  std::size_t newly_determined = 0;
};

// Online erasure decoder for a ToeplitzCode stream.
//
// The decoder keeps a working linear system over the still-unresolved erased
// positions (the window). Each step appends the new erasures as columns and
// the new parity rows, with the contribution of every resolved bit folded
// into the cached right-hand sides, then re-reduces. A position whose reduced
// row has no support beyond its pivot is forced to one value by consensus of
// all solutions; it leaves the window for good. Remaining positions carry
// tentative values: free coordinates pinned to 0, pivots back-substituted.
// Rows and columns at fully resolved times drop out, so the system's size
// tracks the earliest unresolved delay d (rows <= nbar*d, cols <= n*d), while
// the syndrome extension scans the resolved prefix like the encoder does.
class DecoderState {
 public:
  explicit DecoderState(const ToeplitzCode& code);

  DecodeReport observe_step(const std::vector<Sym>& symbols);

  struct Estimate {
    std::vector<std::uint8_t> bits;
    BitStatus status;  // weakest status among the bits
  };
  Estimate message_estimate(std::size_t time) const;   // systematic k bits
  Estimate codeword_estimate(std::size_t time) const;  // all n bits
  BitStatus bit_status(std::size_t time, std::size_t i) const;
  bool bit_value(std::size_t time, std::size_t i) const;

  std::size_t time() const { return t_; }
  // All codeword bits at times < resolved_before() are known or determined.
  std::size_t resolved_before() const { return r_; }

 private:
  struct Slot {
    std::vector<std::uint64_t> val;    // current bit estimates
    std::vector<std::uint64_t> res;    // known or determined
    std::vector<std::uint64_t> known;  // received unerased
  };
  struct Pos {
    std::uint32_t time;  // 1-based
    std::uint32_t bit;
  };
  struct Row {
    std::vector<std::uint64_t> a;  // coefficients over cols_
    std::uint8_t rhs = 0;
  };

  void reduce();
  std::size_t harvest();
  bool fully_resolved(const Slot& s) const;
  const Slot& slot(std::size_t time) const;

  const ToeplitzCode* code_;
  std::size_t t_ = 0;
  std::size_t r_ = 1;
  std::size_t wpr_;
  std::vector<Slot> slots_;
  std::vector<Pos> cols_;        // chronological
  std::vector<Row> rows_;        // kept fully reduced between steps
  std::vector<std::size_t> piv_; // pivot column of rows_[i]
};

// Monte Carlo estimate of the delay profile: random messages through the
// erasure channel, decoded online. For each decode instant t in the pooled
// range [horizon/2, horizon] the sample is the delay of the earliest message
// estimate error (t - tau + 1), or none when every estimate matches.
struct ReliabilityConfig {
  CodeParams code;
  double eps = 0.0;
  std::size_t horizon = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;  // fans out via "message"/"channel" per trial
  unsigned threads = 1;
};

struct ReliabilityCurve {
  std::size_t samples = 0;              // pooled decode instants
  std::vector<std::uint64_t> count;     // count[d]: earliest error at delay exactly d
  std::vector<std::uint64_t> step_delay_hist;  // DecodeReport::d over all steps
  double slope = 0.0;      // LS slope of log2 tail vs d over the fit window
  double intercept = 0.0;  // fit value at d = 0
  std::size_t onset = 1;   // first delay of the fit window (mode of count)

  // tail[d] = P(earliest error at delay >= d), non-increasing by construction.
  std::vector<double> tail() const;
};

ReliabilityCurve estimate_reliability(const ReliabilityConfig& cfg);

// CSV schema: d,count,freq,log2freq with freq the tail frequency at delay d.
// Rows cover the populated range only, so log2 is always finite.
void write_reliability_csv(const ReliabilityCurve& curve, std::ostream& os);

}  // namespace anytime
