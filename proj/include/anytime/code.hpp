#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "anytime/gf2.hpp"
#include "anytime/rng.hpp"

namespace anytime {

// Rate k/n causal code drawn from the time-invariant Toeplitz ensemble. The
// parity-check stream is block lower triangular with H_{i,j} = H_{i-j+1}:
// the first block is [A | I] (A Bernoulli(p) over the k systematic columns),
// deeper blocks are fully Bernoulli(p). Every bit of every block is a pure
// function of (seed, tau, row, col), so a code is identified by its params.
struct CodeParams {
  unsigned n = 0;
  unsigned k = 0;
  double p = 0.5;
  std::uint64_t seed = 0;
  std::string prng = std::string(rng::kPrngId);
};

// Throws std::invalid_argument on 0 < k < n, p in (0, 1/2] or prng violations.
void validate(const CodeParams& prm);

inline unsigned parity_bits(const CodeParams& prm) { return prm.n - prm.k; }
inline double rate(const CodeParams& prm) {
  return static_cast<double>(prm.k) / prm.n;
}

// Two-line text format:
//   anytime-code v1
//   n=15 k=6 p=0.5 seed=7 prng=sm64x5
std::string serialize(const CodeParams& prm);
CodeParams parse_code(std::string_view text);  // throws std::invalid_argument

class ToeplitzCode {
 public:
  explicit ToeplitzCode(CodeParams prm);

  const CodeParams& params() const { return prm_; }
  unsigned n() const { return prm_.n; }
  unsigned k() const { return prm_.k; }
  unsigned nbar() const { return prm_.n - prm_.k; }

  // H_tau for tau >= 1, generated on first use. Safe to call concurrently;
  // returned references stay valid for the life of the object.
  const BitMatrix& block(std::size_t tau) const;

 private:
  BitMatrix make_block(std::size_t tau) const;

  CodeParams prm_;
  mutable std::mutex mu_;
  mutable std::deque<BitMatrix> blocks_;
};

// Systematic online encoder. Each step takes the k message bits and emits the
// n-bit codeword: message first, then the parity bits
//   p_t = A b_t + sum_{j>=2} H_j c_{t-j+1},
// which makes H_1 c_t + sum_{j>=2} H_j c_{t-j+1} = 0 by construction. Keeps
// the whole codeword history, so the per-step cost grows linearly with time.
class EncoderState {
 public:
  explicit EncoderState(const ToeplitzCode& code);

  std::vector<std::uint8_t> encode_step(const std::vector<std::uint8_t>& msg);

  std::size_t time() const { return t_; }

 private:
  const ToeplitzCode* code_;
  std::size_t t_ = 0;
  std::size_t wpr_;
  std::vector<std::vector<std::uint64_t>> history_;  // packed codewords, oldest first
};

}  // namespace anytime
