#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace anytime {

namespace gf2 {

// XOR-accumulate b into a (word arrays of equal length).
inline void xor_into(std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  for (std::size_t i = 0; i < words; ++i) a[i] ^= b[i];
}

// Parity of the AND of two word arrays, i.e. <a, b> over GF(2).
inline bool dot(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < words; ++i) acc ^= a[i] & b[i];
  return std::popcount(acc) & 1u;
}

inline std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

}  // namespace gf2

// Dense GF(2) matrix, row-major, 64 bits per word. Padding bits past cols()
// are kept zero so popcounts and zero tests can run on whole words.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), wpr_(gf2::words_for(cols)), w_(rows * wpr_, 0) {}

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_row() const { return wpr_; }

  bool get(std::size_t r, std::size_t c) const {
    return (w_[r * wpr_ + c / 64] >> (c % 64)) & 1u;
  }
  void set(std::size_t r, std::size_t c, bool v) {
    std::uint64_t& word = w_[r * wpr_ + c / 64];
    std::uint64_t bit = std::uint64_t{1} << (c % 64);
    if (v)
      word |= bit;
    else
      word &= ~bit;
  }

  std::uint64_t* row(std::size_t r) { return w_.data() + r * wpr_; }
  const std::uint64_t* row(std::size_t r) const { return w_.data() + r * wpr_; }

  void xor_rows(std::size_t dst, std::size_t src) {
    gf2::xor_into(row(dst), row(src), wpr_);
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < wpr_; ++i) std::swap(row(a)[i], row(b)[i]);
  }
  bool row_is_zero(std::size_t r) const {
    const std::uint64_t* p = row(r);
    for (std::size_t i = 0; i < wpr_; ++i)
      if (p[i]) return false;
    return true;
  }

  BitMatrix operator*(const BitMatrix& rhs) const;
  std::vector<std::uint8_t> mul_vec(const std::vector<std::uint8_t>& x) const;

  bool operator==(const BitMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && w_ == o.w_;
  }

  std::string to_string() const;

 private:
  std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
  std::vector<std::uint64_t> w_;
};

struct Rref {
  BitMatrix m;
  std::vector<std::size_t> pivots;  // pivot column of row i, strictly increasing
  std::size_t rank() const { return pivots.size(); }
};

// Reduced row echelon form: pivots scanned left to right, entries above and
// below each pivot cleared. The result is the canonical form of the row space.
Rref rref(BitMatrix m);

std::size_t rank(const BitMatrix& m);

// N with N * m == 0, rows(N) == rows(m) - rank(m), rows independent.
BitMatrix left_null_space(const BitMatrix& m);

struct Gf2Solution {
  bool consistent = true;
  std::vector<std::uint8_t> x;           // one solution, free coordinates pinned to 0
  std::vector<std::uint8_t> determined;  // 1 iff every solution agrees there
};

// Solve m x = s. determined[j] is set exactly when e_j lies in the row space
// of m, i.e. all solutions share x[j].
Gf2Solution solve_with_determination(const BitMatrix& m,
                                     const std::vector<std::uint8_t>& s);

}  // namespace anytime
