#include "anytime/gf2.hpp"

#include <bit>
#include <stdexcept>

namespace anytime {

BitMatrix BitMatrix::operator*(const BitMatrix& rhs) const {
  if (cols_ != rhs.rows())
    throw std::invalid_argument("BitMatrix multiply: dimension mismatch");
  BitMatrix out(rows_, rhs.cols());
  for (std::size_t r = 0; r < rows_; ++r) {
    const std::uint64_t* src = row(r);
    for (std::size_t w = 0; w < wpr_; ++w) {
      std::uint64_t bits = src[w];
      while (bits) {
        std::size_t j = w * 64 + std::countr_zero(bits);
        bits &= bits - 1;
        gf2::xor_into(out.row(r), rhs.row(j), out.words_per_row());
      }
    }
  }
  return out;
}

std::vector<std::uint8_t> BitMatrix::mul_vec(const std::vector<std::uint8_t>& x) const {
  if (x.size() != cols_)
    throw std::invalid_argument("BitMatrix mul_vec: dimension mismatch");
  std::vector<std::uint64_t> packed(wpr_, 0);
  for (std::size_t j = 0; j < cols_; ++j)
    if (x[j] & 1) packed[j / 64] |= std::uint64_t{1} << (j % 64);
  std::vector<std::uint8_t> out(rows_, 0);
  for (std::size_t r = 0; r < rows_; ++r)
    out[r] = gf2::dot(row(r), packed.data(), wpr_) ? 1 : 0;
  return out;
}

std::string BitMatrix::to_string() const {
  std::string s;
  s.reserve(rows_ * (cols_ + 1));
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) s.push_back(get(r, c) ? '1' : '0');
    s.push_back('\n');
  }
  return s;
}

Rref rref(BitMatrix m) {
  std::vector<std::size_t> pivots;
  std::size_t pr = 0;
  for (std::size_t c = 0; c < m.cols() && pr < m.rows(); ++c) {
    std::size_t sel = m.rows();
    for (std::size_t r = pr; r < m.rows(); ++r)
      if (m.get(r, c)) {
        sel = r;
        break;
      }
    if (sel == m.rows()) continue;
    m.swap_rows(pr, sel);
    for (std::size_t r = 0; r < m.rows(); ++r)
      if (r != pr && m.get(r, c)) m.xor_rows(r, pr);
    pivots.push_back(c);
    ++pr;
  }
  return {std::move(m), std::move(pivots)};
}

std::size_t rank(const BitMatrix& m) { return rref(m).rank(); }

BitMatrix left_null_space(const BitMatrix& m) {
  BitMatrix a = m;
  BitMatrix t = BitMatrix::identity(m.rows());
  std::size_t pr = 0;
  for (std::size_t c = 0; c < a.cols() && pr < a.rows(); ++c) {
    std::size_t sel = a.rows();
    for (std::size_t r = pr; r < a.rows(); ++r)
      if (a.get(r, c)) {
        sel = r;
        break;
      }
    if (sel == a.rows()) continue;
    a.swap_rows(pr, sel);
    t.swap_rows(pr, sel);
    for (std::size_t r = 0; r < a.rows(); ++r)
      if (r != pr && a.get(r, c)) {
        a.xor_rows(r, pr);
        t.xor_rows(r, pr);
      }
    ++pr;
  }
  BitMatrix n(m.rows() - pr, m.rows());
  for (std::size_t r = pr; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.rows(); ++c)
      if (t.get(r, c)) n.set(r - pr, c, true);
  return n;
}

Gf2Solution solve_with_determination(const BitMatrix& m,
                                     const std::vector<std::uint8_t>& s) {
  if (s.size() != m.rows())
    throw std::invalid_argument("solve_with_determination: rhs size mismatch");
  // Augment with the rhs as an extra column that is never eligible as pivot.
  BitMatrix a(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t w = 0; w < m.words_per_row(); ++w) a.row(r)[w] = m.row(r)[w];
    // Clear any overlap, then place the rhs bit.
    a.set(r, m.cols(), false);
    if (s[r] & 1) a.set(r, m.cols(), true);
  }
  std::vector<std::size_t> pivots;
  std::size_t pr = 0;
  for (std::size_t c = 0; c < m.cols() && pr < a.rows(); ++c) {
    std::size_t sel = a.rows();
    for (std::size_t r = pr; r < a.rows(); ++r)
      if (a.get(r, c)) {
        sel = r;
        break;
      }
    if (sel == a.rows()) continue;
    a.swap_rows(pr, sel);
    for (std::size_t r = 0; r < a.rows(); ++r)
      if (r != pr && a.get(r, c)) a.xor_rows(r, pr);
    pivots.push_back(c);
    ++pr;
  }

  Gf2Solution sol;
  sol.x.assign(m.cols(), 0);
  sol.determined.assign(m.cols(), 0);
  // A zero coefficient row with rhs 1 marks an inconsistent system.
  for (std::size_t r = pr; r < a.rows(); ++r)
    if (a.get(r, m.cols())) {
      sol.consistent = false;
      return sol;
    }
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    std::size_t c = pivots[i];
    bool rhs = a.get(i, m.cols());
    sol.x[c] = rhs ? 1 : 0;  // free coordinates stay 0
    // Support beyond the pivot means the value depends on free coordinates.
    std::size_t support = 0;
    for (std::size_t w = 0; w < m.words_per_row(); ++w) {
      std::uint64_t word = a.row(i)[w];
      if (w == m.words_per_row() - 1 && m.cols() % 64 != 0)
        word &= (std::uint64_t{1} << (m.cols() % 64)) - 1;  // mask rhs column
      support += std::popcount(word);
    }
    if (support == 1) sol.determined[c] = 1;
  }
  return sol;
}

}  // namespace anytime
