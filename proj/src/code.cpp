#include "anytime/code.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace anytime {

namespace {

constexpr std::string_view kMagic = "anytime-code v1";

[[noreturn]] void bad(const std::string& what) {
  throw std::invalid_argument("code: " + what);
}

}  // namespace

void validate(const CodeParams& prm) {
  if (prm.n == 0 || prm.k == 0 || prm.k >= prm.n)
    bad("need 0 < k < n, got n=" + std::to_string(prm.n) +
        " k=" + std::to_string(prm.k));
  if (prm.n > 4096) bad("n too large");
  if (!(prm.p > 0.0 && prm.p <= 0.5))
    bad("p must lie in (0, 1/2], got " + std::to_string(prm.p));
  if (prm.prng != rng::kPrngId)
    bad("unknown prng id '" + prm.prng + "', this build generates " +
        std::string(rng::kPrngId));
}

std::string serialize(const CodeParams& prm) {
  validate(prm);
  char pbuf[32];
  auto [pend, pec] = std::to_chars(pbuf, pbuf + sizeof pbuf, prm.p);
  if (pec != std::errc{}) bad("cannot format p");
  std::string out(kMagic);
  out += "\nn=" + std::to_string(prm.n) + " k=" + std::to_string(prm.k) +
         " p=" + std::string(pbuf, pend) + " seed=" + std::to_string(prm.seed) +
         " prng=" + prm.prng + "\n";
  return out;
}

CodeParams parse_code(std::string_view text) {
  std::size_t eol = text.find('\n');
  if (eol == std::string_view::npos) bad("missing header line");
  std::string_view magic = text.substr(0, eol);
  if (!magic.empty() && magic.back() == '\r') magic.remove_suffix(1);
  if (magic != kMagic)
    bad("unsupported format line '" + std::string(magic) + "'");
  std::string_view rest = text.substr(eol + 1);
  std::size_t eol2 = rest.find('\n');
  std::string_view line = eol2 == std::string_view::npos ? rest : rest.substr(0, eol2);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

  CodeParams prm;
  bool got_n = false, got_k = false, got_p = false, got_seed = false, got_prng = false;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    if (pos >= line.size()) break;
    std::size_t end = line.find(' ', pos);
    if (end == std::string_view::npos) end = line.size();
    std::string_view field = line.substr(pos, end - pos);
    pos = end;
    std::size_t eq = field.find('=');
    if (eq == std::string_view::npos)
      bad("malformed field '" + std::string(field) + "'");
    std::string_view key = field.substr(0, eq);
    std::string_view val = field.substr(eq + 1);
    auto parse_uint = [&](auto& out) {
      auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), out);
      if (ec != std::errc{} || p != val.data() + val.size())
        bad("bad value for " + std::string(key) + ": '" + std::string(val) + "'");
    };
    if (key == "n") {
      parse_uint(prm.n);
      got_n = true;
    } else if (key == "k") {
      parse_uint(prm.k);
      got_k = true;
    } else if (key == "p") {
      auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), prm.p);
      if (ec != std::errc{} || p != val.data() + val.size())
        bad("bad value for p: '" + std::string(val) + "'");
      got_p = true;
    } else if (key == "seed") {
      parse_uint(prm.seed);
      got_seed = true;
    } else if (key == "prng") {
      prm.prng = std::string(val);
      got_prng = true;
    } else {
      bad("unknown field '" + std::string(key) + "'");
    }
  }
  if (!(got_n && got_k && got_p && got_seed && got_prng))
    bad("parameter line must carry n, k, p, seed and prng");
  validate(prm);
  return prm;
}

ToeplitzCode::ToeplitzCode(CodeParams prm) : prm_(std::move(prm)) {
  validate(prm_);
}

BitMatrix ToeplitzCode::make_block(std::size_t tau) const {
  const unsigned nb = nbar();
  BitMatrix b(nb, prm_.n);
  if (tau == 1) {
    // [A | I]: identity over the parity columns keeps H_1 full rank and makes
    // the code systematic.
    for (unsigned r = 0; r < nb; ++r) {
      for (unsigned c = 0; c < prm_.k; ++c)
        if (rng::bernoulli(prm_.p, prm_.seed, rng::kDomBlock, 1, r, c))
          b.set(r, c, true);
      b.set(r, prm_.k + r, true);
    }
  } else {
    for (unsigned r = 0; r < nb; ++r)
      for (unsigned c = 0; c < prm_.n; ++c)
        if (rng::bernoulli(prm_.p, prm_.seed, rng::kDomBlock, tau, r, c))
          b.set(r, c, true);
  }
  return b;
}

const BitMatrix& ToeplitzCode::block(std::size_t tau) const {
  if (tau == 0) throw std::invalid_argument("code: block index starts at 1");
  std::lock_guard<std::mutex> lock(mu_);
  while (blocks_.size() < tau) blocks_.push_back(make_block(blocks_.size() + 1));
  return blocks_[tau - 1];
}

EncoderState::EncoderState(const ToeplitzCode& code)
    : code_(&code), wpr_(gf2::words_for(code.n())) {}

std::vector<std::uint8_t> EncoderState::encode_step(
    const std::vector<std::uint8_t>& msg) {
  const unsigned n = code_->n(), k = code_->k(), nb = code_->nbar();
  if (msg.size() != k)
    throw std::invalid_argument("encode_step: expected " + std::to_string(k) +
                                " message bits, got " + std::to_string(msg.size()));
  ++t_;
  std::vector<std::uint64_t> packed(wpr_, 0);
  for (unsigned j = 0; j < k; ++j)
    if (msg[j] & 1) packed[j / 64] |= std::uint64_t{1} << (j % 64);

  // Parity rows of this step: A b_t plus the Toeplitz tail over the history.
  const BitMatrix& h1 = code_->block(1);
  std::vector<std::uint8_t> cw(n, 0);
  for (unsigned j = 0; j < k; ++j) cw[j] = msg[j] & 1;
  for (unsigned r = 0; r < nb; ++r) {
    bool bit = gf2::dot(h1.row(r), packed.data(), wpr_);
    for (std::size_t j = 2; j <= t_; ++j)
      bit ^= gf2::dot(code_->block(j).row(r), history_[t_ - j].data(), wpr_);
    cw[k + r] = bit ? 1 : 0;
    if (bit) packed[(k + r) / 64] |= std::uint64_t{1} << ((k + r) % 64);
  }
  history_.push_back(std::move(packed));
  return cw;
}

}  // namespace anytime
