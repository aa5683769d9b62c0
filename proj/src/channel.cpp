#include "anytime/channel.hpp"

#include <stdexcept>

namespace anytime {

void validate(const ChannelConfig& cfg) {
  if (!(cfg.eps >= 0.0 && cfg.eps < 1.0))
    throw std::invalid_argument("channel: eps must lie in [0, 1)");
}

std::vector<Sym> transmit(const ChannelConfig& cfg,
                          const std::vector<std::uint8_t>& bits, std::uint64_t t) {
  std::vector<Sym> out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (rng::bernoulli(cfg.eps, cfg.seed, rng::kDomErasure, t, i))
      out[i] = Sym::Erased;
    else
      out[i] = (bits[i] & 1) ? Sym::One : Sym::Zero;
  }
  return out;
}

std::vector<Sym> erase_at(const std::vector<std::uint8_t>& bits,
                          const std::vector<std::uint8_t>& mask) {
  if (mask.size() != bits.size())
    throw std::invalid_argument("erase_at: mask size mismatch");
  std::vector<Sym> out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i)
    out[i] = mask[i] ? Sym::Erased : ((bits[i] & 1) ? Sym::One : Sym::Zero);
  return out;
}

}  // namespace anytime
