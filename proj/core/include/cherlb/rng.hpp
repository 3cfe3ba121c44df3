#pragma once

// Counter-based random numbers (Philox4x32-10, Salmon et al. SC'11).
//
// Every consumer of randomness in this library draws from a Substream
// identified by (seed, domain, stream). The words produced by a substream
// are a pure function of that triple, so trial i of a Monte Carlo run can
// be computed by any worker, in any order, and still see the same draws.

#include <array>
#include <cmath>
#include <cstdint>

namespace cherlb::rng {

namespace detail {

constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;

inline void philox_round(std::array<std::uint32_t, 4>& c, std::uint32_t k0,
                         std::uint32_t k1) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

inline std::array<std::uint32_t, 4> philox4x32_10(
    std::array<std::uint32_t, 4> counter, std::uint32_t k0, std::uint32_t k1) {
  for (int r = 0; r < 10; ++r) {
    philox_round(counter, k0, k1);
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return counter;
}

}  // namespace detail

// Domain tags keep unrelated consumers off each other's substreams even
// when they share a seed and a stream index.
enum class Domain : std::uint32_t {
  chi2_sample = 0x01,
  mimo_channel = 0x02,
  mimo_innovation = 0x03,
  ris_gain = 0x04,
  generic = 0xFF,
};

class Substream {
 public:
  Substream(std::uint64_t seed, Domain domain, std::uint64_t stream)
      : key0_(static_cast<std::uint32_t>(seed)),
        key1_(static_cast<std::uint32_t>(seed >> 32)),
        ctr_{static_cast<std::uint32_t>(stream),
             static_cast<std::uint32_t>(stream >> 32),
             static_cast<std::uint32_t>(domain), 0u} {}

  std::uint32_t next_u32() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  // Uniform on the open interval (0,1); safe as a log() argument.
  double uniform() {
    return (static_cast<double>(next_u32()) + 0.5) * 0x1p-32;
  }

  // Uniform on (-1,1).
  double uniform_signed() { return 2.0 * uniform() - 1.0; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // Marsaglia polar method.
    double u, v, s;
    do {
      u = uniform_signed();
      v = uniform_signed();
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  void normal_pair(double& a, double& b) {
    a = normal();
    b = normal();
  }

 private:
  void refill() {
    auto c = ctr_;
    c[3] = block_++;
    buf_ = detail::philox4x32_10(c, key0_, key1_);
    pos_ = 0;
  }

  std::uint32_t key0_, key1_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> buf_{};
  std::uint32_t block_ = 0;
  int pos_ = 4;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace cherlb::rng
