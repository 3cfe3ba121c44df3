#include "ris_sampling.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "cherlb/rng.hpp"

namespace cherlb::ris::detail {

RicianShape rician_shape(double kappa) {
  return {std::sqrt(kappa / (1.0 + kappa)), std::sqrt(0.5 / (1.0 + kappa))};
}

namespace {
constexpr double kTwoPi = 6.28318530717958647692528676656;
}

void gain_block(int reflectors, const RicianShape& h, const RicianShape& g,
                std::uint64_t seed, std::uint64_t begin, std::uint64_t end,
                double* out) {
  const int nr = reflectors;
  const std::uint32_t k0 = static_cast<std::uint32_t>(seed);
  const std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
  const std::uint32_t domain = static_cast<std::uint32_t>(rng::Domain::ris_gain);

  std::vector<double> u(static_cast<std::size_t>(4 * nr));
  std::vector<double> z(static_cast<std::size_t>(4 * nr));

  for (std::uint64_t i = begin; i < end; ++i) {
    const std::uint32_t c0 = static_cast<std::uint32_t>(i);
    const std::uint32_t c1 = static_cast<std::uint32_t>(i >> 32);
    // one philox block per reflector: four uniforms
    for (int b = 0; b < nr; ++b) {
      const auto r = rng::detail::philox4x32_10(
          {c0, c1, domain, static_cast<std::uint32_t>(b)}, k0, k1);
      u[4 * b + 0] = (static_cast<double>(r[0]) + 0.5) * 0x1p-32;
      u[4 * b + 1] = (static_cast<double>(r[1]) + 0.5) * 0x1p-32;
      u[4 * b + 2] = (static_cast<double>(r[2]) + 0.5) * 0x1p-32;
      u[4 * b + 3] = (static_cast<double>(r[3]) + 0.5) * 0x1p-32;
    }
    // branch-free Box-Muller: vectorizable log/cos/sin
    for (int k = 0; k < 2 * nr; ++k) {
      const double r = std::sqrt(-2.0 * std::log(u[2 * k]));
      z[2 * k] = r * std::cos(kTwoPi * u[2 * k + 1]);
      z[2 * k + 1] = r * std::sin(kTwoPi * u[2 * k + 1]);
    }
    double total = 0.0;
    for (int k = 0; k < nr; ++k) {
      const double hr = h.los + h.scatter * z[4 * k + 0];
      const double hi = h.scatter * z[4 * k + 1];
      const double gr = g.los + g.scatter * z[4 * k + 2];
      const double gi = g.scatter * z[4 * k + 3];
      total += std::sqrt((hr * hr + hi * hi) * (gr * gr + gi * gi));
    }
    out[i - begin] = total * total;
  }
}

}  // namespace cherlb::ris::detail
