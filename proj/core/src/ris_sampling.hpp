#pragma once

// Internal hot path: exact draws of the aligned-phase reflector gain.
// Lives in its own translation unit so the build can vectorize it
// aggressively without touching the rest of the library.

#include <cstdint>

namespace cherlb::ris::detail {

struct RicianShape {
  double los;      // line-of-sight amplitude, los^2 = kappa/(1+kappa)
  double scatter;  // per-dimension scatter sigma, 2*scatter^2 = 1/(1+kappa)
};

RicianShape rician_shape(double kappa);

// Writes beta draws for sample indices [begin, end) into out[0..end-begin).
// Draw i is a pure function of (seed, i): per index, reflector k consumes
// philox block k of the (seed, ris_gain, i) substream, four uniforms per
// block, Box-Muller pairs in order.
void gain_block(int reflectors, const RicianShape& h, const RicianShape& g,
                std::uint64_t seed, std::uint64_t begin, std::uint64_t end,
                double* out);

}  // namespace cherlb::ris::detail
