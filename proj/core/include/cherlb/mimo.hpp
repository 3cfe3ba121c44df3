#pragma once

// Beamforming-gain prediction for a narrowband downlink whose channel ages
// by a first-order Markov process:
//
//   H_{t+tau} = J0(2 pi f_d tau) H_t + Omega,   Omega ~ iid CN(0, 1-J0^2).
//
// With matched-filter transmit beamforming formed from the outdated H_t
// and the aggregate direction normalized to unit realized gain, the gain
// at transmission time is noncentral chi-square with K = 2N degrees of
// freedom, M2 = J0^2 and per-dimension variance sigma_w^2 |w|^2 / 2. The
// Chernoff bound on its outage threshold then drives power adaptation.

#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

#include "cherlb/chi2.hpp"
#include "cherlb/solver.hpp"

namespace cherlb::mimo {

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s

struct MarkovChannelParams {
  double carrier_hz = 3.5e9;
  double velocity_mps = 20.0;
  double lag_s = 0.5e-3;

  double doppler_hz() const { return velocity_mps * carrier_hz / kSpeedOfLight; }
  double innovation_variance() const;  // 1 - J0^2, in [0,1]
};

// J0(2 pi f_d tau).
double doppler_correlation(const MarkovChannelParams& params);

struct ComplexMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::complex<double>> data;

  ComplexMatrix() = default;
  ComplexMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c) {}
  std::complex<double>& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  const std::complex<double>& operator()(int r, int c) const {
    return data[static_cast<std::size_t>(r) * cols + c];
  }
};

struct MimoConfig {
  int tx = 16;  // M
  int rx = 2;   // N, with tx >= rx >= 1
  long trials = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = CHERLB_THREADS or hardware default

  void validate() const;
};

// iid Rayleigh channel draw, entries CN(0,1); trial i depends only on
// (seed, i).
ComplexMatrix sample_channel(int rx, int tx, std::uint64_t seed,
                             std::uint64_t trial);

// One Markov step. Marginals stay CN(0,1).
ComplexMatrix evolve_channel(const ComplexMatrix& h,
                             const MarkovChannelParams& params,
                             std::uint64_t seed, std::uint64_t trial);

// Matched-filter aggregate direction H^H 1_N, rescaled so the realized
// gain |H w|^2 equals one.
std::vector<std::complex<double>> mf_beamformer(const ComplexMatrix& h);

// Distribution of |H_{t+tau} w|^2 for fixed H_t. Rejects lag 0 (the
// innovation variance degenerates and the gain is deterministic).
NoncentralChiSquareSpec gain_params(const ComplexMatrix& h,
                                    const std::vector<std::complex<double>>& w,
                                    const MarkovChannelParams& params);

BoundReport predict_gain(const ComplexMatrix& h,
                         const MarkovChannelParams& params,
                         const ReliabilityTarget& target,
                         const SolverConfig& cfg = {});

// Symbol energy needed so P(snr >= target) >= 1 - eps given the bound.
double required_energy(double bound, double snr_target, double noise_var);

// Shared solve cache keyed by rho quantized at 1e-2; values depend only on
// (K, eps, rho_q), so concurrent population is harmless. The linear
// scaling law converts the normalized solution to any variance.
class SolveCache {
 public:
  SolveCache(int dof, const ReliabilityTarget& target, SolverConfig cfg = {});
  double bound_for(double rho, double variance) const;

 private:
  int dof_;
  ReliabilityTarget target_;
  SolverConfig cfg_;
  mutable std::mutex mu_;
  mutable std::map<long long, double> normalized_;
};

struct MonteCarloStat {
  double value = 0.0;
  double std_error = 0.0;
  long trials = 0;
};

// P(rho < threshold) over channel draws; the fraction of realizations
// where only the Chernoff bound is a safe predictor.
MonteCarloStat experiment_rho_probability(const MimoConfig& cfg,
                                          const MarkovChannelParams& params,
                                          double threshold = 120.0);

struct PowerStats {
  MonteCarloStat inv_bound;          // E[1/bound]: normalized average power
  MonteCarloStat lambda_over_bound;  // E[lambda/bound]: throughput reference
  MonteCarloStat combined;           // z2 approximation taking over at rho >= 120
  MonteCarloStat mean_bound;
  MonteCarloStat mean_lambda;
};

PowerStats experiment_power(const MimoConfig& cfg,
                            const MarkovChannelParams& params,
                            const ReliabilityTarget& target);

// Single-shot reliability: fraction of (H_t, Omega) pairs whose realized
// gain fell below the per-realization bound. Must stay <= eps.
MonteCarloStat experiment_reliability(const MimoConfig& cfg,
                                      const MarkovChannelParams& params,
                                      const ReliabilityTarget& target);

// Realized gains |H_{t+tau} w|^2 for a fixed H_t, for distribution checks.
std::vector<double> realized_gain_samples(const ComplexMatrix& h,
                                          const MarkovChannelParams& params,
                                          std::size_t n, std::uint64_t seed,
                                          unsigned threads = 0);

// Why this module is single-stream: with L=N streams and an
// interference-rejection precoder (H_t W = I), the CSI-T innovation leaks
// inter-stream interference that no transmit energy can out-scale; once it
// dominates, SINR_n ~ |J0 + omega_n^T w_n|^2 / sum_{l != n} |omega_n^T
// w_l|^2, independent of E_s. This computes that ratio for one seeded
// draw, as an illustration only; nothing downstream consumes it.
double interference_limited_sinr_demo(int tx, int rx, std::uint64_t seed,
                                      const MarkovChannelParams& params = {});

}  // namespace cherlb::mimo
