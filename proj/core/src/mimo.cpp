#include "cherlb/mimo.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "cherlb/baselines.hpp"
#include "cherlb/metrics.hpp"
#include "cherlb/parallel.hpp"
#include "cherlb/rng.hpp"
#include "cherlb/special.hpp"

namespace cherlb::mimo {

double doppler_correlation(const MarkovChannelParams& params) {
  if (!(params.carrier_hz > 0.0) || params.lag_s < 0.0 ||
      params.velocity_mps < 0.0)
    throw std::invalid_argument("invalid channel parameters");
  return special::bessel_j0(2.0 * M_PI * params.doppler_hz() * params.lag_s);
}

double MarkovChannelParams::innovation_variance() const {
  const double c = doppler_correlation(*this);
  return 1.0 - c * c;
}

void MimoConfig::validate() const {
  if (rx < 1 || tx < rx)
    throw std::invalid_argument("need tx >= rx >= 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
}

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void fill_cn01(ComplexMatrix& m, rng::Substream& rs) {
  for (auto& z : m.data) {
    double re, im;
    rs.normal_pair(re, im);
    z = {re * kInvSqrt2, im * kInvSqrt2};
  }
}

}  // namespace

ComplexMatrix sample_channel(int rx, int tx, std::uint64_t seed,
                             std::uint64_t trial) {
  if (rx < 1 || tx < 1) throw std::invalid_argument("bad channel shape");
  ComplexMatrix h(rx, tx);
  rng::Substream rs(seed, rng::Domain::mimo_channel, trial);
  fill_cn01(h, rs);
  return h;
}

ComplexMatrix evolve_channel(const ComplexMatrix& h,
                             const MarkovChannelParams& params,
                             std::uint64_t seed, std::uint64_t trial) {
  const double corr = doppler_correlation(params);
  const double sigma = std::sqrt(1.0 - corr * corr);
  ComplexMatrix out(h.rows, h.cols);
  rng::Substream rs(seed, rng::Domain::mimo_innovation, trial);
  for (std::size_t i = 0; i < h.data.size(); ++i) {
    double re, im;
    rs.normal_pair(re, im);
    out.data[i] = corr * h.data[i] +
                  sigma * std::complex<double>(re * kInvSqrt2, im * kInvSqrt2);
  }
  return out;
}

std::vector<std::complex<double>> mf_beamformer(const ComplexMatrix& h) {
  const int n = h.rows, m = h.cols;
  // a = H^H 1_N: conjugate row sum per transmit antenna.
  std::vector<std::complex<double>> a(static_cast<std::size_t>(m));
  for (int c = 0; c < m; ++c) {
    std::complex<double> s = 0.0;
    for (int r = 0; r < n; ++r) s += std::conj(h(r, c));
    a[static_cast<std::size_t>(c)] = s;
  }
  // |H a|: the realized-gain normalizer.
  double norm2 = 0.0;
  for (int r = 0; r < n; ++r) {
    std::complex<double> s = 0.0;
    for (int c = 0; c < m; ++c) s += h(r, c) * a[static_cast<std::size_t>(c)];
    norm2 += std::norm(s);
  }
  if (!(norm2 > 0.0))
    throw std::domain_error("mf_beamformer: degenerate all-zero channel");
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& v : a) v *= inv;
  return a;
}

NoncentralChiSquareSpec gain_params(const ComplexMatrix& h,
                                    const std::vector<std::complex<double>>& w,
                                    const MarkovChannelParams& params) {
  if (static_cast<int>(w.size()) != h.cols)
    throw std::invalid_argument("gain_params: beamformer length mismatch");
  const double corr = doppler_correlation(params);
  const double innov = 1.0 - corr * corr;

  double hw2 = 0.0;
  for (int r = 0; r < h.rows; ++r) {
    std::complex<double> s = 0.0;
    for (int c = 0; c < h.cols; ++c) s += h(r, c) * w[static_cast<std::size_t>(c)];
    hw2 += std::norm(s);
  }
  double w2 = 0.0;
  for (const auto& v : w) w2 += std::norm(v);

  const double m2 = corr * corr * hw2;  // = J0^2 under unit-gain scaling
  const double var = innov * w2 / 2.0;
  // lag 0 collapses the innovation: deterministic gain, no spec to build.
  return NoncentralChiSquareSpec(2 * h.rows, m2, var);
}

BoundReport predict_gain(const ComplexMatrix& h,
                         const MarkovChannelParams& params,
                         const ReliabilityTarget& target,
                         const SolverConfig& cfg) {
  return solve_noncentral(gain_params(h, mf_beamformer(h), params), target,
                          cfg);
}

double required_energy(double bound, double snr_target, double noise_var) {
  if (!(bound > 0.0)) throw std::domain_error("bound must be positive");
  if (!(snr_target > 0.0) || !(noise_var > 0.0))
    throw std::invalid_argument("snr target and noise variance must be positive");
  return snr_target * noise_var / bound;
}

SolveCache::SolveCache(int dof, const ReliabilityTarget& target,
                       SolverConfig cfg)
    : dof_(dof), target_(target), cfg_(cfg) {}

double SolveCache::bound_for(double rho, double variance) const {
  const long long key = std::llround(rho * 100.0);
  const double rho_q = static_cast<double>(key) / 100.0;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = normalized_.find(key);
    if (it != normalized_.end()) return it->second * variance;
  }
  const NoncentralChiSquareSpec unit(dof_, rho_q, 1.0);
  const double b = solve_noncentral(unit, target_, cfg_).bound;
  std::lock_guard<std::mutex> lock(mu_);
  normalized_.emplace(key, b);
  return b * variance;
}

namespace {

struct TrialGeometry {
  double rho;
  double m2;
  double var;
};

TrialGeometry trial_geometry(const MimoConfig& cfg, double corr2, double innov,
                             std::uint64_t trial) {
  const ComplexMatrix h = sample_channel(cfg.rx, cfg.tx, cfg.seed, trial);
  const auto w = mf_beamformer(h);
  double w2 = 0.0;
  for (const auto& v : w) w2 += std::norm(v);
  const double var = innov * w2 / 2.0;
  return {corr2 / var, corr2, var};
}

MonteCarloStat reduce_mean(const std::vector<double>& chunk_sum,
                           const std::vector<double>& chunk_sq, long n) {
  double s = 0.0, q = 0.0;
  for (double v : chunk_sum) s += v;
  for (double v : chunk_sq) q += v;
  const double mean = s / n;
  const double var = std::max(0.0, q / n - mean * mean);
  return {mean, std::sqrt(var / n), n};
}

}  // namespace

MonteCarloStat experiment_rho_probability(const MimoConfig& cfg,
                                          const MarkovChannelParams& params,
                                          double threshold) {
  cfg.validate();
  if (cfg.trials < 10000)
    throw insufficient_samples_error(
        "rho-probability needs at least 1e4 trials");
  const double corr = doppler_correlation(params);
  const double corr2 = corr * corr;
  const double innov = 1.0 - corr2;

  const std::uint64_t n = static_cast<std::uint64_t>(cfg.trials);
  const std::uint64_t chunks = (n + par::kChunk - 1) / par::kChunk;
  std::vector<double> hits(chunks, 0.0), sq(chunks, 0.0);
  par::for_chunks(
      n,
      [&](std::uint64_t c, std::uint64_t b, std::uint64_t e) {
        double acc = 0.0;
        for (std::uint64_t i = b; i < e; ++i)
          if (trial_geometry(cfg, corr2, innov, i).rho < threshold) acc += 1.0;
        hits[c] = acc;
        sq[c] = acc;  // indicator: x^2 = x
      },
      cfg.threads);
  return reduce_mean(hits, sq, cfg.trials);
}

PowerStats experiment_power(const MimoConfig& cfg,
                            const MarkovChannelParams& params,
                            const ReliabilityTarget& target) {
  cfg.validate();
  const double corr = doppler_correlation(params);
  const double corr2 = corr * corr;
  const double innov = 1.0 - corr2;
  const SolveCache cache(2 * cfg.rx, target);

  const std::uint64_t n = static_cast<std::uint64_t>(cfg.trials);
  const std::uint64_t chunks = (n + par::kChunk - 1) / par::kChunk;
  enum { kInv, kLam, kComb, kBound, kLambdaMean, kCount };
  std::vector<std::array<double, 2 * kCount>> acc(
      chunks, std::array<double, 2 * kCount>{});

  par::for_chunks(
      n,
      [&](std::uint64_t c, std::uint64_t b, std::uint64_t e) {
        auto& slot = acc[c];
        for (std::uint64_t i = b; i < e; ++i) {
          const TrialGeometry g = trial_geometry(cfg, corr2, innov, i);
          const double bound = cache.bound_for(g.rho, g.var);
          const NoncentralChiSquareSpec spec(2 * cfg.rx, g.m2, g.var);
          const double lambda = closeness(spec, bound).lambda;
          // Combined predictor: the z2 approximation once rho is large
          // enough for it to be trustworthy, the Chernoff bound otherwise.
          double predictor = bound;
          if (g.rho >= 120.0) {
            const ApproxResult z2 = approx_threshold(
                ApproximationMethod::sankaran_z2, spec, target);
            if (z2.valid) predictor = z2.value;
          }
          const double vals[kCount] = {1.0 / bound, lambda / bound,
                                       1.0 / predictor, bound, lambda};
          for (int k = 0; k < kCount; ++k) {
            slot[2 * k] += vals[k];
            slot[2 * k + 1] += vals[k] * vals[k];
          }
        }
      },
      cfg.threads);

  const auto stat = [&](int k) {
    std::vector<double> s(chunks), q(chunks);
    for (std::uint64_t c = 0; c < chunks; ++c) {
      s[c] = acc[c][2 * k];
      q[c] = acc[c][2 * k + 1];
    }
    return reduce_mean(s, q, cfg.trials);
  };
  return PowerStats{stat(kInv), stat(kLam), stat(kComb), stat(kBound),
                    stat(kLambdaMean)};
}

MonteCarloStat experiment_reliability(const MimoConfig& cfg,
                                      const MarkovChannelParams& params,
                                      const ReliabilityTarget& target) {
  cfg.validate();
  const double corr = doppler_correlation(params);
  const double corr2 = corr * corr;
  const double innov = 1.0 - corr2;
  const SolveCache cache(2 * cfg.rx, target);

  const std::uint64_t n = static_cast<std::uint64_t>(cfg.trials);
  const std::uint64_t chunks = (n + par::kChunk - 1) / par::kChunk;
  std::vector<double> hits(chunks, 0.0);
  par::for_chunks(
      n,
      [&](std::uint64_t c, std::uint64_t b, std::uint64_t e) {
        double below = 0.0;
        for (std::uint64_t i = b; i < e; ++i) {
          const ComplexMatrix h = sample_channel(cfg.rx, cfg.tx, cfg.seed, i);
          const auto w = mf_beamformer(h);
          double w2 = 0.0;
          for (const auto& v : w) w2 += std::norm(v);
          const double var = innov * w2 / 2.0;
          const double bound = cache.bound_for(corr2 / var, var);

          const ComplexMatrix ht = evolve_channel(h, params, cfg.seed, i);
          double beta = 0.0;
          for (int r = 0; r < ht.rows; ++r) {
            std::complex<double> s = 0.0;
            for (int col = 0; col < ht.cols; ++col)
              s += ht(r, col) * w[static_cast<std::size_t>(col)];
            beta += std::norm(s);
          }
          if (beta < bound) below += 1.0;
        }
        hits[c] = below;
      },
      cfg.threads);
  return reduce_mean(hits, hits, cfg.trials);
}

double interference_limited_sinr_demo(int tx, int rx, std::uint64_t seed,
                                      const MarkovChannelParams& params) {
  if (rx < 2 || tx < rx)
    throw std::invalid_argument("demo needs tx >= rx >= 2");
  const ComplexMatrix h = sample_channel(rx, tx, seed, 0);
  // Right pseudo-inverse W = H^H (H H^H)^-1, so H W = I.
  const int n = rx, m = tx;
  std::vector<std::complex<double>> gram(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      std::complex<double> s = 0.0;
      for (int k = 0; k < m; ++k) s += h(r, k) * std::conj(h(c, k));
      gram[static_cast<std::size_t>(r) * n + c] = s;
    }
  // Gauss-Jordan inverse of the small Gram matrix.
  std::vector<std::complex<double>> inv(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i) * n + i] = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(gram[static_cast<std::size_t>(r) * n + col]) >
          std::abs(gram[static_cast<std::size_t>(piv) * n + col]))
        piv = r;
    for (int j = 0; j < n; ++j) {
      std::swap(gram[static_cast<std::size_t>(piv) * n + j],
                gram[static_cast<std::size_t>(col) * n + j]);
      std::swap(inv[static_cast<std::size_t>(piv) * n + j],
                inv[static_cast<std::size_t>(col) * n + j]);
    }
    const std::complex<double> d = gram[static_cast<std::size_t>(col) * n + col];
    for (int j = 0; j < n; ++j) {
      gram[static_cast<std::size_t>(col) * n + j] /= d;
      inv[static_cast<std::size_t>(col) * n + j] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const std::complex<double> f = gram[static_cast<std::size_t>(r) * n + col];
      for (int j = 0; j < n; ++j) {
        gram[static_cast<std::size_t>(r) * n + j] -=
            f * gram[static_cast<std::size_t>(col) * n + j];
        inv[static_cast<std::size_t>(r) * n + j] -=
            f * inv[static_cast<std::size_t>(col) * n + j];
      }
    }
  }
  // w_l = column l of H^H inv
  const auto w_col = [&](int l, int k) {
    std::complex<double> s = 0.0;
    for (int r = 0; r < n; ++r)
      s += std::conj(h(r, k)) * inv[static_cast<std::size_t>(r) * n + l];
    return s;
  };
  const double corr = doppler_correlation(params);
  const double sigma = std::sqrt(1.0 - corr * corr);
  rng::Substream rs(seed, rng::Domain::mimo_innovation, 1);
  std::vector<std::complex<double>> omega0(static_cast<std::size_t>(m));
  for (auto& v : omega0) {
    double re, im;
    rs.normal_pair(re, im);
    v = sigma * std::complex<double>(re * kInvSqrt2, im * kInvSqrt2);
  }
  std::complex<double> self = 0.0;
  double interference = 0.0;
  for (int l = 0; l < n; ++l) {
    std::complex<double> dot = 0.0;
    for (int k = 0; k < m; ++k) dot += omega0[static_cast<std::size_t>(k)] * w_col(l, k);
    if (l == 0)
      self = dot;
    else
      interference += std::norm(dot);
  }
  return std::norm(corr + self) / interference;
}

std::vector<double> realized_gain_samples(const ComplexMatrix& h,
                                          const MarkovChannelParams& params,
                                          std::size_t n, std::uint64_t seed,
                                          unsigned threads) {
  const auto w = mf_beamformer(h);
  std::vector<double> out(n);
  par::for_chunks(
      n,
      [&](std::uint64_t, std::uint64_t b, std::uint64_t e) {
        for (std::uint64_t i = b; i < e; ++i) {
          const ComplexMatrix ht = evolve_channel(h, params, seed, i);
          double beta = 0.0;
          for (int r = 0; r < ht.rows; ++r) {
            std::complex<double> s = 0.0;
            for (int col = 0; col < ht.cols; ++col)
              s += ht(r, col) * w[static_cast<std::size_t>(col)];
            beta += std::norm(s);
          }
          out[i] = beta;
        }
      },
      threads);
  return out;
}

}  // namespace cherlb::mimo
