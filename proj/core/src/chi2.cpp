#include "cherlb/chi2.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cherlb/parallel.hpp"
#include "cherlb/rng.hpp"
#include "cherlb/special.hpp"

namespace cherlb {

namespace {
constexpr double kSeriesTol = 1e-17;
constexpr int kMaxMixtureTerms = 4'000'000;
}  // namespace

GeneralizedChiSquareSpec::GeneralizedChiSquareSpec(
    std::vector<GaussianComponent> components)
    : comps_(std::move(components)) {
  if (comps_.empty())
    throw std::invalid_argument("spec needs at least one component");
  for (const auto& c : comps_)
    if (!(c.variance > 0.0))
      throw std::invalid_argument("component variances must be positive");
}

double GeneralizedChiSquareSpec::total_mean() const {
  double s = 0.0;
  for (const auto& c : comps_) s += c.mean * c.mean + c.variance;
  return s;
}

bool GeneralizedChiSquareSpec::equal_variances() const {
  const double v0 = comps_.front().variance;
  for (const auto& c : comps_)
    if (std::fabs(c.variance - v0) > 1e-14 * v0) return false;
  return true;
}

NoncentralChiSquareSpec::NoncentralChiSquareSpec(int dof, double noncentrality,
                                                 double variance)
    : dof_(dof), m2_(noncentrality), var_(variance) {
  if (dof < 1) throw std::invalid_argument("dof must be >= 1");
  if (!(noncentrality >= 0.0))
    throw std::invalid_argument("noncentrality must be >= 0");
  if (!(variance > 0.0)) throw std::invalid_argument("variance must be > 0");
}

GeneralizedChiSquareSpec NoncentralChiSquareSpec::to_generalized() const {
  std::vector<GaussianComponent> comps(static_cast<std::size_t>(dof_),
                                       GaussianComponent{0.0, var_});
  comps[0].mean = std::sqrt(m2_);
  return GeneralizedChiSquareSpec(std::move(comps));
}

ReliabilityTarget ReliabilityTarget::from_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must be in (0,1)");
  return ReliabilityTarget{epsilon, std::log10(epsilon)};
}

double mgf_reciprocal(const GeneralizedChiSquareSpec& spec, double nu) {
  if (!(nu >= 0.0)) throw std::invalid_argument("nu must be >= 0");
  double log_val = 0.0;
  for (const auto& c : spec.components()) {
    const double t = 1.0 + 2.0 * c.variance * nu;
    log_val += -0.5 * std::log(t) - c.mean * c.mean * nu / t;
  }
  return std::exp(log_val);
}

namespace {

// Poisson(lam/2)-weighted mixture of central chi-square CDFs,
// Benton & Krishnamoorthy style: anchor at the Poisson mode and extend in
// both directions. All terms are positive, so the running sum keeps full
// relative precision; backward gamma recursion is the stable direction and
// forward terms decay before cancellation can accumulate.
double ncx2_cdf_impl(double x, double dof, double lam, bool survival) {
  if (x <= 0.0) return survival ? 1.0 : 0.0;
  const double y = 0.5 * x;
  const double half_lam = 0.5 * lam;
  const double a0 = 0.5 * dof;

  if (lam == 0.0)
    return survival ? special::gamma_q(a0, y) : special::gamma_p(a0, y);

  const auto central = [&](double a) {
    return survival ? special::gamma_q(a, y) : special::gamma_p(a, y);
  };

  const long j0 = static_cast<long>(half_lam);
  const double a_j0 = a0 + static_cast<double>(j0);

  double w0 = std::exp(-half_lam +
                       static_cast<double>(j0) * std::log(half_lam) -
                       std::lgamma(static_cast<double>(j0) + 1.0));
  const double g_j0 = central(a_j0);
  const double d_j0 = special::gamma_pdf_term(a_j0, y);

  double sum = w0 * g_j0;

  // Forward sweep, j0+1 upward.
  {
    double wf = w0, gf = g_j0, df = d_j0;
    bool converged = false;
    for (long j = j0; j - j0 < kMaxMixtureTerms; ++j) {
      gf = survival ? gf + df : gf - df;
      if (gf < 0.0) gf = 0.0;
      if (gf > 1.0) gf = 1.0;
      df *= y / (a0 + static_cast<double>(j) + 1.0);
      wf *= half_lam / (static_cast<double>(j) + 1.0);
      const double term = wf * gf;
      sum += term;
      if (term <= sum * kSeriesTol && wf <= w0) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw std::runtime_error("noncentral mixture: forward sweep exhausted");
  }

  // Backward sweep, j0-1 downward to 0.
  {
    double wb = w0, gb = g_j0, db = d_j0;
    for (long j = j0 - 1; j >= 0; --j) {
      const double a = a0 + static_cast<double>(j);
      db *= (a + 1.0) / y;
      gb = survival ? gb - db : gb + db;
      if (gb < 0.0) gb = 0.0;
      if (gb > 1.0) gb = 1.0;
      wb *= (static_cast<double>(j) + 1.0) / half_lam;
      const double term = wb * gb;
      sum += term;
      if (term <= sum * kSeriesTol) break;
    }
  }
  return std::min(sum, 1.0);
}

}  // namespace

double noncentral_cdf(const NoncentralChiSquareSpec& spec, double x) {
  if (x < 0.0) throw std::invalid_argument("x must be nonnegative");
  return ncx2_cdf_impl(x / spec.variance(), spec.dof(), spec.rho(), false);
}

double noncentral_cdf(const GeneralizedChiSquareSpec& spec, double x) {
  if (!spec.equal_variances())
    throw std::invalid_argument(
        "CDF is only available for equal-variance specs");
  double m2 = 0.0;
  for (const auto& c : spec.components()) m2 += c.mean * c.mean;
  return noncentral_cdf(
      NoncentralChiSquareSpec(spec.dof(), m2, spec.components()[0].variance),
      x);
}

double noncentral_sf(const NoncentralChiSquareSpec& spec, double x) {
  if (x < 0.0) throw std::invalid_argument("x must be nonnegative");
  return ncx2_cdf_impl(x / spec.variance(), spec.dof(), spec.rho(), true);
}

double marcum_q(double half_order, double a, double b) {
  const double two_m = 2.0 * half_order;
  const double rounded = std::round(two_m);
  if (!(half_order > 0.0) || std::fabs(two_m - rounded) > 1e-9)
    throw std::invalid_argument("marcum_q: order must be a positive half-integer");
  if (a < 0.0 || b < 0.0)
    throw std::invalid_argument("marcum_q: arguments must be nonnegative");
  if (b == 0.0) return 1.0;
  return ncx2_cdf_impl(b * b, rounded, a * a, true);
}

double sample_one(const GeneralizedChiSquareSpec& spec, std::uint64_t seed,
                  std::uint64_t index) {
  rng::Substream rs(seed, rng::Domain::chi2_sample, index);
  double beta = 0.0;
  for (const auto& c : spec.components()) {
    const double z = c.mean + std::sqrt(c.variance) * rs.normal();
    beta += z * z;
  }
  return beta;
}

std::vector<double> sample(const GeneralizedChiSquareSpec& spec, std::size_t n,
                           std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("need n >= 1");
  std::vector<double> out(n);
  par::for_chunks(n, [&](std::uint64_t, std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t i = b; i < e; ++i) out[i] = sample_one(spec, seed, i);
  });
  return out;
}

double numeric_quantile(const NoncentralChiSquareSpec& spec,
                        const ReliabilityTarget& target) {
  const double eps = target.epsilon;
  double lo = 0.0;
  double hi = spec.mean();
  int growth = 0;
  while (noncentral_cdf(spec, hi) < eps) {
    hi *= 2.0;
    if (++growth > 200)
      throw std::runtime_error("numeric_quantile: bracket growth exceeded cap");
  }
  // Bisect until the CDF at the midpoint matches eps to ~1e-13 relative or
  // the interval is at floating-point resolution.
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f = noncentral_cdf(spec, mid);
    if (std::fabs(f - eps) <= 1e-13 * eps) return mid;
    (f > eps ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double empirical_quantile(std::span<const double> samples, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must be in (0,1)");
  const double n = static_cast<double>(samples.size());
  if (n * epsilon < 100.0)
    throw insufficient_samples_error(
        "empirical_quantile: need n*epsilon >= 100");
  const std::size_t rank =
      static_cast<std::size_t>(std::ceil(n * epsilon));  // 1-based
  std::vector<double> work(samples.begin(), samples.end());
  std::nth_element(work.begin(), work.begin() + (rank - 1), work.end());
  return work[rank - 1];
}

TailQuantileAccumulator::TailQuantileAccumulator(std::size_t rank)
    : rank_(rank) {
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
  heap_.reserve(rank);
}

void TailQuantileAccumulator::push(double value) {
  ++seen_;
  if (heap_.size() < rank_) {
    heap_.push_back(value);
    std::push_heap(heap_.begin(), heap_.end());
    return;
  }
  if (value < heap_.front()) {
    std::pop_heap(heap_.begin(), heap_.end());
    heap_.back() = value;
    std::push_heap(heap_.begin(), heap_.end());
  }
}

void TailQuantileAccumulator::merge(const TailQuantileAccumulator& other) {
  seen_ += other.seen_;
  for (double v : other.heap_) {
    if (heap_.size() < rank_) {
      heap_.push_back(v);
      std::push_heap(heap_.begin(), heap_.end());
    } else if (v < heap_.front()) {
      std::pop_heap(heap_.begin(), heap_.end());
      heap_.back() = v;
      std::push_heap(heap_.begin(), heap_.end());
    }
  }
}

double TailQuantileAccumulator::quantile() const {
  if (heap_.size() < rank_)
    throw insufficient_samples_error("tail accumulator has too few values");
  return heap_.front();
}

std::size_t TailQuantileAccumulator::count_below(double x) const {
  std::size_t c = 0;
  for (double v : heap_)
    if (v < x) ++c;
  return c;
}

}  // namespace cherlb
