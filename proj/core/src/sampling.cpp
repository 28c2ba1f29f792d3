#include "gsq/sampling.hpp"

#include "gsq/errors.hpp"
#include "gsq/math_util.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gsq {

GridSpec::GridSpec(double step_, std::size_t count_, double origin_)
    : step(step_), count(count_), origin(origin_) {
  if (!(step > 0.0)) throw DomainError("GridSpec: step must be positive");
  if (count < 2) throw DomainError("GridSpec: need at least two grid points");
}

double increment_covariance(const VarianceModel& model, double delta, std::size_t lag) {
  if (!(delta > 0.0)) throw DomainError("increment_covariance: delta must be positive");
  if (lag == 0) return model.sigma2(delta);
  const double t = double(lag) * delta;

  // Integrated inputs: away from the origin the second difference of sigma2
  // loses digits to cancellation; the covariance is the exact cell integral
  // of the driving correlation there.
  if (const SrdCorrelation* corr = model.correlation(); corr && t - delta >= 0.5) {
    if (corr->r(t - delta) < 1e-280) return 0.0;
    auto inner = [&](double v) {
      return gauss_legendre_15([&](double w) { return corr->r(v - w); }, 0.0, delta);
    };
    return gauss_legendre_15(inner, t, t + delta);
  }

  double hi = model.sigma2(t + delta);
  double mid = model.sigma2(t);
  double lo = model.sigma2(t - delta);
  return 0.5 * (hi - 2.0 * mid + lo);
}

IncrementSampler::Workspace::Workspace(const IncrementSampler& owner) {
  if (owner.method_ == SamplerMethod::Spectral)
    fft_ = std::make_unique<HalfComplexToReal>(owner.embedding_size_);
  else
    scratch_.resize(3 * owner.increments_);
}

IncrementSampler::IncrementSampler(const VarianceModel& model, const GridSpec& grid) {
  increments_ = grid.count - 1;
  step_ = grid.step;
  build(model, SamplerMethod::Spectral, true);
}

IncrementSampler::IncrementSampler(const VarianceModel& model, const GridSpec& grid,
                                   SamplerMethod forced) {
  increments_ = grid.count - 1;
  step_ = grid.step;
  build(model, forced, false);
}

void IncrementSampler::build(const VarianceModel& model, SamplerMethod preferred,
                             bool allow_fallback) {
  const std::size_t m = increments_;

  if (preferred == SamplerMethod::Spectral) {
    std::size_t c = 1;
    while (c < 2 * m) c *= 2;
    embedding_size_ = c;

    RealToHalfComplex fwd(c);
    auto row = fwd.input();
    for (std::size_t k = 0; k <= c / 2; ++k)
      row[k] = increment_covariance(model, step_, k);
    for (std::size_t k = c / 2 + 1; k < c; ++k) row[k] = row[c - k];
    auto spec = fwd.execute();

    double max_eig = 0.0;
    for (auto z : spec) max_eig = std::max(max_eig, z.real());
    double min_eig = 0.0;
    for (auto z : spec) min_eig = std::min(min_eig, z.real());

    if (min_eig >= -1e-9 * max_eig) {
      spectral_scale_.resize(c / 2 + 1);
      for (std::size_t k = 0; k <= c / 2; ++k) {
        double lam = std::max(0.0, spec[k].real());
        double denom = (k == 0 || k == c / 2) ? double(c) : 2.0 * double(c);
        spectral_scale_[k] = std::sqrt(lam / denom);
      }
      method_ = SamplerMethod::Spectral;
      return;
    }
    if (!allow_fallback) {
      std::ostringstream os;
      os << "IncrementSampler: circulant embedding of size " << c
         << " is not nonnegative-definite (min eigenvalue " << min_eig << ")";
      throw NumericError(os.str());
    }
    if (m > (1u << 14)) {
      std::ostringstream os;
      os << "IncrementSampler: circulant embedding of size " << c
         << " failed (min eigenvalue " << min_eig
         << ") and the dense Toeplitz fallback is refused for n-1 = " << m << " > 16384";
      throw CapacityError(os.str());
    }
  } else if (m > (1u << 14)) {
    throw CapacityError("IncrementSampler: Toeplitz sampler refused for n-1 > 16384");
  }

  covariance_row_.resize(m);
  for (std::size_t k = 0; k < m; ++k)
    covariance_row_[k] = increment_covariance(model, step_, k);
  method_ = SamplerMethod::Toeplitz;
  embedding_size_ = 0;
}

void IncrementSampler::sample_into(std::uint64_t replica_seed, Workspace& ws,
                                   std::vector<double>& out) const {
  NormalStream normal(replica_seed);
  out.resize(increments_);

  if (method_ == SamplerMethod::Spectral) {
    auto spec = ws.fft_->spectrum();
    const std::size_t half = embedding_size_ / 2;
    spec[0] = {spectral_scale_[0] * normal(), 0.0};
    for (std::size_t k = 1; k < half; ++k) {
      double u = normal();
      double v = normal();
      spec[k] = {spectral_scale_[k] * u, spectral_scale_[k] * v};
    }
    spec[half] = {spectral_scale_[half] * normal(), 0.0};
    auto real = ws.fft_->execute();
    std::copy(real.begin(), real.begin() + long(increments_), out.begin());
    return;
  }

  // Durbin-Levinson innovations recursion on the Toeplitz covariance.
  const std::size_t m = increments_;
  double* phi = ws.scratch_.data();
  double* phi_prev = ws.scratch_.data() + m;
  const double* r = covariance_row_.data();

  double v = r[0];
  out[0] = std::sqrt(v) * normal();
  for (std::size_t k = 1; k < m; ++k) {
    double acc = r[k];
    for (std::size_t j = 1; j < k; ++j) acc -= phi_prev[j] * r[k - j];
    double theta = acc / v;
    phi[k] = theta;
    for (std::size_t j = 1; j < k; ++j) phi[j] = phi_prev[j] - theta * phi_prev[k - j];
    v *= (1.0 - theta * theta);
    if (v < 0.0) v = 0.0;
    double mean = 0.0;
    for (std::size_t j = 1; j <= k; ++j) mean += phi[j] * out[k - j];
    out[k] = mean + std::sqrt(v) * normal();
    std::swap(phi, phi_prev);
  }
}

std::vector<double> IncrementSampler::sample(std::uint64_t replica_seed) const {
  Workspace ws(*this);
  std::vector<double> out;
  sample_into(replica_seed, ws, out);
  return out;
}

SampledPath assemble_path(const std::vector<double>& increments, const GridSpec& grid,
                          std::uint64_t seed) {
  if (increments.size() != grid.count - 1)
    throw DomainError("assemble_path: increments length must be count-1");
  SampledPath path;
  path.grid = grid;
  path.seed = seed;
  path.x.resize(grid.count);
  path.x[0] = 0.0;
  CompensatedSum acc;
  for (std::size_t k = 0; k < increments.size(); ++k) {
    acc.add(increments[k]);
    path.x[k + 1] = acc.value();
  }
  return path;
}

} // namespace gsq
