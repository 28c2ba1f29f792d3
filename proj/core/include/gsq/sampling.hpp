#pragma once

#include "gsq/fft.hpp"
#include "gsq/variance_model.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace gsq {

/// Uniform sampling grid t_k = origin + k * step, k = 0..count-1.
struct GridSpec {
  double step = 0.0;
  std::size_t count = 0;
  double origin = 0.0;

  GridSpec() = default;
  GridSpec(double step_, std::size_t count_, double origin_ = 0.0);
  double time(std::size_t k) const { return origin + step * double(k); }
  double horizon() const { return step * double(count - 1); }
};

/// One discrete draw of the Gaussian input X on a grid, with X(origin) = 0.
struct SampledPath {
  GridSpec grid;
  std::vector<double> x;
  std::uint64_t seed = 0;
};

/// Stationary autocovariance of the unit-lag increment sequence at step delta:
/// c(0) = sigma2(delta), c(k) = (sigma2((k+1)d) - 2 sigma2(kd) + sigma2((k-1)d)) / 2.
double increment_covariance(const VarianceModel& model, double delta, std::size_t lag);

enum class SamplerMethod { Spectral, Toeplitz };

/// Exact-in-law sampler of the stationary increment sequence on a fixed grid.
/// Spectral path: symmetric circulant embedding of the covariance row (size =
/// smallest power of two >= 2(n-1)); eigenvalues within -1e-9 * max of zero are
/// clamped. Larger negativity falls back to an O(n^2) Toeplitz (Durbin)
/// factorization, refused above n-1 = 2^14.
class IncrementSampler {
public:
  IncrementSampler(const VarianceModel& model, const GridSpec& grid);
  IncrementSampler(const VarianceModel& model, const GridSpec& grid, SamplerMethod forced);

  SamplerMethod method() const { return method_; }
  std::size_t embedding_size() const { return embedding_size_; }
  std::size_t increments() const { return increments_; }
  double step() const { return step_; }

  /// Per-worker scratch state (FFT plan and buffers).
  class Workspace {
  public:
    explicit Workspace(const IncrementSampler& owner);

  private:
    friend class IncrementSampler;
    std::unique_ptr<HalfComplexToReal> fft_;
    std::vector<double> scratch_;
  };
  Workspace make_workspace() const { return Workspace(*this); }

  /// Draws the n-1 increments of one replica into `out`.
  void sample_into(std::uint64_t replica_seed, Workspace& ws, std::vector<double>& out) const;
  std::vector<double> sample(std::uint64_t replica_seed) const;

private:
  void build(const VarianceModel& model, SamplerMethod preferred, bool allow_fallback);

  std::size_t increments_ = 0;
  double step_ = 0.0;
  SamplerMethod method_ = SamplerMethod::Spectral;
  std::size_t embedding_size_ = 0;
  // Spectral: per-slot normal scalings sqrt(lambda_k / C) (k = 0, C/2) and
  // sqrt(lambda_k / (2C)) otherwise.
  std::vector<double> spectral_scale_;
  // Toeplitz: covariance row c(0..n-2).
  std::vector<double> covariance_row_;
};

/// Cumulative sums with X(origin) = 0; compensated so the total matches an
/// independent summation oracle to ~1e-15 relative.
SampledPath assemble_path(const std::vector<double>& increments, const GridSpec& grid,
                          std::uint64_t seed = 0);

} // namespace gsq
