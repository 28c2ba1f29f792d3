#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace gsq {

/// Standard normal tail probability P(N > x).
inline double normal_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

/// Standard normal density.
inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

/// log log t.
inline double log2_iter(double t) { return std::log(std::log(t)); }

/// Compensated (Neumaier) running sum; bit-stable for a fixed input order.
class CompensatedSum {
public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_total(std::span<const double> xs);

struct BracketResult {
  double lo = 0.0, mid = 0.0, hi = 0.0;
  bool found = false;
};

/// Scans a log-spaced grid for a bracketing triple around a local minimum.
BracketResult bracket_minimum_log(const std::function<double(double)>& f,
                                  double center, double span_decades, int points);

struct MinimizeResult {
  double argmin = 0.0;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Golden-section search on (lo, hi) in log coordinates.
MinimizeResult golden_section_log(const std::function<double(double)>& f,
                                  double lo, double hi,
                                  double rel_tol, int max_iter);

/// Bisection for a sign change of f on [lo, hi]; requires f(lo)*f(hi) <= 0.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double rel_tol, int max_iter);

/// Adaptive Simpson quadrature with absolute+relative tolerance control.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, double abs_tol = 0.0, int max_depth = 48);

/// Fixed 15-point Gauss-Legendre rule on [a, b].
double gauss_legendre_15(const std::function<double(double)>& f, double a, double b);

/// SplitMix64 mix step; used to derive independent per-replica seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for replica r of a named stream under a master seed.
inline std::uint64_t replica_seed(std::uint64_t master, std::uint64_t stream_salt,
                                  std::uint64_t replica) {
  return splitmix64(splitmix64(master ^ stream_salt) + replica * 0x9E3779B97F4A7C15ULL);
}

/// FNV-1a 64-bit hash of a byte string; used for config fingerprints.
std::uint64_t fnv1a64(std::span<const char> bytes);

/// Standard normal stream (Marsaglia polar on raw 53-bit uniforms). Each
/// replica owns one; draw order is fixed, so outputs are deterministic in the
/// seed and independent of worker count.
class NormalStream {
public:
  explicit NormalStream(std::uint64_t seed) : s_{} {
    // SplitMix-expanded xoshiro256++ state; never all-zero.
    std::uint64_t x = seed;
    for (auto& w : s_) w = splitmix64(x += 0x9E3779B97F4A7C15ULL);
  }

  double operator()() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    double u, v, q;
    do {
      u = 2.0 * unit(next()) - 1.0;
      v = 2.0 * unit(next()) - 1.0;
      q = u * u + v * v;
    } while (q >= 1.0 || q == 0.0);
    double f = std::sqrt(-2.0 * std::log(q) / q);
    spare_ = v * f;
    have_ = true;
    return u * f;
  }

private:
  static double unit(std::uint64_t x) { // (0, 1)
    return (double(x >> 11) + 0.5) * 0x1.0p-53;
  }
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t next() {
    std::uint64_t r = rotl(s_[0] + s_[3], 23) + s_[0];
    std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return r;
  }
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool have_ = false;
};

/// Least-squares slope/intercept of y against x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

} // namespace gsq
