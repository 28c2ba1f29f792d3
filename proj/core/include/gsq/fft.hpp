#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace gsq {

/// Half-complex-to-real inverse transform of a fixed size (unnormalized).
/// One instance per worker thread; plan creation is internally serialized.
class HalfComplexToReal {
public:
  explicit HalfComplexToReal(std::size_t n);
  ~HalfComplexToReal();
  HalfComplexToReal(const HalfComplexToReal&) = delete;
  HalfComplexToReal& operator=(const HalfComplexToReal&) = delete;

  std::size_t size() const { return n_; }
  /// Spectrum slots 0..n/2 (inclusive); imaginary parts of slot 0 and n/2 must be 0.
  std::span<std::complex<double>> spectrum();
  /// Executes the transform and returns the n real output samples.
  std::span<const double> execute();

private:
  std::size_t n_;
  void* plan_ = nullptr;
  std::complex<double>* in_ = nullptr;
  double* out_ = nullptr;
};

/// Real-to-half-complex forward transform (unnormalized); used for eigenvalue
/// computation of symmetric circulant rows.
class RealToHalfComplex {
public:
  explicit RealToHalfComplex(std::size_t n);
  ~RealToHalfComplex();
  RealToHalfComplex(const RealToHalfComplex&) = delete;
  RealToHalfComplex& operator=(const RealToHalfComplex&) = delete;

  std::size_t size() const { return n_; }
  std::span<double> input();
  std::span<const std::complex<double>> execute();

private:
  std::size_t n_;
  void* plan_ = nullptr;
  double* in_ = nullptr;
  std::complex<double>* out_ = nullptr;
};

} // namespace gsq
