#include "gsq/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace gsq {

namespace {
// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
} // namespace

HalfComplexToReal::HalfComplexToReal(std::size_t n) : n_(n) {
  in_ = reinterpret_cast<std::complex<double>*>(
      fftw_malloc(sizeof(fftw_complex) * (n_ / 2 + 1)));
  out_ = static_cast<double*>(fftw_malloc(sizeof(double) * n_));
  std::lock_guard<std::mutex> lock(planner_mutex());
  // FFTW_ESTIMATE keeps plan selection deterministic run-to-run.
  plan_ = fftw_plan_dft_c2r_1d(static_cast<int>(n_),
                               reinterpret_cast<fftw_complex*>(in_), out_,
                               FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
}

HalfComplexToReal::~HalfComplexToReal() {
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
  fftw_free(in_);
  fftw_free(out_);
}

std::span<std::complex<double>> HalfComplexToReal::spectrum() {
  return {in_, n_ / 2 + 1};
}

std::span<const double> HalfComplexToReal::execute() {
  fftw_execute(static_cast<fftw_plan>(plan_));
  return {out_, n_};
}

RealToHalfComplex::RealToHalfComplex(std::size_t n) : n_(n) {
  in_ = static_cast<double*>(fftw_malloc(sizeof(double) * n_));
  out_ = reinterpret_cast<std::complex<double>*>(
      fftw_malloc(sizeof(fftw_complex) * (n_ / 2 + 1)));
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n_), in_,
                               reinterpret_cast<fftw_complex*>(out_),
                               FFTW_ESTIMATE);
}

RealToHalfComplex::~RealToHalfComplex() {
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
  fftw_free(in_);
  fftw_free(out_);
}

std::span<double> RealToHalfComplex::input() { return {in_, n_}; }

std::span<const std::complex<double>> RealToHalfComplex::execute() {
  fftw_execute(static_cast<fftw_plan>(plan_));
  return {out_, n_ / 2 + 1};
}

} // namespace gsq
