#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gsq {

enum class ModelKind { Fbm, SrdIntegrated, Tabulated };

/// Correlation function of the unit-variance stationary process driving an
/// integrated input. Built-ins compute G = 1/int_0^inf r and G1 = int_0^inf t r(t) dt
/// at construction.
struct SrdCorrelation {
  std::function<double(double)> r;
  std::string name;
  double exponent = 1.0;
  double G = 0.0;
  double G1 = 0.0;

  /// r(t) = exp(-|t|^a), a in (0, 2].
  static SrdCorrelation exp_power(double a);
  /// User-supplied correlation; G and G1 are computed by quadrature.
  static SrdCorrelation custom(std::function<double(double)> r, std::string name);
};

/// Power-law behavior of sigma^2 at zero and at infinity:
/// sigma2(t) ~ A0 t^{2 alpha0} (t -> 0),  sigma2(t) ~ AInf t^{2 alphaInf} (t -> inf).
struct RegularVariation {
  double alpha0 = 0.0;
  double A0 = 0.0;
  double alphaInf = 0.0;
  double AInf = 0.0;
};

struct CheckResult {
  std::string condition;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool degenerate_pickands_case = false;
  bool pass() const;
  std::string summary() const;
};

/// Variance function sigma^2 of a centered Gaussian input with stationary
/// increments. Immutable after construction; internal evaluation caches are
/// synchronized, so instances are safe to share across worker threads.
class VarianceModel {
public:
  static VarianceModel fbm(double hurst);
  static VarianceModel srd_integrated(SrdCorrelation corr);
  static VarianceModel tabulated(std::vector<double> t, std::vector<double> sigma2,
                                 std::optional<RegularVariation> rv = std::nullopt);

  ModelKind kind() const;
  double hurst() const;
  const SrdCorrelation* correlation() const;

  double sigma2(double t) const;
  double sigma(double t) const;
  /// (first, second) derivative of sigma^2 at t > 0.
  std::pair<double, double> sigma2_derivatives(double t) const;
  /// Generalized inverse of sigma; ties resolve to the infimum.
  double sigma_inverse(double y) const;

  const RegularVariation& rv() const;

  /// Canonical parameter string, stable across runs (used in fingerprints).
  std::string describe() const;

  /// Identity of the underlying immutable state.
  const void* id() const;

private:
  struct Impl;
  explicit VarianceModel(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// Numeric audit of the power-law limits, derivative regularity and (for
/// integrated models) the short-range-dependence conditions.
ValidationReport validate_ai_aii(const VarianceModel& model);

} // namespace gsq
