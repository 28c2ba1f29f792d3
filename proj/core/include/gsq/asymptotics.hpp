#pragma once

#include "gsq/variance_model.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace gsq {

/// Closed-form constants of the scaled overflow field for a (model, drift) pair.
struct AsymptoticConstants {
  double driftC = 0.0;
  double alpha0 = 0.0, A0 = 0.0, alphaInf = 0.0, AInf = 0.0;
  double tauStar = 0.0;  // alphaInf / (c (1 - alphaInf))
  double A = 0.0, B = 0.0;
  double b = 0.0;       // B / (2A)
  double lambda = 0.0;  // 1 - alphaInf
  double gamma = 0.0;
  double zetaAlpha = 0.0;
  std::optional<double> pickandsH; // clustering constant; estimated elsewhere
  std::optional<double> scrC;      // populated only when pickandsH is present
};

/// m(u) = inf_{t >= 0} u (1 + c t) / sigma(u t), to relative 1e-10.
double m_of_u(const VarianceModel& model, double c, double u);

/// Maximizer tau(u) of the standardized deviation sigma_u; converges to tauStar.
double tau_center(const VarianceModel& model, double c, double u);

/// Generalized inverse of m (ties resolve to the infimum).
double m_inverse(const VarianceModel& model, double c, double v);

AsymptoticConstants constants(const VarianceModel& model, double c,
                              std::optional<double> pickandsH = std::nullopt);

/// sigma_u(tau) = sigma(u tau) m(u) / (u (1 + c tau)); peaks at 1 at tau(u).
double sigma_u(const VarianceModel& model, double c, double u, double tau);

/// Correlation of the scaled field between (u; s, tau) and (u'; s', tau').
double correlation_field(const VarianceModel& model, double u, double uprime,
                         double s, double tau, double sprime, double tauprime);

/// Limit correlation g(t) = (|t+T|^{2a} + |t-T|^{2a} - 2|t|^{2a}) / (2 T^{2a}),
/// T = tauStar, a = alphaInf.
double g_limit(double alphaInf, double tauStar, double t);
double g_limit(const VarianceModel& model, double c, double t);

/// Window constants of the limit correlation: c_delta in (0, 1/2) with
/// inf_{|t| < c_delta} g > delta and sup_{|t| > delta} g < 1 - c_delta.
struct GWindow {
  bool exists = false;
  double c_delta = 0.0;
  double inf_inside = 0.0;
  double sup_outside = 0.0;
};
GWindow g_window_constant(double alphaInf, double tauStar, double delta,
                          int grid_points = 10000);

/// First-order tail of P(sup over one time unit of the queue exceeding u),
/// evaluated with an externally estimated clustering constant. Valid as an
/// approximation once m(u) is moderately large; `trusted` flags m(u) >= 3.
struct PsiAsymptotic {
  double value = 0.0;
  double log_value = 0.0;
  double m_u = 0.0;
  bool trusted = false;
};
PsiAsymptotic psi_asymptotic(const VarianceModel& model, double c, double u,
                             double pickandsH);

/// Boundary family f_p and its companion window length h_p. For integrated
/// (srd) models f_p uses the closed-form replacement of m; f_p_numeric always
/// goes through the generalized inverse.
double f_p(const VarianceModel& model, double c, double p, double t);
double f_p_numeric(const VarianceModel& model, double c, double p, double t);
double h_p(const VarianceModel& model, double c, double p, double t, double pickandsH);

/// Short-range replacement m_hat(u) = sqrt(2 G u + 2 G^2 G1) and its inverse.
double m_hat(const VarianceModel& model, double u);
double m_hat_inverse(const VarianceModel& model, double v);

/// Window/step layout used by discrete sup estimators. Cell (l, n) is
/// [s_l, s_{l+1}] x [tau_n, tau_{n+1}]. `tauWindow` is the half-width of the
/// tau band around `tauCenter`; it is distinct from `tauStar`, the limit of
/// tauCenter.
struct DiscretizationGrid {
  double u = 0.0, T = 0.0, theta = 0.0;
  double mU = 0.0;
  double deltaU = 0.0;     // spatial unit sigma^{-1}(sqrt2 sigma2(u tau*) / (u (1+c tau*)))
  double q = 0.0;          // theta * deltaU / u
  double tauCenter = 0.0;  // tau(u)
  double tauWindow = 0.0;  // log m(u) / m(u)
  std::size_t L = 0, N = 0;
  std::vector<double> s;   // s_l = l q, l = 0..L
  std::vector<double> tau; // tau_n = tauCenter + n q, n = -N..N
};
DiscretizationGrid build_grid(const VarianceModel& model, double c, double u, double T,
                              double theta);

/// Almost-sure growth constant of the running maximum and its log exponent.
struct LimsupConstant {
  double value = 0.0;
  double exponent = 0.0; // 1 / (2 (1 - alphaInf))
};
LimsupConstant limsup_constant(const VarianceModel& model, double c);

/// Repeated boundary evaluation over a horizon (monotone spline over a log
/// grid of the generalized-inverse route; closed form for integrated models).
class FpEvaluator {
public:
  FpEvaluator(const VarianceModel& model, double c, double p, double t_min, double t_max);
  double operator()(double t) const;

private:
  bool closed_form_ = false;
  double G_ = 0.0, G1_ = 0.0, p_ = 0.0, k_ = 0.0;
  std::vector<double> log_t_, value_;
};

} // namespace gsq
