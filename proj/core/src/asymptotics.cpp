#include "gsq/asymptotics.hpp"

#include "gsq/errors.hpp"
#include "gsq/math_util.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gsq {

namespace {

void require_admissible(const VarianceModel& model, double c) {
  if (!(c > 0.0)) throw DomainError("drift c must be positive");
  const auto& rv = model.rv();
  if (!(rv.alphaInf > 0.0 && rv.alphaInf < 1.0))
    throw DomainError("alphaInf must lie in (0,1); degenerate models are only usable "
                      "as clustering-constant oracles");
}

double tau_star(const VarianceModel& model, double c) {
  const double a = model.rv().alphaInf;
  return a / (c * (1.0 - a));
}

struct ProfileOptimum {
  double tau = 0.0;
  double m = 0.0;
};

// Minimizes u (1 + c t) / sigma(u t) over t in log coordinates, then polishes
// the stationarity condition u sigma2'(u t)(1 + c t) = 2 c sigma2(u t).
ProfileOptimum optimize_profile(const VarianceModel& model, double c, double u) {
  if (!(u > 0.0)) throw DomainError("m_of_u: u must be positive");
  require_admissible(model, c);
  auto objective = [&](double t) { return u * (1.0 + c * t) / model.sigma(u * t); };

  const double center = tau_star(model, c);
  BracketResult bracket = bracket_minimum_log(objective, center, 6.0, 121);
  if (!bracket.found) bracket = bracket_minimum_log(objective, center, 10.0, 321);
  if (!bracket.found)
    throw NumericError("m_of_u: no interior minimum found on the probe grid");

  MinimizeResult res = golden_section_log(objective, bracket.lo, bracket.hi, 1e-12, 200);
  if (!res.converged) {
    std::ostringstream os;
    os << "m_of_u: golden-section did not converge after 200 iterations; bracket ["
       << bracket.lo << ", " << bracket.hi << "], u = " << u;
    throw NumericError(os.str());
  }

  ProfileOptimum opt;
  opt.tau = res.argmin;
  // Stationarity polish; the profile is smooth and unimodal near the optimum.
  auto stationarity = [&](double t) {
    auto [first, second] = model.sigma2_derivatives(u * t);
    (void)second;
    return u * first * (1.0 + c * t) - 2.0 * c * model.sigma2(u * t);
  };
  double lo = opt.tau * 0.9, hi = opt.tau * 1.1;
  double flo = stationarity(lo), fhi = stationarity(hi);
  if (std::isfinite(flo) && std::isfinite(fhi) && flo * fhi < 0.0)
    opt.tau = bisect_root(stationarity, lo, hi, 1e-14, 200);
  opt.m = objective(opt.tau);
  return opt;
}

// Detects plateau / multi-modality on a coarse profile scan.
void check_unique_maximum(const VarianceModel& model, double c, double u) {
  auto objective = [&](double t) { return u * (1.0 + c * t) / model.sigma(u * t); };
  const double center = tau_star(model, c);
  const int n = 121;
  std::vector<double> ts(n), fs(n);
  for (int i = 0; i < n; ++i) {
    ts[i] = center * std::pow(10.0, -6.0 + 12.0 * i / (n - 1));
    fs[i] = objective(ts[i]);
  }
  int minima = 0;
  for (int i = 1; i + 1 < n; ++i) {
    double eps = 1e-12 * std::abs(fs[i]);
    if (fs[i] < fs[i - 1] - eps && fs[i] < fs[i + 1] - eps) ++minima;
  }
  if (minima > 1) {
    std::ostringstream os;
    os << "tau_center: profile has " << minima << " interior minima; profile dump:";
    for (int i = 0; i < n; i += 10) os << " (" << ts[i] << ", " << fs[i] << ")";
    throw NumericError(os.str());
  }
}

} // namespace

double m_of_u(const VarianceModel& model, double c, double u) {
  return optimize_profile(model, c, u).m;
}

double tau_center(const VarianceModel& model, double c, double u) {
  check_unique_maximum(model, c, u);
  return optimize_profile(model, c, u).tau;
}

double m_inverse(const VarianceModel& model, double c, double v) {
  if (!(v > 0.0)) throw DomainError("m_inverse: argument must be positive");
  require_admissible(model, c);
  const auto& rv = model.rv();

  // Regular-variation guess m(u) ~ (A / sqrt(AInf)) u^{1 - alphaInf}.
  AsymptoticConstants k = constants(model, c);
  double guess = std::pow(v * std::sqrt(rv.AInf) / k.A, 1.0 / (1.0 - rv.alphaInf));
  double lo = guess, hi = guess;
  int guard = 0;
  while (m_of_u(model, c, lo) >= v) {
    lo *= 0.25;
    if (++guard > 400) throw DomainError("m_inverse: argument below the range of m");
  }
  guard = 0;
  while (m_of_u(model, c, hi) < v) {
    hi *= 4.0;
    if (++guard > 400) throw NumericError("m_inverse: bracketing failed from above");
  }

  // Monotonicity probe across the bracket.
  double prev = m_of_u(model, c, lo);
  for (int i = 1; i <= 8; ++i) {
    double uu = lo * std::pow(hi / lo, i / 8.0);
    double cur = m_of_u(model, c, uu);
    if (cur < prev * (1.0 - 1e-9))
      throw NumericError("m_inverse: m is not nondecreasing on the probe grid");
    prev = cur;
  }

  auto f = [&](double uu) { return m_of_u(model, c, uu) - v; };
  return bisect_root(f, lo, hi, 1e-10, 200);
}

AsymptoticConstants constants(const VarianceModel& model, double c,
                              std::optional<double> pickandsH) {
  require_admissible(model, c);
  const auto& rv = model.rv();
  AsymptoticConstants k;
  k.driftC = c;
  k.alpha0 = rv.alpha0;
  k.A0 = rv.A0;
  k.alphaInf = rv.alphaInf;
  k.AInf = rv.AInf;
  const double a = rv.alphaInf;
  k.tauStar = a / (c * (1.0 - a));
  k.A = std::pow(k.tauStar, -a) / (1.0 - a);
  k.B = std::pow(k.tauStar, -a - 2.0) * a;
  k.b = k.B / (2.0 * k.A);
  k.lambda = 1.0 - a;
  k.gamma = (a >= 0.5) ? 2.0 * (1.0 - a) / a
                       : 2.0 * (1.0 + rv.alpha0 - 2.0 * a) / rv.alpha0;
  if (a > 0.5) {
    k.zetaAlpha = std::pow(
        std::sqrt(2.0 * rv.AInf) * std::pow(k.tauStar, 2.0 * a) / (1.0 + c * k.tauStar),
        -2.0 / a);
  } else if (a == 0.5) {
    double scale = model.sigma_inverse(std::sqrt(2.0) * rv.AInf * k.tauStar /
                                       (1.0 + c * k.tauStar));
    k.zetaAlpha = 1.0 / (scale * scale);
  } else {
    k.zetaAlpha = std::pow(std::sqrt(2.0) * rv.AInf * std::pow(k.tauStar, 2.0 * a) /
                               (std::sqrt(rv.A0) * (1.0 + c * k.tauStar)),
                           -2.0 / rv.alpha0);
  }
  if (pickandsH) {
    k.pickandsH = pickandsH;
    double h = *pickandsH;
    k.scrC = 0.5 * h * h * std::sqrt(k.A / k.B) * k.zetaAlpha *
             std::pow(std::sqrt(2.0 * rv.AInf) / k.A, (k.gamma - 1.0) / (1.0 - a));
  }
  return k;
}

double sigma_u(const VarianceModel& model, double c, double u, double tau) {
  if (!(u > 0.0) || !(tau > 0.0)) throw DomainError("sigma_u: u and tau must be positive");
  double m = m_of_u(model, c, u);
  return model.sigma(u * tau) * m / (u * (1.0 + c * tau));
}

double correlation_field(const VarianceModel& model, double u, double uprime, double s,
                         double tau, double sprime, double tauprime) {
  if (!(tau > 0.0) || !(tauprime > 0.0))
    throw DomainError("correlation_field: tau arguments must be positive");
  const double d = u * s - uprime * sprime;
  double num = -model.sigma2(std::abs(d + u * tau - uprime * tauprime)) +
               model.sigma2(std::abs(d + u * tau)) +
               model.sigma2(std::abs(d - uprime * tauprime)) - model.sigma2(std::abs(d));
  return num / (2.0 * model.sigma(u * tau) * model.sigma(uprime * tauprime));
}

double g_limit(double alphaInf, double tauStar, double t) {
  const double e = 2.0 * alphaInf;
  return (std::pow(std::abs(t + tauStar), e) + std::pow(std::abs(t - tauStar), e) -
          2.0 * std::pow(std::abs(t), e)) /
         (2.0 * std::pow(tauStar, e));
}

double g_limit(const VarianceModel& model, double c, double t) {
  require_admissible(model, c);
  return g_limit(model.rv().alphaInf, tau_star(model, c), t);
}

GWindow g_window_constant(double alphaInf, double tauStar, double delta, int grid_points) {
  GWindow out;
  // sup of g over |t| > delta; g is symmetric and tends to 0, so a generous
  // finite scan suffices.
  double hi = std::max(10.0 * tauStar, 10.0 * delta);
  double sup_outside = 0.0;
  for (int i = 0; i <= grid_points; ++i) {
    double t = delta + (hi - delta) * double(i) / grid_points;
    sup_outside = std::max(sup_outside, g_limit(alphaInf, tauStar, t));
  }
  out.sup_outside = sup_outside;

  // Largest c in (0, 1/2) with inf_{|t| < c} g > delta and sup_{|t| > delta}
  // g < 1 - c. Running prefix minima give inf over [0, c] on the scan grid.
  double c_from_sup = 1.0 - sup_outside;
  std::vector<double> prefix_min(grid_points + 1);
  double running = g_limit(alphaInf, tauStar, 0.0);
  for (int i = 0; i <= grid_points; ++i) {
    double t = 0.4999 * double(i) / grid_points;
    running = std::min(running, g_limit(alphaInf, tauStar, t));
    prefix_min[i] = running;
  }
  for (int i = grid_points; i >= 1; --i) {
    double cc = 0.4999 * double(i) / grid_points;
    if (cc >= c_from_sup) continue;
    if (prefix_min[i] > delta) {
      out.exists = true;
      out.c_delta = cc;
      out.inf_inside = prefix_min[i];
      break;
    }
  }
  return out;
}

namespace {

double log_normal_tail(double x) {
  if (x < 20.0) return std::log(normal_tail(x));
  // Asymptotic series; relative error < 1e-12 for x >= 20.
  double x2 = x * x;
  return -0.5 * x2 - std::log(x * std::sqrt(2.0 * M_PI)) +
         std::log1p(-1.0 / x2 + 3.0 / (x2 * x2));
}

} // namespace

PsiAsymptotic psi_asymptotic(const VarianceModel& model, double c, double u,
                             double pickandsH) {
  if (!(pickandsH > 0.0))
    throw DomainError("psi_asymptotic: clustering constant must be estimated first "
                      "(run the pickands estimator and pass its value)");
  AsymptoticConstants k = constants(model, c);
  double m = m_of_u(model, c, u);
  PsiAsymptotic out;
  out.m_u = m;
  out.trusted = m >= 3.0;
  double log_front = 2.0 * std::log(pickandsH) +
                     0.5 * std::log(2.0 * k.A * M_PI / k.B) + std::log(k.zetaAlpha);
  out.log_value = log_front + k.gamma * std::log(u) - std::log(m) + log_normal_tail(m);
  out.value = std::exp(out.log_value);
  return out;
}

namespace {

// Argument of the generalized inverse in the boundary family.
double fp_level(const AsymptoticConstants& k, double p, double t) {
  if (!(t > std::exp(1.0))) throw DomainError("f_p: t must exceed e");
  double kappa = (k.gamma - 1.0) / (2.0 * (1.0 - k.alphaInf));
  double inner = std::log(t) + (kappa - p) * log2_iter(t);
  if (!(inner > 0.0))
    throw DomainError("f_p: log t + (kappa - p) loglog t is not positive at this t");
  return std::sqrt(2.0 * inner);
}

} // namespace

double f_p_numeric(const VarianceModel& model, double c, double p, double t) {
  AsymptoticConstants k = constants(model, c);
  return m_inverse(model, c, fp_level(k, p, t));
}

double m_hat(const VarianceModel& model, double u) {
  const SrdCorrelation* corr = model.correlation();
  if (!corr) throw DomainError("m_hat: only defined for integrated (srd) models");
  return std::sqrt(2.0 * corr->G * u + 2.0 * corr->G * corr->G * corr->G1);
}

double m_hat_inverse(const VarianceModel& model, double v) {
  const SrdCorrelation* corr = model.correlation();
  if (!corr) throw DomainError("m_hat_inverse: only defined for integrated (srd) models");
  return v * v / (2.0 * corr->G) - corr->G * corr->G1;
}

double f_p(const VarianceModel& model, double c, double p, double t) {
  AsymptoticConstants k = constants(model, c);
  double level = fp_level(k, p, t);
  if (model.kind() == ModelKind::SrdIntegrated) return m_hat_inverse(model, level);
  return m_inverse(model, c, level);
}

double h_p(const VarianceModel& model, double c, double p, double t, double pickandsH) {
  double f = f_p(model, c, p, t);
  PsiAsymptotic psi = psi_asymptotic(model, c, f, pickandsH);
  return p * f / psi.value * log2_iter(t);
}

DiscretizationGrid build_grid(const VarianceModel& model, double c, double u, double T,
                              double theta) {
  if (!(u > 0.0) || !(T > 0.0) || !(theta > 0.0))
    throw DomainError("build_grid: u, T, theta must be positive");
  require_admissible(model, c);
  DiscretizationGrid g;
  g.u = u;
  g.T = T;
  g.theta = theta;
  const double ts = tau_star(model, c);
  g.mU = m_of_u(model, c, u);
  if (g.mU <= 1.0)
    throw NumericError("build_grid: window undefined for m(u) <= 1");
  g.tauCenter = optimize_profile(model, c, u).tau;
  g.tauWindow = std::log(g.mU) / g.mU;
  g.deltaU = model.sigma_inverse(std::sqrt(2.0) * model.sigma2(u * ts) /
                                 (u * (1.0 + c * ts)));
  g.q = theta * g.deltaU / u;
  g.L = std::size_t(std::floor(T / g.q));
  g.N = std::size_t(std::floor(g.tauWindow / g.q));
  g.s.resize(g.L + 1);
  for (std::size_t l = 0; l <= g.L; ++l) g.s[l] = double(l) * g.q;
  g.tau.resize(2 * g.N + 1);
  for (std::size_t i = 0; i < g.tau.size(); ++i)
    g.tau[i] = g.tauCenter + (double(i) - double(g.N)) * g.q;
  return g;
}

LimsupConstant limsup_constant(const VarianceModel& model, double c) {
  AsymptoticConstants k = constants(model, c);
  LimsupConstant out;
  out.exponent = 1.0 / (2.0 * (1.0 - k.alphaInf));
  out.value = std::pow(2.0 * k.AInf / (k.A * k.A), out.exponent);
  return out;
}

FpEvaluator::FpEvaluator(const VarianceModel& model, double c, double p, double t_min,
                         double t_max) {
  p_ = p;
  if (!(t_min > std::exp(1.0)) || !(t_max > t_min))
    throw DomainError("FpEvaluator: need exp(1) < t_min < t_max");
  AsymptoticConstants k = constants(model, c);
  k_ = (k.gamma - 1.0) / (2.0 * (1.0 - k.alphaInf));
  if (model.kind() == ModelKind::SrdIntegrated) {
    closed_form_ = true;
    G_ = model.correlation()->G;
    G1_ = model.correlation()->G1;
    return;
  }
  // The boundary depends on t only through the inner level argument
  // log t + (kappa - p) loglog t, and is a near power law of it (exactly, for
  // power-law variance). Tabulating log f against log(inner) stays monotone
  // even where the argument dips before growing (t below e^{p - kappa}).
  auto inner_of = [&](double t) { return std::log(t) + (k_ - p) * log2_iter(t); };
  double lo = std::min(inner_of(t_min), inner_of(t_max));
  double hi = std::max(inner_of(t_min), inner_of(t_max));
  if (k_ - p < 0.0) {
    double turn = std::exp(p - k_);
    if (turn > t_min && turn < t_max) lo = std::min(lo, inner_of(turn));
  }
  if (!(lo > 0.0))
    throw DomainError("FpEvaluator: boundary argument not positive on the horizon");
  const int knots = 513;
  log_t_.resize(knots);
  value_.resize(knots);
  for (int i = 0; i < knots; ++i) {
    log_t_[i] = std::log(lo) + (std::log(hi) - std::log(lo)) * i / (knots - 1);
    double level = std::sqrt(2.0 * std::exp(log_t_[i]));
    value_[i] = std::log(m_inverse(model, c, level));
  }
}

double FpEvaluator::operator()(double t) const {
  double inner = std::log(t) + (k_ - p_) * log2_iter(t);
  if (closed_form_) return 2.0 * inner / (2.0 * G_) - G_ * G1_;
  if (!(inner > 0.0)) throw DomainError("FpEvaluator: t below the boundary domain");
  double lx = std::log(inner);
  auto it = std::upper_bound(log_t_.begin(), log_t_.end(), lx);
  std::size_t i;
  if (it == log_t_.begin()) {
    if (lx < log_t_.front() - 1e-9)
      throw DomainError("FpEvaluator: t outside the horizon");
    i = 0;
  } else if (it == log_t_.end()) {
    if (lx > log_t_.back() + 1e-9)
      throw DomainError("FpEvaluator: t outside the horizon");
    i = log_t_.size() - 2;
  } else {
    i = std::size_t(it - log_t_.begin()) - 1;
  }
  double w = (lx - log_t_[i]) / (log_t_[i + 1] - log_t_[i]);
  return std::exp(value_[i] * (1.0 - w) + value_[i + 1] * w);
}

} // namespace gsq
