#include "gsq/variance_model.hpp"

#include "gsq/errors.hpp"
#include "gsq/math_util.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

namespace gsq {

namespace {

// Cumulative integrals of a correlation function on geometrically widening
// panels. sigma2 is evaluated millions of times while assembling covariances,
// so R(t) = int_0^t r and R1(t) = int_0^t v r(v) dv are cached at panel
// boundaries and only the partial panel is integrated per query.
class CorrelationIntegrals {
public:
  explicit CorrelationIntegrals(std::function<double(double)> r)
      : r_(std::move(r)) {
    bounds_ = {0.0};
    cumR_ = {0.0};
    cumR1_ = {0.0};
  }

  // R(t), R1(t) for t >= 0.
  std::pair<double, double> eval(double t) const {
    if (t <= 0.0) return {0.0, 0.0};
    std::lock_guard<std::mutex> lock(mutex_);
    extend_to(t);
    size_t j = panel_below(t);
    double R = cumR_[j] + panel_integral(bounds_[j], t, false);
    double R1 = cumR1_[j] + panel_integral(bounds_[j], t, true);
    return {R, R1};
  }

  // Integrates until the tail is numerically exhausted; returns (R_inf, R1_inf).
  std::pair<double, double> tail_limits() const {
    std::lock_guard<std::mutex> lock(mutex_);
    double t = std::max(bounds_.back(), 1.0);
    int quiet = 0;
    while (quiet < 4 && t < 1e9) {
      t *= 2.0;
      extend_to(t);
      double rt = std::abs(r_(t));
      if (rt * t < 1e-17 && rt < 1e-17)
        ++quiet;
      else
        quiet = 0;
    }
    return {cumR_.back(), cumR1_.back()};
  }

private:
  size_t panel_below(double t) const {
    auto it = std::upper_bound(bounds_.begin(), bounds_.end(), t);
    return size_t(it - bounds_.begin()) - 1;
  }

  double panel_integral(double a, double b, bool moment) const {
    if (b <= a) return 0.0;
    auto f = [&](double v) { return moment ? v * r_(v) : r_(v); };
    // First panel may carry an algebraic singularity in r'(0+); adaptive
    // refinement handles it, later panels are smooth.
    if (a == 0.0) return adaptive_simpson(f, a, b, 1e-13, 1e-16);
    return gauss_legendre_15(f, a, b);
  }

  void extend_to(double t) const {
    while (bounds_.back() < t) {
      double a = bounds_.back();
      double b = (a == 0.0) ? kFirstPanel : a * kGrowth;
      cumR_.push_back(cumR_[cumR_.size() - 1] + panel_integral(a, b, false));
      cumR1_.push_back(cumR1_[cumR1_.size() - 1] + panel_integral(a, b, true));
      bounds_.push_back(b);
    }
  }

  static constexpr double kFirstPanel = 0.0625;
  static constexpr double kGrowth = 1.0625;

  std::function<double(double)> r_;
  mutable std::mutex mutex_;
  mutable std::vector<double> bounds_;
  mutable std::vector<double> cumR_;
  mutable std::vector<double> cumR1_;
};

// Monotone cubic Hermite (Fritsch-Butland tangents) through (x_i, y_i).
class MonotoneCubic {
public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const size_t n = x_.size();
    m_.assign(n, 0.0);
    std::vector<double> d(n - 1), h(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      d[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    m_[0] = d[0];
    m_[n - 1] = d[n - 2];
    for (size_t i = 1; i + 1 < n; ++i) {
      if (d[i - 1] * d[i] <= 0.0) {
        m_[i] = 0.0;
      } else {
        double w1 = 2.0 * h[i] + h[i - 1];
        double w2 = h[i] + 2.0 * h[i - 1];
        m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
      }
    }
  }

  double front_x() const { return x_.front(); }
  double back_x() const { return x_.back(); }
  double front_slope() const { return m_.front(); }
  double back_slope() const { return m_.back(); }
  double front_y() const { return y_.front(); }
  double back_y() const { return y_.back(); }

  double eval(double x) const {
    if (x <= x_.front()) return y_.front() + m_.front() * (x - x_.front());
    if (x >= x_.back()) return y_.back() + m_.back() * (x - x_.back());
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    size_t i = size_t(it - x_.begin()) - 1;
    double h = x_[i + 1] - x_[i];
    double s = (x - x_[i]) / h;
    double s2 = s * s, s3 = s2 * s;
    double h00 = 2 * s3 - 3 * s2 + 1;
    double h10 = s3 - 2 * s2 + s;
    double h01 = -2 * s3 + 3 * s2;
    double h11 = s3 - s2;
    return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
  }

private:
  std::vector<double> x_, y_, m_;
};

} // namespace

struct VarianceModel::Impl {
  ModelKind kind;
  RegularVariation rv;

  // fbm
  double hurst = 0.0;

  // srd
  std::optional<SrdCorrelation> corr;
  std::shared_ptr<CorrelationIntegrals> integrals;

  // tabulated: monotone cubic in log-log coordinates
  MonotoneCubic loglog;

  std::string description;

  double sigma2(double t) const {
    if (t < 0.0) throw DomainError("sigma2: t must be nonnegative");
    if (t == 0.0) return 0.0;
    switch (kind) {
      case ModelKind::Fbm:
        return std::pow(t, 2.0 * hurst);
      case ModelKind::SrdIntegrated: {
        auto [R, R1] = integrals->eval(t);
        return 2.0 * (t * R - R1);
      }
      case ModelKind::Tabulated:
        return std::exp(loglog.eval(std::log(t)));
    }
    return 0.0;
  }

  std::pair<double, double> derivatives(double t) const {
    if (t <= 0.0) throw DomainError("sigma2_derivatives: t must be positive");
    switch (kind) {
      case ModelKind::Fbm: {
        double first = 2.0 * hurst * std::pow(t, 2.0 * hurst - 1.0);
        double second = 2.0 * hurst * (2.0 * hurst - 1.0) * std::pow(t, 2.0 * hurst - 2.0);
        return {first, second};
      }
      case ModelKind::SrdIntegrated: {
        auto [R, R1] = integrals->eval(t);
        (void)R1;
        return {2.0 * R, 2.0 * corr->r(t)};
      }
      case ModelKind::Tabulated: {
        double h = t * 1e-5;
        double fp = sigma2(t + h), fm = sigma2(t - h), f0 = sigma2(t);
        return {(fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)};
      }
    }
    return {0.0, 0.0};
  }
};

VarianceModel::VarianceModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

ModelKind VarianceModel::kind() const { return impl_->kind; }
double VarianceModel::hurst() const { return impl_->hurst; }
const SrdCorrelation* VarianceModel::correlation() const {
  return impl_->corr ? &*impl_->corr : nullptr;
}
const RegularVariation& VarianceModel::rv() const { return impl_->rv; }
std::string VarianceModel::describe() const { return impl_->description; }
const void* VarianceModel::id() const { return impl_.get(); }

double VarianceModel::sigma2(double t) const { return impl_->sigma2(t); }
double VarianceModel::sigma(double t) const { return std::sqrt(impl_->sigma2(t)); }
std::pair<double, double> VarianceModel::sigma2_derivatives(double t) const {
  return impl_->derivatives(t);
}

double VarianceModel::sigma_inverse(double y) const {
  if (y < 0.0) throw DomainError("sigma_inverse: argument must be nonnegative");
  if (y == 0.0) return 0.0;
  // sigma is strictly increasing for all admissible kinds; bracket then bisect.
  double lo = 1.0, hi = 1.0;
  int guard = 0;
  while (sigma(lo) > y) {
    lo *= 0.25;
    if (++guard > 600) throw NumericError("sigma_inverse: bracketing failed (low)");
  }
  guard = 0;
  while (sigma(hi) < y) {
    hi *= 4.0;
    if (++guard > 600) throw NumericError("sigma_inverse: bracketing failed (high)");
  }
  auto f = [&](double t) { return sigma(t) - y; };
  return bisect_root(f, lo, hi, 1e-13, 200);
}

VarianceModel VarianceModel::fbm(double hurst) {
  if (!(hurst > 0.0) || hurst > 1.0)
    throw ModelValidationError("fbm: hurst must lie in (0, 1]");
  auto impl = std::make_shared<Impl>();
  impl->kind = ModelKind::Fbm;
  impl->hurst = hurst;
  impl->rv = {hurst, 1.0, hurst, 1.0};
  std::ostringstream os;
  os.precision(17);
  os << "fbm(hurst=" << hurst << ")";
  impl->description = os.str();
  return VarianceModel(impl);
}

SrdCorrelation SrdCorrelation::exp_power(double a) {
  if (!(a > 0.0) || a > 2.0)
    throw ModelValidationError("exp_power correlation: exponent must lie in (0, 2]");
  SrdCorrelation c;
  c.name = "exp-power";
  c.exponent = a;
  c.r = [a](double t) { return std::exp(-std::pow(std::abs(t), a)); };
  c.G = 1.0 / std::tgamma(1.0 + 1.0 / a);
  c.G1 = std::tgamma(2.0 / a) / a;
  return c;
}

SrdCorrelation SrdCorrelation::custom(std::function<double(double)> r, std::string name) {
  SrdCorrelation c;
  c.name = std::move(name);
  c.r = std::move(r);
  CorrelationIntegrals ints(c.r);
  auto [R, R1] = ints.tail_limits();
  if (!(R > 0.0) || !std::isfinite(R))
    throw ModelValidationError("custom correlation: integral of r not positive finite");
  if (!std::isfinite(R1))
    throw ModelValidationError("custom correlation: first moment of r not finite");
  c.G = 1.0 / R;
  c.G1 = R1;
  return c;
}

VarianceModel VarianceModel::srd_integrated(SrdCorrelation corr) {
  if (!corr.r) throw ModelValidationError("srd_integrated: missing correlation function");
  if (std::abs(corr.r(0.0) - 1.0) > 1e-12)
    throw ModelValidationError("srd_integrated: r(0) must equal 1");
  auto impl = std::make_shared<Impl>();
  impl->kind = ModelKind::SrdIntegrated;
  impl->integrals = std::make_shared<CorrelationIntegrals>(corr.r);
  if (corr.G <= 0.0) {
    auto [R, R1] = impl->integrals->tail_limits();
    if (!(R > 0.0) || !std::isfinite(R) || !std::isfinite(R1))
      throw ModelValidationError("srd_integrated: correlation is not integrable");
    corr.G = 1.0 / R;
    corr.G1 = R1;
  }
  impl->rv = {1.0, 1.0, 0.5, 2.0 * corr.G};
  std::ostringstream os;
  os.precision(17);
  os << "srd(" << corr.name << ",a=" << corr.exponent << ")";
  impl->description = os.str();
  impl->corr = std::move(corr);
  return VarianceModel(impl);
}

VarianceModel VarianceModel::tabulated(std::vector<double> t, std::vector<double> sigma2,
                                       std::optional<RegularVariation> rv) {
  if (t.size() != sigma2.size() || t.size() < 4)
    throw ModelValidationError("tabulated: need >= 4 matching (t, sigma2) samples");
  std::vector<double> lx(t.size()), ly(t.size());
  for (size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !(sigma2[i] > 0.0))
      throw ModelValidationError("tabulated: samples must be positive");
    if (i > 0 && t[i] <= t[i - 1])
      throw ModelValidationError("tabulated: t samples must be strictly increasing");
    lx[i] = std::log(t[i]);
    ly[i] = std::log(sigma2[i]);
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = ModelKind::Tabulated;
  impl->loglog = MonotoneCubic(lx, ly);
  if (rv) {
    impl->rv = *rv;
  } else {
    // Estimate the power-law exponents from the outer decades of the table.
    auto fit_rv = [&](bool tail) {
      size_t n = lx.size();
      size_t w = std::max<size_t>(3, n / 4);
      std::span<const double> xs(tail ? lx.data() + (n - w) : lx.data(), w);
      std::span<const double> ys(tail ? ly.data() + (n - w) : ly.data(), w);
      LinearFit f = linear_fit(xs, ys);
      double alpha = 0.5 * f.slope;
      double A = std::exp(f.intercept);
      return std::pair<double, double>{alpha, A};
    };
    auto [a0, A0] = fit_rv(false);
    auto [ai, Ai] = fit_rv(true);
    impl->rv = {a0, A0, ai, Ai};
  }
  std::ostringstream os;
  os.precision(17);
  std::string blob;
  for (size_t i = 0; i < t.size(); ++i) {
    blob += std::to_string(t[i]);
    blob += ',';
    blob += std::to_string(sigma2[i]);
    blob += ';';
  }
  os << "tabulated(n=" << t.size() << ",hash=" << fnv1a64({blob.data(), blob.size()}) << ")";
  impl->description = os.str();
  return VarianceModel(impl);
}

bool ValidationReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks)
    os << (c.pass ? "[ok]   " : "[FAIL] ") << c.condition << " (measured " << c.measured
       << ", tol " << c.tolerance << ")\n";
  if (degenerate_pickands_case)
    os << "[note] degenerate case hurst=1: usable only as a Pickands oracle\n";
  return os.str();
}

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
  return out;
}

// Worst |ratio - 1| of sigma2(t) / (A t^{2 alpha}) over a grid.
double worst_limit_ratio(const VarianceModel& m, double A, double alpha,
                         const std::vector<double>& ts) {
  double worst = 0.0;
  for (double t : ts) {
    double ratio = m.sigma2(t) / (A * std::pow(t, 2.0 * alpha));
    worst = std::max(worst, std::abs(ratio - 1.0));
  }
  return worst;
}

// Counts significant direction reversals in a sampled sequence.
int monotonicity_violations(const std::vector<double>& v) {
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0;
  int sign = 0, violations = 0;
  for (size_t i = 1; i < v.size(); ++i) {
    double d = v[i] - v[i - 1];
    if (std::abs(d) < 1e-7 * scale) continue;
    int s = d > 0 ? 1 : -1;
    if (sign != 0 && s != sign) ++violations;
    sign = s;
  }
  return violations;
}

} // namespace

ValidationReport validate_ai_aii(const VarianceModel& model) {
  ValidationReport rep;
  const RegularVariation& rv = model.rv();

  if (model.kind() == ModelKind::Fbm && model.hurst() == 1.0)
    rep.degenerate_pickands_case = true;

  rep.checks.push_back({"alphaInf in (0,1)", rv.alphaInf, 0.0,
                        rv.alphaInf > 0.0 && rv.alphaInf < 1.0});
  rep.checks.push_back({"alpha0 in (0,1]", rv.alpha0, 0.0,
                        rv.alpha0 > 0.0 && rv.alpha0 <= 1.0});
  rep.checks.push_back({"AInf > 0", rv.AInf, 0.0, rv.AInf > 0.0});
  rep.checks.push_back({"A0 > 0", rv.A0, 0.0, rv.A0 > 0.0});

  bool positive = true;
  for (double t : log_grid(1e-6, 1e6, 25))
    positive = positive && model.sigma2(t) > 0.0;
  rep.checks.push_back({"sigma2 positive on (0,inf)", positive ? 1.0 : 0.0, 0.0, positive});
  rep.checks.push_back({"sigma2(0) == 0", model.sigma2(0.0), 0.0, model.sigma2(0.0) == 0.0});

  double tail = worst_limit_ratio(model, rv.AInf, rv.alphaInf, log_grid(1e3, 1e6, 13));
  rep.checks.push_back({"sigma2(t)/(AInf t^{2 alphaInf}) -> 1 on [1e3,1e6]", tail, 0.01,
                        tail <= 0.01});
  double head = worst_limit_ratio(model, rv.A0, rv.alpha0, log_grid(1e-6, 1e-3, 13));
  rep.checks.push_back({"sigma2(t)/(A0 t^{2 alpha0}) -> 1 on [1e-6,1e-3]", head, 0.01,
                        head <= 0.01});

  // Ultimate monotonicity is only probed on [1e2, 1e6]; no threshold beyond
  // that window is claimed.
  std::vector<double> d1, d2;
  bool derivatives_finite = true;
  for (double t : log_grid(1e2, 1e6, 65)) {
    auto [first, second] = model.sigma2_derivatives(t);
    derivatives_finite = derivatives_finite && std::isfinite(first) && std::isfinite(second);
    d1.push_back(first);
    d2.push_back(second);
  }
  rep.checks.push_back({"derivatives finite on tail grid", derivatives_finite ? 1.0 : 0.0,
                        0.0, derivatives_finite});
  int v1 = monotonicity_violations(d1);
  int v2 = monotonicity_violations(d2);
  rep.checks.push_back({"first derivative ultimately monotone on [1e2,1e6]", double(v1),
                        0.0, v1 == 0});
  rep.checks.push_back({"second derivative ultimately monotone on [1e2,1e6]", double(v2),
                        0.0, v2 == 0});

  if (const SrdCorrelation* corr = model.correlation()) {
    double tr_tail = 0.0;
    bool tr_vanishes = true;
    for (double t : {1e2, 1e3, 1e4, 1e5}) {
      tr_tail = t * std::abs(corr->r(t));
      if (tr_tail > 1e-6) tr_vanishes = false;
    }
    rep.checks.push_back({"S1: t r(t) -> 0", tr_tail, 1e-6, tr_vanishes});

    bool decreasing = true;
    double prev = corr->r(0.0);
    for (double t : log_grid(1e-4, 1e3, 40)) {
      double cur = corr->r(t);
      if (cur > prev + 1e-12) decreasing = false;
      prev = cur;
    }
    rep.checks.push_back({"S2: r decreasing with finite integral", corr->G, 0.0,
                          decreasing && corr->G > 0.0 && std::isfinite(corr->G)});

    double second_moment = adaptive_simpson(
        [&](double t) { return t * t * std::abs(corr->r(t)); }, 0.0, 200.0, 1e-9);
    double tail_probe = adaptive_simpson(
        [&](double t) { return t * t * std::abs(corr->r(t)); }, 200.0, 400.0, 1e-9, 1e-12);
    bool s3 = std::isfinite(second_moment) && tail_probe < 1e-8 * std::max(1.0, second_moment);
    rep.checks.push_back({"S3: int t^2 |r| finite", second_moment, 0.0, s3});
  }

  return rep;
}

} // namespace gsq
