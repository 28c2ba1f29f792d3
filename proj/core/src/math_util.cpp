#include "gsq/math_util.hpp"

#include "gsq/errors.hpp"

#include <algorithm>
#include <limits>

namespace gsq {

double compensated_total(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

BracketResult bracket_minimum_log(const std::function<double(double)>& f,
                                  double center, double span_decades, int points) {
  BracketResult out;
  if (points < 3) return out;
  const double l0 = std::log(center) - span_decades * std::log(10.0);
  const double l1 = std::log(center) + span_decades * std::log(10.0);
  std::vector<double> xs(points), fs(points);
  for (int i = 0; i < points; ++i) {
    xs[i] = std::exp(l0 + (l1 - l0) * i / (points - 1));
    fs[i] = f(xs[i]);
  }
  int best = int(std::min_element(fs.begin(), fs.end()) - fs.begin());
  if (best == 0 || best == points - 1) return out;
  out.lo = xs[best - 1];
  out.mid = xs[best];
  out.hi = xs[best + 1];
  out.found = true;
  return out;
}

MinimizeResult golden_section_log(const std::function<double(double)>& f,
                                  double lo, double hi,
                                  double rel_tol, int max_iter) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(lo), b = std::log(hi);
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(std::exp(c)), fd = f(std::exp(d));
  MinimizeResult out;
  int it = 0;
  for (; it < max_iter; ++it) {
    if (b - a <= rel_tol * std::max(1.0, std::abs(a) + std::abs(b))) break;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(std::exp(d));
    }
  }
  double xm = std::exp(0.5 * (a + b));
  out.argmin = xm;
  out.value = f(xm);
  out.iterations = it;
  out.converged = it < max_iter;
  return out;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double rel_tol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0)
    throw NumericError("bisect_root: interval does not bracket a sign change");
  for (int it = 0; it < max_iter; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0 || hi - lo <= rel_tol * std::max(1.0, std::abs(mid))) return mid;
    if (flo * fm <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

double simpson_panel(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double fa,
                            double b, double fb, double m, double fm, double whole,
                            double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson_panel(a, fa, m, fm, flm);
  double right = simpson_panel(m, fm, b, fb, frm);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  double whole = simpson_panel(a, fa, b, fb, fm);
  double tol = std::max(abs_tol, rel_tol * std::abs(whole));
  if (tol == 0.0) tol = std::numeric_limits<double>::min();
  return adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

namespace {

// 15-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGL15Nodes[15] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
    -0.7244177313601701, -0.5709721726085388, -0.3941513470775634,
    -0.2011940939974345, 0.0,                 0.2011940939974345,
    0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
constexpr double kGL15Weights[15] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719,
    0.1395706779261543, 0.1662692058169939, 0.1861610000155622,
    0.1984314853271116, 0.2025782419255613, 0.1984314853271116,
    0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

} // namespace

double gauss_legendre_15(const std::function<double(double)>& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double acc = 0.0;
  for (int i = 0; i < 15; ++i) acc += kGL15Weights[i] * f(mid + half * kGL15Nodes[i]);
  return acc * half;
}

std::uint64_t fnv1a64(std::span<const char> bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinearFit fit;
  double denom = n * sxx - sx * sx;
  if (denom != 0.0) {
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
  }
  return fit;
}

} // namespace gsq
