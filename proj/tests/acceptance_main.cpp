// Acceptance suite: every release criterion as one numbered check with its
// tolerance pinned in code. Run `gsq_acceptance <n>` for one criterion or
// `gsq_acceptance all`; each check prints one [PASS]/[FAIL] line.

#include "gsq/asymptotics.hpp"
#include "gsq/criterion.hpp"
#include "gsq/experiments.hpp"
#include "gsq/io.hpp"
#include "gsq/math_util.hpp"
#include "gsq/parallel.hpp"
#include "gsq/pickands.hpp"
#include "gsq/queue.hpp"
#include "gsq/sampling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

using namespace gsq;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << criterion << ": "
            << detail << std::endl;
  if (!pass) ++g_failures;
}

struct FbmClosedForm {
  double H, c;
  double tauStar() const { return H / (c * (1.0 - H)); }
  double A() const { return std::pow(tauStar(), -H) / (1.0 - H); }
  double B() const { return std::pow(tauStar(), -H - 2.0) * H; }
  double gamma() const { return 2.0 * (1.0 - H) / H; }
  double m(double u) const { return A() * std::pow(u, 1.0 - H); }
  double m_inv(double v) const {
    return std::pow(A(), -1.0 / (1.0 - H)) * std::pow(v, 1.0 / (1.0 - H));
  }
  double zeta() const {
    if (H > 0.5)
      return std::pow(std::sqrt(2.0) * std::pow(tauStar(), 2.0 * H) / (1.0 + c * tauStar()),
                      -2.0 / H);
    if (H == 0.5) {
      double a = std::pow(std::sqrt(2.0) * tauStar() / (1.0 + c * tauStar()), 2.0);
      return 1.0 / (a * a);
    }
    return std::pow(std::sqrt(2.0) * std::pow(tauStar(), 2.0 * H) / (1.0 + c * tauStar()),
                    -2.0 / H);
  }
  double fp(double p, double t) const {
    double kappa = (2.0 - 3.0 * H) / (2.0 * H * (1.0 - H));
    double inner = std::log(t) + (kappa - p) * std::log(std::log(t));
    return std::pow(2.0 / (A() * A()) * inner, 1.0 / (2.0 * (1.0 - H)));
  }
  double psi(double u, double pickands) const {
    return pickands * pickands * std::sqrt(2.0 * A() * M_PI / B()) * zeta() *
           std::pow(u, gamma()) * normal_tail(m(u)) / m(u);
  }
  double hp(double p, double t, double pickands) const {
    double f = fp(p, t);
    return p * f / psi(f, pickands) * log2_iter(t);
  }
};

// --------------------------------------------------------------------------
// 1. closed-form oracle equivalence for the self-similar inputs
// --------------------------------------------------------------------------
void criterion_1() {
  double worst = 0.0;
  std::string worst_at = "-";
  auto track = [&](double got, double want, const std::string& what) {
    double rel = std::abs(got - want) / std::max(1e-300, std::abs(want));
    if (rel > worst) {
      worst = rel;
      worst_at = what;
    }
  };
  for (double H : {0.3, 0.5, 0.75}) {
    for (double c : {0.5, 1.0, 2.0}) {
      FbmClosedForm cf{H, c};
      VarianceModel m = VarianceModel::fbm(H);
      for (double u : {1.0, 1e2, 1e4, 1e6}) {
        std::ostringstream tag;
        tag << "H=" << H << ",c=" << c << ",u=" << u;
        track(m_of_u(m, c, u), cf.m(u), "m @" + tag.str());
        track(tau_center(m, c, u), cf.tauStar(), "tau @" + tag.str());
        track(m_inverse(m, c, cf.m(u)), u, "m_inv @" + tag.str());
        if (u > std::exp(1.0)) {
          for (double p : {-1.0, 2.0}) {
            track(f_p(m, c, p, u), cf.fp(p, u), "f_p @" + tag.str());
            track(h_p(m, c, p, u, 1.0), cf.hp(p, u, 1.0), "h_p @" + tag.str());
          }
        }
      }
    }
  }
  std::ostringstream os;
  os << "closed-form oracle equivalence, worst relative deviation " << worst << " at "
     << worst_at << " (tolerance 1e-8)";
  report(1, worst <= 1e-8, os.str());
}

// --------------------------------------------------------------------------
// 2. integrated-input oracle: m^2(u) - 2Gu -> 2 G^2 G1
// --------------------------------------------------------------------------
void criterion_2() {
  VarianceModel srd = VarianceModel::srd_integrated(SrdCorrelation::exp_power(1.0));
  double u = 1e4;
  double m = m_of_u(srd, 1.0, u);
  double excess = m * m - 2.0 * u; // G = 1
  double target = 2.0;             // 2 G^2 G1 with G1 = 1
  double rel = std::abs(excess - target) / target;
  std::ostringstream os;
  os << "m^2(1e4) - 2Gu = " << excess << " vs 2 G^2 G1 = 2 (deviation " << rel * 100
     << "%, tolerance 1%)";
  report(2, rel <= 0.01, os.str());
}

// --------------------------------------------------------------------------
// 3. recursion equals the double-loop supremum oracle
// --------------------------------------------------------------------------
void criterion_3() {
  double worst = 0.0;
  for (double H : {0.3, 0.5, 0.75}) {
    VarianceModel m = VarianceModel::fbm(H);
    GridSpec grid(0.01, 1000);
    IncrementSampler s(m, grid);
    auto ws = s.make_workspace();
    std::vector<double> inc;
    for (int rep = 0; rep < 34; ++rep) {
      s.sample_into(replica_seed(31337, 1, std::uint64_t(rep)), ws, inc);
      SampledPath p = assemble_path(inc, grid);
      QueuePath lind = reflect_lindley(p, 1.0, 0.0);
      QueuePath brut = brute_force_sup(p, 1.0);
      for (std::size_t k = 0; k < p.x.size(); ++k)
        worst = std::max(worst, std::abs(lind.q[k] - brut.q[k]));
    }
  }
  std::ostringstream os;
  os << "reflection recursion vs brute-force supremum on 102 paths, max abs diff "
     << worst << " (tolerance 1e-12)";
  report(3, worst <= 1e-12, os.str());
}

// --------------------------------------------------------------------------
// 4. sampler covariance: chi-square over lags 0..10
// --------------------------------------------------------------------------
void criterion_4() {
  bool all_pass = true;
  std::ostringstream os;
  os << "increment-covariance chi-square (lags 0-10, 1e4 replicas of n=1024):";
  for (double H : {0.3, 0.5, 0.75}) {
    VarianceModel m = VarianceModel::fbm(H);
    GridSpec grid(1.0, 1024);
    IncrementSampler s(m, grid);
    const int lags = 11;
    const std::uint64_t R = 10000;

    std::vector<double> target(lags);
    for (int k = 0; k < lags; ++k) target[k] = increment_covariance(m, 1.0, k);

    std::vector<std::vector<double>> per_rep(R, std::vector<double>(lags));
    parallel_chunks(R, 2, [&](unsigned, std::uint64_t b, std::uint64_t e) {
      auto ws = s.make_workspace();
      std::vector<double> inc;
      for (std::uint64_t r = b; r < e; ++r) {
        s.sample_into(replica_seed(777, 40 + std::uint64_t(H * 100), r), ws, inc);
        for (int k = 0; k < lags; ++k) {
          double acc = 0.0;
          for (std::size_t i = 0; i + k < inc.size(); ++i) acc += inc[i] * inc[i + k];
          per_rep[r][k] = acc / double(inc.size() - k);
        }
      }
    });

    // Hotelling-type statistic: R (mean - target)' S^{-1} (mean - target).
    std::vector<double> mean(lags, 0.0);
    for (const auto& row : per_rep)
      for (int k = 0; k < lags; ++k) mean[k] += row[k];
    for (double& v : mean) v /= double(R);
    std::vector<std::vector<double>> cov(lags, std::vector<double>(lags, 0.0));
    for (const auto& row : per_rep)
      for (int a = 0; a < lags; ++a)
        for (int b2 = 0; b2 < lags; ++b2)
          cov[a][b2] += (row[a] - mean[a]) * (row[b2] - mean[b2]);
    for (auto& rowc : cov)
      for (double& v : rowc) v /= double(R - 1);

    std::vector<double> d(lags);
    for (int k = 0; k < lags; ++k) d[k] = mean[k] - target[k];
    // solve cov x = d by Gaussian elimination with partial pivoting
    std::vector<std::vector<double>> a = cov;
    std::vector<double> x = d;
    for (int col = 0; col < lags; ++col) {
      int piv = col;
      for (int rr = col + 1; rr < lags; ++rr)
        if (std::abs(a[rr][col]) > std::abs(a[piv][col])) piv = rr;
      std::swap(a[col], a[piv]);
      std::swap(x[col], x[piv]);
      for (int rr = col + 1; rr < lags; ++rr) {
        double f = a[rr][col] / a[col][col];
        for (int cc = col; cc < lags; ++cc) a[rr][cc] -= f * a[col][cc];
        x[rr] -= f * x[col];
      }
    }
    for (int rr = lags - 1; rr >= 0; --rr) {
      for (int cc = rr + 1; cc < lags; ++cc) x[rr] -= a[rr][cc] * x[cc];
      x[rr] /= a[rr][rr];
    }
    double t_stat = 0.0;
    for (int k = 0; k < lags; ++k) t_stat += d[k] * x[k];
    t_stat *= double(R);
    const double chi2_11_99 = 24.72497; // 1% upper quantile, 11 dof
    bool ok = t_stat <= chi2_11_99;
    all_pass = all_pass && ok;
    os << " H=" << H << ": T=" << t_stat;
  }
  os << " (each <= 24.725)";
  report(4, all_pass, os.str());
}

// --------------------------------------------------------------------------
// 5. quadratic shape of the deviation profile near its peak
// --------------------------------------------------------------------------
void criterion_5() {
  bool ok = true;
  double lo = 1e9, hi = 0.0;
  for (double H : {0.3, 0.5, 0.75}) {
    VarianceModel m = VarianceModel::fbm(H);
    AsymptoticConstants k = constants(m, 1.0);
    double u = 1e6;
    double tc = tau_center(m, 1.0, u);
    for (double d : {-1e-2, -1e-3, 1e-3, 1e-2}) {
      double ratio = (1.0 - sigma_u(m, 1.0, u, tc + d)) / (k.b * d * d);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      ok = ok && ratio >= 0.95 && ratio <= 1.05;
    }
  }
  std::ostringstream os;
  os << "quadratic profile ratio range [" << lo << ", " << hi
     << "] within [0.95, 1.05] near the peak at u = 1e6";
  report(5, ok, os.str());
}

// --------------------------------------------------------------------------
// 6. correlation of the scaled field approaches the limit curve
// --------------------------------------------------------------------------
void criterion_6() {
  bool ok = true;
  double worst = 0.0;
  for (double H : {0.3, 0.5, 0.75}) {
    VarianceModel m = VarianceModel::fbm(H);
    AsymptoticConstants k = constants(m, 1.0);
    double u = 1e6;
    double tc = tau_center(m, 1.0, u);
    for (double d = 0.0; d <= 5.0; d += 0.01) {
      double r = correlation_field(m, u, u, d, tc, 0.0, tc);
      worst = std::max(worst, std::abs(r - g_limit(k.alphaInf, k.tauStar, d)));
    }
  }
  ok = worst <= 0.02;
  std::ostringstream os;
  os << "sup |field correlation - limit curve| = " << worst
     << " over offsets [0, 5] at u = 1e6 (tolerance 0.02)";
  report(6, ok, os.str());
}

// --------------------------------------------------------------------------
// 7. shape analysis of the limit curve and its window constants
// --------------------------------------------------------------------------
void criterion_7() {
  bool ok = true;
  std::ostringstream os;
  os << "limit-curve shape:";
  const int n = 10000;
  for (double a : {0.25, 0.5, 0.75}) {
    double ts = a / (1.0 * (1.0 - a));
    auto g = [&](double t) { return g_limit(a, ts, t); };
    bool shape = true;
    if (a == 0.5) {
      // piecewise-exact: 1 - |t|/ts on [0, ts], 0 beyond
      for (int i = 0; i <= n; ++i) {
        double t = 3.0 * ts * i / n;
        double want = t <= ts ? 1.0 - t / ts : 0.0;
        shape = shape && std::abs(g(t) - want) <= 1e-12;
      }
    } else if (a < 0.5) {
      // decreasing on (0, ts), then increasing back to 0, negative at ts
      for (int i = 1; i <= n; ++i) {
        double t0 = ts * (i - 1) / double(n), t1 = ts * i / double(n);
        shape = shape && g(t1) <= g(t0) + 1e-12;
      }
      for (int i = 1; i <= n; ++i) {
        double t0 = ts + 9.0 * ts * (i - 1) / double(n), t1 = ts + 9.0 * ts * i / double(n);
        shape = shape && g(t1) >= g(t0) - 1e-12;
      }
      shape = shape && g(ts) < 0.0 && std::abs(g(100.0 * ts)) < 0.01;
    } else {
      // strictly decreasing to 0
      for (int i = 1; i <= n; ++i) {
        double t0 = 10.0 * ts * (i - 1) / double(n), t1 = 10.0 * ts * i / double(n);
        shape = shape && g(t1) <= g(t0) + 1e-12;
      }
      shape = shape && g(10.0 * ts) >= 0.0;
    }
    GWindow w = g_window_constant(a, ts, 0.5, n);
    bool window = w.exists && w.c_delta > 0.0 && w.c_delta < 0.5 && w.inf_inside > 0.5 &&
                  w.sup_outside < 1.0 - w.c_delta;
    ok = ok && shape && window;
    os << " a=" << a << (shape ? " shape-ok" : " shape-BAD")
       << (window ? " window-ok" : " window-BAD") << " (c_delta=" << w.c_delta << ")";
  }
  report(7, ok, os.str());
}

// --------------------------------------------------------------------------
// 8. degenerate clustering-constant oracle and step monotonicity
// --------------------------------------------------------------------------
void criterion_8() {
  // Rate constant for the degenerate index via the ladder extrapolation.
  PickandsSpec spec = PickandsSpec::fbm_window(1.0, 2.0, 600000, 808);
  double ladder[] = {0.5, 1.0, 2.0};
  RateEstimate rate = estimate_rate(spec, ladder, 2);
  const double oracle = 1.0 / std::sqrt(M_PI);
  double rel = std::abs(rate.extrapolated - oracle) / oracle;

  PickandsSpec tspec = PickandsSpec::fbm_window(1.0, 2.0, 100000, 809);
  double thetas[] = {0.8, 0.4, 0.2, 0.1};
  auto tl = theta_ladder(tspec, thetas, 2);
  bool monotone = true;
  for (std::size_t i = 1; i < tl.size(); ++i)
    monotone = monotone && tl[i].value <= tl[i - 1].value + 1e-12;

  std::ostringstream os;
  os << "degenerate rate constant " << rate.extrapolated << " vs quadrature "
     << oracle << " (deviation " << rel * 100 << "%, tolerance 10%); grid-step "
     << "monotonicity under shared noise " << (monotone ? "holds" : "violated");
  report(8, rel <= 0.10 && monotone, os.str());
}

// --------------------------------------------------------------------------
// 9. tail-asymptotics agreement and strip concentration
// --------------------------------------------------------------------------
void criterion_9() {
  VarianceModel m = VarianceModel::fbm(0.5);

  // Clustering constant for the level field of this model: standard Brownian,
  // estimated (not assumed) via the ladder.
  PickandsSpec pspec = PickandsSpec::scaled_input(m, 1.0, 5.0, 100000, 909);
  double ladder[] = {1.25, 2.5, 5.0};
  RateEstimate rate = estimate_rate(pspec, ladder, 2);
  double H_est = rate.extrapolated;

  const double u = 3.24; // m(u) = 3.6
  PsiOptions po;
  po.workers = 2;
  PsiResult mc = estimate_psi(m, 1.0, u, 100000, 910, po);
  PsiAsymptotic asym = psi_asymptotic(m, 1.0, u, H_est);
  double ratio = mc.estimate.value / asym.value;

  SupTailOptions so;
  so.workers = 2;
  SupTailResult st = estimate_sup_tail_strip(m, 1.0, 4.0, 8.0, 0.1, 50000, 911, so);
  double strip_ratio = st.full.value > 0.0 ? st.strip.value / st.full.value : 0.0;

  std::ostringstream os;
  os << "psi_MC/psi_asym = " << ratio << " at m(u)=3.6 (band [0.5, 2], H_est = " << H_est
     << " +/- " << rate.std_error << ", psi_MC = " << mc.estimate.value << " +/- "
     << mc.estimate.std_error << "); strip/full = " << strip_ratio
     << " at m(u)=4 (threshold 0.9, full count " << st.full.sum << ")";
  report(9, ratio >= 0.5 && ratio <= 2.0 && strip_ratio >= 0.9, os.str());
}

// --------------------------------------------------------------------------
// 10. classifier agrees with the analytic phase rule in all regimes
// --------------------------------------------------------------------------
void criterion_10() {
  std::vector<std::pair<std::string, VarianceModel>> regimes;
  regimes.emplace_back("alphaInf>1/2", VarianceModel::fbm(0.75));
  regimes.emplace_back("alphaInf=1/2",
                       VarianceModel::srd_integrated(SrdCorrelation::exp_power(1.0)));
  {
    std::vector<double> t, s2;
    for (double x = 1e-8; x <= 1.1e8; x *= 1.2589254117941673) {
      t.push_back(x);
      s2.push_back(x * x / std::pow(1.0 + x * x, 0.75));
    }
    regimes.emplace_back("alphaInf<1/2", VarianceModel::tabulated(
                                             t, s2, RegularVariation{1.0, 1.0, 0.25, 1.0}));
  }

  bool ok = true;
  std::ostringstream os;
  os << "phase rule over seven p values:";
  for (auto& [label, model] : regimes) {
    // The clustering constant scales the integrand by a constant and cannot
    // change the verdict; the known degenerate value is supplied.
    double H_in = 1.0 / std::sqrt(M_PI);
    bool regime_ok = true;
    for (double p : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
      BoundaryFunction f = BoundaryFunction::fp_family(model, 1.0, p);
      double T = default_start(model, 1.0, f);
      CriterionVerdict v = classify(model, 1.0, f, T, T * 1e6, H_in);
      bool want_finite = p < 0.0;
      bool got = want_finite ? v.classification == Classification::Finite
                             : v.classification == Classification::Infinite;
      if (p == 0.0) got = got && v.boundary_case;
      regime_ok = regime_ok && got;
    }
    os << " " << label << (regime_ok ? " ok" : " BAD");
    ok = ok && regime_ok;
  }
  report(10, ok, os.str());
}

// --------------------------------------------------------------------------
// 11. last-passage band at desk scale
// --------------------------------------------------------------------------
void criterion_11() {
  VarianceModel m = VarianceModel::fbm(0.5);
  ErdosReveszOptions o;
  o.workers = 2;
  ErdosReveszResult r = erdos_revesz_experiment(m, 1.0, 2.0, 1e5, 200, 1111, 1.0, o);
  std::ostringstream os;
  os << "fraction of 200 replicas with final running infimum in [-2, 0]: "
     << r.fraction_in_band << " (threshold 0.8); sign invariant "
     << (r.sign_invariant_held ? "held" : "violated") << "; no-crossing replicas "
     << r.no_crossing_replicas;
  report(11, r.fraction_in_band >= 0.8 && r.sign_invariant_held, os.str());
}

// --------------------------------------------------------------------------
// 12. byte determinism of the suite across runs and worker counts
// --------------------------------------------------------------------------
void criterion_12() {
  namespace fs = std::filesystem;
  auto config_for = [](const std::string& dir) {
    return std::string(R"({
  "schema_version": 1,
  "model": {"kind": "fbm", "hurst": 0.5},
  "c": 1.0,
  "seed": 4242,
  "workers": 1,
  "output_dir": ")") + dir + R"(",
  "pickands": 1.0,
  "jobs": [
    {"name": "bundle", "type": "constants"},
    {"name": "draw", "type": "sample", "n": 512, "delta": 0.05},
    {"name": "exceed", "type": "psi", "u": 1.0, "replicas": 2000, "delta": 0.02, "burn_in": 10.0},
    {"name": "cluster", "type": "pickands", "S_ladder": [1.0, 2.0, 4.0], "replicas": 3000},
    {"name": "zero-one", "type": "criterion", "p": 1.0},
    {"name": "trace", "type": "erdos-revesz", "p": 2.0, "horizon": 2000.0,
     "replicas": 20, "delta": 0.125, "start": 32.0}
  ]
})";
  };
  std::vector<std::string> dirs = {"acc12_run1", "acc12_run2", "acc12_w8"};
  for (auto& d : dirs) fs::remove_all(d);
  SuiteResult r1 = run_suite(config_for(dirs[0]));
  SuiteResult r2 = run_suite(config_for(dirs[1]));
  SuiteResult r8 = run_suite(config_for(dirs[2]), "", 8u);
  bool ok = r1.jobs_failed == 0 && r2.jobs_failed == 0 && r8.jobs_failed == 0;
  std::vector<std::string> files = {"manifest.json", "bundle.json", "draw.csv",
                                    "exceed.csv", "exceed.json", "cluster.json",
                                    "cluster.csv", "zero-one.json", "trace.json",
                                    "trace.csv"};
  std::string mismatch = "none";
  for (const auto& f : files) {
    std::string a = read_file(dirs[0] + "/" + f);
    if (a != read_file(dirs[1] + "/" + f) || a != read_file(dirs[2] + "/" + f)) {
      ok = false;
      mismatch = f;
      break;
    }
  }
  for (auto& d : dirs) fs::remove_all(d);
  std::ostringstream os;
  os << "suite outputs byte-identical across two runs and worker counts 1 vs 8 ("
     << files.size() << " artifacts compared, first mismatch: " << mismatch << ")";
  report(12, ok, os.str());
}

} // namespace

int main(int argc, char** argv) {
  std::vector<std::function<void()>> criteria = {
      criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5,  criterion_6,
      criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12};

  if (argc > 1 && std::strcmp(argv[1], "all") != 0) {
    int n = std::atoi(argv[1]);
    if (n < 1 || n > int(criteria.size())) {
      std::cerr << "usage: gsq_acceptance [1-" << criteria.size() << "|all]\n";
      return 2;
    }
    criteria[n - 1]();
  } else {
    for (auto& c : criteria) c();
  }
  return g_failures == 0 ? 0 : 1;
}
