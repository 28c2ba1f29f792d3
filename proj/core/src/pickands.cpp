#include "gsq/pickands.hpp"

#include "gsq/errors.hpp"
#include "gsq/math_util.hpp"
#include "gsq/parallel.hpp"
#include "gsq/sampling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace gsq {

namespace {

constexpr std::uint64_t kStreamSalt = 0x7069636B616E6473ULL;

double tau_star_of(const VarianceModel& model, double c) {
  double a = model.rv().alphaInf;
  if (!(a > 0.0 && a < 1.0))
    throw DomainError("scaled_input: model must have alphaInf in (0,1)");
  return a / (c * (1.0 - a));
}

} // namespace

PickandsSpec PickandsSpec::fbm_window(double index, double S, std::uint64_t replicas,
                                      std::uint64_t seed, double theta) {
  if (!(index > 0.0) || index > 1.0)
    throw DomainError("fbm_window: index must lie in (0, 1]");
  PickandsSpec spec;
  spec.process = Process::FbmIndex;
  spec.index = index;
  spec.S = S;
  spec.theta = theta;
  spec.replicas = replicas;
  spec.seed = seed;
  return spec;
}

PickandsSpec PickandsSpec::scaled_input(const VarianceModel& model, double c, double S,
                                        std::uint64_t replicas, std::uint64_t seed,
                                        double theta) {
  double ts = tau_star_of(model, c);
  double ainf = model.rv().AInf;
  PickandsSpec spec;
  spec.process = Process::ScaledInput;
  spec.model = model;
  spec.kappa = (1.0 + c * ts) / (std::sqrt(2.0) * ainf * ts);
  spec.timeScale = model.sigma_inverse(std::sqrt(2.0) * ainf * ts / (1.0 + c * ts));
  spec.S = S;
  spec.theta = theta;
  spec.replicas = replicas;
  spec.seed = seed;
  return spec;
}

PickandsSpec PickandsSpec::scaled_input_srd_form(const VarianceModel& model, double c,
                                                 double S, std::uint64_t replicas,
                                                 std::uint64_t seed, double theta) {
  const SrdCorrelation* corr = model.correlation();
  if (!corr) throw DomainError("scaled_input_srd_form: integrated model required");
  PickandsSpec spec;
  spec.process = Process::ScaledInput;
  spec.model = model;
  spec.kappa = c * corr->G / std::sqrt(2.0);
  spec.timeScale = model.sigma_inverse(std::sqrt(2.0) / (c * corr->G));
  spec.S = S;
  spec.theta = theta;
  spec.replicas = replicas;
  spec.seed = seed;
  return spec;
}

double PickandsSpec::variance_at(double t) const {
  if (process == Process::FbmIndex) return std::pow(t, 2.0 * index);
  return kappa * kappa * model->sigma2(timeScale * t);
}

namespace {

struct WindowSetup {
  GridSpec grid;            // simulation grid over [0, S_max] in window time
  IncrementSampler sampler; // for the underlying path
  std::vector<double> drift; // Var V(t_j)
  double scale = 1.0;       // multiplies raw path values to get V

  WindowSetup(const PickandsSpec& spec, double S_max, double step)
      : grid(step * (spec.process == PickandsSpec::Process::ScaledInput ? spec.timeScale
                                                                        : 1.0),
             std::size_t(std::floor(S_max / step + 1e-9)) + 1, 0.0),
        sampler(spec.process == PickandsSpec::Process::ScaledInput
                    ? IncrementSampler(*spec.model, grid)
                    : IncrementSampler(VarianceModel::fbm(spec.index), grid)),
        scale(spec.process == PickandsSpec::Process::ScaledInput ? spec.kappa : 1.0) {
    drift.resize(grid.count);
    for (std::size_t j = 0; j < grid.count; ++j)
      drift[j] = spec.variance_at(double(j) * step);
  }
};

// sup over grid indices [0, upto] of sqrt2 * scale * X_j - drift_j, with X the
// cumulative path of the sampled increments. X_0 = 0.
double window_sup(std::span<const double> increments, std::span<const double> drift,
                  double scale, std::size_t upto) {
  double best = -drift[0];
  CompensatedSum x;
  for (std::size_t j = 1; j <= upto; ++j) {
    x.add(increments[j - 1]);
    double v = std::sqrt(2.0) * scale * x.value() - drift[j];
    best = std::max(best, v);
  }
  return best;
}

McEstimate summarize(const std::vector<double>& values, std::uint64_t seed) {
  McEstimate est;
  est.replicas = values.size();
  est.seed = seed;
  CompensatedSum s, s2;
  for (double v : values) {
    s.add(v);
    s2.add(v * v);
  }
  est.sum = s.value();
  est.sum_sq = s2.value();
  est.value = est.sum / double(values.size());
  double var = std::max(0.0, est.sum_sq / double(values.size()) - est.value * est.value);
  est.std_error = std::sqrt(var / double(values.size()));
  return est;
}

} // namespace

McEstimate estimate_window(const PickandsSpec& spec, unsigned workers) {
  if (!(spec.S > 0.0)) throw DomainError("estimate_window: window length must be positive");
  if (spec.theta < 0.0) throw DomainError("estimate_window: theta must be nonnegative");
  auto t_start = std::chrono::steady_clock::now();
  const double step = spec.theta > 0.0 ? spec.theta : spec.S / 4096.0;
  WindowSetup setup(spec, spec.S, step);
  const std::size_t last = setup.grid.count - 1;

  std::vector<double> values(spec.replicas);
  parallel_chunks(spec.replicas, workers, [&](unsigned, std::uint64_t b, std::uint64_t e) {
    auto ws = setup.sampler.make_workspace();
    std::vector<double> inc;
    for (std::uint64_t r = b; r < e; ++r) {
      setup.sampler.sample_into(replica_seed(spec.seed, kStreamSalt, r), ws, inc);
      values[r] = std::exp(window_sup(inc, setup.drift, setup.scale, last));
    }
  });
  McEstimate est = summarize(values, spec.seed);
  est.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return est;
}

RateEstimate estimate_rate(const PickandsSpec& spec, std::span<const double> S_ladder,
                           unsigned workers) {
  if (S_ladder.size() < 3)
    throw DomainError("estimate_rate: need a ladder of at least 3 window lengths");
  std::vector<double> ladder(S_ladder.begin(), S_ladder.end());
  std::sort(ladder.begin(), ladder.end());
  const double step = spec.theta > 0.0 ? spec.theta : ladder.back() / 4096.0;
  const double S_max = ladder.back();
  WindowSetup setup(spec, S_max, step);

  std::vector<std::size_t> upto(ladder.size());
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    upto[i] = std::size_t(std::floor(ladder[i] / step + 1e-9));
    upto[i] = std::min(upto[i], setup.grid.count - 1);
  }

  // One draw per replica; nested-window maxima give shared-noise values.
  std::vector<std::vector<double>> values(ladder.size(),
                                          std::vector<double>(spec.replicas));
  parallel_chunks(spec.replicas, workers, [&](unsigned, std::uint64_t b, std::uint64_t e) {
    auto ws = setup.sampler.make_workspace();
    std::vector<double> inc;
    for (std::uint64_t r = b; r < e; ++r) {
      setup.sampler.sample_into(replica_seed(spec.seed, kStreamSalt, r), ws, inc);
      double best = -setup.drift[0];
      CompensatedSum x;
      std::size_t li = 0;
      for (std::size_t j = 0; j <= upto.back(); ++j) {
        if (j > 0) {
          x.add(inc[j - 1]);
          double v = std::sqrt(2.0) * setup.scale * x.value() - setup.drift[j];
          best = std::max(best, v);
        }
        while (li < upto.size() && upto[li] == j) {
          values[li][r] = std::exp(best);
          ++li;
        }
      }
    }
  });

  RateEstimate out;
  std::vector<double> inv_s, per_len;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    McEstimate w = summarize(values[i], spec.seed);
    RateLadderPoint pt;
    pt.S = ladder[i];
    pt.theta = spec.theta;
    pt.value = w.value / ladder[i];
    pt.std_error = w.std_error / ladder[i];
    out.ladder.push_back(pt);
    inv_s.push_back(1.0 / ladder[i]);
    per_len.push_back(pt.value);
  }
  // Window means must grow with S; flag reversals beyond noise.
  for (std::size_t i = 1; i < out.ladder.size(); ++i) {
    double prev = out.ladder[i - 1].value * ladder[i - 1];
    double cur = out.ladder[i].value * ladder[i];
    double noise = 2.0 * (out.ladder[i - 1].std_error * ladder[i - 1] +
                          out.ladder[i].std_error * ladder[i]);
    if (cur + noise < prev) out.monotone_warning = true;
  }
  LinearFit fit = linear_fit(inv_s, per_len);
  out.extrapolated = fit.intercept;
  // Conservative error bound for the intercept of a 1/S fit.
  double err = 0.0;
  for (const auto& pt : out.ladder) err = std::max(err, pt.std_error);
  out.std_error = 2.0 * err;
  return out;
}

std::vector<RateLadderPoint> theta_ladder(const PickandsSpec& spec,
                                          std::span<const double> thetas,
                                          unsigned workers) {
  if (thetas.empty()) throw DomainError("theta_ladder: empty ladder");
  std::vector<double> ts(thetas.begin(), thetas.end());
  std::sort(ts.begin(), ts.end());
  const double theta_min = ts.front();
  if (!(theta_min > 0.0)) throw DomainError("theta_ladder: thetas must be positive");
  std::vector<std::size_t> stride(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double ratio = ts[i] / theta_min;
    stride[i] = std::size_t(std::llround(ratio));
    if (std::abs(ratio - double(stride[i])) > 1e-9)
      throw DomainError("theta_ladder: each theta must be an integer multiple of the finest");
  }

  WindowSetup setup(spec, spec.S, theta_min);
  const std::size_t last = setup.grid.count - 1;

  std::vector<std::vector<double>> values(ts.size(), std::vector<double>(spec.replicas));
  parallel_chunks(spec.replicas, workers, [&](unsigned, std::uint64_t b, std::uint64_t e) {
    auto ws = setup.sampler.make_workspace();
    std::vector<double> inc, path;
    for (std::uint64_t r = b; r < e; ++r) {
      setup.sampler.sample_into(replica_seed(spec.seed, kStreamSalt, r), ws, inc);
      path.resize(last + 1);
      path[0] = 0.0;
      CompensatedSum x;
      for (std::size_t j = 1; j <= last; ++j) {
        x.add(inc[j - 1]);
        path[j] = x.value();
      }
      for (std::size_t i = 0; i < ts.size(); ++i) {
        double best = -setup.drift[0];
        for (std::size_t j = 0; j <= last; j += stride[i]) {
          double v = std::sqrt(2.0) * setup.scale * path[j] - setup.drift[j];
          best = std::max(best, v);
        }
        values[i][r] = std::exp(best);
      }
    }
  });

  std::vector<RateLadderPoint> out;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    McEstimate w = summarize(values[i], spec.seed);
    out.push_back({spec.S, ts[i], w.value, w.std_error});
  }
  return out;
}

} // namespace gsq
