#include "gsq/experiments.hpp"

#include "gsq/errors.hpp"
#include "gsq/io.hpp"
#include "gsq/math_util.hpp"
#include "gsq/parallel.hpp"
#include "gsq/pickands.hpp"
#include "gsq/criterion.hpp"
#include "gsq/sampling.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>

namespace gsq {

namespace {

constexpr std::uint64_t kPsiSalt = 0x7073692D73616C74ULL;
constexpr std::uint64_t kStripSalt = 0x73747269702D7361ULL;
constexpr std::uint64_t kLimsupSalt = 0x6C696D7375702D73ULL;
constexpr std::uint64_t kXiSalt = 0x78692D73616C7400ULL;

double delta_u(const VarianceModel& model, double c, double u) {
  AsymptoticConstants k = constants(model, c);
  return model.sigma_inverse(std::sqrt(2.0) * model.sigma2(u * k.tauStar) /
                             (u * (1.0 + c * k.tauStar)));
}

McEstimate binomial_estimate(std::uint64_t successes, std::uint64_t replicas,
                             std::uint64_t seed) {
  McEstimate est;
  est.replicas = replicas;
  est.seed = seed;
  est.sum = double(successes);
  est.sum_sq = double(successes);
  est.value = double(successes) / double(replicas);
  est.std_error = std::sqrt(est.value * (1.0 - est.value) / double(replicas));
  if (successes == 0) {
    est.low_statistics = true;
    est.upper95 = 1.0 - std::pow(0.05, 1.0 / double(replicas));
  }
  return est;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

McEstimate McEstimate::pool(const McEstimate& a, const McEstimate& b) {
  McEstimate out;
  out.replicas = a.replicas + b.replicas;
  out.seed = a.seed;
  out.sum = a.sum + b.sum;
  out.sum_sq = a.sum_sq + b.sum_sq;
  out.value = out.sum / double(out.replicas);
  double var = std::max(0.0, out.sum_sq / double(out.replicas) - out.value * out.value);
  out.std_error = std::sqrt(var / double(out.replicas));
  return out;
}

double psi_delta_rule(const VarianceModel& model, double c, double u) {
  return std::min(delta_u(model, c, u) / 8.0, u / 16384.0);
}

PsiResult estimate_psi(const VarianceModel& model, double c, double u,
                       std::uint64_t replicas, std::uint64_t seed,
                       const PsiOptions& opts) {
  if (!(u > 0.0)) throw DomainError("estimate_psi: u must be positive");
  if (replicas == 0) throw DomainError("estimate_psi: need at least one replica");
  auto t_start = std::chrono::steady_clock::now();
  PsiResult res;
  res.u = u;
  res.delta = opts.delta_override.value_or(psi_delta_rule(model, c, u));
  res.burn_in = opts.burn_in_override.value_or(burn_in_rule(model, c));
  res.m_u = m_of_u(model, c, u);
  if (model.kind() == ModelKind::SrdIntegrated) res.m_hat_u = m_hat(model, u);

  const double delta = res.delta;
  const std::size_t pre = std::size_t(std::ceil(res.burn_in / delta));
  const std::size_t post = std::size_t(std::ceil(u / delta));
  GridSpec grid(delta, pre + post + 1, -double(pre) * delta);
  IncrementSampler sampler(model, grid);

  std::vector<std::uint8_t> hit(replicas, 0);
  const double drain = c * delta;
  parallel_chunks(replicas, opts.workers, [&](unsigned, std::uint64_t b, std::uint64_t e) {
    auto ws = sampler.make_workspace();
    std::vector<double> inc;
    for (std::uint64_t r = b; r < e; ++r) {
      sampler.sample_into(replica_seed(seed, kPsiSalt, r), ws, inc);
      double q = 0.0;
      bool exceeded = false;
      for (std::size_t k = 0; k < inc.size(); ++k) {
        q = std::max(q + inc[k] - drain, 0.0);
        if (k + 1 >= pre && q > u) {
          exceeded = true;
          break;
        }
      }
      hit[r] = exceeded ? 1 : 0;
    }
  });

  std::uint64_t successes = 0;
  for (auto h : hit) successes += h;
  res.estimate = binomial_estimate(successes, replicas, seed);
  res.estimate.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return res;
}

SupTailResult estimate_sup_tail_strip(const VarianceModel& model, double c, double u,
                                      double T, std::span<const double> thetas,
                                      std::uint64_t replicas, std::uint64_t seed,
                                      const SupTailOptions& opts) {
  if (thetas.empty()) throw DomainError("estimate_sup_tail_strip: no theta given");
  std::vector<double> ts(thetas.begin(), thetas.end());
  std::sort(ts.begin(), ts.end());
  const double theta_min = ts.front();

  SupTailResult res;
  res.grid = build_grid(model, c, u, T, theta_min);
  res.m_u = res.grid.mU;
  const double qf = res.grid.q / double(opts.refine);
  const std::size_t jc = std::size_t(std::llround(res.grid.tauCenter / qf));
  res.tau_snapped = double(jc) * qf;

  std::vector<std::size_t> stride(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double ratio = ts[i] / theta_min * double(opts.refine);
    stride[i] = std::size_t(std::llround(ratio));
    if (std::abs(ratio - double(stride[i])) > 1e-9)
      throw DomainError("estimate_sup_tail_strip: thetas must be integer multiples of "
                        "the finest theta");
  }

  const std::size_t Lf = std::size_t(std::floor(T / qf + 1e-12));
  const std::size_t Nf = std::size_t(std::floor(res.grid.tauWindow / qf + 1e-12));
  const std::size_t Nfull =
      std::size_t(std::floor(opts.full_windows * res.grid.tauWindow / qf + 1e-12));
  const std::size_t j_lo_strip = jc > Nf ? jc - Nf : 1;
  const std::size_t j_hi_strip = jc + Nf;
  const std::size_t j_lo_full = std::min(j_lo_strip, jc > Nfull ? jc - Nfull : 1);
  const std::size_t j_hi_full = std::max(j_hi_strip, jc + Nfull);

  const double h = u * qf;
  const std::size_t K = Lf + j_hi_full; // path indices 0..K
  GridSpec grid(h, K + 1, 0.0);
  IncrementSampler sampler(model, grid);

  std::vector<double> coef(j_hi_full + 1, 0.0);
  for (std::size_t j = 1; j <= j_hi_full; ++j)
    coef[j] = res.m_u / (u * (1.0 + c * double(j) * qf));
  const double m = res.m_u;

  // Per-theta lattices expressed in fine-lattice indices; all are subsets of
  // the strip point set, which is a subset of the full rectangle.
  std::vector<std::vector<std::size_t>> theta_j(ts.size());
  std::vector<std::vector<std::size_t>> theta_l(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double q_i = ts[i] * res.grid.deltaU / u;
    const long Li = long(std::floor(T / q_i + 1e-12));
    const long Ni = long(std::floor(res.grid.tauWindow / q_i + 1e-12));
    for (long li = 0; li <= Li; ++li) theta_l[i].push_back(std::size_t(li) * stride[i]);
    for (long n = -Ni; n <= Ni; ++n) {
      long j = long(jc) + n * long(stride[i]);
      if (j >= 1 && j <= long(j_hi_full)) theta_j[i].push_back(std::size_t(j));
    }
  }

  struct Flags {
    std::uint8_t full = 0, strip = 0;
    std::uint32_t discrete = 0; // bit per theta
  };
  std::vector<Flags> flags(replicas);

  parallel_chunks(replicas, opts.workers, [&](unsigned, std::uint64_t b, std::uint64_t e) {
    auto ws = sampler.make_workspace();
    std::vector<double> inc, path(K + 1);
    for (std::uint64_t r = b; r < e; ++r) {
      sampler.sample_into(replica_seed(seed, kStripSalt, r), ws, inc);
      path[0] = 0.0;
      CompensatedSum acc;
      for (std::size_t k = 1; k <= K; ++k) {
        acc.add(inc[k - 1]);
        path[k] = acc.value();
      }
      Flags f;
      auto exceeds = [&](std::size_t l, std::size_t j) {
        return (path[l + j] - path[l]) * coef[j] > m;
      };
      for (std::size_t l = 0; l <= Lf && !f.full; ++l)
        for (std::size_t j = j_lo_full; j <= j_hi_full; ++j)
          if (exceeds(l, j)) {
            f.full = 1;
            break;
          }
      if (f.full) { // the nested events are subsets; skip scans otherwise
        for (std::size_t l = 0; l <= Lf && !f.strip; ++l)
          for (std::size_t j = j_lo_strip; j <= j_hi_strip; ++j)
            if (exceeds(l, j)) {
              f.strip = 1;
              break;
            }
        for (std::size_t i = 0; i < ts.size(); ++i) {
          bool hit = false;
          for (std::size_t l : theta_l[i]) {
            for (std::size_t j : theta_j[i])
              if (exceeds(l, j)) {
                hit = true;
                break;
              }
            if (hit) break;
          }
          if (hit) f.discrete |= (1u << i);
        }
      }
      flags[r] = f;
    }
  });

  std::uint64_t full_n = 0, strip_n = 0;
  std::vector<std::uint64_t> disc_n(ts.size(), 0);
  for (const auto& f : flags) {
    full_n += f.full;
    strip_n += f.strip;
    for (std::size_t i = 0; i < ts.size(); ++i)
      if (f.discrete & (1u << i)) ++disc_n[i];
  }
  res.full = binomial_estimate(full_n, replicas, seed);
  res.strip = binomial_estimate(strip_n, replicas, seed);
  for (std::size_t i = 0; i < ts.size(); ++i)
    res.discrete.emplace_back(ts[i], binomial_estimate(disc_n[i], replicas, seed));
  return res;
}

SupTailResult estimate_sup_tail_strip(const VarianceModel& model, double c, double u,
                                      double T, double theta, std::uint64_t replicas,
                                      std::uint64_t seed, const SupTailOptions& opts) {
  double one[1] = {theta};
  return estimate_sup_tail_strip(model, c, u, T, std::span<const double>(one, 1),
                                 replicas, seed, opts);
}

namespace {

std::vector<double> geometric_checkpoints(double start, double horizon) {
  std::vector<double> cps;
  for (double t = start; t < horizon * (1.0 - 1e-12); t *= 2.0) cps.push_back(t);
  cps.push_back(horizon);
  return cps;
}

} // namespace

LimsupResult limsup_experiment(const VarianceModel& model, double c, double horizon,
                               std::uint64_t replicas, std::uint64_t seed,
                               const LimsupOptions& opts) {
  if (!(horizon >= 1e4))
    throw DomainError("limsup_experiment: horizon must be at least 1e4 time units");
  LimsupResult res;
  LimsupConstant lc = limsup_constant(model, c);
  res.constant = lc.value;
  res.exponent = lc.exponent;
  res.delta = opts.delta;
  res.burn_in = opts.burn_in_override.value_or(burn_in_rule(model, c));
  res.checkpoints = geometric_checkpoints(opts.start, horizon);

  const double delta = res.delta;
  const std::size_t pre = std::size_t(std::ceil(res.burn_in / delta));
  const std::size_t post = std::size_t(std::ceil(horizon / delta));
  GridSpec grid(delta, pre + post + 1, -double(pre) * delta);
  IncrementSampler sampler(model, grid);

  const std::size_t ncp = res.checkpoints.size();
  std::vector<std::vector<double>> stat(replicas, std::vector<double>(ncp, 0.0));
  const double drain = c * delta;

  // Normalizer values are shared across replicas.
  std::vector<double> norm(post + 1, 0.0);
  const std::size_t k_start = std::size_t(std::ceil(opts.start / delta));
  for (std::size_t k = k_start; k <= post; ++k)
    norm[k] = std::pow(std::log(double(k) * delta), res.exponent);

  parallel_chunks(replicas, opts.workers, [&](unsigned, std::uint64_t b, std::uint64_t e) {
    auto ws = sampler.make_workspace();
    std::vector<double> inc;
    for (std::uint64_t r = b; r < e; ++r) {
      sampler.sample_into(replica_seed(seed, kLimsupSalt, r), ws, inc);
      double q = 0.0;
      double running = 0.0;
      std::size_t cp = 0;
      for (std::size_t k = 0; k < inc.size(); ++k) {
        q = std::max(q + inc[k] - drain, 0.0);
        if (k + 1 < pre) continue;
        std::size_t kp = k + 1 - pre; // index into [0, horizon]
        double t = double(kp) * delta;
        while (cp < ncp && res.checkpoints[cp] < t - 0.5 * delta)
          stat[r][cp++] = running;
        if (kp >= k_start && norm[kp] > 0.0)
          running = std::max(running, q / norm[kp]);
      }
      while (cp < ncp) stat[r][cp++] = running;
    }
  });

  res.median_running_stat.resize(ncp);
  for (std::size_t j = 0; j < ncp; ++j) {
    std::vector<double> col(replicas);
    for (std::uint64_t r = 0; r < replicas; ++r) col[r] = stat[r][j];
    res.median_running_stat[j] = median_of(col);
  }
  res.final_stat.resize(replicas);
  for (std::uint64_t r = 0; r < replicas; ++r) res.final_stat[r] = stat[r][ncp - 1];
  return res;
}

ErdosReveszResult erdos_revesz_experiment(const VarianceModel& model, double c, double p,
                                          double horizon, std::uint64_t replicas,
                                          std::uint64_t seed, double pickandsH,
                                          const ErdosReveszOptions& opts) {
  if (!(p > 0.0)) throw DomainError("erdos_revesz_experiment: p must be positive");
  ErdosReveszResult res;
  res.p = p;
  res.disclaimer = "finite-horizon diagnostic; the almost-sure limit -1 of the "
                   "normalized last-passage statistic is an infinite-horizon statement";
  res.delta = opts.delta_override.value_or(delta_u(model, c, f_p(model, c, p, horizon)) / 8.0);
  res.burn_in = opts.burn_in_override.value_or(burn_in_rule(model, c));
  res.checkpoints = geometric_checkpoints(opts.start, horizon);

  // Smallest time where the boundary family is defined.
  double t0 = std::exp(1.0) * 1.001;
  for (int i = 0; i < 400; ++i) {
    try {
      (void)f_p(model, c, p, t0);
      break;
    } catch (const DomainError&) {
      t0 *= 1.25;
    }
  }
  FpEvaluator boundary(model, c, p, t0, horizon * 1.001);

  const double delta = res.delta;
  const std::size_t pre = std::size_t(std::ceil(res.burn_in / delta));
  const std::size_t post = std::size_t(std::ceil(horizon / delta));
  GridSpec grid(delta, pre + post + 1, -double(pre) * delta);
  IncrementSampler sampler(model, grid);

  // Boundary on the grid; +inf below its domain start.
  std::vector<double> f_vec(post + 1, std::numeric_limits<double>::infinity());
  const std::size_t k0 = std::size_t(std::ceil(t0 * 1.0001 / delta));
  for (std::size_t k = k0; k <= post; ++k) f_vec[k] = boundary(double(k) * delta);

  const std::size_t ncp = res.checkpoints.size();
  res.h_at_checkpoints.resize(ncp);
  for (std::size_t j = 0; j < ncp; ++j)
    res.h_at_checkpoints[j] = h_p(model, c, p, res.checkpoints[j], pickandsH);

  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> run_inf(replicas, std::vector<double>(ncp, 0.0));
  std::vector<std::uint8_t> never(replicas, 0);
  std::vector<std::uint8_t> sign_ok(replicas, 1);
  const double drain = c * delta;

  parallel_chunks(replicas, opts.workers, [&](unsigned, std::uint64_t b, std::uint64_t e) {
    auto ws = sampler.make_workspace();
    std::vector<double> inc;
    for (std::uint64_t r = b; r < e; ++r) {
      sampler.sample_into(replica_seed(seed, kXiSalt, r), ws, inc);
      double q = 0.0;
      double last_cross = neg_inf;
      double inf_so_far = std::numeric_limits<double>::infinity();
      std::size_t cp = 0;
      bool crossed_ever = false;
      for (std::size_t k = 0; k < inc.size(); ++k) {
        q = std::max(q + inc[k] - drain, 0.0);
        if (k + 1 < pre) continue;
        std::size_t kp = k + 1 - pre;
        double t = double(kp) * delta;
        while (cp < ncp && res.checkpoints[cp] < t - 0.5 * delta) {
          double tcp = res.checkpoints[cp];
          double stat;
          if (!crossed_ever) {
            stat = neg_inf;
          } else if (p > 1.0) {
            stat = (last_cross - tcp) / res.h_at_checkpoints[cp];
          } else {
            stat = std::log(last_cross / tcp) / (res.h_at_checkpoints[cp] / tcp);
          }
          if (crossed_ever && last_cross < tcp && stat > 1e-12) sign_ok[r] = 0;
          inf_so_far = std::min(inf_so_far, stat);
          run_inf[r][cp++] = inf_so_far;
        }
        if (q >= f_vec[kp]) {
          last_cross = t;
          crossed_ever = true;
        }
      }
      while (cp < ncp) {
        double tcp = res.checkpoints[cp];
        double stat = !crossed_ever ? neg_inf
                      : p > 1.0    ? (last_cross - tcp) / res.h_at_checkpoints[cp]
                                   : std::log(last_cross / tcp) /
                                         (res.h_at_checkpoints[cp] / tcp);
        if (crossed_ever && last_cross < tcp && stat > 1e-12) sign_ok[r] = 0;
        inf_so_far = std::min(inf_so_far, stat);
        run_inf[r][cp++] = inf_so_far;
      }
      never[r] = crossed_ever ? 0 : 1;
    }
  });

  res.median_running_inf.resize(ncp);
  for (std::size_t j = 0; j < ncp; ++j) {
    std::vector<double> col(replicas);
    for (std::uint64_t r = 0; r < replicas; ++r) col[r] = run_inf[r][j];
    res.median_running_inf[j] = median_of(col);
  }
  res.final_running_inf.resize(replicas);
  std::uint64_t in_band = 0;
  for (std::uint64_t r = 0; r < replicas; ++r) {
    res.final_running_inf[r] = run_inf[r][ncp - 1];
    if (res.final_running_inf[r] >= -2.0 && res.final_running_inf[r] <= 0.0) ++in_band;
    res.no_crossing_replicas += never[r];
    if (!sign_ok[r]) res.sign_invariant_held = false;
  }
  res.fraction_in_band = double(in_band) / double(replicas);
  return res;
}

// ---------------------------------------------------------------------------
// Suite runner
// ---------------------------------------------------------------------------

namespace {

using nlohmann::ordered_json;

VarianceModel model_from_json(const ordered_json& j) {
  std::string kind = j.at("kind").get<std::string>();
  for (auto& [key, val] : j.items()) {
    (void)val;
    static const std::vector<std::string> allowed = {
        "kind", "hurst", "correlation", "a", "t", "sigma2",
        "alpha0", "A0", "alphaInf", "AInf"};
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw DomainError("config: unknown model key '" + key + "'");
  }
  if (kind != "tabulated" && j.contains("alpha0"))
    throw DomainError("config: exponent overrides are only supported for tabulated models");
  if (kind == "fbm") return VarianceModel::fbm(j.at("hurst").get<double>());
  if (kind == "srd") {
    std::string corr = j.value("correlation", std::string("exp-power"));
    if (corr != "exp-power")
      throw DomainError("config: unknown srd correlation '" + corr + "'");
    return VarianceModel::srd_integrated(SrdCorrelation::exp_power(j.value("a", 1.0)));
  }
  if (kind == "tabulated") {
    auto t = j.at("t").get<std::vector<double>>();
    auto s2 = j.at("sigma2").get<std::vector<double>>();
    std::optional<RegularVariation> rv;
    if (j.contains("alpha0"))
      rv = RegularVariation{j.at("alpha0").get<double>(), j.at("A0").get<double>(),
                            j.at("alphaInf").get<double>(), j.at("AInf").get<double>()};
    return VarianceModel::tabulated(t, s2, rv);
  }
  throw DomainError("config: unknown model kind '" + kind + "'");
}

std::string job_fingerprint(const VarianceModel& model, double c, std::uint64_t seed,
                            std::optional<double> pickands, const ordered_json& job) {
  std::ostringstream os;
  os.precision(17);
  os << "v1|" << model.describe() << "|c=" << c << "|seed=" << seed;
  if (pickands) os << "|H=" << *pickands;
  os << "|" << job.dump();
  std::string s = os.str();
  std::uint64_t h = fnv1a64({s.data(), s.size()});
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string csv_row(const std::string& experiment, const std::string& params,
                    double value, double std_error) {
  return experiment + "," + params + "," + format_g17(value) + "," +
         format_g17(std_error) + "\n";
}

struct JobOutputs {
  std::vector<std::pair<std::string, std::string>> files; // (name, content)
};

JobOutputs execute_job(const ordered_json& job, const VarianceModel& model, double c,
                       std::uint64_t seed, std::optional<double> pickands,
                       unsigned workers) {
  JobOutputs out;
  const std::string type = job.at("type").get<std::string>();
  const std::string name = job.at("name").get<std::string>();

  auto need_pickands = [&]() -> double {
    if (!pickands)
      throw DomainError("config: job '" + name +
                        "' needs the clustering constant; run a pickands estimation "
                        "first and set the top-level \"pickands\" value");
    return *pickands;
  };

  if (type == "constants") {
    AsymptoticConstants k = constants(model, c, pickands);
    out.files.emplace_back(name + ".json", constants_json(k));
  } else if (type == "sample") {
    GridSpec grid(job.at("delta").get<double>(), job.at("n").get<std::size_t>(), 0.0);
    IncrementSampler sampler(model, grid);
    std::uint64_t replica = job.value("replica", std::uint64_t(0));
    auto inc = sampler.sample(replica_seed(seed, kPsiSalt, replica));
    SampledPath path = assemble_path(inc, grid, seed);
    std::string format = job.value("format", std::string("csv"));
    if (format == "csv") {
      out.files.emplace_back(name + ".csv", path_csv(path));
    } else if (format == "binary") {
      // Binary content assembled in-memory to keep the atomic-write path single.
      std::string blob = "GSP1";
      std::uint64_t n = path.x.size();
      auto append = [&](const void* p, std::size_t len) {
        blob.append(reinterpret_cast<const char*>(p), len);
      };
      append(&n, 8);
      append(&path.grid.origin, 8);
      append(&path.grid.step, 8);
      append(path.x.data(), 8 * path.x.size());
      out.files.emplace_back(name + ".bin", blob);
    } else {
      throw DomainError("config: unknown sample format '" + format + "'");
    }
  } else if (type == "psi") {
    PsiOptions po;
    po.workers = workers;
    if (job.contains("delta")) po.delta_override = job.at("delta").get<double>();
    if (job.contains("burn_in")) po.burn_in_override = job.at("burn_in").get<double>();
    double u = job.at("u").get<double>();
    std::uint64_t replicas = job.at("replicas").get<std::uint64_t>();
    PsiResult r = estimate_psi(model, c, u, replicas, seed, po);
    std::ostringstream params;
    params << "u=" << format_g17(u) << ";delta=" << format_g17(r.delta)
           << ";burn_in=" << format_g17(r.burn_in) << ";replicas=" << replicas;
    out.files.emplace_back(name + ".csv",
                           "experiment,params,value,stderr\n" +
                               csv_row("psi", params.str(), r.estimate.value,
                                       r.estimate.std_error));
    ordered_json detail;
    detail["experiment"] = "psi";
    detail["u"] = u;
    detail["delta"] = r.delta;
    detail["burn_in"] = r.burn_in;
    detail["m_u"] = r.m_u;
    if (r.m_hat_u) detail["m_hat_u"] = *r.m_hat_u;
    detail["replicas"] = replicas;
    detail["value"] = r.estimate.value;
    detail["stderr"] = r.estimate.std_error;
    detail["low_statistics"] = r.estimate.low_statistics;
    if (r.estimate.low_statistics) detail["upper95"] = r.estimate.upper95;
    out.files.emplace_back(name + ".json", detail.dump(2) + "\n");
  } else if (type == "pickands") {
    PickandsSpec spec =
        job.value("process", std::string("fbm")) == std::string("scaled-input")
            ? PickandsSpec::scaled_input(model, c, 1.0,
                                         job.at("replicas").get<std::uint64_t>(), seed)
            : PickandsSpec::fbm_window(job.value("index", model.rv().alphaInf), 1.0,
                                       job.at("replicas").get<std::uint64_t>(), seed);
    spec.theta = job.value("theta", 0.0);
    auto ladder = job.at("S_ladder").get<std::vector<double>>();
    RateEstimate rate = estimate_rate(spec, ladder, workers);
    ordered_json detail;
    detail["experiment"] = "pickands";
    detail["process"] = job.value("process", std::string("fbm"));
    detail["theta"] = spec.theta;
    detail["replicas"] = spec.replicas;
    auto arr = ordered_json::array();
    for (const auto& pt : rate.ladder) {
      ordered_json e;
      e["S"] = pt.S;
      e["theta"] = pt.theta;
      e["value"] = pt.value;
      e["stderr"] = pt.std_error;
      arr.push_back(e);
    }
    detail["ladder"] = arr;
    detail["extrapolated"] = rate.extrapolated;
    detail["stderr"] = rate.std_error;
    detail["monotone_warning"] = rate.monotone_warning;
    out.files.emplace_back(name + ".json", detail.dump(2) + "\n");
    std::string csv = "experiment,params,value,stderr\n";
    for (const auto& pt : rate.ladder)
      csv += csv_row("pickands", "S=" + format_g17(pt.S) + ";theta=" + format_g17(pt.theta),
                     pt.value, pt.std_error);
    csv += csv_row("pickands", "extrapolated", rate.extrapolated, rate.std_error);
    out.files.emplace_back(name + ".csv", csv);
  } else if (type == "criterion") {
    BoundaryFunction f = BoundaryFunction::fp_family(model, c, job.at("p").get<double>());
    double T = job.value("T", 0.0);
    if (T <= 0.0) T = default_start(model, c, f);
    double T_max = job.value("T_max", T * 1e6);
    CriterionVerdict v = classify(model, c, f, T, T_max, need_pickands());
    ordered_json detail;
    detail["experiment"] = "criterion";
    detail["boundary"] = f.id;
    detail["T"] = T;
    detail["T_max"] = T_max;
    detail["integral"] = v.integral;
    detail["tail_exponent_q"] = v.tail_exponent_q;
    detail["epsilon"] = v.epsilon;
    detail["classification"] = v.classification == Classification::Finite
                                   ? "finite => P(i.o.)=0"
                               : v.classification == Classification::Infinite
                                   ? "infinite => P(i.o.)=1"
                                   : "inconclusive";
    detail["boundary_case"] = v.boundary_case;
    detail["trusted_window"] = v.trusted_window;
    detail["trusted_validity"] = v.trusted_validity;
    detail["notes"] = v.notes;
    auto arr = ordered_json::array();
    for (auto& [uu, vv] : v.integrand_samples) arr.push_back({uu, vv});
    detail["integrand_samples"] = arr;
    out.files.emplace_back(name + ".json", detail.dump(2) + "\n");
  } else if (type == "erdos-revesz") {
    ErdosReveszOptions eo;
    eo.workers = workers;
    if (job.contains("delta")) eo.delta_override = job.at("delta").get<double>();
    if (job.contains("burn_in")) eo.burn_in_override = job.at("burn_in").get<double>();
    if (job.contains("start")) eo.start = job.at("start").get<double>();
    ErdosReveszResult r = erdos_revesz_experiment(
        model, c, job.at("p").get<double>(), job.at("horizon").get<double>(),
        job.at("replicas").get<std::uint64_t>(), seed, need_pickands(), eo);
    ordered_json detail;
    detail["experiment"] = "erdos-revesz";
    detail["p"] = r.p;
    detail["delta"] = r.delta;
    detail["burn_in"] = r.burn_in;
    detail["disclaimer"] = r.disclaimer;
    detail["checkpoints"] = r.checkpoints;
    detail["h_p"] = r.h_at_checkpoints;
    detail["median_running_inf"] = r.median_running_inf;
    detail["fraction_in_band"] = r.fraction_in_band;
    detail["no_crossing_replicas"] = r.no_crossing_replicas;
    detail["sign_invariant_held"] = r.sign_invariant_held;
    out.files.emplace_back(name + ".json", detail.dump(2) + "\n");
    std::ostringstream params;
    params << "p=" << format_g17(r.p) << ";horizon="
           << format_g17(r.checkpoints.back()) << ";replicas="
           << job.at("replicas").get<std::uint64_t>();
    out.files.emplace_back(name + ".csv",
                           "experiment,params,value,stderr\n" +
                               csv_row("erdos-revesz-band", params.str(),
                                       r.fraction_in_band, 0.0));
  } else if (type == "limsup") {
    LimsupOptions lo;
    lo.workers = workers;
    if (job.contains("delta")) lo.delta = job.at("delta").get<double>();
    if (job.contains("start")) lo.start = job.at("start").get<double>();
    if (job.contains("burn_in")) lo.burn_in_override = job.at("burn_in").get<double>();
    LimsupResult r = limsup_experiment(model, c, job.at("horizon").get<double>(),
                                       job.at("replicas").get<std::uint64_t>(), seed, lo);
    ordered_json detail;
    detail["experiment"] = "limsup";
    detail["constant"] = r.constant;
    detail["exponent"] = r.exponent;
    detail["delta"] = r.delta;
    detail["burn_in"] = r.burn_in;
    detail["checkpoints"] = r.checkpoints;
    detail["median_running_stat"] = r.median_running_stat;
    out.files.emplace_back(name + ".json", detail.dump(2) + "\n");
    std::ostringstream params;
    params << "horizon=" << format_g17(r.checkpoints.back());
    out.files.emplace_back(
        name + ".csv", "experiment,params,value,stderr\n" +
                           csv_row("limsup-median", params.str(),
                                   r.median_running_stat.back(), 0.0));
  } else {
    throw DomainError("config: unknown job type '" + type + "'");
  }
  return out;
}

} // namespace

SuiteResult run_suite(const std::string& config_json, const std::string& output_dir_override,
                      std::optional<unsigned> workers_override,
                      std::optional<std::uint64_t> seed_override) {
  ordered_json cfg = ordered_json::parse(config_json);

  static const std::vector<std::string> allowed_top = {
      "schema_version", "model", "c", "seed", "workers", "output_dir", "pickands", "jobs"};
  for (auto& [key, val] : cfg.items()) {
    (void)val;
    if (std::find(allowed_top.begin(), allowed_top.end(), key) == allowed_top.end())
      throw DomainError("config: unknown key '" + key + "'");
  }
  if (cfg.at("schema_version").get<int>() != 1)
    throw DomainError("config: unsupported schema_version");

  VarianceModel model = model_from_json(cfg.at("model"));
  double c = cfg.at("c").get<double>();
  std::uint64_t seed = seed_override.value_or(cfg.value("seed", std::uint64_t(1)));
  unsigned workers = workers_override.value_or(cfg.value("workers", 1u));
  std::optional<double> pickands;
  if (cfg.contains("pickands")) pickands = cfg.at("pickands").get<double>();
  std::string out_dir = output_dir_override.empty()
                            ? cfg.value("output_dir", std::string("out"))
                            : output_dir_override;
  std::filesystem::create_directories(out_dir);

  SuiteResult res;
  res.output_dir = out_dir;
  res.manifest_path = out_dir + "/manifest.json";

  // Previous manifest enables fingerprint-based resumption.
  ordered_json previous;
  if (file_exists(res.manifest_path)) {
    try {
      previous = ordered_json::parse(read_file(res.manifest_path));
    } catch (...) {
      previous = ordered_json();
    }
  }
  auto previously_completed = [&](const std::string& name, const std::string& fp,
                                  const std::vector<std::string>& files) {
    if (!previous.contains("jobs")) return false;
    for (const auto& j : previous.at("jobs")) {
      if (j.value("name", std::string()) == name && j.value("fingerprint", std::string()) == fp &&
          (j.value("status", std::string()) == "completed" ||
           j.value("status", std::string()) == "cached")) {
        for (const auto& f : files)
          if (!file_exists(out_dir + "/" + f)) return false;
        return true;
      }
    }
    return false;
  };

  ordered_json manifest;
  manifest["schema_version"] = 1;
  {
    std::ostringstream os;
    os << "v1|" << model.describe() << "|c=" << format_g17(c) << "|seed=" << seed;
    std::string s = os.str();
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64({s.data(), s.size()})));
    manifest["config_fingerprint"] = std::string(buf);
  }
  manifest["jobs"] = ordered_json::array();

  const auto& jobs = cfg.value("jobs", ordered_json::array());
  res.jobs_total = int(jobs.size());
  for (const auto& job : jobs) {
    const std::string name = job.at("name").get<std::string>();
    const std::string type = job.at("type").get<std::string>();
    std::string fp = job_fingerprint(model, c, seed, pickands, job);

    ordered_json entry;
    entry["name"] = name;
    entry["type"] = type;
    entry["fingerprint"] = fp;

    // Output names are deterministic per job type.
    std::vector<std::string> expected;
    if (type == "constants" || type == "criterion")
      expected = {name + ".json"};
    else if (type == "sample")
      expected = {name + (job.value("format", std::string("csv")) == "binary" ? ".bin"
                                                                              : ".csv")};
    else
      expected = {name + ".json", name + ".csv"};
    if (type == "psi") expected = {name + ".csv", name + ".json"};

    if (previously_completed(name, fp, expected)) {
      entry["status"] = "cached";
      entry["outputs"] = expected;
      ++res.jobs_cached;
    } else {
      try {
        JobOutputs outs = execute_job(job, model, c, seed, pickands, workers);
        auto arr = ordered_json::array();
        for (auto& [fname, content] : outs.files) {
          atomic_write(out_dir + "/" + fname, content);
          arr.push_back(fname);
        }
        entry["status"] = "completed";
        entry["outputs"] = arr;
        ++res.jobs_completed;
      } catch (const std::exception& ex) {
        entry["status"] = "failed";
        entry["error"] = ex.what();
        ++res.jobs_failed;
      }
    }
    manifest["jobs"].push_back(entry);
    atomic_write(res.manifest_path, manifest.dump(2) + "\n");
  }
  atomic_write(res.manifest_path, manifest.dump(2) + "\n");
  return res;
}

} // namespace gsq
