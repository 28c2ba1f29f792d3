#pragma once

#include "gsq/asymptotics.hpp"
#include "gsq/mc_estimate.hpp"
#include "gsq/queue.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gsq {

/// Grid step rule for exceedance estimation at level u.
double psi_delta_rule(const VarianceModel& model, double c, double u);

struct PsiOptions {
  std::optional<double> delta_override;
  std::optional<double> burn_in_override;
  unsigned workers = 1;
};

struct PsiResult {
  McEstimate estimate;
  double u = 0.0;
  double delta = 0.0;
  double burn_in = 0.0;
  double m_u = 0.0;
  // For integrated models: the closed-form replacement level and its gap,
  // so the replacement error is reported rather than assumed.
  std::optional<double> m_hat_u;
};

/// Fraction of replicas whose stationary queue exceeds u somewhere on [0, u].
PsiResult estimate_psi(const VarianceModel& model, double c, double u,
                       std::uint64_t replicas, std::uint64_t seed,
                       const PsiOptions& opts = {});

struct SupTailOptions {
  unsigned workers = 1;
  double full_windows = 6.0; // full tau probe range in units of the strip window
  int refine = 2;            // fine lattice step = q / refine
};

/// Exceedance of the scaled field over nested point sets sharing one draw per
/// replica: full probe rectangle > strip > per-theta lattices.
struct SupTailResult {
  DiscretizationGrid grid; // at the finest requested theta
  double tau_snapped = 0.0;
  double m_u = 0.0;
  McEstimate full;
  McEstimate strip;
  std::vector<std::pair<double, McEstimate>> discrete; // (theta, estimate)
};

SupTailResult estimate_sup_tail_strip(const VarianceModel& model, double c, double u,
                                      double T, std::span<const double> thetas,
                                      std::uint64_t replicas, std::uint64_t seed,
                                      const SupTailOptions& opts = {});
SupTailResult estimate_sup_tail_strip(const VarianceModel& model, double c, double u,
                                      double T, double theta, std::uint64_t replicas,
                                      std::uint64_t seed, const SupTailOptions& opts = {});

struct LimsupOptions {
  unsigned workers = 1;
  double delta = 0.125;
  double start = 100.0; // first checkpoint; the normalized running sup starts here
  std::optional<double> burn_in_override;
};

/// Tracks the running maximum of Q(s) / (log s)^{1/(2(1-alphaInf))} over
/// s in [start, t] at geometric checkpoints, against the growth constant.
struct LimsupResult {
  double constant = 0.0;
  double exponent = 0.0;
  std::vector<double> checkpoints;
  std::vector<double> median_running_stat;
  std::vector<double> final_stat; // per replica
  double delta = 0.0;
  double burn_in = 0.0;
};

LimsupResult limsup_experiment(const VarianceModel& model, double c, double horizon,
                               std::uint64_t replicas, std::uint64_t seed,
                               const LimsupOptions& opts = {});

struct ErdosReveszOptions {
  unsigned workers = 1;
  std::optional<double> delta_override;
  std::optional<double> burn_in_override;
  double start = 32.0; // first checkpoint
};

/// Last-passage statistics along the f_p boundary. The almost-sure limit of
/// the normalized statistic is an infinite-horizon statement; the reported
/// band fraction is a finite-horizon diagnostic, not an estimate of it.
struct ErdosReveszResult {
  double p = 0.0;
  std::vector<double> checkpoints;
  std::vector<double> h_at_checkpoints;
  std::vector<double> median_running_inf;
  std::vector<double> final_running_inf; // per replica; -inf when never crossed
  double fraction_in_band = 0.0;         // final running inf in [-2, 0]
  std::uint64_t no_crossing_replicas = 0;
  bool sign_invariant_held = true;
  double delta = 0.0;
  double burn_in = 0.0;
  std::string disclaimer;
};

ErdosReveszResult erdos_revesz_experiment(const VarianceModel& model, double c, double p,
                                          double horizon, std::uint64_t replicas,
                                          std::uint64_t seed, double pickandsH,
                                          const ErdosReveszOptions& opts = {});

/// Declarative multi-job run driven by a JSON config; outputs are written
/// atomically, jobs are resumable by config fingerprint, and all artifacts are
/// byte-deterministic for a fixed master seed regardless of the worker count.
struct SuiteResult {
  int jobs_total = 0;
  int jobs_completed = 0;
  int jobs_cached = 0;
  int jobs_failed = 0;
  std::string manifest_path;
  std::string output_dir;
};

SuiteResult run_suite(const std::string& config_json,
                      const std::string& output_dir_override = "",
                      std::optional<unsigned> workers_override = std::nullopt,
                      std::optional<std::uint64_t> seed_override = std::nullopt);

} // namespace gsq
