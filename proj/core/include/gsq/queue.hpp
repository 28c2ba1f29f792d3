#pragma once

#include "gsq/sampling.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gsq {

/// Reflected (at zero) queue content driven by a sampled input path.
struct QueuePath {
  GridSpec grid;
  std::vector<double> q;
  double drift = 0.0;
  double burn_in = 0.0;
  std::string warning;
};

/// Max-recursion construction: Q(t0) = q0,
/// Q(t_k) = max(Q(t_{k-1}) + dX_k - c*step, 0).
QueuePath reflect_lindley(const SampledPath& path, double c, double q0 = 0.0);

/// Oracle construction Q(t_k) = max_{j<=k} (X_k - X_j - c (t_k - t_j)) by a
/// double loop; guarded to n <= 1e5.
QueuePath brute_force_sup(const SampledPath& path, double c);

/// Positive time scale past which the drained drift dominates the input
/// deviation scale: the largest root of sigma(t) = c t when it exists, else
/// the largest root of 5 sigma(t) = c t.
double hitting_time(const VarianceModel& model, double c);

/// Default pre-history horizon approximating the infinite past: 20 * hitting_time.
double burn_in_rule(const VarianceModel& model, double c);

struct StationaryQueueOptions {
  std::optional<double> burn_in;
  std::optional<double> q0;
};

/// Simulates on [-T_b, T] from an empty queue and returns Q restricted to
/// [0, T]. A burn-in below the rule is recorded as a warning, not an error.
QueuePath stationary_queue(const VarianceModel& model, double c, double horizon,
                           double delta, std::uint64_t seed,
                           const StationaryQueueOptions& opts = {});

/// Last-passage statistics of Q over a boundary function.
struct CrossingRecord {
  std::string boundary_id;
  struct Checkpoint {
    double t = 0.0;
    std::optional<double> xi; // last grid time s <= t with Q(s) >= f(s)
    bool crossed_in_window = false; // any crossing in (previous checkpoint, t]
  };
  std::vector<Checkpoint> checkpoints;
  std::uint64_t total_crossings = 0;
  std::vector<double> crossing_times; // populated only when collect_times is set
};

CrossingRecord last_passage(const QueuePath& queue,
                            const std::function<double(double)>& boundary,
                            std::span<const double> checkpoints,
                            const std::string& boundary_id = "",
                            bool collect_times = false);

} // namespace gsq
