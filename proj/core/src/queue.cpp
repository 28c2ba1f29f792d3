#include "gsq/queue.hpp"

#include "gsq/errors.hpp"
#include "gsq/math_util.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gsq {

QueuePath reflect_lindley(const SampledPath& path, double c, double q0) {
  if (!(c > 0.0)) throw DomainError("reflect_lindley: drift c must be positive");
  if (q0 < 0.0) throw DomainError("reflect_lindley: q0 must be nonnegative");
  QueuePath out;
  out.grid = path.grid;
  out.drift = c;
  out.q.resize(path.x.size());
  out.q[0] = q0;
  const double drain = c * path.grid.step;
  for (std::size_t k = 1; k < path.x.size(); ++k) {
    double inc = path.x[k] - path.x[k - 1];
    out.q[k] = std::max(out.q[k - 1] + inc - drain, 0.0);
  }
  return out;
}

QueuePath brute_force_sup(const SampledPath& path, double c) {
  if (!(c > 0.0)) throw DomainError("brute_force_sup: drift c must be positive");
  if (path.x.size() > 100000)
    throw CapacityError("brute_force_sup: quadratic oracle refused for n > 1e5");
  QueuePath out;
  out.grid = path.grid;
  out.drift = c;
  out.q.resize(path.x.size());
  const double drain = c * path.grid.step;
  for (std::size_t k = 0; k < path.x.size(); ++k) {
    double best = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
      double v = path.x[k] - path.x[j] - drain * double(k - j);
      best = std::max(best, v);
    }
    out.q[k] = best;
  }
  return out;
}

double hitting_time(const VarianceModel& model, double c) {
  if (!(c > 0.0)) throw DomainError("hitting_time: drift c must be positive");
  auto largest_root = [&](double scale) -> double {
    // Largest sign change of scale * sigma(t) - c t on a log grid.
    double prev_t = 0.0;
    double prev_g = 0.0;
    double root = -1.0;
    for (int i = 0; i <= 240; ++i) {
      double t = std::pow(10.0, -8.0 + i * (16.0 / 240.0));
      double g = scale * model.sigma(t) - c * t;
      if (i > 0 && prev_g > 0.0 && g <= 0.0) {
        root = bisect_root([&](double x) { return scale * model.sigma(x) - c * x; },
                           prev_t, t, 1e-12, 200);
      }
      prev_t = t;
      prev_g = g;
    }
    return root;
  };
  double root = largest_root(1.0);
  if (root > 0.0) return root;
  root = largest_root(5.0);
  if (root > 0.0) return root / 5.0;
  return 1.0;
}

double burn_in_rule(const VarianceModel& model, double c) {
  return 20.0 * hitting_time(model, c);
}

QueuePath stationary_queue(const VarianceModel& model, double c, double horizon,
                           double delta, std::uint64_t seed,
                           const StationaryQueueOptions& opts) {
  if (!(horizon > 0.0)) throw DomainError("stationary_queue: horizon must be positive");
  if (!(delta > 0.0)) throw DomainError("stationary_queue: delta must be positive");
  const double rule = burn_in_rule(model, c);
  double burn = opts.burn_in.value_or(rule);
  std::string warning;
  if (burn < rule) {
    std::ostringstream os;
    os << "burn-in " << burn << " below rule " << rule;
    warning = os.str();
  }
  const std::size_t pre = std::size_t(std::ceil(burn / delta));
  const std::size_t post = std::size_t(std::ceil(horizon / delta));
  GridSpec full(delta, pre + post + 1, -double(pre) * delta);

  IncrementSampler sampler(model, full);
  auto ws = sampler.make_workspace();
  std::vector<double> inc;
  sampler.sample_into(seed, ws, inc);

  const double drain = c * delta;
  double q = opts.q0.value_or(0.0);
  QueuePath out;
  out.grid = GridSpec(delta, post + 1, 0.0);
  out.drift = c;
  out.burn_in = double(pre) * delta;
  out.warning = warning;
  out.q.resize(post + 1);
  for (std::size_t k = 0; k < inc.size(); ++k) {
    q = std::max(q + inc[k] - drain, 0.0);
    if (k + 1 >= pre) out.q[k + 1 - pre] = q;
  }
  if (pre == 0) out.q[0] = opts.q0.value_or(0.0);
  return out;
}

CrossingRecord last_passage(const QueuePath& queue,
                            const std::function<double(double)>& boundary,
                            std::span<const double> checkpoints,
                            const std::string& boundary_id, bool collect_times) {
  const auto& grid = queue.grid;
  const std::size_t n = queue.q.size();

  std::vector<double> f(n);
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    f[k] = boundary(grid.time(k));
    if (f[k] < prev - 1e-12 * std::max(1.0, std::abs(prev)))
      throw ModelValidationError("last_passage: boundary decreases along the grid");
    prev = f[k];
  }

  CrossingRecord rec;
  rec.boundary_id = boundary_id;

  // last_cross[k] = largest index j <= k with Q(t_j) >= f(t_j), or npos.
  constexpr std::size_t npos = std::size_t(-1);
  std::vector<std::size_t> last_cross(n);
  std::size_t cur = npos;
  for (std::size_t k = 0; k < n; ++k) {
    if (queue.q[k] >= f[k]) {
      cur = k;
      ++rec.total_crossings;
      if (collect_times) rec.crossing_times.push_back(grid.time(k));
    }
    last_cross[k] = cur;
  }

  double window_start = grid.origin;
  for (double t : checkpoints) {
    if (t < grid.origin - 1e-12 || t > grid.time(n - 1) + 1e-12)
      throw DomainError("last_passage: checkpoint outside the sampled grid");
    auto k = std::size_t(std::floor((t - grid.origin) / grid.step + 1e-9));
    k = std::min(k, n - 1);
    CrossingRecord::Checkpoint cp;
    cp.t = t;
    if (last_cross[k] != npos) {
      cp.xi = grid.time(last_cross[k]);
      cp.crossed_in_window = *cp.xi > window_start;
    }
    rec.checkpoints.push_back(cp);
    window_start = t;
  }
  return rec;
}

} // namespace gsq
