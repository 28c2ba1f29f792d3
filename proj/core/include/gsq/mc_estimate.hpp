#pragma once

#include <cstdint>
#include <string>

namespace gsq {

/// Universal Monte Carlo result record: point estimate, standard error and
/// enough raw state (sums or counts) for exact pooling of partial runs.
struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t replicas = 0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0; // never serialized into byte-compared artifacts
  std::string fingerprint;

  // Raw accumulators. For indicator experiments `sum` is the success count.
  double sum = 0.0;
  double sum_sq = 0.0;
  bool low_statistics = false;
  double upper95 = 0.0; // one-sided bound reported when no successes were seen

  /// Exact pooling over the union of the two replica sets.
  static McEstimate pool(const McEstimate& a, const McEstimate& b);
};

} // namespace gsq
