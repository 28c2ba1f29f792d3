#pragma once

#include "gsq/mc_estimate.hpp"
#include "gsq/variance_model.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace gsq {

/// Gaussian process whose clustering constant is estimated:
/// either a self-similar input of a given index, or a rescaled copy
/// kappa * X(timeScale * t) of a model input.
struct PickandsSpec {
  enum class Process { FbmIndex, ScaledInput };
  Process process = Process::FbmIndex;
  double index = 0.5; // FbmIndex
  std::optional<VarianceModel> model;
  double kappa = 1.0;
  double timeScale = 1.0;
  double S = 1.0;     // window length
  double theta = 0.0; // grid step; 0 selects the continuous-limit step S / 2^12
  std::uint64_t replicas = 10000;
  std::uint64_t seed = 1;

  static PickandsSpec fbm_window(double index, double S, std::uint64_t replicas,
                                 std::uint64_t seed, double theta = 0.0);
  /// Rescaled model input with the level-field normalization
  /// kappa = (1 + c tau*) / (sqrt2 AInf tau*), timeScale = sigma^{-1}(1/kappa).
  static PickandsSpec scaled_input(const VarianceModel& model, double c, double S,
                                   std::uint64_t replicas, std::uint64_t seed,
                                   double theta = 0.0);
  /// Same process in the integrated-model normalization kappa = c G / sqrt2,
  /// timeScale = sigma^{-1}(sqrt2 / (c G)); numerically identical for
  /// admissible integrated models.
  static PickandsSpec scaled_input_srd_form(const VarianceModel& model, double c,
                                            double S, std::uint64_t replicas,
                                            std::uint64_t seed, double theta = 0.0);

  /// Drift term: Var of the process at time t.
  double variance_at(double t) const;
};

/// Monte Carlo mean of exp(sup over the window grid of (sqrt2 V(t) - Var V(t))).
/// The sup is taken first and exponentiated once.
McEstimate estimate_window(const PickandsSpec& spec, unsigned workers = 1);

struct RateLadderPoint {
  double S = 0.0;
  double theta = 0.0;
  double value = 0.0;
  double std_error = 0.0;
};

/// Per-length values H(S)/S over a window ladder (common random numbers:
/// maxima over nested windows of a single draw) plus a linear extrapolation
/// of the intercept in 1/S. Both the ladder and the fit are reported.
struct RateEstimate {
  std::vector<RateLadderPoint> ladder;
  double extrapolated = 0.0;
  double std_error = 0.0;
  bool monotone_warning = false;
};
RateEstimate estimate_rate(const PickandsSpec& spec, std::span<const double> S_ladder,
                           unsigned workers = 1);

/// Window estimates over a descending ladder of grid steps, sharing one draw
/// per replica (each theta must be an integer multiple of the finest theta).
std::vector<RateLadderPoint> theta_ladder(const PickandsSpec& spec,
                                          std::span<const double> thetas,
                                          unsigned workers = 1);

} // namespace gsq
