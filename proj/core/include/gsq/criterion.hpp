#pragma once

#include "gsq/variance_model.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace gsq {

/// Positive nondecreasing boundary to test against the queue.
struct BoundaryFunction {
  enum class Kind { FpFamily, ClosedForm, Tabulated };
  Kind kind = Kind::ClosedForm;
  double p = 0.0; // FpFamily parameter
  std::function<double(double)> eval;
  std::string id;
  double domain_start = 10.0;

  static BoundaryFunction fp_family(const VarianceModel& model, double c, double p);
  static BoundaryFunction closed_form(std::function<double(double)> f, std::string id,
                                      double domain_start);
  static BoundaryFunction tabulated(std::vector<double> t, std::vector<double> value);
};

enum class Classification { Finite, Infinite, Inconclusive };

/// Outcome of the integral dichotomy test. `classification` Finite certifies
/// P(crossings i.o.) = 0; Infinite certifies probability 1 for recognized
/// families (proved symbolically) and otherwise reports the fitted
/// tail-exponent pattern, which numerics alone cannot turn into a proof.
struct CriterionVerdict {
  double integral = 0.0;       // over [T, T_max]
  double tail_exponent_q = 0.0; // integrand ~ C u^-1 (log u)^-q on the last decades
  double epsilon = 0.0;        // q - 1
  Classification classification = Classification::Inconclusive;
  bool boundary_case = false;  // fp family at p == 0
  bool trusted_window = true;  // f inside [m^{-1}(sqrt(log t)), m^{-1}(sqrt(3 log t))]
  bool trusted_validity = true; // m(f(u)) >= 3 across [T, T_max]
  std::vector<std::pair<double, double>> integrand_samples;
  std::string notes;
};

struct ClassifyOptions {
  int sample_points = 129;
  double epsilon_tolerance = 0.05;
  double quadrature_rel_tol = 1e-8;
};

CriterionVerdict classify(const VarianceModel& model, double c, const BoundaryFunction& f,
                          double T, double T_max, double pickandsH,
                          const ClassifyOptions& opts = {});

/// Default integration start: the point where m(f(T)) reaches 3.
double default_start(const VarianceModel& model, double c, const BoundaryFunction& f);

/// The parameter value separating convergent from divergent boundaries in the
/// f_p family, with the substitution trace that proves it.
struct PhaseBoundary {
  double p_critical = 0.0;
  std::string derivation;
};
PhaseBoundary fp_phase_boundary(const VarianceModel& model, double c);

} // namespace gsq
