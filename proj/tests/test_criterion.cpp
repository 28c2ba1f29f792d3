#include <doctest.h>

#include "gsq/asymptotics.hpp"
#include "gsq/criterion.hpp"
#include "gsq/errors.hpp"

#include <cmath>

using namespace gsq;

TEST_SUITE_BEGIN("criterion");

TEST_CASE("family boundaries follow the analytic phase rule") {
  VarianceModel m = VarianceModel::fbm(0.75);
  double prev_q = 1e9;
  for (double p : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
    BoundaryFunction f = BoundaryFunction::fp_family(m, 1.0, p);
    double T = default_start(m, 1.0, f);
    CriterionVerdict v = classify(m, 1.0, f, T, T * 1e6, 1.0);
    if (p < 0.0)
      CHECK(v.classification == Classification::Finite);
    else
      CHECK(v.classification == Classification::Infinite);
    CHECK(v.boundary_case == (p == 0.0));
    // The fitted exponent carries a finite-horizon shift of order 1/log but
    // must track 1 - p and order strictly across the family.
    CHECK(std::abs(v.tail_exponent_q - (1.0 - p)) <= 0.75);
    CHECK(v.tail_exponent_q < prev_q);
    prev_q = v.tail_exponent_q;
  }
}

TEST_CASE("integral grows with the upper limit") {
  VarianceModel m = VarianceModel::fbm(0.5);
  BoundaryFunction f = BoundaryFunction::fp_family(m, 1.0, 1.0);
  double T = default_start(m, 1.0, f);
  double prev = 0.0;
  for (double Tmax : {1e2 * T, 1e4 * T, 1e6 * T}) {
    CriterionVerdict v = classify(m, 1.0, f, T, Tmax, 1.0);
    CHECK(v.integral >= prev);
    prev = v.integral;
  }
}

TEST_CASE("verdicts survive quadrature refinement") {
  VarianceModel m = VarianceModel::fbm(0.5);
  BoundaryFunction f = BoundaryFunction::fp_family(m, 1.0, -1.0);
  double T = default_start(m, 1.0, f);
  ClassifyOptions coarse, fine;
  fine.quadrature_rel_tol = coarse.quadrature_rel_tol / 2.0;
  CriterionVerdict a = classify(m, 1.0, f, T, T * 1e6, 1.0, coarse);
  CriterionVerdict b = classify(m, 1.0, f, T, T * 1e6, 1.0, fine);
  CHECK(a.classification == b.classification);
  CHECK(std::abs(a.integral - b.integral) <= 1e-3 * std::abs(a.integral));
}

TEST_CASE("default start sits where the validity heuristic turns on") {
  VarianceModel m = VarianceModel::fbm(0.5);
  BoundaryFunction f = BoundaryFunction::fp_family(m, 1.0, 1.0);
  double T = default_start(m, 1.0, f);
  CHECK(m_of_u(m, 1.0, f.eval(T)) == doctest::Approx(3.0).epsilon(1e-4));
}

TEST_CASE("family boundaries stay inside the restricted window") {
  VarianceModel m = VarianceModel::fbm(0.5);
  BoundaryFunction f = BoundaryFunction::fp_family(m, 1.0, 1.0);
  double T = default_start(m, 1.0, f);
  CriterionVerdict v = classify(m, 1.0, f, T, T * 1e6, 1.0);
  CHECK(v.trusted_window);
  CHECK(v.trusted_validity);
}

TEST_CASE("a constant boundary is classified divergent and flagged untrusted") {
  VarianceModel m = VarianceModel::fbm(0.5);
  BoundaryFunction f = BoundaryFunction::closed_form([](double) { return 9.0; },
                                                     "const-9", 10.0);
  CriterionVerdict v = classify(m, 1.0, f, 50.0, 5e7, 1.0);
  CHECK(v.classification == Classification::Infinite);
  CHECK_FALSE(v.trusted_window);
}

TEST_CASE("p-free boundary inside the window diverges") {
  // f(t) = m^{-1}(sqrt(2 log t)): integrand ~ C u^-1 (log u)^{-kappa'} with
  // exponent below one for the square-root input, so the integral diverges.
  VarianceModel m = VarianceModel::fbm(0.5);
  BoundaryFunction f = BoundaryFunction::closed_form(
      [m](double t) { return m_inverse(m, 1.0, std::sqrt(2.0 * std::log(t))); },
      "sqrt-2log", 10.0);
  CriterionVerdict v = classify(m, 1.0, f, 100.0, 1e8, 1.0);
  CHECK(v.classification == Classification::Infinite);
  CHECK(v.trusted_window);
}

TEST_CASE("boundary validation failures") {
  VarianceModel m = VarianceModel::fbm(0.5);
  BoundaryFunction dec = BoundaryFunction::closed_form(
      [](double t) { return 100.0 - 1e-4 * t; }, "decreasing", 10.0);
  CHECK_THROWS_AS(classify(m, 1.0, dec, 50.0, 1e5, 1.0), ModelValidationError);
  BoundaryFunction f = BoundaryFunction::fp_family(m, 1.0, 1.0);
  CHECK_THROWS_AS(classify(m, 1.0, f, 1.0, 1e5, 1.0), DomainError); // T <= e
}

TEST_CASE("tabulated boundaries classify like their source family") {
  VarianceModel m = VarianceModel::fbm(0.5);
  BoundaryFunction fam = BoundaryFunction::fp_family(m, 1.0, 2.0);
  double T = default_start(m, 1.0, fam);
  std::vector<double> ts, vs;
  for (double t = T; t <= T * 1e6 * 1.01; t *= 1.05) {
    ts.push_back(t);
    vs.push_back(fam.eval(t));
  }
  BoundaryFunction tab = BoundaryFunction::tabulated(ts, vs);
  CriterionVerdict v = classify(m, 1.0, tab, T, T * 1e6, 1.0);
  CHECK(v.classification == Classification::Infinite);
}

TEST_CASE("phase boundary sits at zero with a derivation trace") {
  PhaseBoundary pb = fp_phase_boundary(VarianceModel::fbm(0.3), 1.0);
  CHECK(pb.p_critical == 0.0);
  CHECK(pb.derivation.find("v = log u") != std::string::npos);
}

TEST_SUITE_END();
