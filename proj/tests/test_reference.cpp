#include "qle/reference.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace qle;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1.0);
  return v;
}

}  // namespace

TEST(Reference, MinkowskiIsFlat) {
  auto ref = StaticReference::minkowski();
  for (double R : {0.5, 1.0, 4.0, 25.0}) {
    EXPECT_EQ(ref->V(R), 1.0);
    EXPECT_EQ(ref->ric_rad(R), 0.0);
    EXPECT_EQ(ref->ric_tan(R), 0.0);
    const CurvatureBundle c = curvature_at(*ref, R, 1.1);
    EXPECT_EQ(c.ric_RR, 0.0);
    EXPECT_EQ(c.hessV_RR, 0.0);
    EXPECT_EQ(c.lapV, 0.0);
  }
}

TEST(Reference, SchwarzschildHorizonAndPotential) {
  auto ref = StaticReference::schwarzschild(1.0);
  EXPECT_TRUE(ref->has_horizon());
  EXPECT_NEAR(ref->horizon(), 2.0, 1e-14);
  EXPECT_NEAR(ref->V(3.0), std::sqrt(1.0 / 3.0), 1e-15);
  EXPECT_FALSE(ref->inside(1.9));
  EXPECT_THROW(curvature_at(*ref, 1.5, 1.0), std::domain_error);
}

TEST(Reference, BuildErrors) {
  EXPECT_THROW(StaticReference::schwarzschild(-1.0), std::invalid_argument);
  // 9 Lambda m^2 > 1: no static region between horizons
  EXPECT_THROW(StaticReference::schwarzschild_lambda(1.0, 0.2),
               std::invalid_argument);
  // non-monotone custom table
  EXPECT_THROW(
      StaticReference::custom({1.0, 2.0, 1.5, 3.0}, {1.0, 1.0, 1.0, 1.0}),
      std::invalid_argument);
}

TEST(Reference, CurvatureMatchesFiniteDifferenceOracle) {
  auto ref = StaticReference::schwarzschild(1.0);
  oracle::DiagMetric g{[&](double R) {
    const double f = ref->fmet(R);
    return 1.0 / (f * f);
  }};
  for (double R : {3.0, 4.0, 6.5}) {
    const double u = 1.2;
    const CurvatureBundle c = curvature_at(*ref, R, u);
    EXPECT_NEAR(c.ric_RR, oracle::ricci(g, 0, 0, R, u), 5e-6);
    EXPECT_NEAR(c.ric_uu, oracle::ricci(g, 1, 1, R, u), 5e-6);
    EXPECT_NEAR(c.ric_pp, oracle::ricci(g, 2, 2, R, u), 5e-6);
    auto V = [&](double r) { return ref->V(r); };
    EXPECT_NEAR(c.hessV_RR, oracle::hess(g, V, 0, 0, R, u), 5e-6);
    EXPECT_NEAR(c.hessV_uu, oracle::hess(g, V, 1, 1, R, u), 5e-6);
  }
}

TEST(Reference, CurvatureBundleTraceConsistency) {
  auto ref = StaticReference::schwarzschild_lambda(1.0, 0.01);
  for (double R : {2.5, 4.0, 8.0}) {
    const CurvatureBundle c = curvature_at(*ref, R, 0.9);
    const double trace = c.hessV_RR / c.g_RR + c.hessV_uu / c.g_uu +
                         c.hessV_pp / c.g_pp;
    EXPECT_NEAR(trace, c.lapV, 1e-12 * std::max(1.0, std::abs(c.lapV)));
  }
}

TEST(Reference, VacuumStaticResiduals) {
  // Minkowski with Lambda = 0: residuals vanish identically
  auto mink = StaticReference::minkowski();
  const auto rm = check_vacuum_static(*mink, 0.0);
  EXPECT_EQ(rm.residual_eq1, 0.0);
  EXPECT_EQ(rm.residual_eq2, 0.0);

  auto schw = StaticReference::schwarzschild(1.0);
  const auto rs = check_vacuum_static(*schw, 0.0);
  EXPECT_LT(rs.residual_eq1, 1e-10);
  EXPECT_LT(rs.residual_eq2, 1e-10);
  EXPECT_LT(rs.scalar_curv_max - rs.scalar_curv_min, 1e-10);
  EXPECT_TRUE(rs.has_horizon);
  // |grad V| constant on the horizon, equal to the surface gravity 1/(4m)
  EXPECT_LT(rs.horizon_grad_spread, 1e-5);
  EXPECT_NEAR(rs.horizon_grad_value, 0.25, 1e-4);

  // wrong Lambda is flagged by a strictly positive residual
  const auto rw = check_vacuum_static(*schw, 0.1);
  EXPECT_GT(rw.residual_eq1, 1e-3);
}

TEST(Reference, SchwarzschildDeSitterVacuumResidual) {
  auto ref = StaticReference::schwarzschild_lambda(1.0, 0.01);
  std::mt19937_64 rng(7);
  const double lo = ref->r_min() * 1.01, hi = ref->r_max() * 0.97;
  double worst1 = 0.0, worst2 = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = (rng() >> 11) * 0x1.0p-53;
    const double R = lo + (hi - lo) * t;
    const double v = ref->V(R);
    worst1 = std::max(worst1, std::abs(-0.01 * v - ref->hessV_rad(R) +
                                       v * ref->ric_rad(R)));
    worst1 = std::max(worst1, std::abs(-0.01 * v - ref->hessV_tan(R) +
                                       v * ref->ric_tan(R)));
    worst2 = std::max(worst2, std::abs(ref->lapV(R) + 0.01 * v));
  }
  EXPECT_LT(worst1, 1e-10);
  EXPECT_LT(worst2, 1e-10);
}

TEST(Reference, CustomTableMatchesClosedForm) {
  auto schw = StaticReference::schwarzschild(1.0);
  const auto R = linspace(2.5, 8.0, 1200);
  std::vector<double> V(R.size()), F(R.size());
  for (size_t i = 0; i < R.size(); ++i) {
    V[i] = schw->V(R[i]);
    F[i] = schw->fmet(R[i]);
  }
  auto cust = StaticReference::custom(R, V, F);
  double worst = 0.0;
  for (double r : linspace(2.6, 7.9, 57)) {
    worst = std::max(worst, std::abs(cust->V(r) - schw->V(r)));
    worst = std::max(worst, std::abs(cust->fmet(r) - schw->fmet(r)));
    worst = std::max(worst, std::abs(cust->ric_rad(r) - schw->ric_rad(r)));
    worst = std::max(worst, std::abs(cust->ric_tan(r) - schw->ric_tan(r)));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Reference, CustomTableConvergenceOrder) {
  auto schw = StaticReference::schwarzschild(1.0);
  auto err_at = [&](int n) {
    const auto R = linspace(2.5, 8.0, n);
    std::vector<double> V(R.size()), F(R.size());
    for (size_t i = 0; i < R.size(); ++i) {
      V[i] = schw->V(R[i]);
      F[i] = schw->fmet(R[i]);
    }
    auto cust = StaticReference::custom(R, V, F);
    double worst = 0.0;
    for (double r : linspace(3.0, 7.5, 401)) {
      worst = std::max(worst, std::abs(cust->V(r) - schw->V(r)));
      worst = std::max(worst, std::abs(cust->ric_rad(r) - schw->ric_rad(r)));
    }
    return worst;
  };
  const double e1 = err_at(100), e2 = err_at(200);
  const double order = std::log2(e1 / e2);
  EXPECT_GE(order, 3.0);
}

TEST(Reference, CustomHorizonRootFind) {
  auto schw = StaticReference::schwarzschild(1.0);
  const auto R = linspace(1.8, 6.0, 2000);  // dense near-horizon table
  std::vector<double> V(R.size());
  for (size_t i = 0; i < R.size(); ++i)
    V[i] = (R[i] >= 2.0) ? schw->V(R[i]) : -std::sqrt(2.0 / R[i] - 1.0);
  auto cust = StaticReference::custom(R, V);
  EXPECT_TRUE(cust->has_horizon());
  EXPECT_NEAR(cust->horizon(), 2.0, 1e-2);
}

TEST(NullConvergence, VacuumModelsSaturate) {
  std::vector<std::pair<double, double>> pts;
  for (double R : {2.5, 3.0, 4.0, 6.0, 9.0})
    for (double u : {0.3, 1.0, 2.2}) pts.push_back({R, u});

  auto mink = StaticReference::minkowski();
  EXPECT_NEAR(null_convergence_min_eig(*mink, pts), 0.0, 1e-14);

  auto schw = StaticReference::schwarzschild(1.0);
  EXPECT_NEAR(null_convergence_min_eig(*schw, pts), 0.0, 1e-10);

  auto sds = StaticReference::schwarzschild_lambda(1.0, 0.01);
  EXPECT_NEAR(null_convergence_min_eig(*sds, pts), 0.0, 1e-10);
}

TEST(NullConvergence, ViolatingModelDetected) {
  // V = 1 over the Schwarzschild slice: Q = Ric with minimum eigenvalue
  // -2m/R^3 < 0 (the radial direction)
  auto schw = StaticReference::schwarzschild(1.0);
  const auto R = linspace(2.5, 9.0, 2500);
  std::vector<double> V(R.size(), 1.0), F(R.size());
  for (size_t i = 0; i < R.size(); ++i) F[i] = schw->fmet(R[i]);
  auto bad = StaticReference::custom(R, V, F);

  std::vector<std::pair<double, double>> pts;
  for (double r : {3.0, 4.0, 6.0}) pts.push_back({r, 1.3});
  const double mineig = null_convergence_min_eig(*bad, pts);
  EXPECT_LT(mineig, 0.0);
  EXPECT_NEAR(mineig, -2.0 / 27.0, 1e-4);  // at R = 3, -2m/R^3
}
