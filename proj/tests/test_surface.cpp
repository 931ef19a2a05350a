#include "qle/surface.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qle;

namespace {

SurfaceField legendre_field(const GridPtr& g, int l, double amp = 1.0) {
  ArrayXd c = ArrayXd::Zero(l + 1);
  c[l] = amp;
  return SurfaceField::from_legendre(g, c);
}

// a smooth non-round axisymmetric metric for generic checks
SurfaceMetric bumpy_metric(const GridPtr& g) {
  const ArrayXd x = g->x();
  const ArrayXd r2 = (1.0 + 0.1 * x + 0.05 * (1.5 * x * x - 0.5)).square();
  return {g, r2 * (1.0 + 0.03 * x), r2 * (1.0 - x * x)};
}

}  // namespace

TEST(Calculus, LaplaceRoundSphereEllOne) {
  auto g = AxiGrid::make(24);
  const SurfaceMetric m = round_metric(g, 1.0);
  const SurfaceField f{g, g->x()};  // cos u
  const SurfaceField lf = laplace(m, f);
  EXPECT_LT((lf.v + 2.0 * g->x()).abs().maxCoeff(), 1e-11);
}

TEST(Calculus, ConstantField) {
  auto g = AxiGrid::make(24);
  const SurfaceMetric m = bumpy_metric(g);
  const SurfaceField f = SurfaceField::constant(g, 3.7);
  EXPECT_LT(grad(m, f).u_up.abs().maxCoeff(), 1e-11);
  EXPECT_LT(laplace(m, f).v.abs().maxCoeff(), 1e-10);
}

TEST(Calculus, LegendreEigenfunctionOnRoundSphere) {
  auto g = AxiGrid::make(24);
  const double r0 = 2.5;
  const SurfaceMetric m = round_metric(g, r0);
  const SurfaceField p2 = legendre_field(g, 2);
  EXPECT_NEAR(integrate(m, p2), 0.0, 1e-12);
  const SurfaceField lp = laplace(m, p2);
  EXPECT_LT((lp.v + 6.0 / (r0 * r0) * p2.v).abs().maxCoeff(), 1e-11);
}

TEST(Calculus, DivergenceIntegratesToZero) {
  auto g = AxiGrid::make(28);
  const SurfaceMetric m = bumpy_metric(g);
  // a regular vector field W^u = sin u * smooth(x)
  const ArrayXd wreg = 0.8 + 0.4 * g->x() + 0.3 * g->x().square();
  const SurfaceVector w{g, g->sin_u() * wreg};
  const SurfaceField dv = divergence(m, w);
  EXPECT_NEAR(integrate(m, dv), 0.0, 1e-11);
}

TEST(Calculus, IntegrationByParts) {
  auto g = AxiGrid::make(32);
  const SurfaceMetric m = bumpy_metric(g);
  ArrayXd fc = ArrayXd::Zero(5);
  fc << 0.2, 0.7, -0.3, 0.1, 0.05;
  const SurfaceField f = SurfaceField::from_legendre(g, fc);
  const ArrayXd wreg = 0.5 - 0.2 * g->x() + 0.15 * g->x().square();
  const SurfaceVector w{g, g->sin_u() * wreg};
  const double lhs = integrate(m, SurfaceField{g, f.v * divergence(m, w).v});
  // <grad f, W> = f_u W^u
  const double rhs = -integrate(m, SurfaceField{g, g->deriv_u(f.v) * w.u_up});
  EXPECT_NEAR(lhs, rhs, 1e-10);
}

TEST(Calculus, DivGradEqualsLaplace) {
  auto g = AxiGrid::make(24);
  const SurfaceMetric m = bumpy_metric(g);
  ArrayXd fc = ArrayXd::Zero(4);
  fc << 0.0, 0.3, 0.5, -0.2;
  const SurfaceField f = SurfaceField::from_legendre(g, fc);
  const SurfaceField a = laplace(m, f);
  const SurfaceField b = divergence(m, grad(m, f));
  EXPECT_LT((a.v - b.v).abs().maxCoeff(), 1e-13);
}

TEST(Calculus, SpectralConvergence) {
  // laplace of exp(x) on the unit sphere has the closed form
  // d/dx[(1-x^2) e^x] = (1 - 2x - x^2 + ...) ... = ((1-x^2) - 2x) e^x
  auto err = [](int n) {
    auto g = AxiGrid::make(n);
    const SurfaceMetric m = round_metric(g, 1.0);
    const SurfaceField f{g, (3.0 * g->x()).exp()};
    const ArrayXd want =
        3.0 * (3.0 * (1.0 - g->x().square()) - 2.0 * g->x()) * (3.0 * g->x()).exp();
    return (laplace(m, f).v - want).abs().maxCoeff();
  };
  const double e10 = err(10), e16 = err(16), e28 = err(28);
  EXPECT_GT(e10, 1e-4);
  EXPECT_LT(e16, 1e-4);
  EXPECT_GT(e16, e28);
  EXPECT_LT(e28, 1e-9);
}

TEST(SafeAsinh, TrivialAndOracleValues) {
  auto g = AxiGrid::make(8);
  const SurfaceField zero = SurfaceField::constant(g, 0.0);
  const SurfaceField one = SurfaceField::constant(g, 1.0);
  EXPECT_LT(safe_asinh_ratio(zero, one).v.abs().maxCoeff(), 1e-15);
  // asinh(1) = log(1 + sqrt(2))
  EXPECT_NEAR(safe_asinh_scalar(1.0, 1.0), 0.8813735870195430, 1e-15);
  // large ratio: asinh(1e9) ~ log(2e9), relative agreement to 1e-12
  const double big = safe_asinh_scalar(1e9, 1.0);
  EXPECT_NEAR(big / std::log(2e9), 1.0, 1e-12);
  EXPECT_THROW(safe_asinh_scalar(1.0, 0.0), std::domain_error);
  EXPECT_THROW(safe_asinh_scalar(1.0, -2.0), std::domain_error);
}

TEST(Validation, PoleRegularityRejected) {
  auto g = AxiGrid::make(24);
  // sigma_phiphi ~ sin u is not a regular axisymmetric metric
  SurfaceMetric bad{g, ArrayXd::Constant(g->size(), 1.0), g->sin_u()};
  EXPECT_THROW(validate_metric(bad), std::invalid_argument);
  // and a regular one passes
  EXPECT_NO_THROW(validate_metric(round_metric(g, 2.0)));
  SurfaceMetric neg{g, ArrayXd::Constant(g->size(), -1.0),
                    g->sin_u() * g->sin_u()};
  EXPECT_THROW(validate_metric(neg), std::invalid_argument);
}

TEST(Validation, GridMismatchRejected) {
  auto g1 = AxiGrid::make(16);
  auto g2 = AxiGrid::make(20);
  const SurfaceMetric m = round_metric(g1, 1.0);
  const SurfaceField f = SurfaceField::constant(g2, 1.0);
  EXPECT_THROW(grad(m, f), std::invalid_argument);
}
