#include "qle/energy.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qle;

namespace {

SurfaceField legendre_field(const GridPtr& g, const std::vector<double>& c) {
  ArrayXd cc = ArrayXd::Zero(c.size());
  for (size_t i = 0; i < c.size(); ++i) cc[i] = c[i];
  return SurfaceField::from_legendre(g, cc);
}

// hard-coded V = 1 energy path for the Minkowski-reduction invariant
double flat_energy(const PhysicalSurfaceData& data,
                   const SpacetimeEmbedding& emb) {
  const auto g = emb.grid;
  const ProjectedSurfaceData p = project_surface(emb);
  const ArrayXd taup = g->deriv_u(emb.tau);
  SurfaceMetric sigma{g, p.sigma_hat.uu - taup * taup, p.sigma_hat.phiphi};
  const ArrayXd gradtau2 = taup * taup / sigma.uu;
  const ArrayXd S = (1.0 + gradtau2).sqrt();
  const ArrayXd B =
      divergence(sigma, SurfaceVector{g, taup / sigma.uu}).v;
  const double ref =
      2.0 * M_PI * g->quad_x(p.Hhat * p.sigma_hat.area_reg());
  const ArrayXd bracket =
      (data.normH * data.normH * S * S + B * B).sqrt() -
      B * safe_asinh_ratio(B, ArrayXd(data.normH * S)) -
      data.alpha_H.u_comp * taup / sigma.uu;
  return (ref - integrate(sigma, bracket)) / (8.0 * M_PI);
}

}  // namespace

TEST(Energy, OwnDataGivesZero) {
  auto g = AxiGrid::make(32);
  auto schw = StaticReference::schwarzschild(1.0);
  // a non-round surface with a time graph, its own data
  SpacetimeEmbedding e = SpacetimeEmbedding::coordinate_sphere(
      schw, g, 4.0, legendre_field(g, {0.0, 0.0, 0.15}).v);
  e.R += 0.2 * g->from_legendre((ArrayXd(3) << 0, 0, 1).finished());
  const auto data = physical_data_from_static(schw, e);
  const auto br = quasilocal_energy(data, e);
  EXPECT_NEAR(br.energy, 0.0, 1e-12);
  EXPECT_NEAR(br.graph_energy, 0.0, 1e-12);
}

TEST(Energy, SchwarzschildSphereOverMinkowski) {
  auto g = AxiGrid::make(32);
  auto mink = StaticReference::minkowski();
  const double r0 = 4.0, m = 1.0;
  // physical data of the R0 = 4 coordinate sphere in Schwarzschild m = 1
  const double normH = (2.0 / r0) * std::sqrt(1.0 - 2.0 * m / r0);
  PhysicalSurfaceData data{round_metric(g, r0),
                           ArrayXd::Constant(g->size(), normH),
                           SurfaceOneForm::zero(g)};
  const auto e = SpacetimeEmbedding::coordinate_sphere(mink, g, r0);
  const auto br = quasilocal_energy(data, e);
  const double want = r0 * (1.0 - std::sqrt(0.5));  // Brown-York type value
  EXPECT_NEAR(br.energy, want, 1e-10);
  EXPECT_LT(br.two_path_diff, 1e-12);

  // energy density is constant (2/r0)(1 - sqrt(1/2))
  const auto rho = energy_density(data, e);
  EXPECT_LT((rho.v - (2.0 / r0) * (1.0 - std::sqrt(0.5))).abs().maxCoeff(),
            1e-12);
}

TEST(Energy, IdentityEmbeddingOfSameData) {
  auto g = AxiGrid::make(32);
  auto schw = StaticReference::schwarzschild(1.0);
  const double r0 = 4.0;
  const double normH = (2.0 / r0) * std::sqrt(0.5);
  PhysicalSurfaceData data{round_metric(g, r0),
                           ArrayXd::Constant(g->size(), normH),
                           SurfaceOneForm::zero(g)};
  const auto e = SpacetimeEmbedding::coordinate_sphere(schw, g, r0);
  const auto br = quasilocal_energy(data, e);
  EXPECT_NEAR(br.energy, 0.0, 1e-12);
  const auto rho = energy_density(data, e);
  EXPECT_LT(rho.v.abs().maxCoeff(), 1e-11);
}

TEST(Energy, IsometryPreconditionEnforced) {
  auto g = AxiGrid::make(24);
  auto mink = StaticReference::minkowski();
  PhysicalSurfaceData data{round_metric(g, 4.0),
                           ArrayXd::Constant(g->size(), 0.5),
                           SurfaceOneForm::zero(g)};
  const auto e = SpacetimeEmbedding::coordinate_sphere(mink, g, 4.1);
  EXPECT_THROW(quasilocal_energy(data, e), std::invalid_argument);
  PhysicalSurfaceData bad{round_metric(g, 4.0),
                          ArrayXd::Constant(g->size(), -0.5),
                          SurfaceOneForm::zero(g)};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Energy, WorldDataCrossCheckTimeSymmetric) {
  auto g = AxiGrid::make(32);
  auto world = StaticReference::schwarzschild(1.05);
  auto ref = StaticReference::schwarzschild(1.0);
  const double r0 = 4.0;
  const auto ew = SpacetimeEmbedding::coordinate_sphere(world, g, r0);
  const auto data = physical_data_from_static(world, ew);
  const auto er = SpacetimeEmbedding::coordinate_sphere(ref, g, r0);
  const auto br = quasilocal_energy(data, er);
  EXPECT_GT(br.energy, 0.0);
  // tau = 0, alpha = 0: E = (1/8pi) int V (Hhat_ref - Hhat_world) dSigma
  const double vref = std::sqrt(1.0 - 2.0 / r0);
  const double want = 0.5 * r0 * r0 * vref *
                      ((2.0 / r0) * std::sqrt(1.0 - 2.0 / r0) -
                       (2.0 / r0) * std::sqrt(1.0 - 2.1 / r0));
  EXPECT_NEAR(br.energy, want, 1e-10);
}

TEST(Energy, TimeSymmetricDensityReduction) {
  auto g = AxiGrid::make(32);
  auto world = StaticReference::schwarzschild(1.05);
  auto ref = StaticReference::schwarzschild(1.0);
  const auto ew = SpacetimeEmbedding::coordinate_sphere(world, g, 4.0);
  const auto data = physical_data_from_static(world, ew);
  const auto er = SpacetimeEmbedding::coordinate_sphere(ref, g, 4.0);
  // rho = (|H0| - |H|)/V when B = 0
  const auto rho = energy_density(data, er);
  const auto pd = project_surface(er);
  const ArrayXd want = (pd.Hhat - data.normH) / pd.V;
  EXPECT_LT((rho.v - want).abs().maxCoeff(), 1e-13);
}

TEST(Energy, TwoPathConsistencyWithGraph) {
  auto g = AxiGrid::make(48);
  auto world = StaticReference::schwarzschild(1.05);
  auto ref = StaticReference::schwarzschild(1.0);
  const auto tau_w = legendre_field(g, {0.0, 0.0, 0.1});
  const auto ew = SpacetimeEmbedding::coordinate_sphere(world, g, 4.0, tau_w.v);
  const auto data = physical_data_from_static(world, ew);
  // embed data.sigma into the reference with a different tau
  const auto tau_r = legendre_field(g, {0.0, 0.05, 0.08});
  const auto res = isometric_embed_axisym(data.sigma, ref, tau_r);
  const auto br = quasilocal_energy(data, res.emb);
  EXPECT_LT(br.two_path_diff, 1e-10);
  EXPECT_LT(br.isometry_mismatch, 1e-8);
}

TEST(Energy, TimeTranslationInvariance) {
  auto g = AxiGrid::make(32);
  auto world = StaticReference::schwarzschild(1.05);
  auto ref = StaticReference::schwarzschild(1.0);
  const auto ew = SpacetimeEmbedding::coordinate_sphere(
      world, g, 4.0, legendre_field(g, {0.0, 0.0, 0.1}).v);
  const auto data = physical_data_from_static(world, ew);
  const auto res = isometric_embed_axisym(data.sigma, ref,
                                          legendre_field(g, {0.0, 0.0, 0.1}));
  const auto e1 = quasilocal_energy(data, res.emb);
  auto shifted = res.emb;
  shifted.tau += 2.3;
  const auto e2 = quasilocal_energy(data, shifted);
  EXPECT_NEAR(e1.energy, e2.energy, 1e-12);
}

TEST(Energy, MinkowskiReductionHardCodedPath) {
  auto g = AxiGrid::make(40);
  auto mink = StaticReference::minkowski();
  // physical data from a flat-space graph surface
  const auto ew = SpacetimeEmbedding::coordinate_sphere(
      mink, g, 1.0, legendre_field(g, {0.0, 0.1, 0.05}).v);
  const auto data = physical_data_from_static(mink, ew);
  // different embedding of the same metric
  const auto res = isometric_embed_axisym(
      data.sigma, mink, legendre_field(g, {0.0, 0.02}));
  const auto br = quasilocal_energy(data, res.emb);
  EXPECT_NEAR(br.energy, flat_energy(data, res.emb), 1e-12);
}

TEST(Energy, FlatGraphDataMatchesOracleNorm) {
  auto g = AxiGrid::make(32);
  auto mink = StaticReference::minkowski();
  const auto ew = SpacetimeEmbedding::coordinate_sphere(
      mink, g, 1.0, ArrayXd(0.1 * g->x()));
  const auto data = physical_data_from_static(mink, ew);
  const auto gd = gauge_quantities(ew, project_surface(ew));
  EXPECT_LT((data.normH - gd.normH0).abs().maxCoeff(), 1e-14);
  EXPECT_GT(data.normH.minCoeff(), 0.0);
}
