#pragma once

// Quasi-local energy of a physical surface relative to a static reference:
// the surface-Hamiltonian difference, its graph-form rewriting, the energy
// density, and generation of physical data (sigma, |H|, alpha_H) from
// surfaces in static "world" spacetimes.

#include "qle/embedding.hpp"

namespace qle {

struct PhysicalSurfaceData {
  SurfaceMetric sigma;   // induced (spacetime) metric of the physical surface
  ArrayXd normH;         // |H| > 0, spacelike mean curvature assumed
  SurfaceOneForm alpha_H;

  void validate() const {
    if ((normH <= 0.0).any())
      throw std::invalid_argument(
          "physical data: |H| must be positive (spacelike mean curvature)");
  }
};

// sigma = induced spacetime metric; |H|, alpha_H from the gauge machinery
// run against the world spacetime the embedding lives in.
inline PhysicalSurfaceData physical_data_from_static(
    const RefPtr& world, const SpacetimeEmbedding& emb) {
  if (emb.ref.get() != world.get())
    throw std::invalid_argument(
        "physical_data_from_static: embedding does not live in the given world");
  const ProjectedSurfaceData p = project_surface(emb);
  const GaugeData gd = gauge_quantities(emb, p);
  PhysicalSurfaceData d{gd.sigma, gd.normH0, gd.alpha_H0};
  d.validate();
  return d;
}

struct EnergyBreakdown {
  double reference_term = 0.0;  // int V Hhat dSigma_hat
  double physical_term = 0.0;   // physical bracket integral
  double energy = 0.0;          // (reference - physical) / (8 pi)
  ArrayXd reference_density;    // integrand of the reference term (on Sigma)
  ArrayXd physical_density;
  double graph_energy = 0.0;    // the same energy via the graph form
  double two_path_diff = 0.0;   // |energy - graph_energy|
  double isometry_mismatch = 0.0;
};

constexpr double kIsometryTol = 1e-8;

// the bracket integrand common to both forms of the energy, with the norm of
// the mean curvature vector as input
inline ArrayXd energy_bracket(const GaugeData& gd, const ArrayXd& normH,
                              const SurfaceOneForm& alpha, const ArrayXd& taup) {
  const ArrayXd root =
      (normH * normH * gd.A * gd.A + gd.B * gd.B).sqrt();
  const ArrayXd s = safe_asinh_ratio(gd.B, ArrayXd(normH * gd.A));
  const ArrayXd alpha_gradtau = alpha.u_comp * taup / gd.sigma.uu;
  return root - gd.B * s - gd.V * gd.V * alpha_gradtau;
}

inline EnergyBreakdown quasilocal_energy(const PhysicalSurfaceData& data,
                                         const SpacetimeEmbedding& emb) {
  data.validate();
  require_same_grid(data.sigma.grid, emb.grid, "quasilocal_energy");
  const auto& g = *emb.grid;
  const ProjectedSurfaceData p = project_surface(emb);
  const GaugeData gd = gauge_quantities(emb, p);
  const ProfileDerivs d = profile_derivs(emb);

  EnergyBreakdown out;
  out.isometry_mismatch =
      std::max((gd.sigma.uu - data.sigma.uu).abs().maxCoeff(),
               (gd.sigma.phiphi - data.sigma.phiphi).abs().maxCoeff());
  if (out.isometry_mismatch > kIsometryTol)
    throw std::invalid_argument(
        "quasilocal_energy: embedding is not an isometric embedding of the "
        "data metric (pullback mismatch " +
        std::to_string(out.isometry_mismatch) + ")");

  out.reference_density = gd.V * p.Hhat;
  out.reference_term =
      2.0 * M_PI * g.quad_x(out.reference_density * p.sigma_hat.area_reg());
  out.physical_density = energy_bracket(gd, data.normH, data.alpha_H, d.taup);
  out.physical_term = integrate(gd.sigma, out.physical_density);
  out.energy = (out.reference_term - out.physical_term) / (8.0 * M_PI);

  const ArrayXd ref_bracket = energy_bracket(gd, gd.normH0, gd.alpha_H0, d.taup);
  out.graph_energy =
      (integrate(gd.sigma, ref_bracket) - out.physical_term) / (8.0 * M_PI);
  out.two_path_diff = std::abs(out.energy - out.graph_energy);
  return out;
}

// rho = [sqrt(|H0|^2 + B^2/A^2) - sqrt(|H|^2 + B^2/A^2)] / A
// (B^2/(V^2 + V^4 |grad tau|^2) = (B/A)^2)
inline SurfaceField energy_density(const PhysicalSurfaceData& data,
                                   const SpacetimeEmbedding& emb) {
  data.validate();
  const ProjectedSurfaceData p = project_surface(emb);
  const GaugeData gd = gauge_quantities(emb, p);
  const ArrayXd boa = gd.B / gd.A;
  const ArrayXd rho = ((gd.normH0 * gd.normH0 + boa * boa).sqrt() -
                       (data.normH * data.normH + boa * boa).sqrt()) /
                      gd.A;
  return {emb.grid, rho};
}

}  // namespace qle
