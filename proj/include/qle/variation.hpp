#pragma once

// First and second variations of the quasi-local energy, numeric families of
// isometric embeddings, a tau-descent optimizer for the optimal-embedding
// equations, and the variational identity suite for surfaces in the slice.

#include "qle/energy.hpp"

#include <future>
#include <string>
#include <vector>

namespace qle {

// ---------------------------------------------------------------------------
// families of isometric embeddings tau(s) = tau + s dtau
// ---------------------------------------------------------------------------

struct FamilyMember {
  double s = 0.0;
  EmbedResult res;
};

struct IsometricFamily {
  std::vector<FamilyMember> members;
  std::string diagnostic;  // nonempty if the family was truncated
};

inline IsometricFamily isometric_family(const PhysicalSurfaceData& data,
                                        const SpacetimeEmbedding& base,
                                        const SurfaceField& dtau,
                                        std::vector<double> svals) {
  IsometricFamily fam;
  // solve in order of increasing |s| (continuation), report in given order
  std::vector<size_t> order(svals.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return std::abs(svals[a]) < std::abs(svals[b]);
  });
  fam.members.resize(svals.size());
  SpacetimeEmbedding warm_pos = base, warm_neg = base;
  for (size_t idx : order) {
    const double s = svals[idx];
    SurfaceField tau{base.grid, base.tau + s * dtau.v};
    SpacetimeEmbedding& warm = (s >= 0.0) ? warm_pos : warm_neg;
    try {
      auto res = isometric_embed_axisym(data.sigma, base.ref, tau, warm);
      warm = res.emb;
      fam.members[idx] = {s, std::move(res)};
    } catch (const std::exception& ex) {
      fam.diagnostic = "family truncated at s = " + std::to_string(s) + ": " +
                       ex.what();
      fam.members.resize(idx);
      break;
    }
  }
  return fam;
}

// Evaluate E(s) along a family, one task per member.
inline std::vector<double> family_energies(const PhysicalSurfaceData& data,
                                           const IsometricFamily& fam) {
  std::vector<std::future<double>> jobs;
  jobs.reserve(fam.members.size());
  for (const auto& m : fam.members)
    jobs.push_back(std::async(std::launch::async, [&data, &m] {
      return quasilocal_energy(data, m.res.emb).energy;
    }));
  std::vector<double> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

// ---------------------------------------------------------------------------
// linearized direction (dtau, dX) with dV induced through the solver
// ---------------------------------------------------------------------------

struct VariationDirection {
  ArrayXd dtau;
  ArrayXd dR, dq;     // slice profile rates
  ArrayXd dV;         // dX^i grad_i V = dR V'(R)
  ArrayXd beta, Pu;   // normal / tangential split of the slice displacement
};

// central differencing of the nonlinear solver with one Richardson step
inline VariationDirection linearize_family(const PhysicalSurfaceData& data,
                                           const SpacetimeEmbedding& base,
                                           const SurfaceField& dtau,
                                           double h = 1e-4) {
  const auto fam =
      isometric_family(data, base, dtau, {h, -h, h / 2.0, -h / 2.0});
  if (!fam.diagnostic.empty())
    throw ConvergenceError("linearize_family: " + fam.diagnostic, 0.0);
  const auto& ep = fam.members[0].res.emb;
  const auto& em = fam.members[1].res.emb;
  const auto& ep2 = fam.members[2].res.emb;
  const auto& em2 = fam.members[3].res.emb;

  VariationDirection dir;
  dir.dtau = dtau.v;
  const ArrayXd dR_h = (ep.R - em.R) / (2.0 * h);
  const ArrayXd dR_h2 = (ep2.R - em2.R) / h;
  dir.dR = (4.0 * dR_h2 - dR_h) / 3.0;
  const ArrayXd dq_h = (ep.q - em.q) / (2.0 * h);
  const ArrayXd dq_h2 = (ep2.q - em2.q) / h;
  dir.dq = (4.0 * dq_h2 - dq_h) / 3.0;

  const auto& g = *base.grid;
  ArrayXd dV(g.size());
  for (int k = 0; k < g.size(); ++k) dV[k] = base.ref->dV(base.R[k]);
  dir.dV = dir.dR * dV;

  // split dXhat = dR d/dR + dTheta d/dTheta into P^u Xhat_u + beta nu
  const ProjectedSurfaceData p = project_surface(base);
  const ProfileDerivs d = profile_derivs(base);
  const ArrayXd dTheta = g.sin_u() * dir.dq;
  const ArrayXd f2 = p.f * p.f;
  dir.beta = dir.dR * p.nu_R / f2 + base.R * base.R * dTheta * p.nu_Th;
  dir.Pu = (dir.dR * d.Rp / f2 + base.R * base.R * dTheta * d.Thp) /
           p.sigma_hat.uu;
  return dir;
}

// ---------------------------------------------------------------------------
// first variation
// ---------------------------------------------------------------------------

struct FirstVariationReport {
  ArrayXd E_V, E_tau;  // coefficient densities of dV and dtau
  double dE = 0.0;     // (1/8pi) int (E_V dV + E_tau dtau) dSigma
  double sup_EV = 0.0, sup_Etau = 0.0;
};

inline FirstVariationReport first_variation_density(
    const PhysicalSurfaceData& data, const SpacetimeEmbedding& emb) {
  data.validate();
  const auto& g = *emb.grid;
  const ProjectedSurfaceData p = project_surface(emb);
  const GaugeData gd = gauge_quantities(emb, p);
  const ProfileDerivs d = profile_derivs(emb);

  const ArrayXd boa = gd.B / gd.A;
  const ArrayXd rho = ((gd.normH0 * gd.normH0 + boa * boa).sqrt() -
                       (data.normH * data.normH + boa * boa).sqrt()) /
                      gd.A;
  const ArrayXd lam =
      safe_asinh_ratio(ArrayXd(rho * gd.B), ArrayXd(gd.normH0 * data.normH));

  const SurfaceVector grad_tau = raise(gd.sigma, SurfaceOneForm{emb.grid, d.taup});
  const SurfaceVector grad_lam =
      grad(gd.sigma, SurfaceField{emb.grid, lam});
  const ArrayXd dtau_dot_dlam = d.taup * grad_lam.u_up;  // sigma(grad,grad)
  const ArrayXd dalpha = data.alpha_H.u_comp - gd.alpha_H0.u_comp;

  FirstVariationReport rep;
  rep.E_V = rho * gd.V * (1.0 + 2.0 * gd.V * gd.V * gd.gradtau2) -
            2.0 * gd.V * dtau_dot_dlam +
            2.0 * gd.V * dalpha * grad_tau.u_up;

  const ArrayXd v2 = gd.V * gd.V;
  SurfaceVector w{emb.grid,
                  v2 * grad_lam.u_up - rho * v2 * v2 * grad_tau.u_up -
                      v2 * dalpha / gd.sigma.uu};
  rep.E_tau = divergence(gd.sigma, w).v;
  rep.sup_EV = rep.E_V.abs().maxCoeff();
  rep.sup_Etau = rep.E_tau.abs().maxCoeff();
  return rep;
}

inline FirstVariationReport first_variation(const PhysicalSurfaceData& data,
                                            const SpacetimeEmbedding& emb,
                                            const SurfaceField& dtau,
                                            double h = 1e-4) {
  FirstVariationReport rep = first_variation_density(data, emb);
  const VariationDirection dir = linearize_family(data, emb, dtau, h);
  const GaugeData gd = gauge_quantities(emb, project_surface(emb));
  rep.dE = integrate(gd.sigma,
                     ArrayXd(rep.E_V * dir.dV + rep.E_tau * dir.dtau)) /
           (8.0 * M_PI);
  return rep;
}

// ---------------------------------------------------------------------------
// second variation at a surface in the static slice
// ---------------------------------------------------------------------------

struct SecondVariationOptions {
  bool fd_check = true;
  double fd_step = 0.02;
  double flag_rel_tol = 0.02;
  const SurfaceField* beta = nullptr;  // sphere-of-symmetry normal variation
  const SurfaceVector* Pu = nullptr;   // matching tangential part
};

struct SecondVariationReport {
  double value = 0.0;       // closed quadratic form, including 1/(8 pi)
  double fd_value = 0.0;    // second differences of E along the family
  double rel_mismatch = 0.0;
  bool flagged = false;
  double stability_term = 0.0;  // nu(V) int beta (-Lap - |h|^2 - Ric(nu,nu)) beta
};

inline SecondVariationReport second_variation(const SpacetimeEmbedding& emb,
                                              const SurfaceField& f,
                                              const SecondVariationOptions& opt = {}) {
  if (emb.tau.abs().maxCoeff() > 1e-12)
    throw std::invalid_argument("second_variation: base surface must lie in the slice");
  const auto& g = *emb.grid;
  const ProjectedSurfaceData p = project_surface(emb);
  const GaugeData gd = gauge_quantities(emb, p);
  if ((gd.normH0 <= 0.0).any())
    throw std::domain_error("second_variation: |H0| must be positive");
  const SurfaceMetric& sig = gd.sigma;  // = sigma_hat at tau = 0

  const ArrayXd fu = g.deriv_u(f.v);
  const ArrayXd v2 = p.V * p.V;
  const ArrayXd divv2f =
      divergence(sig, SurfaceVector{emb.grid, v2 * fu / sig.uu}).v;
  const ArrayXd integrand =
      divv2f * divv2f / (gd.normH0 * p.V) -
      p.V * v2 * p.h_uu * fu * fu / (sig.uu * sig.uu) +
      v2 * (fu * fu / sig.uu) * p.nuV;
  SecondVariationReport rep;
  rep.value = integrate(sig, integrand) / (8.0 * M_PI);

  if (opt.beta) {
    // CMC-sphere stability term: (1/8pi) nu(V) int beta (-Lap beta - (|h|^2 +
    // Ric(nu,nu)) beta) dSigma, with nu(V) constant on a sphere of symmetry
    const ArrayXd& beta = opt.beta->v;
    const ArrayXd habsq = (p.h_uu / sig.uu).square() +
                          (p.h_pp / sig.phiphi).square();
    ArrayXd ricnn(g.size());
    for (int k = 0; k < g.size(); ++k) {
      const double n1 = p.nu_R[k] / p.f[k];
      const double n2 = emb.R[k] * p.nu_Th[k];
      ricnn[k] = emb.ref->ric_rad(emb.R[k]) * n1 * n1 +
                 emb.ref->ric_tan(emb.R[k]) * n2 * n2;
    }
    const ArrayXd lap_beta = laplace(sig, *opt.beta).v;
    const double nuV = p.nuV[0];
    rep.stability_term =
        nuV *
        integrate(sig, ArrayXd(beta * (-lap_beta - (habsq + ricnn) * beta))) /
        (8.0 * M_PI);
    rep.value += rep.stability_term;
  }

  if (opt.fd_check) {
    const auto data = physical_data_from_static(emb.ref, emb);
    const double s = opt.fd_step;
    auto fam = isometric_family(data, emb, f, {s, -s, s / 2.0, -s / 2.0});
    if (!fam.diagnostic.empty())
      throw ConvergenceError("second_variation: " + fam.diagnostic, 0.0);
    const auto E = family_energies(data, fam);
    const double e0 = quasilocal_energy(data, emb).energy;
    const double a1 = (E[0] + E[1] - 2.0 * e0) / (s * s);
    const double a2 = (E[2] + E[3] - 2.0 * e0) / (s * s / 4.0);
    rep.fd_value = (4.0 * a2 - a1) / 3.0;
    rep.rel_mismatch = std::abs(rep.fd_value - rep.value) /
                       std::max(1e-10, std::abs(rep.value));
    rep.flagged = rep.rel_mismatch > opt.flag_rel_tol;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// optimizer: projected gradient descent on the Legendre coefficients of tau
// ---------------------------------------------------------------------------

struct OptimizeOptions {
  int l_max = 8;          // highest Legendre mode of tau varied
  int max_iter = 100;
  double grad_tol = 1e-7;
  double step0 = 1.0;
  double lin_h = 1e-4;
};

struct OptimizeResult {
  SpacetimeEmbedding emb;
  ArrayXd tau_coeff;
  bool converged = false;
  int iterations = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
  double sup_EV = 0.0, sup_Etau = 0.0;
  std::vector<double> energy_history, grad_history;
};

inline OptimizeResult optimize_tau(const PhysicalSurfaceData& data,
                                   const RefPtr& ref, const ArrayXd& tau0,
                                   const OptimizeOptions& opt = {}) {
  const GridPtr grid = data.sigma.grid;
  const int nl = opt.l_max + 1;
  ArrayXd coeff = ArrayXd::Zero(nl);
  coeff.head(std::min<int>(nl, tau0.size())) =
      tau0.head(std::min<int>(nl, tau0.size()));

  auto solve_for = [&](const ArrayXd& c,
                       const SpacetimeEmbedding* warm) -> EmbedResult {
    SurfaceField tau = SurfaceField::from_legendre(grid, c);
    std::optional<SpacetimeEmbedding> w;
    if (warm) w = *warm;
    return isometric_embed_axisym(data.sigma, ref, tau, w);
  };

  OptimizeResult out;
  EmbedResult cur = solve_for(coeff, nullptr);
  double energy = quasilocal_energy(data, cur.emb).energy;

  for (int it = 0; it < opt.max_iter; ++it) {
    out.iterations = it;
    // gradient in coefficient space; mode 0 is a time translation (flat)
    const FirstVariationReport dens = first_variation_density(data, cur.emb);
    const GaugeData gd = gauge_quantities(cur.emb, project_surface(cur.emb));
    ArrayXd grad_c = ArrayXd::Zero(nl);
    for (int l = 1; l < nl; ++l) {
      ArrayXd dc = ArrayXd::Zero(nl);
      dc[l] = 1.0;
      const SurfaceField dtau = SurfaceField::from_legendre(grid, dc);
      const VariationDirection dir =
          linearize_family(data, cur.emb, dtau, opt.lin_h);
      grad_c[l] = integrate(gd.sigma, ArrayXd(dens.E_V * dir.dV +
                                              dens.E_tau * dir.dtau)) /
                  (8.0 * M_PI);
    }
    out.grad_norm = std::sqrt((grad_c * grad_c).sum());
    out.energy_history.push_back(energy);
    out.grad_history.push_back(out.grad_norm);
    if (out.grad_norm <= opt.grad_tol) {
      out.converged = true;
      break;
    }
    // backtracking line search on E
    double t = opt.step0;
    bool moved = false;
    for (int ls = 0; ls < 25; ++ls) {
      const ArrayXd trial = coeff - t * grad_c;
      try {
        EmbedResult next = solve_for(trial, &cur.emb);
        const double e_next = quasilocal_energy(data, next.emb).energy;
        if (e_next <= energy - 1e-4 * t * out.grad_norm * out.grad_norm) {
          coeff = trial;
          cur = std::move(next);
          energy = e_next;
          moved = true;
          break;
        }
      } catch (const std::exception&) {
        // embedding failed for this trial step; shrink
      }
      t *= 0.5;
    }
    if (!moved) break;  // line-search failure: return best iterate
  }

  const FirstVariationReport fin = first_variation_density(data, cur.emb);
  out.emb = cur.emb;
  out.tau_coeff = coeff;
  out.energy = energy;
  out.sup_EV = fin.sup_EV;
  out.sup_Etau = fin.sup_Etau;
  return out;
}

// ---------------------------------------------------------------------------
// variational identities for deformations of a surface in the slice
// ---------------------------------------------------------------------------

struct VariationIdentityReport {
  double dsigma_uu_sup = 0.0;  // first-variation-of-metric formula vs FD
  double dsigma_pp_sup = 0.0;
  double dH_sup = 0.0;         // variation-of-mean-curvature formula vs FD
  double identity_b_abs = 0.0; // int e3(V) beta Hhat = int V (-Lap - Ric(nu,nu)) beta
  double identity_a_abs = 0.0; // tangential counterpart
  double static_residual = 0.0;  // sup |Q(nu,nu)| along the surface
};

inline VariationIdentityReport variation_identity_suite(
    const SpacetimeEmbedding& emb, const SurfaceField& beta,
    const SurfaceVector& Pu, double h = 1e-3) {
  if (emb.tau.abs().maxCoeff() > 1e-12)
    throw std::invalid_argument(
        "variation_identity_suite: base surface must lie in the slice");
  const auto& g = *emb.grid;
  const ProjectedSurfaceData p = project_surface(emb);
  const ProfileDerivs d = profile_derivs(emb);
  const SurfaceMetric& sh = p.sigma_hat;

  // displacement dXhat = P^u Xhat_u + beta nu in profile coordinates
  const ArrayXd dR = Pu.u_up * d.Rp + beta.v * p.nu_R;
  const ArrayXd dq = Pu.reg() * d.Thp + beta.v * (p.nu_Th / g.sin_u());

  auto projected = [&](double s) {
    SpacetimeEmbedding es = emb;
    es.R = emb.R + s * dR;
    es.q = emb.q + s * dq;
    return project_surface(es);
  };

  VariationIdentityReport rep;
  {
    // FD variation of the metric and mean curvature (Richardson)
    const auto pp1 = projected(h), pm1 = projected(-h);
    const auto pp2 = projected(h / 2.0), pm2 = projected(-h / 2.0);
    auto rich = [&](const ArrayXd& f1p, const ArrayXd& f1m, const ArrayXd& f2p,
                    const ArrayXd& f2m) {
      const ArrayXd c1 = (f1p - f1m) / (2.0 * h);
      const ArrayXd c2 = (f2p - f2m) / h;
      return ArrayXd((4.0 * c2 - c1) / 3.0);
    };
    const ArrayXd fd_uu = rich(pp1.sigma_hat.uu, pm1.sigma_hat.uu,
                               pp2.sigma_hat.uu, pm2.sigma_hat.uu);
    const ArrayXd fd_pp = rich(pp1.sigma_hat.phiphi, pm1.sigma_hat.phiphi,
                               pp2.sigma_hat.phiphi, pm2.sigma_hat.phiphi);
    const ArrayXd fd_H = rich(pp1.Hhat, pm1.Hhat, pp2.Hhat, pm2.Hhat);

    // (delta sigma)_ab = 2 beta h_ab + hatnabla_a P_b + hatnabla_b P_a
    const ArrayXd sh_uu_p = g.deriv_u(sh.uu);
    const ArrayXd duPu = g.deriv_u_sin_reg(Pu.reg());  // d_u P^u (smooth)
    const ArrayXd want_uu =
        2.0 * beta.v * p.h_uu + 2.0 * (sh.uu * duPu + 0.5 * sh_uu_p * Pu.u_up);
    const ArrayXd Gpp = sh.phiphi_reg();
    const ArrayXd sh_pp_p =
        -g.sin_u() * g.deriv_x(ArrayXd((1.0 - g.x() * g.x()) * Gpp));
    const ArrayXd want_pp = 2.0 * beta.v * p.h_pp + sh_pp_p * Pu.u_up;
    rep.dsigma_uu_sup = (fd_uu - want_uu).abs().maxCoeff();
    rep.dsigma_pp_sup = (fd_pp - want_pp).abs().maxCoeff();

    // delta Hhat = -Lap beta - (Ric(nu,nu) + |h|^2) beta + P^a nabla_a Hhat
    ArrayXd ricnn(g.size());
    for (int k = 0; k < g.size(); ++k) {
      const double n1 = p.nu_R[k] / p.f[k];
      const double n2 = emb.R[k] * p.nu_Th[k];
      ricnn[k] = emb.ref->ric_rad(emb.R[k]) * n1 * n1 +
                 emb.ref->ric_tan(emb.R[k]) * n2 * n2;
    }
    const ArrayXd habsq =
        (p.h_uu / sh.uu).square() + (p.h_pp / sh.phiphi).square();
    const ArrayXd want_H = -laplace(sh, beta).v - (ricnn + habsq) * beta.v +
                           Pu.u_up * g.deriv_u(p.Hhat);
    rep.dH_sup = (fd_H - want_H).abs().maxCoeff();
  }

  // (iii): int e3(V) beta Hhat dS = int V [-Lap beta - Ric(nu,nu) beta] dS
  {
    ArrayXd ricnn(g.size());
    for (int k = 0; k < g.size(); ++k) {
      const double n1 = p.nu_R[k] / p.f[k];
      const double n2 = emb.R[k] * p.nu_Th[k];
      ricnn[k] = emb.ref->ric_rad(emb.R[k]) * n1 * n1 +
                 emb.ref->ric_tan(emb.R[k]) * n2 * n2;
    }
    const double lhs = integrate(sh, ArrayXd(p.nuV * beta.v * p.Hhat));
    ArrayXd Vs(g.size());
    for (int k = 0; k < g.size(); ++k) Vs[k] = emb.ref->V(emb.R[k]);
    const double rhs =
        integrate(sh, ArrayXd(Vs * (-laplace(sh, beta).v - ricnn * beta.v)));
    rep.identity_b_abs = std::abs(lhs - rhs);
  }

  // (iv): int e3(V) div(P) dS = int V [div(h(P,.)) - Ric(Xhat_c, nu) P^c] dS
  {
    const double lhs = integrate(sh, ArrayXd(p.nuV * divergence(sh, Pu).v));
    ArrayXd Vs(g.size()), ric_tn(g.size());
    for (int k = 0; k < g.size(); ++k) {
      Vs[k] = emb.ref->V(emb.R[k]);
      const double t1 = d.Rp[k] / p.f[k], t2 = emb.R[k] * d.Thp[k];
      const double n1 = p.nu_R[k] / p.f[k], n2 = emb.R[k] * p.nu_Th[k];
      ric_tn[k] = emb.ref->ric_rad(emb.R[k]) * t1 * n1 +
                  emb.ref->ric_tan(emb.R[k]) * t2 * n2;
    }
    // one-form omega_b = P^c h_cb has only omega_u = P^u h_uu
    const SurfaceVector homega{emb.grid, p.h_uu * Pu.u_up / sh.uu};
    const double rhs = integrate(
        sh, ArrayXd(Vs * divergence(sh, homega).v - Vs * ric_tn * Pu.u_up));
    rep.identity_a_abs = std::abs(lhs - rhs);
  }

  // diagnostic: the two identities require Q(nu, .) = 0 along the surface
  {
    ArrayXd qnn(g.size());
    for (int k = 0; k < g.size(); ++k) {
      const double n1 = p.nu_R[k] / p.f[k];
      const double n2 = emb.R[k] * p.nu_Th[k];
      qnn[k] = emb.ref->q_rad(emb.R[k]) * n1 * n1 +
               emb.ref->q_tan(emb.R[k]) * n2 * n2;
    }
    rep.static_residual = qnn.abs().maxCoeff();
  }
  return rep;
}

}  // namespace qle
