#pragma once

// Geometry of an embedded surface X = (tau, X^i) in a static reference:
// the projected surface in the static slice, its extrinsic data, the frames
// {e3, e4}, the gauge quantities (A, B, theta, |H0|, alpha_{H0}), and the
// axisymmetric isometric embedding solver.
//
// Profile representation: R(u) = sum r_l P_l(cos u) and
// Theta(u) = u + sin(u) * sum q_l P_l(cos u), so pole regularity
// (R'(0) = R'(pi) = 0, Theta(0) = 0, Theta(pi) = pi) is built into the basis.

#include "qle/reference.hpp"
#include "qle/surface.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace qle {

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_ = 0.0;
};

struct SpacetimeEmbedding {
  RefPtr ref;
  GridPtr grid;
  ArrayXd tau;  // time function at nodes
  ArrayXd R;    // radial profile at nodes
  ArrayXd q;    // polar profile: Theta = u + sin(u) q

  ArrayXd theta_slice() const { return grid->u() + grid->sin_u() * q; }

  void validate() const {
    for (int k = 0; k < grid->size(); ++k)
      if (!ref->inside(R[k]))
        throw std::domain_error("embedding leaves the reference domain (V <= 0)");
  }

  static SpacetimeEmbedding coordinate_sphere(const RefPtr& ref,
                                              const GridPtr& g, double r0,
                                              ArrayXd tau = {}) {
    if (tau.size() == 0) tau = ArrayXd::Zero(g->size());
    SpacetimeEmbedding e{ref, g, std::move(tau),
                         ArrayXd::Constant(g->size(), r0),
                         ArrayXd::Zero(g->size())};
    e.validate();
    return e;
  }
};

// First and second parameter derivatives of the profile, with the smooth /
// sin(u)-regular split made explicit.
struct ProfileDerivs {
  ArrayXd Rp, Rpp;      // R' (carries sin u), R'' (smooth)
  ArrayXd Th, Thp, Thpp;  // Theta, Theta' (smooth), Theta'' (carries sin u)
  ArrayXd taup, taupp;  // tau' (carries sin u), tau'' (smooth)
  ArrayXd sin_th;       // sin(Theta)
  ArrayXd sin_th_reg;   // sin(Theta)/sin(u), smooth
  ArrayXd cos_th;
};

inline ProfileDerivs profile_derivs(const SpacetimeEmbedding& e) {
  const auto& g = *e.grid;
  ProfileDerivs d;
  d.Rp = g.deriv_u(e.R);
  d.Rpp = g.deriv_uu(e.R);
  const ArrayXd p = g.deriv_u_sin_reg(e.q);  // d/du of sin(u) q, smooth
  d.Thp = 1.0 + p;
  d.Thpp = g.deriv_u(p);
  d.Th = g.u() + g.sin_u() * e.q;
  d.taup = g.deriv_u(e.tau);
  d.taupp = g.deriv_uu(e.tau);
  d.sin_th = d.Th.sin();
  d.cos_th = d.Th.cos();
  // sin(Theta)/sin(u) = cos(s q) + cos(u) q sinc(s q), with s = sin(u)
  const ArrayXd sq = g.sin_u() * e.q;
  ArrayXd sinc(sq.size());
  for (int k = 0; k < sq.size(); ++k)
    sinc[k] = std::abs(sq[k]) < 1e-8 ? 1.0 - sq[k] * sq[k] / 6.0
                                     : std::sin(sq[k]) / sq[k];
  d.sin_th_reg = sq.cos() + g.x() * e.q * sinc;
  return d;
}

struct ProjectedSurfaceData {
  SurfaceMetric sigma_hat;
  ArrayXd h_uu, h_pp;    // second fundamental form (outward normal)
  ArrayXd h_pp_reg;      // h_pp / sin^2(u)
  ArrayXd Hhat;          // mean curvature of the projected surface
  ArrayXd nu_R, nu_Th;   // outward unit normal components in the slice
  ArrayXd nuV;           // e3(V) = nu(V)
  ArrayXd V, dV, f, df;  // reference data along the surface
};

inline ProjectedSurfaceData project_surface(const SpacetimeEmbedding& e) {
  e.validate();
  const auto& g = *e.grid;
  const int n = g.size();
  const ProfileDerivs d = profile_derivs(e);

  ProjectedSurfaceData p;
  p.V.resize(n); p.dV.resize(n); p.f.resize(n); p.df.resize(n);
  for (int k = 0; k < n; ++k) {
    p.V[k] = e.ref->V(e.R[k]);
    p.dV[k] = e.ref->dV(e.R[k]);
    p.f[k] = e.ref->fmet(e.R[k]);
    p.df[k] = e.ref->dfmet(e.R[k]);
  }

  const ArrayXd f2 = p.f * p.f;
  const ArrayXd s2 = 1.0 - g.x() * g.x();

  SurfaceMetric sh;
  sh.grid = e.grid;
  sh.uu = d.Rp * d.Rp / f2 + e.R * e.R * d.Thp * d.Thp;
  sh.phiphi = e.R * e.R * d.sin_th * d.sin_th;
  if ((sh.uu <= 0.0).any() || (d.sin_th_reg <= 0.0).any())
    throw std::domain_error("project_surface: degenerate (non-immersed) profile");
  p.sigma_hat = sh;

  // outward unit normal: covariant direction (Theta', -R')
  const ArrayXd nn = (f2 * d.Thp * d.Thp + d.Rp * d.Rp / (e.R * e.R)).sqrt();
  p.nu_R = f2 * d.Thp / nn;
  p.nu_Th = -d.Rp / (e.R * e.R * nn);
  p.nuV = p.nu_R * p.dV;

  // h_ab = -<nabla_{X_a} X_b, nu>; coordinate spheres get positive Hhat
  const ArrayXd aR = d.Rpp - (p.df / p.f) * d.Rp * d.Rp - e.R * f2 * d.Thp * d.Thp;
  const ArrayXd aTh = d.Thpp + 2.0 * d.Rp * d.Thp / e.R;
  p.h_uu = (d.Rp * aTh - d.Thp * aR) / nn;
  p.h_pp = (d.Thp * e.R * f2 * d.sin_th * d.sin_th -
            d.Rp * d.sin_th * d.cos_th) / nn;
  p.h_pp_reg = (d.Thp * e.R * f2 * d.sin_th_reg * d.sin_th_reg +
                g.deriv_x(e.R) * d.sin_th_reg * d.cos_th) / nn;
  // (using R'/sin u = -dR/dx for the regular part)
  p.Hhat = p.h_uu / sh.uu + p.h_pp_reg / (sh.phiphi / s2);
  return p;
}

struct GaugeData {
  SurfaceMetric sigma;      // induced spacetime metric of Sigma
  ArrayXd tau_u;            // (d tau)_u
  ArrayXd gradtau2;         // |grad tau|^2 with respect to sigma
  ArrayXd A, B;             // A = V sqrt(1 + V^2 |grad tau|^2), B = div(V^2 grad tau)
  ArrayXd P;                // -<H0, e3>
  ArrayXd normH0;           // |H0|
  ArrayXd theta;            // gauge angle
  SurfaceOneForm alpha_e3;
  SurfaceOneForm alpha_H0;
  ArrayXd V;                // static potential along the surface
};

inline GaugeData gauge_quantities(const SpacetimeEmbedding& e,
                                  const ProjectedSurfaceData& p) {
  const auto& g = *e.grid;
  const ProfileDerivs d = profile_derivs(e);

  GaugeData gd;
  gd.V = p.V;
  gd.tau_u = d.taup;
  gd.sigma.grid = e.grid;
  gd.sigma.uu = p.sigma_hat.uu - p.V * p.V * d.taup * d.taup;
  gd.sigma.phiphi = p.sigma_hat.phiphi;
  if ((gd.sigma.uu <= 0.0).any())
    throw std::domain_error("gauge_quantities: surface is not spacelike");

  gd.gradtau2 = d.taup * d.taup / gd.sigma.uu;
  const ArrayXd S = (1.0 + p.V * p.V * gd.gradtau2).sqrt();
  gd.A = p.V * S;

  // B = div_sigma(V^2 grad_sigma tau)
  SurfaceVector w{e.grid, p.V * p.V * d.taup / gd.sigma.uu};
  gd.B = divergence(gd.sigma, w).v;

  // connection one-form of the frame {e3, e4} along the surface
  gd.alpha_e3.grid = e.grid;
  gd.alpha_e3.u_comp =
      S * (p.V * d.taup * p.h_uu / p.sigma_hat.uu - p.nuV * d.taup);

  // P = -<H0, e3> = Hhat + V alpha_{e3}(grad tau)/sqrt(1 + V^2|grad tau|^2)
  const ArrayXd alpha_gradtau = gd.alpha_e3.u_comp * d.taup / gd.sigma.uu;
  gd.P = p.Hhat + p.V * alpha_gradtau / S;

  const ArrayXd h0sq = gd.P * gd.P - (gd.B / gd.A) * (gd.B / gd.A);
  for (int k = 0; k < h0sq.size(); ++k) {
    if (!(gd.P[k] > 0.0) || !(h0sq[k] > 0.0)) {
      std::ostringstream os;
      os << "mean curvature not spacelike at u = " << g.u()[k]
         << " (P = " << gd.P[k] << ", |B|/A = " << std::abs(gd.B[k] / gd.A[k])
         << ")";
      throw std::domain_error(os.str());
    }
  }
  gd.normH0 = h0sq.sqrt();
  gd.theta = safe_asinh_ratio(ArrayXd(-gd.B), ArrayXd(gd.normH0 * gd.A));
  gd.alpha_H0.grid = e.grid;
  gd.alpha_H0.u_comp = gd.alpha_e3.u_comp - g.deriv_u(gd.theta);
  return gd;
}

// ---------------------------------------------------------------------------
// Isometric embedding solver: find (R, Theta) with pullback slice metric
//   R'^2/f(R)^2 + R^2 Theta'^2 = sigma_uu + V(R)^2 tau'^2,
//   R^2 sin^2(Theta)          = sigma_phiphi,
// by Newton iteration on the Legendre coefficients of R and q.
// ---------------------------------------------------------------------------

struct EmbedOptions {
  int max_iter = 60;
  double tol = 1e-11;        // sup-norm of the scaled residual
  double accept_tol = 1e-9;  // hard failure above this
};

struct EmbedResult {
  SpacetimeEmbedding emb;
  int iterations = 0;
  double residual = 0.0;       // final scaled residual
  double metric_mismatch = 0.0;  // sup |pullback - target| over components
};

namespace detail {

struct EmbedWork {
  GridPtr grid;
  RefPtr ref;
  ArrayXd sig_uu, sqrt_phiphi, taup2;
  MatrixXd pval, pdx;  // P_l and dP_l/dx at the nodes

  // residual and Jacobian at coefficient vector z = (rho, q)
  void eval(const VectorXd& z, VectorXd& F, MatrixXd* J) const {
    const auto& g = *grid;
    const int n = g.size();
    const ArrayXd rho = z.head(n).array();
    const ArrayXd qc = z.tail(n).array();
    const ArrayXd R = pval * rho.matrix();
    const ArrayXd Rx = pdx * rho.matrix();
    const ArrayXd qn = pval * qc.matrix();
    const ArrayXd qx = pdx * qc.matrix();
    const ArrayXd su = g.sin_u();
    const ArrayXd x = g.x();
    const ArrayXd Rp = -su * Rx;
    const ArrayXd Thp = 1.0 + x * qn - (1.0 - x * x) * qx;
    const ArrayXd Th = g.u() + su * qn;
    const ArrayXd sth = Th.sin();
    const ArrayXd cth = Th.cos();

    ArrayXd f(n), df(n), V(n), VdV(n);
    for (int k = 0; k < n; ++k) {
      if (!ref->inside(R[k])) throw std::domain_error(
          "isometric embedding: profile left the reference domain");
      f[k] = ref->fmet(R[k]);
      df[k] = ref->dfmet(R[k]);
      V[k] = ref->V(R[k]);
      VdV[k] = ref->VdV(R[k]);
    }
    const ArrayXd f2 = f * f;
    const ArrayXd scale = 1.0 / (2.0 * sig_uu.sqrt());

    F.resize(2 * n);
    F.head(n) = (R * sth - sqrt_phiphi).matrix();
    F.tail(n) = (scale * (Rp * Rp / f2 + R * R * Thp * Thp - sig_uu -
                          V * V * taup2)).matrix();
    if (!J) return;

    J->setZero(2 * n, 2 * n);
    for (int l = 0; l < n; ++l) {
      for (int k = 0; k < n; ++k) {
        const double Pl = pval(k, l);
        const double Plx = pdx(k, l);
        const double dRp = -su[k] * Plx;
        const double dThp = x[k] * Pl - (1.0 - x[k] * x[k]) * Plx;
        (*J)(k, l) = Pl * sth[k];
        (*J)(k, n + l) = R[k] * cth[k] * su[k] * Pl;
        (*J)(n + k, l) =
            scale[k] * (2.0 * Rp[k] * dRp / f2[k] -
                        2.0 * Rp[k] * Rp[k] * df[k] / (f2[k] * f[k]) * Pl +
                        2.0 * R[k] * Thp[k] * Thp[k] * Pl -
                        2.0 * VdV[k] * taup2[k] * Pl);
        (*J)(n + k, n + l) = scale[k] * 2.0 * R[k] * R[k] * Thp[k] * dThp;
      }
    }
  }
};

}  // namespace detail

inline EmbedResult isometric_embed_axisym(
    const SurfaceMetric& target, const RefPtr& ref, const SurfaceField& tau,
    std::optional<SpacetimeEmbedding> guess = std::nullopt,
    const EmbedOptions& opt = {}) {
  validate_metric(target);
  require_same_grid(target.grid, tau.grid, "isometric_embed_axisym");
  const auto& g = *target.grid;
  const int n = g.size();

  detail::EmbedWork w;
  w.grid = target.grid;
  w.ref = ref;
  w.sig_uu = target.uu;
  w.sqrt_phiphi = target.phiphi.sqrt();
  const ArrayXd taup = g.deriv_u(tau.v);
  w.taup2 = taup * taup;
  w.pval.resize(n, n);
  w.pdx.resize(n, n);
  {
    std::vector<double> p(n);
    for (int k = 0; k < n; ++k) {
      legendre_all(g.x()[k], n - 1, p.data());
      for (int l = 0; l < n; ++l) {
        w.pval(k, l) = p[l];
        w.pdx(k, l) = legendre_dp(l, g.x()[k]);
      }
    }
  }

  VectorXd z = VectorXd::Zero(2 * n);
  if (guess) {
    z.head(n) = g.to_legendre(guess->R).matrix();
    z.tail(n) = g.to_legendre(guess->q).matrix();
  } else {
    // coordinate sphere of equal area
    const double r0 = std::sqrt(target.area() / (4.0 * M_PI));
    z[0] = r0;
  }

  VectorXd F;
  MatrixXd J;
  double res = 0.0;
  int used = 0;
  bool converged = false;
  for (int it = 0; it <= opt.max_iter; ++it) {
    w.eval(z, F, &J);
    res = F.lpNorm<Eigen::Infinity>();
    if (res < opt.tol) {
      used = it;
      converged = true;
      break;
    }
    if (it == opt.max_iter) break;
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(J);
    cod.setThreshold(1e-10);
    const VectorXd step = cod.solve(-F);
    // backtracking line search on the residual norm
    double t = 1.0;
    const double base = F.norm();
    bool ls_ok = false;
    VectorXd Ftrial;
    for (int ls = 0; ls < 25; ++ls) {
      try {
        w.eval(z + t * step, Ftrial, nullptr);
        if (Ftrial.norm() < (1.0 - 1e-4 * t) * base) {
          ls_ok = true;
          break;
        }
      } catch (const std::domain_error&) {
        // profile left the domain; shrink
      }
      t *= 0.5;
    }
    if (!ls_ok) break;  // stagnated (possibly at the round-off floor)
    z += t * step;
    used = it + 1;
  }
  if (!converged && res > opt.accept_tol)
    throw ConvergenceError(
        "isometric embedding: Newton did not converge (target may not be "
        "embeddable in the radial range)", res);

  SpacetimeEmbedding emb{ref, target.grid, tau.v,
                         ArrayXd(w.pval * z.head(n)),
                         ArrayXd(w.pval * z.tail(n))};
  emb.validate();

  // pullback mismatch against the (V-closed) target
  const ProfileDerivs d = profile_derivs(emb);
  ArrayXd V(n), f(n);
  for (int k = 0; k < n; ++k) {
    V[k] = ref->V(emb.R[k]);
    f[k] = ref->fmet(emb.R[k]);
  }
  const ArrayXd uu = d.Rp * d.Rp / (f * f) + emb.R * emb.R * d.Thp * d.Thp;
  const ArrayXd pp = emb.R * emb.R * d.sin_th * d.sin_th;
  const double mm =
      std::max((uu - target.uu - V * V * w.taup2).abs().maxCoeff(),
               (pp - target.phiphi).abs().maxCoeff());

  return {std::move(emb), used, res, mm};
}

// ---------------------------------------------------------------------------
// Independent spacetime path: mean curvature vector of Sigma in the static
// chart, the frames {e3, e4}, and alpha_{e3} from covariant differentiation.
// Used by the identity suite; the production gauge path is algebraic.
// ---------------------------------------------------------------------------

struct SpacetimeFrameData {
  ArrayXd H0_t, H0_R, H0_Th;  // mean curvature vector components
  ArrayXd normH0;             // sqrt(<H0,H0>)
  ArrayXd H0_dot_e3;
  ArrayXd alpha_e3_u;         // <D_u e3, e4>
  ArrayXd e4_norm_err;        // <e4,e4> + 1
  ArrayXd e3_dot_e4;
  ArrayXd e4_dot_tangent;
  ArrayXd dt_decomp_err;      // max component residual of eq. for d/dt
};

inline SpacetimeFrameData spacetime_frame_data(const SpacetimeEmbedding& e,
                                               const ProjectedSurfaceData& p) {
  const auto& g = *e.grid;
  const int n = g.size();
  const ProfileDerivs d = profile_derivs(e);

  const ArrayXd f2 = p.f * p.f;
  const ArrayXd sig_uu =
      -p.V * p.V * d.taup * d.taup + d.Rp * d.Rp / f2 + e.R * e.R * d.Thp * d.Thp;
  const ArrayXd sig_pp = e.R * e.R * d.sin_th * d.sin_th;
  const ArrayXd inv_uu = 1.0 / sig_uu;
  const ArrayXd inv_pp = 1.0 / sig_pp;

  // d/du of the induced metric components
  const ArrayXd sig_uu_p = g.deriv_u(sig_uu);
  const ArrayXd G = e.R * e.R * d.sin_th_reg * d.sin_th_reg;  // sig_pp/sin^2 u
  const ArrayXd x = g.x();
  const ArrayXd sig_pp_p = -g.sin_u() * g.deriv_x((1.0 - x * x) * G);

  // trace of the surface Christoffels: C = sigma^{ab} gamma^u_{ab}
  const ArrayXd C =
      sig_uu_p * inv_uu * inv_uu * 0.5 - sig_pp_p * inv_pp * inv_uu * 0.5;

  ArrayXd VdV(n), dlnV(n);
  for (int k = 0; k < n; ++k) {
    VdV[k] = e.ref->VdV(e.R[k]);
    dlnV[k] = p.dV[k] / p.V[k];
  }

  SpacetimeFrameData out;
  out.H0_t = inv_uu * (d.taupp + 2.0 * dlnV * d.taup * d.Rp) - C * d.taup;
  out.H0_R = inv_uu * (d.Rpp + f2 * VdV * d.taup * d.taup -
                       (p.df / p.f) * d.Rp * d.Rp - e.R * f2 * d.Thp * d.Thp) -
             f2 / e.R - C * d.Rp;
  out.H0_Th = inv_uu * (d.Thpp + 2.0 * d.Rp * d.Thp / e.R) -
              inv_pp * d.sin_th * d.cos_th - C * d.Thp;

  const ArrayXd h0sq = -p.V * p.V * out.H0_t * out.H0_t +
                       out.H0_R * out.H0_R / f2 +
                       e.R * e.R * out.H0_Th * out.H0_Th;
  out.normH0 = h0sq.max(0.0).sqrt();
  out.H0_dot_e3 =
      out.H0_R * p.nu_R / f2 + e.R * e.R * out.H0_Th * p.nu_Th;

  // e4 from the frame decomposition lemma
  const ArrayXd gradtau2 = d.taup * d.taup * inv_uu;  // sigma-norm
  const ArrayXd S = (1.0 + p.V * p.V * gradtau2).sqrt();
  const ArrayXd hat_uu = sig_uu + p.V * p.V * d.taup * d.taup;  // sigma_hat
  const ArrayXd ht = p.V * d.taup / hat_uu;  // V (hat grad tau)^u
  const ArrayXd e4_t = S / p.V;
  const ArrayXd e4_R = S * ht * d.Rp;
  const ArrayXd e4_Th = S * ht * d.Thp;

  out.e4_norm_err = -p.V * p.V * e4_t * e4_t + e4_R * e4_R / f2 +
                    e.R * e.R * e4_Th * e4_Th + 1.0;
  out.e3_dot_e4 = e4_R * p.nu_R / f2 + e.R * e.R * e4_Th * p.nu_Th;
  out.e4_dot_tangent = -p.V * p.V * e4_t * d.taup + e4_R * d.Rp / f2 +
                       e.R * e.R * e4_Th * d.Thp;

  // d/dt = V sqrt(1+V^2|grad tau|^2) e4 - V^2 grad tau
  const ArrayXd gt = d.taup * inv_uu;  // (grad tau)^u
  const ArrayXd r_t = 1.0 - (p.V * S * e4_t - p.V * p.V * gt * d.taup);
  const ArrayXd r_R = -(p.V * S * e4_R - p.V * p.V * gt * d.Rp);
  const ArrayXd r_Th = -(p.V * S * e4_Th - p.V * p.V * gt * d.Thp);
  out.dt_decomp_err = r_t.abs().max(r_R.abs()).max((e.R * r_Th).abs());

  // alpha_{e3}(d/du) = <D_u e3, e4>
  const ArrayXd nuTh_reg = p.nu_Th / g.sin_u();
  const ArrayXd de3_t = dlnV * d.taup * p.nu_R;
  const ArrayXd de3_R =
      g.deriv_u(p.nu_R) - (p.df / p.f) * d.Rp * p.nu_R - e.R * f2 * d.Thp * p.nu_Th;
  const ArrayXd de3_Th = g.deriv_u_sin_reg(nuTh_reg) +
                         (d.Rp * p.nu_Th + d.Thp * p.nu_R) / e.R;
  out.alpha_e3_u = -p.V * p.V * de3_t * e4_t + de3_R * e4_R / f2 +
                   e.R * e.R * de3_Th * e4_Th;
  return out;
}

// ---------------------------------------------------------------------------
// Identity suite: the mean-curvature projection relation, the integral
// identity for int V Hhat dSigma_hat, frame normalization, and the
// hyperbolic-gauge consistency checks.
// ---------------------------------------------------------------------------

struct IdentitySuiteReport {
  double projection_sup = 0.0;      // pointwise relation, 4d path vs Hhat
  double integral_abs = 0.0;        // | int V Hhat - gauge-form integral |
  double integral_rel = 0.0;
  double e4_norm_sup = 0.0;
  double e3_dot_e4_sup = 0.0;
  double e4_tangent_sup = 0.0;
  double dt_decomp_sup = 0.0;
  double gauge_consistency_sup = 0.0;  // cosh^2 - sinh^2 - 1
  double normH0_cross_sup = 0.0;       // algebraic vs 4d |H0|
};

inline IdentitySuiteReport identity_suite(const SpacetimeEmbedding& e) {
  const ProjectedSurfaceData p = project_surface(e);
  const GaugeData gd = gauge_quantities(e, p);
  const SpacetimeFrameData fr = spacetime_frame_data(e, p);
  const auto& g = *e.grid;
  const ProfileDerivs d = profile_derivs(e);

  IdentitySuiteReport rep;
  const ArrayXd S = (1.0 + gd.V * gd.V * gd.gradtau2).sqrt();
  const ArrayXd alpha4_gradtau = fr.alpha_e3_u * d.taup / gd.sigma.uu;
  const ArrayXd rhs = -fr.H0_dot_e3 - gd.V * alpha4_gradtau / S;
  rep.projection_sup = (p.Hhat - rhs).abs().maxCoeff();

  const double lhs =
      2.0 * M_PI * g.quad_x(gd.V * p.Hhat * p.sigma_hat.area_reg());
  const ArrayXd integrand =
      (gd.normH0 * gd.normH0 * gd.A * gd.A + gd.B * gd.B).sqrt() +
      gd.B * gd.theta -
      gd.alpha_H0.u_comp * gd.V * gd.V * d.taup / gd.sigma.uu;
  const double rhs_int = integrate(gd.sigma, integrand);
  rep.integral_abs = std::abs(lhs - rhs_int);
  rep.integral_rel = rep.integral_abs / std::max(1.0, std::abs(lhs));

  rep.e4_norm_sup = fr.e4_norm_err.abs().maxCoeff();
  rep.e3_dot_e4_sup = fr.e3_dot_e4.abs().maxCoeff();
  rep.e4_tangent_sup = fr.e4_dot_tangent.abs().maxCoeff();
  rep.dt_decomp_sup = fr.dt_decomp_err.maxCoeff();

  const ArrayXd ch = gd.P / gd.normH0;
  const ArrayXd sh = -gd.B / (gd.normH0 * gd.A);
  rep.gauge_consistency_sup = (ch * ch - sh * sh - 1.0).abs().maxCoeff();
  rep.normH0_cross_sup = (gd.normH0 - fr.normH0).abs().maxCoeff();
  return rep;
}

}  // namespace qle
