#pragma once

// Static reference spacetimes g_check = -V^2 dt^2 + g with spherically
// symmetric slice metric g = dR^2/f(R)^2 + R^2 dS^2 and potential V(R).
// Curvature of g, the Hessian/Laplacian of V, the vacuum-static system and
// the null convergence condition are all available in closed form (splined
// for tabulated models).

#include "qle/spline.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qle {

enum class RefKind { Minkowski, Schwarzschild, SchwarzschildLambda, Custom };

inline const char* to_string(RefKind k) {
  switch (k) {
    case RefKind::Minkowski: return "minkowski";
    case RefKind::Schwarzschild: return "schwarzschild";
    case RefKind::SchwarzschildLambda: return "schwarzschild_lambda";
    default: return "custom";
  }
}

class StaticReference;
using RefPtr = std::shared_ptr<const StaticReference>;

class StaticReference {
 public:
  static constexpr double kEpsV = 1e-12;

  static RefPtr minkowski() {
    auto r = std::make_shared<StaticReference>(Private{});
    r->kind_ = RefKind::Minkowski;
    r->r_min_ = 0.0;
    r->r_max_ = 1e9;
    return r;
  }

  static RefPtr schwarzschild(double m) {
    if (m < 0.0) throw std::invalid_argument("mass must be nonnegative");
    if (m == 0.0) return minkowski();
    auto r = std::make_shared<StaticReference>(Private{});
    r->kind_ = RefKind::Schwarzschild;
    r->mass_ = m;
    r->horizon_ = 2.0 * m;
    r->r_min_ = 2.0 * m;
    r->r_max_ = 1e9;
    return r;
  }

  static RefPtr schwarzschild_lambda(double m, double lambda) {
    if (m < 0.0) throw std::invalid_argument("mass must be nonnegative");
    if (lambda == 0.0) return schwarzschild(m);
    auto r = std::make_shared<StaticReference>(Private{});
    r->kind_ = RefKind::SchwarzschildLambda;
    r->mass_ = m;
    r->lambda_ = lambda;
    r->locate_lambda_domain();
    return r;
  }

  // Tabulated V(R) (and optionally f(R); defaults to f = V).
  static RefPtr custom(const std::vector<double>& R,
                       const std::vector<double>& V,
                       const std::vector<double>& f = {}) {
    auto r = std::make_shared<StaticReference>(Private{});
    r->kind_ = RefKind::Custom;
    for (size_t i = 1; i < R.size(); ++i)
      if (!(R[i] > R[i - 1]))
        throw std::invalid_argument("custom table: R must be strictly increasing");
    r->sv_ = CubicSpline(R, V);
    r->sf_ = f.empty() ? r->sv_ : CubicSpline(R, f);
    r->r_max_ = R.back();
    // horizon: root of V inside the table, if any
    double lo = R.front();
    if (V.front() <= 0.0) {
      double a = R.front(), b = R.back();
      double va = V.front();
      if (V.back() <= 0.0)
        throw std::invalid_argument("custom table: no region with V > 0");
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        const double vm = r->sv_->eval(mid);
        if ((va <= 0.0) == (vm <= 0.0)) {
          a = mid;
          va = vm;
        } else {
          b = mid;
        }
      }
      r->horizon_ = 0.5 * (a + b);
      lo = r->horizon_.value();
    }
    r->r_min_ = lo;
    return r;
  }

  RefKind kind() const { return kind_; }
  double mass() const { return mass_; }
  double lambda() const { return lambda_; }
  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }
  bool has_horizon() const { return horizon_.has_value(); }
  double horizon() const {
    return horizon_ ? *horizon_ : std::numeric_limits<double>::quiet_NaN();
  }

  bool inside(double R) const {
    return R > r_min_ && R < r_max_ && V(R) > kEpsV;
  }
  void require_inside(double R) const {
    if (!inside(R))
      throw std::domain_error("point at or beyond the reference domain (V <= 0)");
  }

  double V(double R) const {
    switch (kind_) {
      case RefKind::Minkowski: return 1.0;
      case RefKind::Schwarzschild:
      case RefKind::SchwarzschildLambda: return std::sqrt(std::max(v2(R), 0.0));
      default: return sv_->eval(R);
    }
  }
  double dV(double R) const {
    switch (kind_) {
      case RefKind::Minkowski: return 0.0;
      case RefKind::Schwarzschild:
      case RefKind::SchwarzschildLambda: return 0.5 * dv2(R) / V(R);
      default: return sv_->deriv(R);
    }
  }
  double d2V(double R) const {
    switch (kind_) {
      case RefKind::Minkowski: return 0.0;
      case RefKind::Schwarzschild:
      case RefKind::SchwarzschildLambda: {
        const double v = V(R);
        const double dv = dV(R);
        return (0.5 * d2v2(R) - dv * dv) / v;
      }
      default: return sv_->deriv2(R);
    }
  }
  // V dV/dR, finite through a horizon for the closed-form models
  double VdV(double R) const {
    switch (kind_) {
      case RefKind::Minkowski: return 0.0;
      case RefKind::Schwarzschild:
      case RefKind::SchwarzschildLambda: return 0.5 * dv2(R);
      default: return sv_->eval(R) * sv_->deriv(R);
    }
  }

  double fmet(double R) const {
    switch (kind_) {
      case RefKind::Minkowski: return 1.0;
      case RefKind::Schwarzschild:
      case RefKind::SchwarzschildLambda: return V(R);
      default: return sf_->eval(R);
    }
  }
  double dfmet(double R) const {
    switch (kind_) {
      case RefKind::Minkowski: return 0.0;
      case RefKind::Schwarzschild:
      case RefKind::SchwarzschildLambda: return dV(R);
      default: return sf_->deriv(R);
    }
  }
  // f df/dR (finite through a horizon for the closed-form models)
  double fdf(double R) const {
    switch (kind_) {
      case RefKind::Minkowski: return 0.0;
      case RefKind::Schwarzschild:
      case RefKind::SchwarzschildLambda: return 0.5 * dv2(R);
      default: return sf_->eval(R) * sf_->deriv(R);
    }
  }

  // --- slice curvature, orthonormal-frame components -------------------
  // frame e1 = f d/dR (radial), e2 = e3 (tangential)
  double ric_rad(double R) const { return -2.0 * fdf(R) / R; }
  double ric_tan(double R) const {
    const double f = fmet(R);
    return -fdf(R) / R + (1.0 - f * f) / (R * R);
  }
  double scalar_curv(double R) const {
    return ric_rad(R) + 2.0 * ric_tan(R);
  }
  double hessV_rad(double R) const {
    const double f = fmet(R);
    return f * f * d2V(R) + fdf(R) * dV(R);
  }
  double hessV_tan(double R) const {
    const double f = fmet(R);
    return f * f * dV(R) / R;
  }
  double lapV(double R) const { return hessV_rad(R) + 2.0 * hessV_tan(R); }

  // frame components of Q = lap(V) g - hess(V) + V Ric
  double q_rad(double R) const {
    return lapV(R) - hessV_rad(R) + V(R) * ric_rad(R);
  }
  double q_tan(double R) const {
    return lapV(R) - hessV_tan(R) + V(R) * ric_tan(R);
  }

  struct Private {};
  explicit StaticReference(Private) {}

 private:
  double v2(double R) const {
    double s = 1.0;
    if (kind_ != RefKind::Minkowski) s -= 2.0 * mass_ / R;
    if (kind_ == RefKind::SchwarzschildLambda) s -= lambda_ * R * R / 3.0;
    return s;
  }
  double dv2(double R) const {
    double s = 2.0 * mass_ / (R * R);
    if (kind_ == RefKind::SchwarzschildLambda) s -= 2.0 * lambda_ * R / 3.0;
    return s;
  }
  double d2v2(double R) const {
    double s = -4.0 * mass_ / (R * R * R);
    if (kind_ == RefKind::SchwarzschildLambda) s -= 2.0 * lambda_ / 3.0;
    return s;
  }

  void locate_lambda_domain() {
    if (lambda_ < 0.0) {
      // d(V^2)/dR > 0 everywhere: a single horizon root below which V^2 < 0
      double b = 2.0 * mass_ + 1.0;
      while (v2(b) <= 0.0) b *= 2.0;
      horizon_ = bisect_root(1e-10 * b, b);
      r_min_ = *horizon_;
      r_max_ = 1e9;
      return;
    }
    // lambda > 0: V^2 > 0 between the black-hole and cosmological horizons
    const double r_hi = std::sqrt(3.0 / lambda_) * 1.5;
    const int ns = 20000;
    const double step = r_hi / ns;
    double best_lo = -1.0, best_hi = -1.0;
    double prev_r = step * 1e-3;
    double prev_v = v2(prev_r);
    for (int i = 1; i <= ns; ++i) {
      const double r = i * step;
      const double v = v2(r);
      if (prev_v <= 0.0 && v > 0.0) best_lo = bisect_root(prev_r, r);
      if (prev_v > 0.0 && v <= 0.0) {
        best_hi = bisect_root(prev_r, r);
        break;
      }
      prev_r = r;
      prev_v = v;
    }
    if (best_lo < 0.0 || best_hi < 0.0 || !(best_hi > best_lo))
      throw std::invalid_argument("no region with V > 0 for given (m, lambda)");
    horizon_ = best_lo;
    r_min_ = best_lo;
    r_max_ = best_hi;
  }

  double bisect_root(double a, double b) {
    double va = v2(a);
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (a + b);
      const double vm = v2(m);
      if ((va <= 0.0) == (vm <= 0.0)) {
        a = m;
        va = vm;
      } else {
        b = m;
      }
    }
    return 0.5 * (a + b);
  }

  RefKind kind_ = RefKind::Minkowski;
  double mass_ = 0.0;
  double lambda_ = 0.0;
  double r_min_ = 0.0, r_max_ = 1e9;
  std::optional<double> horizon_;
  std::optional<CubicSpline> sv_, sf_;
};

// Coordinate-frame curvature data at a point (R, u).
struct CurvatureBundle {
  double R = 0.0, u = 0.0;
  // nonzero Christoffel symbols of g in (R, u, phi)
  double gamma_R_RR = 0.0, gamma_R_uu = 0.0, gamma_R_pp = 0.0;
  double gamma_u_Ru = 0.0, gamma_u_pp = 0.0;
  double gamma_p_Rp = 0.0, gamma_p_up = 0.0;
  // Ricci tensor, Hessian of V (diagonal components), gradient, Laplacian
  double ric_RR = 0.0, ric_uu = 0.0, ric_pp = 0.0;
  double hessV_RR = 0.0, hessV_uu = 0.0, hessV_pp = 0.0;
  double gradV_R = 0.0;  // covariant component (dV)_R
  double lapV = 0.0;
  // metric components for convenience
  double g_RR = 0.0, g_uu = 0.0, g_pp = 0.0;
};

inline CurvatureBundle curvature_at(const StaticReference& ref, double R,
                                    double u) {
  ref.require_inside(R);
  const double su = std::sin(u);
  if (std::abs(su) < 1e-12)
    throw std::domain_error("curvature_at: pole coordinate singularity");
  CurvatureBundle c;
  c.R = R;
  c.u = u;
  const double f = ref.fmet(R);
  const double fp = ref.dfmet(R);
  const double v1 = ref.dV(R);
  c.g_RR = 1.0 / (f * f);
  c.g_uu = R * R;
  c.g_pp = R * R * su * su;
  c.gamma_R_RR = -fp / f;
  c.gamma_R_uu = -R * f * f;
  c.gamma_R_pp = -R * f * f * su * su;
  c.gamma_u_Ru = 1.0 / R;
  c.gamma_u_pp = -su * std::cos(u);
  c.gamma_p_Rp = 1.0 / R;
  c.gamma_p_up = std::cos(u) / su;
  c.ric_RR = -2.0 * fp / (f * R);
  c.ric_uu = -R * f * fp + 1.0 - f * f;
  c.ric_pp = su * su * c.ric_uu;
  c.hessV_RR = ref.d2V(R) + (fp / f) * v1;
  c.hessV_uu = R * f * f * v1;
  c.hessV_pp = su * su * c.hessV_uu;
  c.gradV_R = v1;
  c.lapV = ref.lapV(R);
  return c;
}

// Residual report for the vacuum Einstein system with cosmological constant.
struct VacuumStaticReport {
  double residual_eq1 = 0.0;   // sup |-Lambda V g - hess V + V Ric|  (frame)
  double residual_eq2 = 0.0;   // sup |lap V + Lambda V|
  double scalar_curv_min = 0.0, scalar_curv_max = 0.0;
  double horizon_grad_spread = 0.0;  // spread of |grad V| approaching V = 0
  double horizon_grad_value = 0.0;
  bool has_horizon = false;
};

inline VacuumStaticReport check_vacuum_static(const StaticReference& ref,
                                              double lambda, int samples = 64) {
  VacuumStaticReport rep;
  const double span = ref.r_max() - ref.r_min();
  double lo, hi;
  if (ref.has_horizon()) {
    lo = ref.r_min() * 1.001 + 1e-9;
    hi = std::min(ref.r_max() - 1e-3 * span, lo + 8.0 * std::max(lo, 1.0));
  } else {
    lo = std::max(ref.r_min() + 1e-9, 0.1);
    hi = std::min(ref.r_max() - 1e-3 * span, 20.0);
  }
  rep.scalar_curv_min = std::numeric_limits<double>::infinity();
  rep.scalar_curv_max = -rep.scalar_curv_min;
  for (int i = 0; i < samples; ++i) {
    const double R = lo + (hi - lo) * (i + 0.5) / samples;
    if (!ref.inside(R)) continue;
    const double v = ref.V(R);
    const double e1 =
        std::abs(-lambda * v - ref.hessV_rad(R) + v * ref.ric_rad(R));
    const double e2 =
        std::abs(-lambda * v - ref.hessV_tan(R) + v * ref.ric_tan(R));
    rep.residual_eq1 = std::max(rep.residual_eq1, std::max(e1, e2));
    rep.residual_eq2 =
        std::max(rep.residual_eq2, std::abs(ref.lapV(R) + lambda * v));
    const double sc = ref.scalar_curv(R);
    rep.scalar_curv_min = std::min(rep.scalar_curv_min, sc);
    rep.scalar_curv_max = std::max(rep.scalar_curv_max, sc);
  }
  if (ref.has_horizon()) {
    rep.has_horizon = true;
    // |grad V| = f V' extrapolated to the horizon (Richardson in the offset)
    const double rh = ref.horizon();
    auto fv = [&](double d) { return ref.fmet(rh * (1.0 + d)) * ref.dV(rh * (1.0 + d)); };
    const double d0 = 1e-3;
    const double e1 = 2.0 * fv(d0 / 2.0) - fv(d0);
    const double e2 = 2.0 * fv(d0 / 4.0) - fv(d0 / 2.0);
    rep.horizon_grad_value = e2;
    rep.horizon_grad_spread = std::abs(e2 - e1);
  }
  return rep;
}

// Minimum eigenvalue over the sample points of Q = lap(V) g - hess(V) + V Ric
// as a g-self-adjoint endomorphism (generalized eigenproblem Q v = lambda g v).
inline double null_convergence_min_eig(
    const StaticReference& ref, const std::vector<std::pair<double, double>>& pts) {
  double mineig = std::numeric_limits<double>::infinity();
  for (auto [R, u] : pts) {
    if (std::abs(std::sin(u)) < 1e-3) u = 1e-3;  // resample off the axis
    const CurvatureBundle c = curvature_at(ref, R, u);
    Eigen::Matrix3d Q = Eigen::Matrix3d::Zero(), G = Eigen::Matrix3d::Zero();
    G.diagonal() << c.g_RR, c.g_uu, c.g_pp;
    const double v = ref.V(R);
    Q(0, 0) = c.lapV * c.g_RR - c.hessV_RR + v * c.ric_RR;
    Q(1, 1) = c.lapV * c.g_uu - c.hessV_uu + v * c.ric_uu;
    Q(2, 2) = c.lapV * c.g_pp - c.hessV_pp + v * c.ric_pp;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix3d> es(Q, G);
    mineig = std::min(mineig, es.eigenvalues().minCoeff());
  }
  return mineig;
}

}  // namespace qle
