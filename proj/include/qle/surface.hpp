#pragma once

// Axisymmetric fields on a closed 2-surface and their intrinsic calculus.
//
// Regularity bookkeeping: a smooth axisymmetric scalar is a smooth function
// of x = cos(u); regular one-forms and vectors carry a sin(u) factor in their
// u-component. All spectral differentiation acts on the smooth-in-x parts, so
// pole regularity is exact rather than enforced by boundary stencils.

#include "qle/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qle {

using GridPtr = std::shared_ptr<const AxiGrid>;

struct SurfaceField {
  GridPtr grid;
  ArrayXd v;  // nodal values

  SurfaceField() = default;
  SurfaceField(GridPtr g, ArrayXd vals) : grid(std::move(g)), v(std::move(vals)) {
    if (grid && v.size() != grid->size())
      throw std::invalid_argument("SurfaceField: size mismatch");
  }
  static SurfaceField constant(const GridPtr& g, double c) {
    return {g, ArrayXd::Constant(g->size(), c)};
  }
  static SurfaceField from_legendre(const GridPtr& g, const ArrayXd& coeff) {
    return {g, g->from_legendre(coeff)};
  }
};

// Diagonal axisymmetric metric sigma_uu du^2 + sigma_phiphi dphi^2.
struct SurfaceMetric {
  GridPtr grid;
  ArrayXd uu, phiphi;

  // sigma_phiphi / sin^2(u); smooth and positive for a regular metric
  ArrayXd phiphi_reg() const {
    return phiphi / (1.0 - grid->x() * grid->x());
  }
  // sqrt(det sigma)/sin(u), the regular part of the area element
  ArrayXd area_reg() const { return (uu * phiphi_reg()).sqrt(); }

  double area() const {
    return 2.0 * M_PI * grid->quad_x(area_reg());
  }
};

// One-form alpha_u du; regular forms vanish like sin(u) at the poles.
struct SurfaceOneForm {
  GridPtr grid;
  ArrayXd u_comp;

  ArrayXd reg() const { return u_comp / grid->sin_u(); }
  static SurfaceOneForm zero(const GridPtr& g) {
    return {g, ArrayXd::Zero(g->size())};
  }
};

// Vector W^u d/du; W^u = sin(u) * (smooth) for regular fields.
struct SurfaceVector {
  GridPtr grid;
  ArrayXd u_up;

  ArrayXd reg() const { return u_up / grid->sin_u(); }
};

inline void require_same_grid(const GridPtr& a, const GridPtr& b,
                              const char* what) {
  if (a.get() != b.get())
    throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

// Pole-regularity validation. The regular part of sigma_phiphi must be
// positive, and its Legendre tail must decay (a metric like sigma_phiphi ~
// sin(u) leaves a non-smooth regular part with a fat coefficient tail).
inline void validate_metric(const SurfaceMetric& m, double tail_tol = 1e-5) {
  const auto& g = *m.grid;
  if ((m.uu <= 0.0).any())
    throw std::invalid_argument("surface metric: sigma_uu must be positive");
  if ((m.phiphi <= 0.0).any())
    throw std::invalid_argument("surface metric: sigma_phiphi must be positive");
  const ArrayXd reg = m.phiphi_reg();
  if ((reg <= 0.0).any())
    throw std::invalid_argument("surface metric: pole regularity violated");
  const ArrayXd c = g.to_legendre(reg);
  const int n = c.size();
  const double head = c.abs().maxCoeff();
  const double tail = c.tail(std::max(2, n / 4)).abs().maxCoeff();
  if (tail > tail_tol * std::max(head, 1e-300))
    throw std::invalid_argument(
        "surface metric: pole regularity violated (coefficient tail)");
}

// d f as a one-form
inline SurfaceOneForm differential(const SurfaceField& f) {
  return {f.grid, f.grid->deriv_u(f.v)};
}

// sigma-gradient of a scalar: (grad f)^u = sigma^{uu} f_u
inline SurfaceVector grad(const SurfaceMetric& m, const SurfaceField& f) {
  require_same_grid(m.grid, f.grid, "grad");
  return {f.grid, m.grid->deriv_u(f.v) / m.uu};
}

// divergence of a regular vector: (1/sqrt(sigma)) d_u (sqrt(sigma) W^u)
inline SurfaceField divergence(const SurfaceMetric& m, const SurfaceVector& w) {
  require_same_grid(m.grid, w.grid, "divergence");
  const auto& g = *m.grid;
  const ArrayXd s = m.area_reg();
  // sqrt(sigma) W^u = sin^2(u) * s * Wreg; d/du then divide by sqrt(sigma).
  const ArrayXd inner = (1.0 - g.x() * g.x()) * s * w.reg();
  return {m.grid, -g.deriv_x(inner) / s};
}

inline SurfaceField laplace(const SurfaceMetric& m, const SurfaceField& f) {
  return divergence(m, grad(m, f));
}

inline double integrate(const SurfaceMetric& m, const SurfaceField& f) {
  require_same_grid(m.grid, f.grid, "integrate");
  return 2.0 * M_PI * m.grid->quad_x(f.v * m.area_reg());
}

inline double integrate(const SurfaceMetric& m, const ArrayXd& f) {
  return 2.0 * M_PI * m.grid->quad_x(f * m.area_reg());
}

// pairing alpha(W) = alpha_u W^u
inline ArrayXd pair(const SurfaceOneForm& a, const SurfaceVector& w) {
  return a.u_comp * w.u_up;
}

inline SurfaceVector raise(const SurfaceMetric& m, const SurfaceOneForm& a) {
  return {a.grid, a.u_comp / m.uu};
}

// |alpha|^2 with indices raised by sigma
inline ArrayXd norm2(const SurfaceMetric& m, const SurfaceOneForm& a) {
  return a.u_comp * a.u_comp / m.uu;
}

// asinh(num/den) evaluated stably; logarithmic form for large ratios.
// Signals a degenerate gauge when the denominator is not positive.
inline double safe_asinh_scalar(double num, double den) {
  if (!(den > 0.0))
    throw std::domain_error("safe_asinh_ratio: nonpositive denominator");
  const double r = num / den;
  if (std::abs(r) > 1e4) {
    const double a = std::abs(r);
    return std::copysign(std::log(2.0 * a) + 1.0 / (4.0 * a * a), r);
  }
  return std::asinh(r);
}

inline SurfaceField safe_asinh_ratio(const SurfaceField& num,
                                     const SurfaceField& den) {
  require_same_grid(num.grid, den.grid, "safe_asinh_ratio");
  ArrayXd out(num.v.size());
  for (int k = 0; k < num.v.size(); ++k)
    out[k] = safe_asinh_scalar(num.v[k], den.v[k]);
  return {num.grid, out};
}

inline ArrayXd safe_asinh_ratio(const ArrayXd& num, const ArrayXd& den) {
  ArrayXd out(num.size());
  for (int k = 0; k < num.size(); ++k)
    out[k] = safe_asinh_scalar(num[k], den[k]);
  return out;
}

// round sphere of radius r0
inline SurfaceMetric round_metric(const GridPtr& g, double r0) {
  const ArrayXd s2 = 1.0 - g->x() * g->x();
  return {g, ArrayXd::Constant(g->size(), r0 * r0), r0 * r0 * s2};
}

}  // namespace qle
