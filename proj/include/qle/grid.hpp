#pragma once

// Collocation grids for axisymmetric surface and radial calculus:
//  - AxiGrid: Gauss-Legendre nodes in x = cos(u), u in (0,pi), with Legendre
//    transforms and spectral differentiation. A nodal field that is a
//    polynomial in x of degree < N is represented exactly.
//  - ChebGrid: Chebyshev-Lobatto collocation on [a,b] with a differentiation
//    matrix and Clenshaw-Curtis quadrature weights, used for radial solves.

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

namespace qle {

using Eigen::ArrayXd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// P_0..P_lmax at a single point by the three-term recurrence.
inline void legendre_all(double x, int lmax, double* out) {
  out[0] = 1.0;
  if (lmax >= 1) out[1] = x;
  for (int l = 2; l <= lmax; ++l)
    out[l] = ((2.0 * l - 1.0) * x * out[l - 1] - (l - 1.0) * out[l - 2]) / l;
}

inline double legendre_p(int l, double x) {
  std::vector<double> p(l + 1);
  legendre_all(x, l, p.data());
  return p[l];
}

// dP_l/dx from the standard relation (1-x^2) P_l' = l (P_{l-1} - x P_l).
inline double legendre_dp(int l, double x) {
  if (l == 0) return 0.0;
  const double pl = legendre_p(l, x);
  const double plm = legendre_p(l - 1, x);
  const double s = 1.0 - x * x;
  if (s < 1e-14) {  // limit at the endpoints
    const double sign = (x > 0.0) ? 1.0 : ((l % 2 == 0) ? -1.0 : 1.0);
    return sign * 0.5 * l * (l + 1.0);
  }
  return l * (plm - x * pl) / s;
}

// Gauss-Legendre nodes (ascending) and weights on [-1,1]. Newton iteration on
// P_n seeded with Chebyshev-like initial guesses; converges in a few steps.
inline void gauss_legendre(int n, ArrayXd& x, ArrayXd& w) {
  if (n < 2) throw std::invalid_argument("gauss_legendre: need n >= 2");
  x.resize(n);
  w.resize(n);
  std::vector<double> p(n + 1);
  for (int k = 0; k < n; ++k) {
    double xi = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      legendre_all(xi, n, p.data());
      const double dp = n * (p[n - 1] - xi * p[n]) / (1.0 - xi * xi);
      const double dx = -p[n] / dp;
      xi += dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre_all(xi, n, p.data());
    const double dp = n * (p[n - 1] - xi * p[n]) / (1.0 - xi * xi);
    x[n - 1 - k] = xi;  // store ascending
    w[n - 1 - k] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
}

class AxiGrid {
 public:
  explicit AxiGrid(int n) : n_(n) {
    if (n < 4) throw std::invalid_argument("AxiGrid: need at least 4 nodes");
    ArrayXd xg, wg;
    gauss_legendre(n, xg, wg);
    // u ascending in (0,pi)  =>  x = cos(u) descending
    x_.resize(n);
    w_.resize(n);
    for (int k = 0; k < n; ++k) {
      x_[k] = xg[n - 1 - k];
      w_[k] = wg[n - 1 - k];
    }
    u_ = x_.unaryExpr([](double v) { return std::acos(v); });
    sinu_ = (1.0 - x_ * x_).sqrt();

    // Legendre value table and nodal <-> coefficient maps
    vals_.resize(n, n);
    std::vector<double> p(n);
    for (int k = 0; k < n; ++k) {
      legendre_all(x_[k], n - 1, p.data());
      for (int l = 0; l < n; ++l) vals_(k, l) = p[l];
    }
    to_coeff_.resize(n, n);
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        to_coeff_(l, k) = 0.5 * (2.0 * l + 1.0) * w_[k] * vals_(k, l);

    // d/dx in coefficient space:
    //   c'_{l-1} = (2l-1) c_l + ((2l-1)/(2l+3)) c'_{l+1}
    MatrixXd dc = MatrixXd::Zero(n, n);
    for (int l = n - 1; l >= 1; --l) {
      dc(l - 1, l) += 2.0 * l - 1.0;
      if (l + 1 <= n - 1)
        dc.row(l - 1) += ((2.0 * l - 1.0) / (2.0 * l + 3.0)) * dc.row(l + 1);
    }
    dx_ = vals_ * dc * to_coeff_;
    dxx_ = dx_ * dx_;
  }

  static std::shared_ptr<const AxiGrid> make(int n) {
    return std::make_shared<const AxiGrid>(n);
  }

  int size() const { return n_; }
  const ArrayXd& x() const { return x_; }
  const ArrayXd& u() const { return u_; }
  const ArrayXd& w() const { return w_; }
  const ArrayXd& sin_u() const { return sinu_; }

  // Derivative with respect to x of a nodal field polynomial in x.
  ArrayXd deriv_x(const ArrayXd& f) const { return dx_ * f.matrix(); }
  ArrayXd deriv_xx(const ArrayXd& f) const { return dxx_ * f.matrix(); }

  // d/du of a smooth scalar f(x): f_u = -sin(u) f_x. The result carries an
  // explicit sin(u) factor; use d2u for the second derivative instead of
  // applying this twice.
  ArrayXd deriv_u(const ArrayXd& f) const { return -sinu_ * deriv_x(f); }

  // d^2/du^2 of a smooth scalar: f_uu = -x f_x + (1-x^2) f_xx.
  ArrayXd deriv_uu(const ArrayXd& f) const {
    return -x_ * deriv_x(f) + (1.0 - x_ * x_) * deriv_xx(f);
  }

  // d/du of sin(u) g(x) for smooth g: = x g - (1-x^2) g_x  (smooth again).
  ArrayXd deriv_u_sin_reg(const ArrayXd& g) const {
    return x_ * g - (1.0 - x_ * x_) * deriv_x(g);
  }

  // integral over x in [-1,1] of a nodal field
  double quad_x(const ArrayXd& f) const { return (w_ * f).sum(); }

  ArrayXd to_legendre(const ArrayXd& nodal) const {
    return to_coeff_ * nodal.matrix();
  }
  ArrayXd from_legendre(const ArrayXd& coeff) const {
    ArrayXd c = ArrayXd::Zero(n_);
    const int m = std::min<int>(coeff.size(), n_);
    c.head(m) = coeff.head(m);
    return vals_ * c.matrix();
  }

  // Evaluate a Legendre series (and derivative in x) at an arbitrary point.
  static double eval_series(const ArrayXd& coeff, double x) {
    const int m = coeff.size();
    std::vector<double> p(m);
    legendre_all(x, m - 1, p.data());
    double s = 0.0;
    for (int l = 0; l < m; ++l) s += coeff[l] * p[l];
    return s;
  }
  static double eval_series_dx(const ArrayXd& coeff, double x) {
    double s = 0.0;
    for (int l = 1; l < coeff.size(); ++l) s += coeff[l] * legendre_dp(l, x);
    return s;
  }

 private:
  int n_;
  ArrayXd x_, u_, w_, sinu_;
  MatrixXd vals_, to_coeff_, dx_, dxx_;
};

// Chebyshev-Lobatto collocation on [a,b], nodes ascending.
class ChebGrid {
 public:
  ChebGrid(int n, double a, double b) : n_(n), a_(a), b_(b) {
    if (n < 4) throw std::invalid_argument("ChebGrid: need at least 4 nodes");
    if (!(b > a)) throw std::invalid_argument("ChebGrid: empty interval");
    const int m = n - 1;
    ArrayXd t(n);  // standard descending Chebyshev points
    for (int j = 0; j < n; ++j) t[j] = std::cos(M_PI * j / m);
    // differentiation matrix in t (Trefethen)
    MatrixXd D(n, n);
    auto c = [&](int i) { return (i == 0 || i == m) ? 2.0 : 1.0; };
    for (int i = 0; i < n; ++i) {
      double rowsum = 0.0;
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double sgn = ((i + j) % 2 == 0) ? 1.0 : -1.0;
        D(i, j) = (c(i) / c(j)) * sgn / (t[i] - t[j]);
        rowsum += D(i, j);
      }
      D(i, i) = -rowsum;
    }
    // Clenshaw-Curtis weights for int over [-1,1]
    ArrayXd wt = ArrayXd::Zero(n);
    if (m % 2 == 0) {
      wt[0] = wt[m] = 1.0 / (m * m - 1.0);
      for (int i = 1; i < m; ++i) {
        double v = 1.0;
        for (int k = 1; k <= m / 2 - 1; ++k)
          v -= 2.0 * std::cos(2.0 * k * M_PI * i / m) / (4.0 * k * k - 1.0);
        v -= std::cos(M_PI * i) / (m * m - 1.0);
        wt[i] = 2.0 * v / m;
      }
    } else {
      wt[0] = wt[m] = 1.0 / (m * m);
      for (int i = 1; i < m; ++i) {
        double v = 1.0;
        for (int k = 1; k <= (m - 1) / 2; ++k)
          v -= 2.0 * std::cos(2.0 * k * M_PI * i / m) / (4.0 * k * k - 1.0);
        wt[i] = 2.0 * v / m;
      }
    }
    // flip to ascending nodes and map to [a,b]
    r_.resize(n);
    w_.resize(n);
    d_.resize(n, n);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
      r_[i] = a + half * (t[n - 1 - i] + 1.0);
      w_[i] = wt[n - 1 - i] * half;
      for (int j = 0; j < n; ++j) d_(i, j) = D(n - 1 - i, n - 1 - j) / half;
    }
  }

  int size() const { return n_; }
  double a() const { return a_; }
  double b() const { return b_; }
  const ArrayXd& r() const { return r_; }
  const ArrayXd& w() const { return w_; }
  const MatrixXd& d() const { return d_; }
  ArrayXd deriv(const ArrayXd& f) const { return d_ * f.matrix(); }
  double quad(const ArrayXd& f) const { return (w_ * f).sum(); }

 private:
  int n_;
  double a_, b_;
  ArrayXd r_, w_;
  MatrixXd d_;
};

}  // namespace qle
