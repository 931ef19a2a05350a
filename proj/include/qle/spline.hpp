#pragma once

// Cubic spline interpolation with not-a-knot end conditions, with first and
// second derivative evaluation. Used by tabulated reference spacetimes.

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace qle {

class CubicSpline {
 public:
  CubicSpline() = default;

  CubicSpline(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const int n = static_cast<int>(x_.size());
    if (n < 4)
      throw std::invalid_argument("CubicSpline: need at least 4 points");
    if (y_.size() != x_.size())
      throw std::invalid_argument("CubicSpline: size mismatch");
    for (int i = 1; i < n; ++i)
      if (!(x_[i] > x_[i - 1]))
        throw std::invalid_argument(
            "CubicSpline: abscissae must be strictly increasing");

    // Solve for second derivatives m_i with not-a-knot conditions
    // (third derivative continuous across the first and last interior knots).
    Eigen::SparseMatrix<double> a(n, n);
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    auto h = [&](int i) { return x_[i + 1] - x_[i]; };
    for (int i = 1; i < n - 1; ++i) {
      trip.emplace_back(i, i - 1, h(i - 1));
      trip.emplace_back(i, i, 2.0 * (h(i - 1) + h(i)));
      trip.emplace_back(i, i + 1, h(i));
      rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h(i) - (y_[i] - y_[i - 1]) / h(i - 1));
    }
    trip.emplace_back(0, 0, h(1));
    trip.emplace_back(0, 1, -(h(0) + h(1)));
    trip.emplace_back(0, 2, h(0));
    trip.emplace_back(n - 1, n - 3, h(n - 2));
    trip.emplace_back(n - 1, n - 2, -(h(n - 3) + h(n - 2)));
    trip.emplace_back(n - 1, n - 1, h(n - 3));
    a.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(a);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error("CubicSpline: factorization failed");
    m_ = lu.solve(rhs);
  }

  double min_x() const { return x_.front(); }
  double max_x() const { return x_.back(); }

  double eval(double x) const { return eval_impl(x, 0); }
  double deriv(double x) const { return eval_impl(x, 1); }
  double deriv2(double x) const { return eval_impl(x, 2); }

 private:
  double eval_impl(double x, int order) const {
    const double lo = x_.front(), hi = x_.back();
    if (x < lo - 1e-12 * (1.0 + std::abs(lo)) ||
        x > hi + 1e-12 * (1.0 + std::abs(hi)))
      throw std::domain_error("CubicSpline: evaluation outside the table");
    x = std::clamp(x, lo, hi);
    const int i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    switch (order) {
      case 0:
        return a * y_[i] + b * y_[i + 1] +
               ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h /
                   6.0;
      case 1:
        return (y_[i + 1] - y_[i]) / h -
               (3.0 * a * a - 1.0) / 6.0 * h * m_[i] +
               (3.0 * b * b - 1.0) / 6.0 * h * m_[i + 1];
      default:
        return a * m_[i] + b * m_[i + 1];
    }
  }

  int segment(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    int i = static_cast<int>(it - x_.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(x_.size()) - 2);
  }

  std::vector<double> x_, y_;
  Eigen::VectorXd m_;
};

}  // namespace qle
