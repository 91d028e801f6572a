#pragma once

#include "foldlab/common.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace foldlab {

namespace detail {

// 5-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr std::array<double, 5> kGL5Nodes = {
    -0.9061798459386639928, -0.5384693101056830910, 0.0,
    0.5384693101056830910, 0.9061798459386639928};
inline constexpr std::array<double, 5> kGL5Weights = {
    0.2369268850561890875, 0.4786286704993664680, 0.5688888888888888889,
    0.4786286704993664680, 0.2369268850561890875};

template <class F>
double gl5(const F& f, double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += kGL5Weights[i] * f(c + h * kGL5Nodes[i]);
    return s * h;
}

template <class F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b].
template <class F>
double integrate(const F& f, double a, double b, double tol = 1e-12, int max_depth = 40) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Composite 5-point Gauss-Legendre over n equal panels.
template <class F>
double integrate_gl(const F& f, double a, double b, int panels) {
    double s = 0.0, h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) s += detail::gl5(f, a + i * h, a + (i + 1) * h);
    return s;
}

/// Cumulative antiderivative table: S(x) = S(ref) + integral of f from ref to x,
/// evaluated by cubic Hermite interpolation (nodes carry S and S' = f exactly).
class CumulativeTable {
  public:
    CumulativeTable() = default;

    template <class F>
    CumulativeTable(const F& f, double a, double b, int panels, double s_at_a = 0.0)
        : a_(a), h_((b - a) / panels) {
        s_.resize(panels + 1);
        d_.resize(panels + 1);
        s_[0] = s_at_a;
        d_[0] = f(a);
        for (int i = 1; i <= panels; ++i) {
            double lo = a + (i - 1) * h_, hi = a + i * h_;
            s_[i] = s_[i - 1] + detail::gl5(f, lo, hi);
            d_[i] = f(hi);
        }
    }

    double operator()(double x) const {
        if (s_.empty()) return 0.0;
        double u = (x - a_) / h_;
        int i = std::clamp(int(std::floor(u)), 0, int(s_.size()) - 2);
        double t = u - i;
        double s0 = s_[i], s1 = s_[i + 1];
        double m0 = d_[i] * h_, m1 = d_[i + 1] * h_;
        double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * s0 + (t3 - 2 * t2 + t) * m0 +
               (-2 * t3 + 3 * t2) * s1 + (t3 - t2) * m1;
    }

    double back() const { return s_.empty() ? 0.0 : s_.back(); }
    double front_x() const { return a_; }
    double back_x() const { return a_ + h_ * (double(s_.size()) - 1.0); }

  private:
    double a_ = 0.0, h_ = 1.0;
    std::vector<double> s_, d_;
};

}  // namespace foldlab
