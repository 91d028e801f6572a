#pragma once

#include "foldlab/common.hpp"

#include <functional>
#include <random>
#include <string>
#include <utility>

namespace foldlab {

/// A C^2 Hamiltonian H(x, xi) on R^N x R^N together with the constants of
/// its growth assumptions: |hess H| <= kappa everywhere and
/// |grad_x H| <= h(|x|) + kappa|xi| with h declared by the author (it is
/// never estimated; a sampled check can warn when the declaration is off).
struct HamiltonianSystem {
    int dim = 1;
    std::string name;
    std::function<double(const Vec&, const Vec&)> value;
    std::function<Vec(const Vec&, const Vec&)> grad_x;
    std::function<Vec(const Vec&, const Vec&)> grad_xi;
    // 2N x 2N, (x, xi) block order: [[H_xx, H_xxi], [H_xix, H_xixi]]
    std::function<Mat(const Vec&, const Vec&)> hessian;
    double kappa = 1.0;
    std::function<double(double)> sublinear_h;
};

/// H = |xi|^2 / 2. h == 0, kappa = 1.
inline HamiltonianSystem free_particle(int n = 1) {
    HamiltonianSystem s;
    s.dim = n;
    s.name = "free";
    s.value = [](const Vec&, const Vec& xi) { return 0.5 * xi.squaredNorm(); };
    s.grad_x = [n](const Vec&, const Vec&) { return Vec::Zero(n).eval(); };
    s.grad_xi = [](const Vec&, const Vec& xi) { return xi; };
    s.hessian = [n](const Vec&, const Vec&) {
        Mat h = Mat::Zero(2 * n, 2 * n);
        h.bottomRightCorner(n, n) = Mat::Identity(n, n);
        return h;
    };
    s.kappa = 1.0;
    s.sublinear_h = [](double) { return 0.0; };
    return s;
}

/// H = (|xi|^2 + |x|^2) / 2. |grad_x H| = |x| violates the sublinear-h
/// assumption globally; the declared h(r) = min(r, cap) is valid on probe
/// windows |x| <= cap, which is all the displacement oracle samples.
inline HamiltonianSystem harmonic_oscillator(int n = 1, double h_cap = 10.0) {
    HamiltonianSystem s;
    s.dim = n;
    s.name = "harmonic";
    s.value = [](const Vec& x, const Vec& xi) { return 0.5 * (xi.squaredNorm() + x.squaredNorm()); };
    s.grad_x = [](const Vec& x, const Vec&) { return x; };
    s.grad_xi = [](const Vec&, const Vec& xi) { return xi; };
    s.hessian = [n](const Vec&, const Vec&) { return Mat::Identity(2 * n, 2 * n).eval(); };
    s.kappa = 1.0;
    s.sublinear_h = [h_cap](double r) { return std::min(r, h_cap); };
    return s;
}

/// H = |xi|^2 / 2 + V(x) in one dimension from scalar callables.
inline HamiltonianSystem separable_1d(std::function<double(double)> v,
                                      std::function<double(double)> dv,
                                      std::function<double(double)> d2v, double kappa,
                                      std::function<double(double)> h, std::string name = "potential") {
    HamiltonianSystem s;
    s.dim = 1;
    s.name = std::move(name);
    s.value = [v](const Vec& x, const Vec& xi) { return 0.5 * xi.squaredNorm() + v(x[0]); };
    s.grad_x = [dv](const Vec& x, const Vec&) { return vec1(dv(x[0])); };
    s.grad_xi = [](const Vec&, const Vec& xi) { return xi; };
    s.hessian = [d2v](const Vec& x, const Vec&) {
        Mat h = Mat::Zero(2, 2);
        h(0, 0) = d2v(x[0]);
        h(1, 1) = 1.0;
        return h;
    };
    s.kappa = kappa;
    s.sublinear_h = std::move(h);
    return s;
}

/// Max over sampled phase points of |hess H| - kappa (positive = declared
/// kappa violated at that sample).
inline double hessian_bound_defect(const HamiltonianSystem& sys, double radius, int samples,
                                   std::uint64_t seed = 7) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-radius, radius);
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        Vec x(sys.dim), xi(sys.dim);
        for (int k = 0; k < sys.dim; ++k) {
            x[k] = u(rng);
            xi[k] = u(rng);
        }
        worst = std::max(worst, operator_norm(sys.hessian(x, xi)) - sys.kappa);
    }
    return worst;
}

/// Max abs deviation between declared gradients and central differences of H.
inline double gradient_fd_defect(const HamiltonianSystem& sys, double radius, int samples,
                                 double h = 1e-5, std::uint64_t seed = 11) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-radius, radius);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        Vec x(sys.dim), xi(sys.dim);
        for (int k = 0; k < sys.dim; ++k) {
            x[k] = u(rng);
            xi[k] = u(rng);
        }
        Vec gx = sys.grad_x(x, xi), gxi = sys.grad_xi(x, xi);
        for (int k = 0; k < sys.dim; ++k) {
            Vec xp = x, xm = x;
            xp[k] += h;
            xm[k] -= h;
            worst = std::max(worst, std::abs((sys.value(xp, xi) - sys.value(xm, xi)) / (2 * h) - gx[k]));
            Vec xip = xi, xim = xi;
            xip[k] += h;
            xim[k] -= h;
            worst = std::max(worst, std::abs((sys.value(x, xip) - sys.value(x, xim)) / (2 * h) - gxi[k]));
        }
    }
    return worst;
}

}  // namespace foldlab
