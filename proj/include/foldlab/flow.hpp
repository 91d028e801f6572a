#pragma once

#include "foldlab/common.hpp"
#include "foldlab/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace foldlab {

struct PhasePoint {
    Vec x;
    Vec xi;
};

inline PhasePoint phase_point(double x, double xi) { return {vec1(x), vec1(xi)}; }

/// One trajectory endpoint with its tangent map and accumulated action
/// integral( xi . grad_xi H - H ) ds, which reduces to the classical
/// integral( |xi|^2/2 - V ) ds for separable Hamiltonians.
struct FlowJet {
    double t = 0.0;
    PhasePoint point;
    Mat jacobian;  // 2N x 2N, d Phi_t / d (x, xi)
    double action = 0.0;
};

struct IntegratorOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_min = 1e-14;
    std::size_t max_steps = 2'000'000;
};

namespace detail {

struct AugmentedSystem {
    const HamiltonianSystem& sys;
    int n;

    Vec rhs(const Vec& s) const {
        Vec x = s.segment(0, n), xi = s.segment(n, n);
        Vec gx = sys.grad_x(x, xi), gxi = sys.grad_xi(x, xi);
        Mat hess = sys.hessian(x, xi);
        Eigen::Map<const Mat> m(s.data() + 2 * n, 2 * n, 2 * n);
        Mat a(2 * n, 2 * n);
        a.topLeftCorner(n, n) = hess.bottomLeftCorner(n, n);       //  H_xix
        a.topRightCorner(n, n) = hess.bottomRightCorner(n, n);     //  H_xixi
        a.bottomLeftCorner(n, n) = -hess.topLeftCorner(n, n);      // -H_xx
        a.bottomRightCorner(n, n) = -hess.topRightCorner(n, n);    // -H_xxi
        Vec out(s.size());
        out.segment(0, n) = gxi;
        out.segment(n, n) = -gx;
        Eigen::Map<Mat>(out.data() + 2 * n, 2 * n, 2 * n) = a * m;
        out[s.size() - 1] = xi.dot(gxi) - sys.value(x, xi);
        return out;
    }
};

// Dormand-Prince 5(4) with FSAL and standard step control.
class Dopri5 {
  public:
    Dopri5(const HamiltonianSystem& sys, const IntegratorOptions& opt)
        : aug_{sys, sys.dim}, opt_(opt) {}

    // Advance state in place from time t0 to t1.
    void advance(Vec& y, double t0, double t1) const {
        if (t1 == t0) return;
        double dir = t1 > t0 ? 1.0 : -1.0;
        double span = std::abs(t1 - t0);
        Vec f0 = aug_.rhs(y);
        require_finite(f0, t0);
        double h = std::min(initial_step(y, f0), span);
        double t = 0.0;  // elapsed |time|
        std::size_t steps = 0;
        Vec k1 = f0;
        while (t < span) {
            if (++steps > opt_.max_steps)
                throw integration_error("integrator exceeded max step count", t0 + dir * t);
            h = std::min(h, span - t);
            Vec k2, k3, k4, k5, k6, k7, y5;
            double err = step_pair(y, k1, dir * h, y5, k2, k3, k4, k5, k6, k7);
            if (!y5.allFinite() || !std::isfinite(err)) {
                h *= 0.25;
                if (h < opt_.h_min)
                    throw integration_error("step size underflow (non-finite derivative)", t0 + dir * t);
                continue;
            }
            if (err <= 1.0) {
                t += h;
                y = y5;
                k1 = k7;  // FSAL
                double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
                h *= grow;
            } else {
                h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
                if (h < opt_.h_min)
                    throw integration_error("step size underflow", t0 + dir * t);
            }
        }
    }

  private:
    AugmentedSystem aug_;
    IntegratorOptions opt_;

    void require_finite(const Vec& f, double t) const {
        if (!f.allFinite()) throw integration_error("non-finite derivative at start", t);
    }

    double initial_step(const Vec& y, const Vec& f) const {
        double d0 = y.cwiseAbs().maxCoeff() + 1.0;
        double d1 = f.cwiseAbs().maxCoeff() + 1e-12;
        return std::clamp(0.01 * d0 / d1, 1e-8, 0.1);
    }

    // One embedded step; returns scaled error norm, fills y5 and stages.
    double step_pair(const Vec& y, const Vec& k1, double h, Vec& y5, Vec& k2, Vec& k3, Vec& k4,
                     Vec& k5, Vec& k6, Vec& k7) const {
        k2 = aug_.rhs(y + h * (0.2 * k1));
        k3 = aug_.rhs(y + h * (3.0 / 40 * k1 + 9.0 / 40 * k2));
        k4 = aug_.rhs(y + h * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3));
        k5 = aug_.rhs(y + h * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 + 64448.0 / 6561 * k3 -
                               212.0 / 729 * k4));
        k6 = aug_.rhs(y + h * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 + 46732.0 / 5247 * k3 +
                               49.0 / 176 * k4 - 5103.0 / 18656 * k5));
        y5 = y + h * (35.0 / 384 * k1 + 500.0 / 1113 * k3 + 125.0 / 192 * k4 -
                      2187.0 / 6784 * k5 + 11.0 / 84 * k6);
        k7 = aug_.rhs(y5);
        Vec y4 = y + h * (5179.0 / 57600 * k1 + 7571.0 / 16695 * k3 + 393.0 / 640 * k4 -
                          92097.0 / 339200 * k5 + 187.0 / 2100 * k6 + 1.0 / 40 * k7);
        double err2 = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            double sc = opt_.atol + opt_.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            double e = (y5[i] - y4[i]) / sc;
            err2 += e * e;
        }
        return std::sqrt(err2 / double(y.size()));
    }
};

inline Vec pack_seed(const PhasePoint& seed, int n) {
    Vec y(2 * n + 4 * n * n + 1);
    y.segment(0, n) = seed.x;
    y.segment(n, n) = seed.xi;
    Eigen::Map<Mat>(y.data() + 2 * n, 2 * n, 2 * n) = Mat::Identity(2 * n, 2 * n);
    y[y.size() - 1] = 0.0;
    return y;
}

inline FlowJet unpack_jet(const Vec& y, int n, double t) {
    FlowJet jet;
    jet.t = t;
    jet.point.x = y.segment(0, n);
    jet.point.xi = y.segment(n, n);
    jet.jacobian = Eigen::Map<const Mat>(y.data() + 2 * n, 2 * n, 2 * n);
    jet.action = y[y.size() - 1];
    return jet;
}

}  // namespace detail

/// Integrate Phi_t, its 2Nx2N tangent map, and the action from a seed.
inline FlowJet evolve(const HamiltonianSystem& sys, const PhasePoint& seed, double t,
                      const IntegratorOptions& opt = {}) {
    const int n = sys.dim;
    Vec y = detail::pack_seed(seed, n);
    if (t != 0.0) detail::Dopri5(sys, opt).advance(y, 0.0, t);
    return detail::unpack_jet(y, n, t);
}

/// Jets at a monotone sequence of times, one continuous integration pass.
inline std::vector<FlowJet> evolve_path(const HamiltonianSystem& sys, const PhasePoint& seed,
                                        std::span<const double> times,
                                        const IntegratorOptions& opt = {}) {
    const int n = sys.dim;
    detail::Dopri5 stepper(sys, opt);
    Vec y = detail::pack_seed(seed, n);
    std::vector<FlowJet> out;
    out.reserve(times.size());
    double t_prev = 0.0;
    for (double t : times) {
        stepper.advance(y, t_prev, t);
        out.push_back(detail::unpack_jet(y, n, t));
        t_prev = t;
    }
    return out;
}

struct BatchItem {
    std::optional<FlowJet> jet;
    std::string error;  // empty on success
};

/// Elementwise evolve; per-seed failures reported, batch continues.
inline std::vector<BatchItem> evolve_batch(const HamiltonianSystem& sys,
                                           std::span<const PhasePoint> seeds, double t,
                                           const IntegratorOptions& opt = {}, unsigned threads = 0) {
    std::vector<BatchItem> out(seeds.size());
    parallel_for(
        seeds.size(),
        [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                try {
                    out[i].jet = evolve(sys, seeds[i], t, opt);
                } catch (const error& e) {
                    out[i].error = e.what();
                }
            }
        },
        threads);
    return out;
}

inline double symplectic_defect(const Mat& jac) {
    const int n2 = int(jac.rows());
    Mat omega = symplectic_form(n2 / 2);
    return operator_norm(jac.transpose() * omega * jac - omega);
}

inline double determinant_defect(const Mat& jac) { return std::abs(jac.determinant() - 1.0); }

inline double identity_deviation(const Mat& jac) {
    return operator_norm(jac - Mat::Identity(jac.rows(), jac.cols()));
}

struct DisplacementBound {
    double c_eta = 0.0;
    double radius = 0.0;       // the R achieving the requested eta
    double implied_eta = 0.0;  // m_R e^{T(kappa + m_R e^{kappa T})} at that R
};

/// The Lemma-4.1 constant C_eta from the (m_R, M_R) construction:
/// sup_{|t|<=T} |X_t(x,xi) - x| <= C_eta (1 + |xi|) + eta |x|.
/// Probes h on a log-spaced radius grid; throws when no probed R brings the
/// implied eta below the request.
inline DisplacementBound position_displacement_bound(const HamiltonianSystem& sys, double T,
                                                     double eta) {
    if (!(eta > 0.0)) throw validation_error("position_displacement_bound: eta must be positive");
    const auto& h = sys.sublinear_h;
    const double kappa = sys.kappa;
    auto sup_tail_ratio = [&](double radius) {
        double m = 0.0;
        for (int i = 0; i <= 240; ++i) {
            double r = radius * std::pow(10.0, i / 24.0);
            m = std::max(m, h(r) / r);
        }
        return m;
    };
    auto sup_head = [&](double radius) {
        double m = 0.0;
        for (int i = 0; i <= 400; ++i) m = std::max(m, h(radius * i / 400.0));
        return m;
    };
    for (int j = 0; j <= 160; ++j) {
        double radius = std::pow(10.0, j / 20.0);  // 1 .. 1e8
        double m_r = sup_tail_ratio(radius);
        double growth = std::exp(T * (kappa + m_r * std::exp(kappa * T)));
        double implied = m_r * growth;
        if (implied <= eta) {
            DisplacementBound b;
            b.radius = radius;
            b.implied_eta = implied;
            b.c_eta = (1.0 + kappa * T + sup_head(radius) * T) * growth;
            return b;
        }
    }
    throw unattainable_error("position_displacement_bound: eta unattainable on probed radii (m_R floor too high)");
}

}  // namespace foldlab
