#pragma once

#include "foldlab/common.hpp"
#include "foldlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace foldlab {

enum class RegularityTag { smooth, c_k, lipschitz, bv_only };

struct ThetaCantorTree;
struct FatCantorData;

/// Initial momentum profile U^in on R (one dimension), with derivative data
/// where defined, a resolution-limited indicator of the nondifferentiability
/// set E, and the phase antiderivative S^in(y) = integral_0^y U^in.
///
/// satisfies_l_n1 and sublinear_at_infinity are declared analytic facts,
/// taken from the construction, never computed.
struct MomentumProfile {
    std::string id;
    std::function<double(double)> eval;
    std::function<std::optional<double>(double)> deriv;
    std::function<bool(double)> nondiff;
    std::function<double(double)> phase;
    RegularityTag regularity = RegularityTag::smooth;
    int smoothness_k = 0;  // meaningful for RegularityTag::c_k
    bool satisfies_l_n1 = true;
    bool sublinear_at_infinity = true;
    // Components of the set where DF_1 = 0 for the free flow, when the
    // construction knows them exactly (used as quadrature decompositions).
    std::vector<Interval> singular_support;
    std::shared_ptr<const ThetaCantorTree> theta_tree;
    std::shared_ptr<const FatCantorData> fat_cantor;
};

inline constexpr double kNondiffResolution = 1e-12;

namespace detail {

// Smooth step built from e^{-1/s}: 0 at s<=0, 1 at s>=1, strictly between on (0,1).
inline double glue_f(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

inline double smoothstep(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    double a = glue_f(s), b = glue_f(1.0 - s);
    return a / (a + b);
}

inline double bump_chi(double u) {
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ternary Cantor machinery (Example 3.1)

/// Cantor function c(y), ternary-digit algorithm truncated at `depth` digits.
/// The remainder is filled linearly, so the truncation stays continuous and
/// nondecreasing with error <= 2^-depth.
inline double cantor_function(double y, int depth = 40) {
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    double out = 0.0, scale = 0.5;
    for (int d = 0; d < depth; ++d) {
        y *= 3.0;
        if (y >= 2.0) {
            out += scale;
            y -= 2.0;
        } else if (y > 1.0) {
            return out + scale;
        }
        scale *= 0.5;
    }
    return out + 2.0 * scale * std::clamp(y, 0.0, 1.0);
}

/// Distance from y to the depth-truncated ternary Cantor set.
inline double cantor_set_distance(double y, int depth = 40) {
    if (y < 0.0) return -y;
    if (y > 1.0) return y - 1.0;
    double scale = 1.0;
    for (int d = 0; d < depth; ++d) {
        y *= 3.0;
        if (y >= 2.0) {
            y -= 2.0;
        } else if (y > 1.0) {
            return scale / 3.0 * std::min(y - 1.0, 2.0 - y);
        }
        scale /= 3.0;
    }
    return 0.0;
}

/// integral_0^y c(z) dz via the self-similarity of the Cantor function.
inline double cantor_function_integral(double y, int depth = 40) {
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 0.5;
    if (depth <= 0) return 0.5 * y * y;
    if (y <= 1.0 / 3.0) return cantor_function_integral(3.0 * y, depth - 1) / 6.0;
    if (y <= 2.0 / 3.0) return 1.0 / 12.0 + 0.5 * (y - 1.0 / 3.0);
    return 0.5 - (1.0 - y) + cantor_function_integral(1.0 - y, depth - 1);
}

/// Example 3.1: U(z) = H^s([0,z] cap K) - z on [0,1], 0 outside. BV but not
/// absolutely continuous; E is the Cantor set itself.
inline MomentumProfile profile_cantor_bv(int depth = 40) {
    MomentumProfile p;
    p.id = "cantor_bv";
    p.regularity = RegularityTag::bv_only;
    p.satisfies_l_n1 = false;
    p.sublinear_at_infinity = true;
    p.eval = [depth](double y) {
        if (y < 0.0 || y > 1.0) return 0.0;
        return cantor_function(y, depth) - y;
    };
    p.deriv = [depth](double y) -> std::optional<double> {
        if (y < 0.0 || y > 1.0) return 0.0;
        if (cantor_set_distance(y, depth) <= kNondiffResolution) return std::nullopt;
        return -1.0;  // c' = 0 off K
    };
    p.nondiff = [depth](double y) {
        if (y < -kNondiffResolution || y > 1.0 + kNondiffResolution) return false;
        return cantor_set_distance(y, depth) <= kNondiffResolution;
    };
    p.phase = [depth](double y) {
        if (y <= 0.0) return 0.0;
        if (y >= 1.0) return 0.0;  // S(1) = 1/2 - 1/2
        return cantor_function_integral(y, depth) - 0.5 * y * y;
    };
    return p;
}

// ---------------------------------------------------------------------------
// Example 2.2: U(z) = z sin(ln |z|)

inline MomentumProfile profile_log_oscillation() {
    MomentumProfile p;
    p.id = "log_oscillation";
    p.regularity = RegularityTag::lipschitz;
    p.satisfies_l_n1 = true;
    // |U(y)|/|y| = |sin ln|y|| oscillates without decaying, in either limit.
    p.sublinear_at_infinity = false;
    p.eval = [](double z) { return z == 0.0 ? 0.0 : z * std::sin(std::log(std::abs(z))); };
    p.deriv = [](double z) -> std::optional<double> {
        if (std::abs(z) <= kNondiffResolution) return std::nullopt;
        double l = std::log(std::abs(z));
        return std::sin(l) + std::cos(l);
    };
    p.nondiff = [](double z) { return std::abs(z) <= kNondiffResolution; };
    // Closed form: d/dy [ y^2 (2 sin ln|y| - cos ln|y|) / 5 ] = y sin ln|y|.
    p.phase = [](double y) {
        if (y == 0.0) return 0.0;
        double l = std::log(std::abs(y));
        return y * y * (2.0 * std::sin(l) - std::cos(l)) / 5.0;
    };
    return p;
}

// ---------------------------------------------------------------------------
// Example 3.2: U = -antiderivative of a plateau bump

class BumpFocusingProfile {
  public:
    BumpFocusingProfile() {
        v_cum_ = CumulativeTable([](double z) { return v(z); }, 0.5, 1.0, 512);
        u_tail_ = CumulativeTable([this](double z) { return 0.5 + v_cum_(z); }, 0.5, 1.0, 512);
        u_inf_ = 0.5 + v_cum_.back();
    }

    /// The plateau bump: 1 on |z|<=1/2, 0 outside (-1,1), strictly between on the glue.
    static double v(double z) {
        double a = std::abs(z);
        if (a <= 0.5) return 1.0;
        if (a >= 1.0) return 0.0;
        return detail::smoothstep(2.0 * (1.0 - a));
    }

    double eval(double z) const {
        double a = std::abs(z), s = z < 0.0 ? -1.0 : 1.0;
        if (a <= 0.5) return -z;  // exact on the plateau
        if (a >= 1.0) return -s * u_inf_;
        return -s * (0.5 + v_cum_(a));
    }

    double phase(double y) const {
        double a = std::abs(y);
        if (a <= 0.5) return -0.5 * y * y;
        if (a <= 1.0) return -(0.125 + u_tail_(a));
        return -(0.125 + u_tail_(1.0)) - u_inf_ * (a - 1.0);
    }

  private:
    CumulativeTable v_cum_;   // int_{1/2}^z v
    CumulativeTable u_tail_;  // int_{1/2}^z (1/2 + int_{1/2}^w v) dw
    double u_inf_ = 0.0;
};

inline MomentumProfile profile_bump_focusing() {
    auto impl = std::make_shared<BumpFocusingProfile>();
    MomentumProfile p;
    p.id = "bump_focusing";
    p.regularity = RegularityTag::smooth;
    p.satisfies_l_n1 = true;
    p.eval = [impl](double z) { return impl->eval(z); };
    p.deriv = [](double z) -> std::optional<double> { return -BumpFocusingProfile::v(z); };
    p.nondiff = [](double) { return false; };
    p.phase = [impl](double y) { return impl->phase(y); };
    p.singular_support = {{-0.5, 0.5}};
    return p;
}

// ---------------------------------------------------------------------------
// Example 3.3: fat Cantor set K, F_1' = 0 exactly on K

struct FatCantorOptions {
    int depth = 10;
    double psi0 = 0.12;       // fraction of a component removed at step 1
    double psi_decay = 0.8;   // psi_n = psi0 * decay^(n-1)
    double jitter = 0.2;      // deterministic per-interval length jitter
    // Bump amplitude exponent s: amp = len^s, image gap ~ len^(1+s).
    // Defaults to the construction's smoothness order k.
    std::optional<double> gap_exponent;
};

struct FatCantorData {
    int k = 1;
    double gap_exponent = 1.0;
    double measure = 0.0;                 // L^1(K_depth)
    std::vector<Interval> components;     // K_depth, sorted
    struct Bump {
        double a, b, amp;
        double gap;         // integral of the bump = amp * len/2 * |chi|_1
        double prefix_gap;  // sum of gaps strictly left
        double prefix_int;  // integral_0^a of F_1 restricted to [0,1] part
    };
    std::vector<Bump> bumps;  // sorted by a

    // chi cumulative tables, shared by all instances
    static const CumulativeTable& chi_cum() {
        static CumulativeTable t([](double u) { return detail::bump_chi(u); }, -1.0, 1.0, 2048);
        return t;
    }
    static const CumulativeTable& chi_cum2() {
        static CumulativeTable t([](double u) { return chi_cum()(u); }, -1.0, 1.0, 2048);
        return t;
    }

    // g-part of F_1 on [0, 1]: sum of bump integrals up to y.
    double f1_unit(double y) const {
        if (y <= 0.0) return 0.0;
        if (y >= 1.0) return total_gap_;
        auto it = std::upper_bound(bumps.begin(), bumps.end(), y,
                                   [](double v, const Bump& bp) { return v < bp.a; });
        if (it == bumps.begin()) return 0.0;
        const Bump& bp = *(it - 1);
        if (y >= bp.b) return bp.prefix_gap + bp.gap;
        double u = (2.0 * y - bp.a - bp.b) / (bp.b - bp.a);
        // clamp away Hermite undershoot in the essentially-flat chi tails
        double part = std::clamp(bp.amp * 0.5 * (bp.b - bp.a) * chi_cum()(u), 0.0, bp.gap);
        return bp.prefix_gap + part;
    }

    // integral_0^y F_1 on [0, 1].
    double int_f1_unit(double y) const {
        if (y <= 0.0) return 0.0;
        y = std::min(y, 1.0);
        auto it = std::upper_bound(bumps.begin(), bumps.end(), y,
                                   [](double v, const Bump& bp) { return v < bp.a; });
        if (it == bumps.begin()) return 0.0;  // F_1 == 0 left of the first bump
        const Bump& bp = *(it - 1);
        if (y >= bp.b) {
            // flat stretch after bump bp
            return bp.prefix_int + bump_full_int(bp) + (bp.prefix_gap + bp.gap) * (y - bp.b);
        }
        double len = bp.b - bp.a, u = (2.0 * y - bp.a - bp.b) / len;
        double part = std::clamp(bp.amp * 0.25 * len * len * chi_cum2()(u), 0.0,
                                 bp.amp * 0.25 * len * len * chi_cum2().back());
        return bp.prefix_int + bp.prefix_gap * (y - bp.a) + part;
    }

    double g_value(double y) const {
        auto it = std::upper_bound(bumps.begin(), bumps.end(), y,
                                   [](double v, const Bump& bp) { return v < bp.a; });
        if (it == bumps.begin()) return 0.0;
        const Bump& bp = *(it - 1);
        if (y >= bp.b) return 0.0;
        return bp.amp * detail::bump_chi((2.0 * y - bp.a - bp.b) / (bp.b - bp.a));
    }

    double total_gap() const { return total_gap_; }

    double bump_full_int(const Bump& bp) const {
        double len = bp.b - bp.a;
        return bp.prefix_gap * len + bp.amp * 0.25 * len * len * chi_cum2().back();
    }

    void finalize() {
        std::sort(bumps.begin(), bumps.end(), [](const Bump& x, const Bump& y) { return x.a < y.a; });
        double pg = 0.0, pi = 0.0, prev_b = 0.0;
        for (auto& bp : bumps) {
            pi += pg * (bp.a - prev_b);  // flat stretch at level pg
            bp.prefix_gap = pg;
            bp.prefix_int = pi;
            pi += bump_full_int(bp);
            pg += bp.gap;
            prev_b = bp.b;
        }
        total_gap_ = pg;
    }

  private:
    double total_gap_ = 0.0;
};

class FatCantorProfile {
  public:
    FatCantorProfile(int k, const FatCantorOptions& opt) {
        data_ = std::make_shared<FatCantorData>();
        data_->k = k;
        data_->gap_exponent = opt.gap_exponent.value_or(double(k));
        const double chi_l1 = FatCantorData::chi_cum().back();
        auto add_bump = [&](double a, double b) {
            FatCantorData::Bump bp;
            bp.a = a;
            bp.b = b;
            bp.amp = std::pow(b - a, data_->gap_exponent);
            bp.gap = bp.amp * 0.5 * (b - a) * chi_l1;
            bp.prefix_gap = bp.prefix_int = 0.0;
            data_->bumps.push_back(bp);
        };
        std::vector<Interval> comps{{0.0, 1.0}};
        for (int n = 1; n <= opt.depth; ++n) {
            double psi = opt.psi0 * std::pow(opt.psi_decay, n - 1);
            std::vector<Interval> next;
            next.reserve(comps.size() * 3);
            for (std::size_t i = 0; i < comps.size(); ++i) {
                double a = comps[i].lo, b = comps[i].hi, len = b - a;
                double d = 0.5 * len * psi * hash_jitter(std::uint64_t(n), i, opt.jitter);
                double c1 = a + len / 3.0, c2 = a + 2.0 * len / 3.0;
                if (d >= len / 3.0) throw construction_error("fat cantor: removal exceeds component");
                add_bump(c1 - 0.5 * d, c1 + 0.5 * d);
                add_bump(c2 - 0.5 * d, c2 + 0.5 * d);
                next.push_back({a, c1 - 0.5 * d});
                next.push_back({c1 + 0.5 * d, c2 - 0.5 * d});
                next.push_back({c2 + 0.5 * d, b});
            }
            comps = std::move(next);
        }
        data_->components = comps;
        double meas = 0.0;
        for (const auto& c : comps) meas += c.length();
        data_->measure = meas;
        if (meas <= 0.5)
            throw construction_error("fat cantor: L^1(K) <= 1/2 at requested depth (removal too aggressive)");
        data_->finalize();
        // h glue outside [0,1]
        h_cum_left_ = CumulativeTable([](double y) { return h_glue(y); }, -1.0, 0.0, 512);
        h_cum2_left_ = CumulativeTable([this](double y) { return h_cum_left_(y); }, -1.0, 0.0, 512);
        h_cum_right_ = CumulativeTable([](double y) { return h_glue(y); }, 1.0, 2.0, 512);
        h_cum2_right_ = CumulativeTable([this](double y) { return h_cum_right_(y); }, 1.0, 2.0, 512);
    }

    // h: 0 on [0,1], 1 outside [-1,2], strictly positive on the glue.
    static double h_glue(double y) {
        if (y >= 0.0 && y <= 1.0) return 0.0;
        if (y < 0.0) return detail::smoothstep(-y);
        return detail::smoothstep(y - 1.0);
    }

    // F_1(y) = integral_0^y (g + h)
    double f1(double y) const {
        if (y >= 0.0 && y <= 1.0) return data_->f1_unit(y);
        if (y > 1.0) {
            double base = data_->total_gap();
            if (y <= 2.0) return base + (h_cum_right_(y) - h_cum_right_(1.0));
            return base + (h_cum_right_(2.0) - h_cum_right_(1.0)) + (y - 2.0);
        }
        if (y >= -1.0) return -(h_cum_left_(0.0) - h_cum_left_(y));
        return -(h_cum_left_(0.0) - h_cum_left_(-1.0)) + (y + 1.0);
    }

    // integral_0^y F_1
    double int_f1(double y) const {
        if (y >= 0.0 && y <= 1.0) return data_->int_f1_unit(y);
        if (y > 1.0) {
            double at1 = data_->int_f1_unit(1.0);
            if (y <= 2.0) {
                // int_1^y F_1 = base*(y-1) + int_1^y (Hr(z) - Hr(1)) dz
                double base = data_->total_gap() - h_cum_right_(1.0);
                return at1 + base * (y - 1.0) + (h_cum2_right_(y) - h_cum2_right_(1.0));
            }
            double at2 = int_f1(2.0);
            double f2 = f1(2.0);
            double w = y - 2.0;
            return at2 + f2 * w + 0.5 * w * w;  // F_1(z) = f1(2) + (z-2) beyond the glue
        }
        // y < 0: F_1(z) = Hl(z) - Hl(0), so
        // int_0^y F_1 = -(H2l(0) - H2l(y)) - Hl(0) * y
        if (y >= -1.0) return -(h_cum2_left_(0.0) - h_cum2_left_(y)) - h_cum_left_(0.0) * y;
        double atm1 = int_f1(-1.0);
        double fm1 = f1(-1.0);
        double w = y + 1.0;  // negative
        return atm1 + fm1 * w + 0.5 * w * w;
    }

    double u(double y) const { return f1(y) - y; }
    double uprime(double y) const { return g_or_h(y) - 1.0; }

    double g_or_h(double y) const {
        if (y >= 0.0 && y <= 1.0) return data_->g_value(y);
        return h_glue(y);
    }

    double phase(double y) const { return int_f1(y) - 0.5 * y * y; }

    std::shared_ptr<const FatCantorData> data() const { return data_; }

  private:
    std::shared_ptr<FatCantorData> data_;
    CumulativeTable h_cum_left_, h_cum2_left_, h_cum_right_, h_cum2_right_;
};

inline MomentumProfile profile_fat_cantor_ck(int k, const FatCantorOptions& opt = {}) {
    if (k < 1) throw validation_error("profile_fat_cantor_ck: k must be >= 1");
    auto impl = std::make_shared<FatCantorProfile>(k, opt);
    MomentumProfile p;
    p.id = "fat_cantor_ck";
    p.regularity = RegularityTag::c_k;
    p.smoothness_k = k;
    p.satisfies_l_n1 = true;
    p.eval = [impl](double y) { return impl->u(y); };
    p.deriv = [impl](double y) -> std::optional<double> { return impl->uprime(y); };
    p.nondiff = [](double) { return false; };
    p.phase = [impl](double y) { return impl->phase(y); };
    p.singular_support = impl->data()->components;
    p.fat_cantor = impl->data();
    return p;
}

// ---------------------------------------------------------------------------
// Example 3.4: theta-Cantor staircase profile

struct ThetaCantorTree {
    double theta = 0.25;
    int depth = 12;  // tree levels M
    std::vector<std::vector<double>> centers;  // centers[m-1]: the a_{m,k}, sorted
    std::vector<double> radius;                // r_m = (1 - 2 theta) theta^(m-1) / 2
    std::vector<Interval> ktilde_components;   // [0,1] minus the J intervals, depth M
};

class ThetaCantorProfile {
  public:
    ThetaCantorProfile(double theta, int tree_depth, int eval_depth)
        : theta_(theta), eval_depth_(eval_depth) {
        if (!(theta > 0.0 && theta < 0.5))
            throw validation_error("profile_theta_cantor: theta must lie in (0, 1/2)");
        tree_ = std::make_shared<ThetaCantorTree>();
        tree_->theta = theta;
        tree_->depth = tree_depth;
        tree_->centers.resize(tree_depth);
        tree_->radius.resize(tree_depth);
        tree_->centers[0] = {0.5};
        tree_->radius[0] = 0.5 * (1.0 - 2.0 * theta);
        for (int m = 1; m < tree_depth; ++m) {
            const auto& prev = tree_->centers[m - 1];
            auto& cur = tree_->centers[m];
            cur.reserve(prev.size() * 2);
            for (double a : prev) cur.push_back(theta * a);
            for (auto it = prev.rbegin(); it != prev.rend(); ++it) cur.push_back(1.0 - theta * *it);
            std::sort(cur.begin(), cur.end());
            tree_->radius[m] = tree_->radius[m - 1] * theta;
        }
        // K-tilde components: complement of the open J intervals in [0,1]
        std::vector<Interval> js;
        for (int m = 0; m < tree_depth; ++m) {
            double tr = theta * tree_->radius[m];
            for (double a : tree_->centers[m]) js.push_back({a - tr, a + tr});
        }
        std::sort(js.begin(), js.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
        double cursor = 0.0;
        for (const auto& j : js) {
            if (j.lo > cursor) tree_->ktilde_components.push_back({cursor, j.lo});
            cursor = std::max(cursor, j.hi);
        }
        if (cursor < 1.0) tree_->ktilde_components.push_back({cursor, 1.0});
    }

    double f1(double y) const { return f1_rec(y, eval_depth_); }
    double u(double y) const {
        if (y <= 0.0 || y >= 1.0) return 0.0;
        return f1(y) - y;
    }

    std::optional<double> f1prime(double y) const {
        if (y < -kNondiffResolution) return 1.0;
        if (y > 1.0 + kNondiffResolution) return 1.0;
        return f1prime_rec(y, eval_depth_, 1.0);
    }

    double int_f1(double y) const { return int_f1_rec(y, eval_depth_); }

    double phase(double y) const {
        if (y <= 0.0) return 0.0;
        if (y >= 1.0) return 0.0;  // G(1) = 1/2 cancels 1/2
        return int_f1(y) - 0.5 * y * y;
    }

    std::shared_ptr<const ThetaCantorTree> tree() const { return tree_; }
    double theta() const { return theta_; }

  private:
    double theta_;
    int eval_depth_;
    std::shared_ptr<ThetaCantorTree> tree_;

    double f1_rec(double y, int d) const {
        if (y <= 0.0) return 0.0;
        if (y >= 1.0) return 1.0;
        if (d <= 0) return y;  // truncation filler, error <= theta^eval_depth
        const double th = theta_;
        if (y < th) return th * f1_rec(y / th, d - 1);
        if (y > 1.0 - th) return 1.0 - th * f1_rec((1.0 - y) / th, d - 1);
        double jr = th * (0.5 - th);  // theta * r_1
        if (y <= 0.5 - jr) return th;
        if (y >= 0.5 + jr) return 1.0 - th;
        return th + (y - (0.5 - jr)) / th;
    }

    std::optional<double> f1prime_rec(double y, int d, double scale) const {
        const double th = theta_;
        double tol = kNondiffResolution / scale;
        if (std::abs(y) <= tol || std::abs(y - 1.0) <= tol) return std::nullopt;
        if (y < 0.0 || y > 1.0) return 1.0;
        if (d <= 0) return std::nullopt;  // unresolved at working depth
        if (y < th - tol) return f1prime_rec(y / th, d - 1, scale * th);
        if (y > 1.0 - th + tol) return f1prime_rec((1.0 - y) / th, d - 1, scale * th);
        if (std::abs(y - th) <= tol || std::abs(y - (1.0 - th)) <= tol) return std::nullopt;
        double jr = th * (0.5 - th);
        if (std::abs(y - (0.5 - jr)) <= tol || std::abs(y - (0.5 + jr)) <= tol) return std::nullopt;
        if (y < 0.5 - jr || y > 0.5 + jr) return 0.0;
        return 1.0 / th;
    }

    double int_f1_rec(double y, int d) const {
        if (y <= 0.0) return 0.0;
        if (y >= 1.0) return 0.5;
        if (d <= 0) return 0.5 * y * y;
        const double th = theta_;
        if (y <= th) return th * th * int_f1_rec(y / th, d - 1);
        if (y >= 1.0 - th) return 0.5 - (1.0 - y) + th * th * int_f1_rec((1.0 - y) / th, d - 1);
        double jr = th * (0.5 - th);
        double at_th = 0.5 * th * th;  // theta^2 G(1)
        if (y <= 0.5 - jr) return at_th + th * (y - th);
        double gl = at_th + th * (0.5 - jr - th);
        if (y <= 0.5 + jr) {
            double w = y - (0.5 - jr);
            return gl + th * w + 0.5 * w * w / th;
        }
        double gj = gl + th * (2.0 * jr) + 0.5 * (2.0 * jr) * (2.0 * jr) / th;
        return gj + (1.0 - th) * (y - (0.5 + jr));
    }
};

inline MomentumProfile profile_theta_cantor(double theta, int tree_depth = 12, int eval_depth = 48) {
    auto impl = std::make_shared<ThetaCantorProfile>(theta, tree_depth, eval_depth);
    MomentumProfile p;
    p.id = "theta_cantor";
    p.regularity = RegularityTag::lipschitz;
    p.satisfies_l_n1 = true;
    p.eval = [impl](double y) { return impl->u(y); };
    p.deriv = [impl](double y) -> std::optional<double> {
        auto fp = impl->f1prime(y);
        if (!fp) return std::nullopt;
        if (y <= 0.0 || y >= 1.0) return 0.0;
        return *fp - 1.0;
    };
    p.nondiff = [impl](double y) { return !impl->f1prime(y).has_value(); };
    p.phase = [impl](double y) { return impl->phase(y); };
    p.singular_support = impl->tree()->ktilde_components;
    p.theta_tree = impl->tree();
    return p;
}

// ---------------------------------------------------------------------------
// Smooth analytic profiles used by scenarios and tests

inline MomentumProfile profile_minus_sine() {
    MomentumProfile p;
    p.id = "minus_sine";
    p.regularity = RegularityTag::smooth;
    p.eval = [](double y) { return -std::sin(y); };
    p.deriv = [](double y) -> std::optional<double> { return -std::cos(y); };
    p.nondiff = [](double) { return false; };
    p.phase = [](double y) { return std::cos(y) - 1.0; };
    return p;
}

/// -sin(y) on [-3, 3], smoothly windowed to 0 for |y| >= 4. Compactly
/// supported folding profile for the quantum scenarios.
class SineWindowProfile {
  public:
    SineWindowProfile() {
        tail_ = CumulativeTable([](double y) { return uval(y); }, 3.0, 4.0, 512);
    }
    static double window(double y) {
        double a = std::abs(y);
        if (a <= 3.0) return 1.0;
        if (a >= 4.0) return 0.0;
        return detail::smoothstep(4.0 - a);
    }
    static double uval(double y) { return -std::sin(y) * window(y); }
    static double uderiv(double y) {
        double a = std::abs(y);
        if (a <= 3.0) return -std::cos(y);
        if (a >= 4.0) return 0.0;
        double s = y > 0.0 ? 1.0 : -1.0;
        double f = detail::glue_f(4.0 - a), g = detail::glue_f(1.0 - (4.0 - a));
        double fp = detail::glue_f(4.0 - a) / ((4.0 - a) * (4.0 - a));
        double gp = detail::glue_f(1.0 - (4.0 - a)) / ((1.0 - (4.0 - a)) * (1.0 - (4.0 - a)));
        double wp = -s * (fp * g + f * gp) / ((f + g) * (f + g));
        return -std::cos(y) * window(y) - std::sin(y) * wp;
    }
    double phase(double y) const {
        double a = std::abs(y);
        if (a <= 3.0) return std::cos(y) - 1.0;
        double base = std::cos(3.0) - 1.0;  // S(+-3), S even
        if (a <= 4.0) return base + tail_(a);
        return base + tail_.back();
    }

  private:
    CumulativeTable tail_;
};

inline MomentumProfile profile_sine_window() {
    auto impl = std::make_shared<SineWindowProfile>();
    MomentumProfile p;
    p.id = "sine_window";
    p.regularity = RegularityTag::smooth;
    p.eval = [](double y) { return SineWindowProfile::uval(y); };
    p.deriv = [](double y) -> std::optional<double> { return SineWindowProfile::uderiv(y); };
    p.nondiff = [](double) { return false; };
    p.phase = [impl](double y) { return impl->phase(y); };
    return p;
}

// ---------------------------------------------------------------------------
// N-dimensional adapter (sampled counting in N >= 2 only)

struct ProfileND {
    int dim = 1;
    std::function<Vec(const Vec&)> eval;
    std::function<std::optional<Mat>(const Vec&)> deriv;
    std::function<bool(const Vec&)> nondiff;
};

inline ProfileND as_nd(const MomentumProfile& p) {
    ProfileND q;
    q.dim = 1;
    q.eval = [p](const Vec& y) { return vec1(p.eval(y[0])); };
    q.deriv = [p](const Vec& y) -> std::optional<Mat> {
        auto d = p.deriv(y[0]);
        if (!d) return std::nullopt;
        Mat m(1, 1);
        m(0, 0) = *d;
        return m;
    };
    q.nondiff = [p](const Vec& y) { return p.nondiff(y[0]); };
    return q;
}

/// Componentwise product of one-dimensional profiles.
inline ProfileND product_profile(std::vector<MomentumProfile> axes) {
    ProfileND q;
    const int n = int(axes.size());
    q.dim = n;
    auto shared = std::make_shared<std::vector<MomentumProfile>>(std::move(axes));
    q.eval = [shared, n](const Vec& y) {
        Vec out(n);
        for (int i = 0; i < n; ++i) out[i] = (*shared)[i].eval(y[i]);
        return out;
    };
    q.deriv = [shared, n](const Vec& y) -> std::optional<Mat> {
        Mat m = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            auto d = (*shared)[i].deriv(y[i]);
            if (!d) return std::nullopt;
            m(i, i) = *d;
        }
        return m;
    };
    q.nondiff = [shared, n](const Vec& y) {
        for (int i = 0; i < n; ++i)
            if ((*shared)[i].nondiff(y[i])) return true;
        return false;
    };
    return q;
}

}  // namespace foldlab
