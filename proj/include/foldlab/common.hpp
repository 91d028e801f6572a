#pragma once

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace foldlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive step size underflowed (non-finite derivative or unresolvable stiffness).
struct integration_error : error {
    double time;
    integration_error(const std::string& msg, double t_fail)
        : error(msg + " (t = " + std::to_string(t_fail) + ")"), time(t_fail) {}
};

struct construction_error : error {
    using error::error;
};

/// Requested value is undefined at a caustic point.
struct caustic_point_error : error {
    double x;
    caustic_point_error(double x_) : error("density undefined at caustic point"), x(x_) {}
};

struct grid_error : error {
    using error::error;
};

struct validation_error : error {
    using error::error;
};

struct unattainable_error : error {
    using error::error;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double y) const { return y >= lo && y <= hi; }
};

inline Vec vec1(double y) {
    Vec v(1);
    v[0] = y;
    return v;
}

/// Canonical symplectic matrix for N degrees of freedom, (x, xi) block order.
inline Mat symplectic_form(int n) {
    Mat omega = Mat::Zero(2 * n, 2 * n);
    omega.topRightCorner(n, n) = Mat::Identity(n, n);
    omega.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
    return omega;
}

/// Largest singular value (matrix operator norm).
inline double operator_norm(const Mat& m) {
    return m.jacobiSvd().singularValues()(0);
}

// Fixed-grain parallel loop with deterministic work assignment. Chunk
// boundaries depend only on (count, grain), never on the thread count, so
// any reduction merged in chunk order is reproducible.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body,
                         unsigned threads = 0, std::size_t grain = 256) {
    if (count == 0) return;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    std::size_t chunks = (count + grain - 1) / grain;
    if (threads <= 1 || chunks <= 1) {
        body(0, count);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t c = next.fetch_add(1);
            if (c >= chunks) return;
            std::size_t lo = c * grain;
            std::size_t hi = std::min(count, lo + grain);
            body(lo, hi);
        }
    };
    std::vector<std::thread> pool;
    unsigned nw = std::min<std::size_t>(threads, chunks);
    pool.reserve(nw);
    for (unsigned i = 0; i + 1 < nw; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

inline std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 0xcbf29ce484222325ULL) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Deterministic per-node jitter factor in [1-a, 1+a] from integer keys.
inline double hash_jitter(std::uint64_t k1, std::uint64_t k2, double a) {
    std::uint64_t h = fnv1a64(&k1, sizeof k1);
    h = fnv1a64(&k2, sizeof k2, h);
    double u = double(h % 100000ULL) / 99999.0;
    return 1.0 + a * (2.0 * u - 1.0);
}

inline bool finite(double v) { return std::isfinite(v); }

inline bool finite(const Vec& v) { return v.allFinite(); }

}  // namespace foldlab
