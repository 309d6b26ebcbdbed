// Shared test helpers: deterministic RNG, random field builders, scalar
// bisection and Runge-Kutta oracles, observed-order fits.

#ifndef PARVEX_TESTS_SUPPORT_HPP
#define PARVEX_TESTS_SUPPORT_HPP

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "parvex/exponent_field.hpp"
#include "parvex/mesh.hpp"

namespace testsupport {

// platform-stable uniforms from raw mt19937_64 bits
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  private:
    std::mt19937_64 gen_;
};

inline parvex::GridFunction random_field(const parvex::MeshPtr& mesh, Rng& rng, double lo = -3.0,
                                         double hi = 3.0) {
    std::vector<double> v(static_cast<std::size_t>(mesh->node_count()));
    for (double& x : v) x = rng.uniform(lo, hi);
    return parvex::GridFunction(mesh, std::move(v));
}

inline parvex::GridFunction random_admissible_field(const parvex::MeshPtr& mesh, Rng& rng,
                                                    double lo = -3.0, double hi = 3.0) {
    parvex::GridFunction u = random_field(mesh, rng, lo, hi);
    u.zero_boundary();
    return u;
}

inline parvex::ExponentField random_exponent(const parvex::MeshPtr& mesh, Rng& rng, double lo,
                                             double hi) {
    std::vector<double> v(static_cast<std::size_t>(mesh->node_count()));
    for (double& x : v) x = rng.uniform(lo, hi);
    return parvex::ExponentField::from_samples(mesh, std::move(v));
}

// root of a strictly decreasing scalar function on [lo, hi]
inline double bisect_decreasing(const std::function<double(double)>& f, double lo, double hi,
                                double tol = 1e-14) {
    for (int it = 0; it < 400 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// least-squares slope of log(err) against log(h)
inline double observed_order(const std::vector<double>& hs, const std::vector<double>& errs) {
    const std::size_t n = hs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(hs[i]);
        const double y = std::log(errs[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

// adaptive embedded RK45 (Cash-Karp) for scalar ODEs v' = f(t, v)
inline double rk45_integrate(const std::function<double(double, double)>& f, double t0, double v0,
                             double t1, double tol = 1e-10) {
    double t = t0, v = v0;
    double dt = (t1 - t0) / 64.0;
    while (t < t1 - 1e-15) {
        if (t + dt > t1) dt = t1 - t;
        const double k1 = f(t, v);
        const double k2 = f(t + 0.2 * dt, v + dt * 0.2 * k1);
        const double k3 = f(t + 0.3 * dt, v + dt * (3.0 / 40 * k1 + 9.0 / 40 * k2));
        const double k4 = f(t + 0.6 * dt, v + dt * (0.3 * k1 - 0.9 * k2 + 1.2 * k3));
        const double k5 =
            f(t + dt, v + dt * (-11.0 / 54 * k1 + 2.5 * k2 - 70.0 / 27 * k3 + 35.0 / 27 * k4));
        const double k6 = f(t + 0.875 * dt,
                            v + dt * (1631.0 / 55296 * k1 + 175.0 / 512 * k2 + 575.0 / 13824 * k3 +
                                      44275.0 / 110592 * k4 + 253.0 / 4096 * k5));
        const double v5 = v + dt * (37.0 / 378 * k1 + 250.0 / 621 * k3 + 125.0 / 594 * k4 +
                                    512.0 / 1771 * k6);
        const double v4 = v + dt * (2825.0 / 27648 * k1 + 18575.0 / 48384 * k3 +
                                    13525.0 / 55296 * k4 + 277.0 / 14336 * k5 + 0.25 * k6);
        const double err = std::abs(v5 - v4);
        const double scale = tol * (1.0 + std::abs(v));
        if (err <= scale || dt < 1e-14) {
            t += dt;
            v = v5;
        }
        const double factor = err > 0.0 ? 0.9 * std::pow(scale / err, 0.2) : 2.0;
        dt *= std::min(2.0, std::max(0.2, factor));
    }
    return v;
}

} // namespace testsupport

#endif
