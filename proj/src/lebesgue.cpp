#include "parvex/lebesgue.hpp"

#include <algorithm>
#include <cmath>

namespace parvex {

double abs_pow(double u, double e) {
    if (e == 0.0) return 1.0;
    const double a = std::abs(u);
    if (a == 0.0) return 0.0;
    if (a > 1e100) return std::exp(e * std::log(a)); // avoid pow overflow paths
    return std::pow(a, e);
}

double modular(const GridFunction& u, const ExponentField& p) {
    if (u.mesh_ptr().get() != p.mesh_ptr().get() && !u.mesh().same_layout(p.mesh()))
        throw StructuralError("modular: field and exponent live on different meshes");
    const Mesh& mesh = u.mesh();
    double acc = 0.0;
    for (int i = 0; i < u.size(); ++i) {
        const double a = std::abs(u[i]);
        if (p.is_infinite(i)) {
            if (a > 1.0) return kInfinity; // essential-supremum convention
            continue;
        }
        const double term = abs_pow(a, p[i]);
        if (std::isnan(term)) throw NumericDomainError("modular: NaN contribution");
        acc += mesh.node_weight(i) * term;
    }
    if (std::isnan(acc)) throw NumericDomainError("modular: NaN accumulation");
    return acc;
}

double luxemburg_root(const std::function<double(double)>& modular_of_scaled, double sup_scale) {
    const int kMaxIters = 200;
    double hi = std::max(1.0, sup_scale);
    int guard = 0;
    while (modular_of_scaled(hi) > 1.0) {
        hi *= 2.0;
        if (++guard > 200) throw SolverError("luxemburg norm: bracket expansion failed");
    }
    // shrink the lower end until the modular exceeds 1; if it never does the
    // infimum is 0 (e.g. zero fields, or mass only on |u| <= 1 infinite nodes)
    double lo = hi;
    guard = 0;
    while (modular_of_scaled(lo) <= 1.0) {
        lo *= 0.5;
        if (lo < 1e-280 || ++guard > 1200) return 0.0;
    }
    for (int it = 0; it < kMaxIters; ++it) {
        if (hi - lo <= 1e-12) return 0.5 * (lo + hi);
        const double mid = 0.5 * (lo + hi);
        if (modular_of_scaled(mid) <= 1.0)
            hi = mid;
        else
            lo = mid;
    }
    throw SolverError("luxemburg norm: bisection did not converge", hi - lo);
}

double luxemburg_norm(const GridFunction& u, const ExponentField& p) {
    const double sup = u.max_abs();
    if (sup == 0.0) return 0.0;
    GridFunction scaled = u;
    auto sigma = [&](double lambda) {
        for (int i = 0; i < u.size(); ++i) scaled[i] = u[i] / lambda;
        return modular(scaled, p);
    };
    const double q_measure = u.mesh().full_measure();
    const double sup_scale = sup * abs_pow(q_measure, 1.0 / p.lower_bound());
    return luxemburg_root(sigma, sup_scale);
}

double lp_norm(const GridFunction& u, double r) {
    if (!(r >= 1.0)) throw DomainError("lp_norm: exponent must be >= 1");
    const Mesh& mesh = u.mesh();
    double acc = 0.0;
    for (int i = 0; i < u.size(); ++i) acc += mesh.node_weight(i) * abs_pow(u[i], r);
    return abs_pow(acc, 1.0 / r);
}

ExponentField conjugate(const ExponentField& p, bool allow_infinity) {
    std::vector<double> samples(static_cast<std::size_t>(p.size()));
    std::vector<char> mask(static_cast<std::size_t>(p.size()), 0);
    bool any_mask = false;
    for (int i = 0; i < p.size(); ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        if (p.is_infinite(i)) {
            samples[k] = 1.0;
            continue;
        }
        const double v = p[i];
        if (v <= 1.0) {
            if (!allow_infinity)
                throw DomainError("conjugate: sample equal to 1 needs infinity handling");
            mask[k] = 1;
            samples[k] = 0.0;
            any_mask = true;
            continue;
        }
        samples[k] = v / (v - 1.0);
    }
    return ExponentField::from_samples(p.mesh_ptr(), std::move(samples),
                                       any_mask ? std::move(mask) : std::vector<char>{});
}

HolderReport holder_pairing_check(const GridFunction& u, const GridFunction& v,
                                  const ExponentField& p, double tol) {
    require_same_mesh(u, v, "holder_pairing_check");
    const Mesh& mesh = u.mesh();
    HolderReport r;
    for (int i = 0; i < u.size(); ++i) r.lhs += mesh.node_weight(i) * std::abs(u[i] * v[i]);
    const ExponentField pc = conjugate(p);
    r.rhs = 2.0 * luxemburg_norm(u, p) * luxemburg_norm(v, pc);
    r.holds = r.lhs <= r.rhs + tol * std::max(1.0, r.rhs);
    return r;
}

SandwichReport norm_modular_sandwich_check(const GridFunction& u, const ExponentField& p,
                                           double tol) {
    SandwichReport r;
    r.norm = luxemburg_norm(u, p);
    r.modular_value = modular(u, p);
    const double a = abs_pow(r.norm, p.lower_bound());
    const double b = abs_pow(r.norm, p.upper_bound());
    r.lower = std::min(a, b);
    r.upper = std::max(a, b);
    const double scale = std::max(1.0, r.upper);
    r.holds = (r.lower <= r.modular_value + tol * scale) &&
              (r.modular_value <= r.upper + tol * scale);
    return r;
}

InclusionReport inclusion_modular_check(const GridFunction& u, const ExponentField& p1,
                                        const ExponentField& p2, double tol) {
    if (p1.size() != p2.size())
        throw StructuralError("inclusion_modular_check: exponent fields differ in size");
    for (int i = 0; i < p1.size(); ++i) {
        if (p2.is_infinite(i) && !p1.is_infinite(i))
            throw PreconditionError("inclusion_modular_check: p2 > p1 at a node");
        if (!p2.is_infinite(i) && !p1.is_infinite(i) && p2[i] > p1[i] + 1e-12)
            throw PreconditionError("inclusion_modular_check: p2 > p1 at a node");
    }
    InclusionReport r;
    r.sigma_p1 = modular(u, p1);
    r.sigma_p2 = modular(u, p2);
    r.measure = u.mesh().full_measure();
    const double bound = r.sigma_p1 + r.measure;
    r.holds = r.sigma_p2 <= bound + tol * std::max(1.0, bound);
    return r;
}

ExponentField beta_exponent(const ExponentField& alpha, double p0, double eta) {
    if (!(p0 >= 2.0)) throw DomainError("beta_exponent: requires p0 >= 2");
    if (!(eta > 0.0 && eta < 1.0)) throw DomainError("beta_exponent: eta must lie in (0,1)");
    if (!(alpha.lower_bound() > 1.0))
        throw DomainError("beta_exponent: requires alpha^- > 1");
    if (alpha.has_infinite_nodes())
        throw DomainError("beta_exponent: alpha must be finite");
    std::vector<double> samples(static_cast<std::size_t>(alpha.size()), 0.0);
    std::vector<char> mask(static_cast<std::size_t>(alpha.size()), 0);
    bool any_mask = false;
    for (int i = 0; i < alpha.size(); ++i) {
        const double a = alpha[i];
        const std::size_t k = static_cast<std::size_t>(i);
        if (a < p0 - eta) {
            const double a_star = a / (a - 1.0);
            samples[k] = p0 * a_star / (p0 - a);
        } else {
            mask[k] = 1;
            any_mask = true;
        }
    }
    return ExponentField::from_samples(alpha.mesh_ptr(), std::move(samples),
                                       any_mask ? std::move(mask) : std::vector<char>{});
}

ExponentField beta1_exponent(const ExponentField& alpha, double p0) {
    if (!(p0 >= 2.0)) throw DomainError("beta1_exponent: requires p0 >= 2");
    if (!(alpha.upper_bound() < p0))
        throw DomainError("beta1_exponent: requires alpha^+ < p0");
    if (!(alpha.lower_bound() > 1.0))
        throw DomainError("beta1_exponent: requires alpha^- > 1");
    std::vector<double> samples(static_cast<std::size_t>(alpha.size()));
    for (int i = 0; i < alpha.size(); ++i) {
        const double a = alpha[i];
        samples[static_cast<std::size_t>(i)] = p0 * (a / (a - 1.0)) / (p0 - a);
    }
    return ExponentField::from_samples(alpha.mesh_ptr(), std::move(samples));
}

CriticalExponents critical_exponent(int n, double p0) {
    if (n < 3) throw DomainError("critical_exponent: requires n >= 3");
    if (!(p0 >= 2.0)) throw DomainError("critical_exponent: requires p0 >= 2");
    CriticalExponents c;
    c.q0 = p0 / (p0 - 1.0);
    if (!(static_cast<double>(n) > c.q0))
        throw DomainError("critical_exponent: requires n > q0");
    c.p_tilde = static_cast<double>(n) * p0 / (static_cast<double>(n) - c.q0);
    c.p_tilde_conj = c.p_tilde / (c.p_tilde - 1.0);
    return c;
}

double mixed_norm(const TimeSeriesField& g, double r_time, double r_space) {
    g.validate();
    if (!(r_space >= 1.0)) throw DomainError("mixed_norm: spatial exponent must be >= 1");
    if (!(r_time >= 1.0)) throw DomainError("mixed_norm: time exponent must be >= 1");
    if (std::isinf(r_time)) {
        double sup = 0.0;
        for (const GridFunction& s : g.slices) sup = std::max(sup, lp_norm(s, r_space));
        return sup;
    }
    double acc = 0.0;
    for (int k = 0; k < g.levels(); ++k)
        acc += g.time_weight(k) * abs_pow(lp_norm(g.slices[static_cast<std::size_t>(k)], r_space), r_time);
    return abs_pow(acc, 1.0 / r_time);
}

} // namespace parvex
