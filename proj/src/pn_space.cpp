#include "parvex/pn_space.hpp"

#include <cmath>

#include "parvex/lebesgue.hpp"

namespace parvex {

void PnIndex::validate() const {
    if (!(alpha >= 0.0)) throw DomainError("pn index: alpha must be >= 0");
    if (!(beta >= 1.0)) throw DomainError("pn index: beta must be >= 1");
}

PnIndex PnIndex::for_diffusion(double p0) {
    const double q0 = p0 / (p0 - 1.0);
    return PnIndex{(p0 - 2.0) * q0, q0};
}

namespace {

void require_spatial(const GridFunction& u, const char* op) {
    if (u.mesh().has_time())
        throw StructuralError(std::string(op) + ": expects a spatial field, not space-time");
}

} // namespace

double pn_pseudonorm(const GridFunction& u, const PnIndex& idx, bool ring) {
    idx.validate();
    require_spatial(u, "pn_pseudonorm");
    if (ring && !u.is_admissible())
        throw PreconditionError("pn_pseudonorm: ring variant requires zero boundary values");
    double acc = 0.0;
    for_each_face(u.mesh(), [&](int i, int j, int, double h, double measure) {
        const double mid = 0.5 * (u[i] + u[j]);
        const double grad = (u[j] - u[i]) / h;
        acc += abs_pow(mid, idx.alpha) * abs_pow(grad, idx.beta) * measure;
    });
    return abs_pow(acc, 1.0 / (idx.alpha + idx.beta));
}

GridFunction signed_power_map(const GridFunction& u, const PnIndex& idx) {
    idx.validate();
    GridFunction v = u;
    const double m = idx.alpha / idx.beta;
    if (m == 0.0) return v;
    for (int i = 0; i < u.size(); ++i) v[i] = abs_pow(u[i], m) * u[i];
    return v;
}

GridFunction signed_power_inverse(const GridFunction& v, const PnIndex& idx) {
    idx.validate();
    GridFunction u = v;
    const double e = -idx.alpha / (idx.alpha + idx.beta);
    if (e == 0.0) return u;
    for (int i = 0; i < v.size(); ++i) u[i] = (v[i] == 0.0) ? 0.0 : abs_pow(v[i], e) * v[i];
    return u;
}

GradientIdentityReport gradient_identity_check(const GridFunction& u, const PnIndex& idx,
                                               double tol) {
    idx.validate();
    require_spatial(u, "gradient_identity_check");
    const GridFunction phi = signed_power_map(u, idx);
    GradientIdentityReport r;
    for_each_face(u.mesh(), [&](int i, int j, int, double h, double measure) {
        const double grad = (phi[j] - phi[i]) / h;
        r.lhs += abs_pow(grad, idx.beta) * measure;
    });
    const double factor = abs_pow((idx.alpha + idx.beta) / idx.beta, idx.beta);
    r.rhs = factor * abs_pow(pn_pseudonorm(u, idx), idx.alpha + idx.beta);
    const double scale = std::max(std::max(r.lhs, r.rhs), 1e-300);
    r.rel_gap = std::abs(r.lhs - r.rhs) / scale;
    r.holds = r.rel_gap <= tol;
    return r;
}

double pn_metric(const GridFunction& u, const GridFunction& v, const PnIndex& idx) {
    require_same_mesh(u, v, "pn_metric");
    require_spatial(u, "pn_metric");
    GridFunction w = signed_power_map(u, idx);
    const GridFunction pv = signed_power_map(v, idx);
    for (int i = 0; i < w.size(); ++i) w[i] -= pv[i];
    const Mesh& mesh = u.mesh();
    double values = 0.0;
    for (int i = 0; i < w.size(); ++i)
        values += mesh.space_weight(i) * abs_pow(w[i], idx.beta);
    double grads = 0.0;
    for_each_face(mesh, [&](int i, int j, int, double h, double measure) {
        grads += abs_pow((w[j] - w[i]) / h, idx.beta) * measure;
    });
    return abs_pow(values, 1.0 / idx.beta) + abs_pow(grads, 1.0 / idx.beta);
}

double bochner_pseudonorm(const TimeSeriesField& series, double p, const PnIndex& idx) {
    series.validate();
    if (!(p >= 1.0)) throw DomainError("bochner_pseudonorm: p must be >= 1");
    double acc = 0.0;
    for (int k = 0; k < series.levels(); ++k) {
        const double pn = pn_pseudonorm(series.slices[static_cast<std::size_t>(k)], idx);
        acc += series.time_weight(k) * abs_pow(pn, p);
    }
    return abs_pow(acc, 1.0 / p);
}

EmbeddingReport embedding_predicate(const PnIndex& idx, const PnIndex& idx1, int n, double r,
                                    double p) {
    idx.validate();
    idx1.validate();
    EmbeddingReport rep;
    const double eps = 1e-12;
    rep.case_i = (idx.beta >= idx1.beta - eps) &&
                 (idx1.alpha / idx1.beta >= idx.alpha / idx.beta - eps) &&
                 (idx1.alpha + idx1.beta <= idx.alpha + idx.beta + eps);
    if (static_cast<double>(n) > idx.beta) {
        rep.critical_r =
            static_cast<double>(n) * (idx.alpha + idx.beta) / (static_cast<double>(n) - idx.beta);
        rep.case_ii = rep.critical_r >= r - eps * std::max(1.0, std::abs(r));
        rep.case_ii_compact = rep.critical_r > r + eps * std::max(1.0, std::abs(r));
    }
    rep.case_iii = p >= idx.alpha + idx.beta - eps;
    return rep;
}

} // namespace parvex
