#include "parvex/solver.hpp"

#include <algorithm>
#include <cmath>

#include "parvex/pn_space.hpp"

namespace parvex {

namespace {

// ---------------------------------------------------------------- stencil --

struct Stencil {
    MeshPtr mesh;
    std::vector<int> interior;      // space indices of interior nodes
    std::vector<int> interior_of;   // space index -> interior index or -1
    // per interior node: up to 4 (neighbor space index, 1/h^2) pairs
    std::vector<std::array<int, 4>> nbr;
    std::vector<std::array<double, 4>> inv_h2;
    std::vector<int> nbr_count;

    explicit Stencil(MeshPtr m) : mesh(std::move(m)) {
        const int ns = mesh->space_node_count();
        interior_of.assign(static_cast<std::size_t>(ns), -1);
        for (int s = 0; s < ns; ++s) {
            if (mesh->is_space_boundary(s)) continue;
            interior_of[static_cast<std::size_t>(s)] = static_cast<int>(interior.size());
            interior.push_back(s);
        }
        nbr.resize(interior.size());
        inv_h2.resize(interior.size());
        nbr_count.assign(interior.size(), 0);
        const int dim = mesh->dim();
        for (std::size_t k = 0; k < interior.size(); ++k) {
            const auto mi = mesh->space_multi_index(interior[k]);
            for (int a = 0; a < dim; ++a) {
                const double ih2 = 1.0 / (mesh->axis(a).spacing() * mesh->axis(a).spacing());
                for (int dir : {-1, +1}) {
                    int ix = mi[0], iy = mi[1];
                    (a == 0 ? ix : iy) += dir;
                    const int j = mesh->space_index(ix, iy);
                    nbr[k][static_cast<std::size_t>(nbr_count[k])] = j;
                    inv_h2[k][static_cast<std::size_t>(nbr_count[k])] = ih2;
                    ++nbr_count[k];
                }
            }
        }
    }

    int count() const { return static_cast<int>(interior.size()); }
};

double kappa_of(double u, double p0, double delta) {
    if (p0 == 2.0) return 1.0 + delta;
    return abs_pow(u, p0 - 2.0) + delta;
}

// d kappa / du; the |u|^{p0-3} singularity for 2 < p0 < 3 is clamped at 0
double kappa_prime(double u, double p0) {
    if (p0 == 2.0 || std::abs(u) < 1e-14) return 0.0;
    const double sgn = u > 0.0 ? 1.0 : -1.0;
    return (p0 - 2.0) * abs_pow(u, p0 - 3.0) * sgn;
}

// (L u)_i = -div(kappa grad u)_i over interior nodes, boundary values taken
// from `full` itself
void apply_divergence(const Stencil& st, const std::vector<double>& full,
                      const std::vector<double>& kappa, std::vector<double>& out) {
    out.assign(static_cast<std::size_t>(st.count()), 0.0);
    for (int k = 0; k < st.count(); ++k) {
        const int i = st.interior[static_cast<std::size_t>(k)];
        double acc = 0.0;
        for (int q = 0; q < st.nbr_count[static_cast<std::size_t>(k)]; ++q) {
            const int j = st.nbr[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)];
            const double kf = 0.5 * (kappa[static_cast<std::size_t>(i)] + kappa[static_cast<std::size_t>(j)]);
            acc -= st.inv_h2[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)] * kf *
                   (full[static_cast<std::size_t>(j)] - full[static_cast<std::size_t>(i)]);
        }
        out[static_cast<std::size_t>(k)] = acc;
    }
}

// ------------------------------------------------------------ linear solves --

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

template <typename Apply>
int conjugate_gradient(Apply&& apply, const std::vector<double>& b, std::vector<double>& x,
                       const std::vector<double>& jacobi, double tol, int maxit) {
    const std::size_t n = b.size();
    x.assign(n, 0.0);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) return 0;
    std::vector<double> r = b, z(n), p(n), Ap(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / jacobi[i];
    p = z;
    double rz = dot(r, z);
    for (int it = 1; it <= maxit; ++it) {
        apply(p, Ap);
        const double pAp = dot(p, Ap);
        if (!(pAp > 0.0)) throw SolverError("conjugate gradients: operator not positive definite");
        const double a = rz / pAp;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += a * p[i];
            r[i] -= a * Ap[i];
        }
        if (norm2(r) <= tol * bnorm) return it;
        for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / jacobi[i];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw SolverError("conjugate gradients: no convergence", norm2(r));
}

template <typename Apply>
int bicgstab(Apply&& apply, const std::vector<double>& b, std::vector<double>& x,
             const std::vector<double>& jacobi, double tol, int maxit) {
    const std::size_t n = b.size();
    x.assign(n, 0.0);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) return 0;
    std::vector<double> r = b, r0 = b, p(n, 0.0), v(n, 0.0), sv(n), t(n), phat(n), shat(n);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    for (int it = 1; it <= maxit; ++it) {
        const double rho1 = dot(r0, r);
        if (rho1 == 0.0) throw SolverError("bicgstab: breakdown (rho = 0)", norm2(r));
        if (it == 1) {
            p = r;
        } else {
            const double beta = (rho1 / rho) * (alpha / omega);
            for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        rho = rho1;
        for (std::size_t i = 0; i < n; ++i) phat[i] = p[i] / jacobi[i];
        apply(phat, v);
        const double r0v = dot(r0, v);
        if (r0v == 0.0) throw SolverError("bicgstab: breakdown (r0.v = 0)", norm2(r));
        alpha = rho / r0v;
        for (std::size_t i = 0; i < n; ++i) sv[i] = r[i] - alpha * v[i];
        if (norm2(sv) <= tol * bnorm) {
            for (std::size_t i = 0; i < n; ++i) x[i] += alpha * phat[i];
            return it;
        }
        for (std::size_t i = 0; i < n; ++i) shat[i] = sv[i] / jacobi[i];
        apply(shat, t);
        const double tt = dot(t, t);
        if (tt == 0.0) throw SolverError("bicgstab: breakdown (t = 0)", norm2(sv));
        omega = dot(t, sv) / tt;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * phat[i] + omega * shat[i];
            r[i] = sv[i] - omega * t[i];
        }
        if (norm2(r) <= tol * bnorm) return it;
        if (omega == 0.0) throw SolverError("bicgstab: stagnation (omega = 0)", norm2(r));
    }
    throw SolverError("bicgstab: no convergence", norm2(r));
}

// ------------------------------------------------------------- step kernels --

std::vector<double> sample_interior(const Stencil& st,
                                    const SpaceTimeFn& f, double t) {
    std::vector<double> v(static_cast<std::size_t>(st.count()));
    for (int k = 0; k < st.count(); ++k)
        v[static_cast<std::size_t>(k)] =
            f(st.mesh->position(st.interior[static_cast<std::size_t>(k)]), t);
    return v;
}

double norm_factor(const GridFunction& u, double p, double s) {
    return abs_pow(lp_norm(u, p), s);
}

GridFunction imex_step(const GridFunction& state, double t, const ProblemSpec& spec,
                       const SolverConfig& cfg, StepDiagnostics& diag) {
    const Stencil st(state.mesh_ptr());
    const int ni = st.count();
    if (ni == 0) throw StructuralError("time_step: mesh has no interior nodes");
    const double t1 = t + cfg.dt;

    std::vector<double> kappa(static_cast<std::size_t>(state.size()));
    for (int i = 0; i < state.size(); ++i)
        kappa[static_cast<std::size_t>(i)] = kappa_of(state[i], spec.p0, cfg.degeneracy_floor);

    // rhs = u^n/dt + h(t1) - a(x, t1, u^n) - g(., t^n) ||u^n||^s
    const double nl = norm_factor(state, spec.p, spec.s);
    std::vector<double> b(static_cast<std::size_t>(ni));
    for (int k = 0; k < ni; ++k) {
        const int i = st.interior[static_cast<std::size_t>(k)];
        const auto x = st.mesh->position(i);
        double rhs = state[i] / cfg.dt;
        rhs += spec.h_is_zero ? 0.0 : spec.h(x, t1);
        rhs -= spec.nonlinearity_value(x, t1, state[i]);
        rhs -= spec.g(x, t) * nl;
        b[static_cast<std::size_t>(k)] = rhs;
    }

    std::vector<double> full(static_cast<std::size_t>(state.size()), 0.0);
    std::vector<double> lv;
    auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
        for (int k = 0; k < ni; ++k)
            full[static_cast<std::size_t>(st.interior[static_cast<std::size_t>(k)])] =
                v[static_cast<std::size_t>(k)];
        apply_divergence(st, full, kappa, lv);
        out.resize(v.size());
        for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k] / cfg.dt + lv[k];
    };
    std::vector<double> jacobi(static_cast<std::size_t>(ni));
    for (int k = 0; k < ni; ++k) {
        const int i = st.interior[static_cast<std::size_t>(k)];
        double d = 1.0 / cfg.dt;
        for (int q = 0; q < st.nbr_count[static_cast<std::size_t>(k)]; ++q) {
            const int j = st.nbr[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)];
            d += st.inv_h2[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)] * 0.5 *
                 (kappa[static_cast<std::size_t>(i)] + kappa[static_cast<std::size_t>(j)]);
        }
        jacobi[static_cast<std::size_t>(k)] = d;
    }

    std::vector<double> x;
    const int maxit = cfg.max_linear_iters > 0 ? cfg.max_linear_iters : 10 * ni + 100;
    diag.linear_iters = conjugate_gradient(apply, b, x, jacobi, cfg.linear_tol, maxit);
    diag.nonlinear_iters = 0;
    diag.residual_norm = 0.0;

    GridFunction next = GridFunction::zero(state.mesh_ptr());
    for (int k = 0; k < ni; ++k)
        next[st.interior[static_cast<std::size_t>(k)]] = x[static_cast<std::size_t>(k)];
    return next;
}

GridFunction newton_step(const GridFunction& state, double t, const ProblemSpec& spec,
                         const SolverConfig& cfg, StepDiagnostics& diag) {
    const Stencil st(state.mesh_ptr());
    const int ni = st.count();
    if (ni == 0) throw StructuralError("time_step: mesh has no interior nodes");
    const double t1 = t + cfg.dt;
    const Mesh& mesh = *st.mesh;

    const std::vector<double> g1 = sample_interior(st, spec.g, t1);
    std::vector<double> h1(static_cast<std::size_t>(ni), 0.0);
    if (!spec.h_is_zero) h1 = sample_interior(st, spec.h, t1);

    GridFunction v = state; // iterate, boundary stays zero
    std::vector<double> kappa(static_cast<std::size_t>(v.size()));
    std::vector<double> lv;

    auto residual = [&](const GridFunction& w, std::vector<double>& F) {
        for (int i = 0; i < w.size(); ++i)
            kappa[static_cast<std::size_t>(i)] = kappa_of(w[i], spec.p0, cfg.degeneracy_floor);
        apply_divergence(st, w.values(), kappa, lv);
        const double nl = norm_factor(w, spec.p, spec.s);
        F.resize(static_cast<std::size_t>(ni));
        for (int k = 0; k < ni; ++k) {
            const int i = st.interior[static_cast<std::size_t>(k)];
            const auto x = mesh.position(i);
            F[static_cast<std::size_t>(k)] = (w[i] - state[i]) / cfg.dt +
                                             lv[static_cast<std::size_t>(k)] +
                                             spec.nonlinearity_value(x, t1, w[i]) +
                                             g1[static_cast<std::size_t>(k)] * nl -
                                             h1[static_cast<std::size_t>(k)];
        }
    };

    std::vector<double> F, F_try;
    residual(v, F);
    double fnorm = norm2(F);
    double f0_inf = 0.0;
    for (double f : F) f0_inf = std::max(f0_inf, std::abs(f));
    const double tol_eff = cfg.nonlinear_tol * std::max(1.0, f0_inf);
    diag.nonlinear_iters = 0;
    diag.linear_iters = 0;

    const int maxit_lin = cfg.max_linear_iters > 0 ? cfg.max_linear_iters : 10 * ni + 100;
    GridFunction v_try = v;

    for (int it = 0; it < cfg.max_nonlinear_iters; ++it) {
        double finf = 0.0;
        for (double f : F) finf = std::max(finf, std::abs(f));
        if (finf <= tol_eff) {
            diag.residual_norm = finf;
            return v;
        }

        // Jacobian pieces at v
        for (int i = 0; i < v.size(); ++i)
            kappa[static_cast<std::size_t>(i)] = kappa_of(v[i], spec.p0, cfg.degeneracy_floor);
        std::vector<double> kp(static_cast<std::size_t>(v.size()));
        for (int i = 0; i < v.size(); ++i)
            kp[static_cast<std::size_t>(i)] = kappa_prime(v[i], spec.p0);

        // rank-one part: g1 (outer) d, d_j = s ||v||^{s-p} w_j |v_j|^{p-1} sgn(v_j)
        const double vnorm = lp_norm(v, spec.p);
        std::vector<double> dvec(static_cast<std::size_t>(ni), 0.0);
        if (vnorm > 1e-300) {
            const double c = spec.s * abs_pow(vnorm, spec.s - spec.p);
            for (int k = 0; k < ni; ++k) {
                const int i = st.interior[static_cast<std::size_t>(k)];
                if (v[i] == 0.0) continue;
                const double sgn = v[i] > 0.0 ? 1.0 : -1.0;
                dvec[static_cast<std::size_t>(k)] =
                    c * mesh.space_weight(i) * abs_pow(v[i], spec.p - 1.0) * sgn;
            }
        }
        std::vector<double> aprime(static_cast<std::size_t>(ni));
        for (int k = 0; k < ni; ++k) {
            const int i = st.interior[static_cast<std::size_t>(k)];
            aprime[static_cast<std::size_t>(k)] =
                spec.nonlinearity_derivative(mesh.position(i), t1, v[i]);
        }

        std::vector<double> full(static_cast<std::size_t>(v.size()), 0.0);
        auto applyJ = [&](const std::vector<double>& xonly, std::vector<double>& out) {
            for (int k = 0; k < ni; ++k)
                full[static_cast<std::size_t>(st.interior[static_cast<std::size_t>(k)])] =
                    xonly[static_cast<std::size_t>(k)];
            out.assign(xonly.size(), 0.0);
            const double dx = dot(dvec, xonly);
            for (int k = 0; k < ni; ++k) {
                const int i = st.interior[static_cast<std::size_t>(k)];
                double acc = xonly[static_cast<std::size_t>(k)] / cfg.dt +
                             aprime[static_cast<std::size_t>(k)] * xonly[static_cast<std::size_t>(k)] +
                             g1[static_cast<std::size_t>(k)] * dx;
                for (int q = 0; q < st.nbr_count[static_cast<std::size_t>(k)]; ++q) {
                    const int j = st.nbr[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)];
                    const double ih2 =
                        st.inv_h2[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)];
                    const double kf = 0.5 * (kappa[static_cast<std::size_t>(i)] +
                                             kappa[static_cast<std::size_t>(j)]);
                    const double du = v[j] - v[i];
                    // d/dv_i of -kf (v_j - v_i)
                    acc -= ih2 * (0.5 * kp[static_cast<std::size_t>(i)] * du - kf) *
                           full[static_cast<std::size_t>(i)];
                    // d/dv_j (interior columns only; boundary values are fixed)
                    acc -= ih2 * (0.5 * kp[static_cast<std::size_t>(j)] * du + kf) *
                           full[static_cast<std::size_t>(j)];
                }
                out[static_cast<std::size_t>(k)] = acc;
            }
        };
        std::vector<double> jacobi(static_cast<std::size_t>(ni));
        for (int k = 0; k < ni; ++k) {
            const int i = st.interior[static_cast<std::size_t>(k)];
            double d = 1.0 / cfg.dt + aprime[static_cast<std::size_t>(k)];
            for (int q = 0; q < st.nbr_count[static_cast<std::size_t>(k)]; ++q) {
                const int j = st.nbr[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)];
                d += st.inv_h2[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)] *
                     (0.5 * (kappa[static_cast<std::size_t>(i)] + kappa[static_cast<std::size_t>(j)]) -
                      0.5 * kp[static_cast<std::size_t>(i)] * (v[j] - v[i]));
            }
            if (std::abs(d) < 1e-300) d = 1.0;
            jacobi[static_cast<std::size_t>(k)] = d;
        }

        std::vector<double> rhs(static_cast<std::size_t>(ni));
        for (int k = 0; k < ni; ++k) rhs[static_cast<std::size_t>(k)] = -F[static_cast<std::size_t>(k)];
        std::vector<double> delta;
        diag.linear_iters += bicgstab(applyJ, rhs, delta, jacobi, cfg.linear_tol, maxit_lin);

        // damped update
        double lambda = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 12; ++ls) {
            for (int k = 0; k < ni; ++k)
                v_try[st.interior[static_cast<std::size_t>(k)]] =
                    v[st.interior[static_cast<std::size_t>(k)]] +
                    lambda * delta[static_cast<std::size_t>(k)];
            residual(v_try, F_try);
            const double fn = norm2(F_try);
            if (fn < (1.0 - 1e-4 * lambda) * fnorm) {
                v = v_try;
                F = F_try;
                fnorm = fn;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        ++diag.nonlinear_iters;
        if (!accepted)
            throw SolverError("newton step: line search failed to reduce the residual", fnorm);
    }
    double finf = 0.0;
    for (double f : F) finf = std::max(finf, std::abs(f));
    if (finf <= tol_eff) {
        diag.residual_norm = finf;
        return v;
    }
    throw SolverError("newton step: no convergence within the iteration cap", finf);
}

} // namespace

void SolverConfig::validate() const {
    if (!(dt > 0.0)) throw DomainError("solver config: dt must be positive");
    if (!(degeneracy_floor >= 0.0)) throw DomainError("solver config: delta must be >= 0");
    if (!(nonlinear_tol > 0.0) || !(linear_tol > 0.0))
        throw DomainError("solver config: tolerances must be positive");
    if (max_nonlinear_iters < 1) throw DomainError("solver config: iteration cap must be >= 1");
}

TimeSeriesField SolutionTrajectory::series() const {
    TimeSeriesField ts;
    ts.mesh = mesh;
    ts.times = times;
    ts.slices = slices;
    ts.validate();
    return ts;
}

GridFunction assemble_diffusion_divergence(const GridFunction& u, double p0, double delta) {
    if (u.mesh().has_time())
        throw StructuralError("assemble_diffusion_divergence: expects a spatial field");
    const Stencil st(u.mesh_ptr());
    std::vector<double> kappa(static_cast<std::size_t>(u.size()));
    for (int i = 0; i < u.size(); ++i)
        kappa[static_cast<std::size_t>(i)] = kappa_of(u[i], p0, delta);
    std::vector<double> lv;
    apply_divergence(st, u.values(), kappa, lv);
    GridFunction out = GridFunction::zero(u.mesh_ptr());
    for (int k = 0; k < st.count(); ++k)
        out[st.interior[static_cast<std::size_t>(k)]] = lv[static_cast<std::size_t>(k)];
    return out;
}

GridFunction assemble_diffusion_transformed(const GridFunction& u, double p0) {
    if (u.mesh().has_time())
        throw StructuralError("assemble_diffusion_transformed: expects a spatial field");
    const Stencil st(u.mesh_ptr());
    std::vector<double> phi(static_cast<std::size_t>(u.size()));
    for (int i = 0; i < u.size(); ++i)
        phi[static_cast<std::size_t>(i)] = (p0 == 2.0) ? u[i] : abs_pow(u[i], p0 - 2.0) * u[i];
    GridFunction out = GridFunction::zero(u.mesh_ptr());
    const double scale = 1.0 / (p0 - 1.0);
    for (int k = 0; k < st.count(); ++k) {
        const int i = st.interior[static_cast<std::size_t>(k)];
        double lap = 0.0;
        for (int q = 0; q < st.nbr_count[static_cast<std::size_t>(k)]; ++q) {
            const int j = st.nbr[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)];
            lap += st.inv_h2[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)] *
                   (phi[static_cast<std::size_t>(j)] - phi[static_cast<std::size_t>(i)]);
        }
        out[i] = -scale * lap;
    }
    return out;
}

GridFunction time_step(const GridFunction& state, double t, const ProblemSpec& spec,
                       const SolverConfig& cfg) {
    cfg.validate();
    if (!state.is_admissible())
        throw PreconditionError("time_step: state must vanish on the boundary");
    StepDiagnostics diag;
    return cfg.scheme == SolverConfig::Scheme::ImexLagged
               ? imex_step(state, t, spec, cfg, diag)
               : newton_step(state, t, spec, cfg, diag);
}

SolutionTrajectory solve(const ProblemSpec& spec, const SolverConfig& cfg) {
    spec.validate();
    cfg.validate();

    const long long m = std::max(1LL, std::llround(spec.T / cfg.dt));
    SolverConfig step_cfg = cfg;
    step_cfg.dt = spec.T / static_cast<double>(m);

    SolutionTrajectory traj;
    traj.mesh = spec.mesh;
    traj.times.push_back(0.0);
    if (cfg.initial_state) {
        if (cfg.initial_state->size() != spec.mesh->space_node_count())
            throw StructuralError("solve: initial state does not match the mesh");
        if (!cfg.initial_state->is_admissible())
            throw StructuralError("solve: initial state must vanish on the boundary");
        traj.slices.push_back(*cfg.initial_state);
    } else {
        traj.slices.push_back(GridFunction::zero(spec.mesh));
    }

    for (long long k = 0; k < m; ++k) {
        const double t = static_cast<double>(k) * step_cfg.dt;
        StepDiagnostics diag;
        diag.time = t + step_cfg.dt;
        try {
            GridFunction next =
                step_cfg.scheme == SolverConfig::Scheme::ImexLagged
                    ? imex_step(traj.slices.back(), t, spec, step_cfg, diag)
                    : newton_step(traj.slices.back(), t, spec, step_cfg, diag);
            traj.slices.push_back(std::move(next));
            traj.times.push_back(diag.time);
            traj.steps.push_back(diag);
        } catch (const SolverError& err) {
            traj.aborted = true;
            traj.abort_reason = err.what();
            break;
        }
    }
    return traj;
}

double weak_residual(const SolutionTrajectory& traj, const ProblemSpec& spec,
                     const TimeSeriesField& w) {
    w.validate();
    if (traj.levels() < 2) throw StructuralError("weak_residual: trajectory too short");
    if (w.levels() != traj.levels())
        throw StructuralError("weak_residual: test function time grid does not match");
    for (int k = 0; k < w.levels(); ++k)
        if (std::abs(w.times[static_cast<std::size_t>(k)] - traj.times[static_cast<std::size_t>(k)]) >
            1e-12 * std::max(1.0, spec.T))
            throw StructuralError("weak_residual: test function time grid does not match");
    if (!w.mesh->same_layout(*traj.mesh))
        throw StructuralError("weak_residual: test function mesh does not match");
    for (const GridFunction& slice : w.slices)
        if (!slice.is_admissible())
            throw PreconditionError("weak_residual: test function must vanish on the boundary");

    const Mesh& mesh = *traj.mesh;
    double acc = 0.0;
    for (int nlev = 1; nlev < traj.levels(); ++nlev) {
        const std::size_t nn = static_cast<std::size_t>(nlev);
        const double t = traj.times[nn];
        const double dt = traj.times[nn] - traj.times[nn - 1];
        const GridFunction& u = traj.slices[nn];
        const GridFunction& up = traj.slices[nn - 1];
        const GridFunction& wn = w.slices[nn];

        double time_term = 0.0, absorb = 0.0, nonloc = 0.0, source = 0.0;
        const double nl = abs_pow(lp_norm(u, spec.p), spec.s);
        for (int i = 0; i < u.size(); ++i) {
            const double vol = mesh.space_weight(i);
            const auto x = mesh.position(i);
            time_term += vol * (u[i] - up[i]) * wn[i];
            absorb += vol * spec.nonlinearity_value(x, t, u[i]) * wn[i];
            nonloc += vol * spec.g(x, t) * nl * wn[i];
            if (!spec.h_is_zero) source += vol * spec.h(x, t) * wn[i];
        }
        double diff = 0.0;
        for_each_face(mesh, [&](int i, int j, int, double h, double measure) {
            const double kf =
                0.5 * (abs_pow(u[i], spec.p0 - 2.0) + abs_pow(u[j], spec.p0 - 2.0));
            diff += kf * ((u[j] - u[i]) / h) * ((wn[j] - wn[i]) / h) * measure;
        });
        acc += time_term + dt * (diff + absorb + nonloc - source);
    }
    return acc;
}

} // namespace parvex
