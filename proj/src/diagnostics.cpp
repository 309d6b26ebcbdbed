#include "parvex/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "parvex/pn_space.hpp"

namespace parvex {

double diffusion_energy(const GridFunction& u, double p0) {
    double acc = 0.0;
    for_each_face(u.mesh(), [&](int i, int j, int, double h, double measure) {
        const double kf = 0.5 * (abs_pow(u[i], p0 - 2.0) + abs_pow(u[j], p0 - 2.0));
        const double grad = (u[j] - u[i]) / h;
        acc += kf * grad * grad * measure;
    });
    return acc;
}

double sobolev_form(const GridFunction& u, double p0) {
    const Mesh& mesh = u.mesh();
    std::vector<double> w(static_cast<std::size_t>(u.size()));
    for (int i = 0; i < u.size(); ++i)
        w[static_cast<std::size_t>(i)] = abs_pow(u[i], 0.5 * p0);
    double acc = 0.0;
    for_each_face(mesh, [&](int i, int j, int, double h, double measure) {
        const double grad = (w[static_cast<std::size_t>(j)] - w[static_cast<std::size_t>(i)]) / h;
        acc += grad * grad * measure;
    });
    return 4.0 / (p0 * p0) * acc;
}

EnergyRow pairing_terms(const GridFunction& u_slice, double t, const ProblemSpec& spec) {
    if (!u_slice.is_admissible())
        throw PreconditionError("pairing_terms: slice must vanish on the boundary");
    const Mesh& mesh = u_slice.mesh();
    EnergyRow row;
    row.t = t;
    row.diffusion_energy = diffusion_energy(u_slice, spec.p0);
    row.sobolev_form = sobolev_form(u_slice, spec.p0);
    const double nl = abs_pow(lp_norm(u_slice, spec.p), spec.s);
    for (int i = 0; i < u_slice.size(); ++i) {
        const double vol = mesh.space_weight(i);
        const auto x = mesh.position(i);
        const double ui = u_slice[i];
        const double av = spec.alpha.fn(x, t);
        const double gv = spec.g(x, t);
        row.y += vol * ui * ui;
        row.absorption_pairing += vol * spec.nonlinearity_value(x, t, ui) * ui;
        row.nonlocal_pairing += vol * gv * nl * ui;
        row.a2_alpha_modular += vol * spec.a2(x, t) * abs_pow(ui, av);
        row.a3_integral += vol * std::abs(spec.a3(x, t));
        row.g_abs_pairing += vol * std::abs(gv) * nl * std::abs(ui);
        row.alpha_modular += vol * abs_pow(ui, av);
    }
    return row;
}

std::vector<EnergyRow> energy_report(const SolutionTrajectory& traj, const ProblemSpec& spec) {
    std::vector<EnergyRow> rows;
    rows.reserve(static_cast<std::size_t>(traj.levels()));
    for (int k = 0; k < traj.levels(); ++k)
        rows.push_back(pairing_terms(traj.slices[static_cast<std::size_t>(k)],
                                     traj.times[static_cast<std::size_t>(k)], spec));
    for (int k = 1; k < traj.levels(); ++k) {
        const std::size_t i = static_cast<std::size_t>(k);
        const double dt = traj.times[i] - traj.times[i - 1];
        rows[i].relation_residual = 0.5 * (rows[i].y - rows[i - 1].y) / dt +
                                    rows[i].diffusion_energy + rows[i].absorption_pairing +
                                    rows[i].nonlocal_pairing;
    }
    return rows;
}

CoercivityReport coercivity_lower_bound_check(const SolutionTrajectory& traj,
                                              const ProblemSpec& spec, double tol) {
    CoercivityReport rep;
    rep.levels = traj.levels();
    rep.worst_margin = kInfinity;
    bool ok = true;
    for (int k = 0; k < traj.levels(); ++k) {
        const EnergyRow row = pairing_terms(traj.slices[static_cast<std::size_t>(k)],
                                            traj.times[static_cast<std::size_t>(k)], spec);
        const double lhs = row.diffusion_energy + row.absorption_pairing + row.nonlocal_pairing;
        const double rhs =
            row.diffusion_energy + row.a2_alpha_modular - row.a3_integral - row.g_abs_pairing;
        const double margin = lhs - rhs;
        const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_level = k;
        }
        if (margin < -tol * scale) ok = false;
    }
    rep.passed = ok;
    return rep;
}

CoercivitySummary coercivity_summary(const SolutionTrajectory& traj, const ProblemSpec& spec,
                                     double pseudonorm_threshold) {
    CoercivitySummary sum;
    const TimeSeriesField series = traj.series();
    const PnIndex idx = PnIndex::for_diffusion(spec.p0);
    sum.bochner_pn = bochner_pseudonorm(series, spec.p0, idx);

    const double r_space = critical_exponent(spec.n, spec.p0).p_tilde_conj;
    double sigma = 0.0, gw = 0.0, pairing = 0.0;
    for (int k = 0; k < series.levels(); ++k) {
        const std::size_t i = static_cast<std::size_t>(k);
        const double tw = series.time_weight(k);
        const double t = series.times[i];
        const EnergyRow row = pairing_terms(series.slices[i], t, spec);
        sigma += tw * row.alpha_modular;
        pairing += tw * (row.diffusion_energy + row.absorption_pairing + row.nonlocal_pairing);
        const GridFunction gslice = spec.sample_slice(spec.g, t);
        gw += tw * lp_norm(gslice, r_space) *
              abs_pow(pn_pseudonorm(series.slices[i], idx), spec.s + 1.0);
    }
    sum.sigma_alpha = sigma;
    sum.g_weighted = gw;
    sum.pairing_total = pairing;

    // Luxemburg norm of u over the whole cylinder
    auto modular_scaled = [&](double lambda) {
        double acc = 0.0;
        for (int k = 0; k < series.levels(); ++k) {
            const std::size_t i = static_cast<std::size_t>(k);
            const double tw = series.time_weight(k);
            const double t = series.times[i];
            const GridFunction& u = series.slices[i];
            for (int s = 0; s < u.size(); ++s)
                acc += tw * traj.mesh->space_weight(s) *
                       abs_pow(u[s] / lambda, spec.alpha.fn(traj.mesh->position(s), t));
        }
        return acc;
    };
    double sup = 0.0;
    for (const GridFunction& u : series.slices) sup = std::max(sup, u.max_abs());
    sum.luxemburg_alpha =
        (sup == 0.0) ? 0.0
                     : luxemburg_root(modular_scaled,
                                      sup * abs_pow(traj.mesh->domain_measure() * spec.T,
                                                    1.0 / spec.alpha.lower));

    const double denom = abs_pow(sum.bochner_pn, spec.p0) +
                         abs_pow(sum.luxemburg_alpha, spec.alpha.lower);
    if (sum.bochner_pn >= pseudonorm_threshold && denom > 0.0) {
        sum.ratio = sum.pairing_total / denom;
        sum.ratio_defined = true;
        sum.ratio_positive = sum.ratio > 0.0;
    }
    return sum;
}

SobolevIdentityReport sobolev_form_identity_check(const GridFunction& u_slice, double p0) {
    SobolevIdentityReport rep;
    rep.lhs = diffusion_energy(u_slice, p0);
    rep.rhs = sobolev_form(u_slice, p0);
    const double scale = std::max({rep.lhs, rep.rhs, 1e-300});
    rep.rel_gap = std::abs(rep.lhs - rep.rhs) / scale;
    return rep;
}

double dirichlet_laplacian_min_eigenvalue(const Mesh& mesh) {
    double lam = 0.0;
    for (int a = 0; a < mesh.dim(); ++a) {
        const double h = mesh.axis(a).spacing();
        const double L = mesh.axis(a).length;
        lam += 2.0 / (h * h) * (1.0 - std::cos(M_PI * h / L));
    }
    return lam;
}

double rayleigh_embedding_constant(const Mesh& mesh) {
    return 1.0 / dirichlet_laplacian_min_eigenvalue(mesh);
}

double young_constant(double epsilon, double s, double p0) {
    if (!(epsilon > 0.0)) throw DomainError("young_constant: epsilon must be positive");
    if (!(p0 > 2.0)) throw DomainError("young_constant: requires p0 > 2");
    const double theta = (s - 1.0) / (p0 - 2.0);
    if (theta < 0.0 || theta >= 1.0)
        throw DomainError("young_constant: requires 1 <= s < p0 - 1");
    if (theta == 0.0) return 1.0;
    return (1.0 - theta) * std::pow(theta / epsilon, theta / (1.0 - theta));
}

DecayReport homogeneous_decay_check(const SolutionTrajectory& traj, const ProblemSpec& spec,
                                    const DecayOptions& opts) {
    DecayReport rep;
    const DecayProfileReport profile = validate_decay_profile(spec);
    if (!profile.passed) {
        rep.skipped = true;
        rep.skip_reason = "decay profile hypotheses not satisfied";
        return rep;
    }
    if (!(spec.s < spec.p0 - 1.0)) {
        rep.skipped = true;
        rep.skip_reason = "requires s < p0 - 1 for the Young split";
        return rep;
    }

    rep.K = profile.K;
    rep.embedding_c = opts.embedding_c.value_or(rayleigh_embedding_constant(*traj.mesh));
    const double meas = traj.mesh->domain_measure();
    rep.epsilon_threshold =
        (rep.K > 0.0)
            ? 4.0 / (rep.K * spec.p0 * spec.p0 * rep.embedding_c *
                     abs_pow(meas, 0.5 * (spec.p0 - 2.0)))
            : kInfinity;
    rep.epsilon = opts.epsilon.value_or(
        std::isfinite(rep.epsilon_threshold) ? 0.5 * rep.epsilon_threshold : 1.0);
    rep.epsilon_admissible = rep.epsilon < rep.epsilon_threshold;
    rep.c_eps = young_constant(rep.epsilon, spec.s, spec.p0);

    rep.rows = energy_report(traj, spec);

    double max_dt = 0.0;
    for (int k = 1; k < traj.levels(); ++k)
        max_dt = std::max(max_dt, traj.times[static_cast<std::size_t>(k)] -
                                      traj.times[static_cast<std::size_t>(k - 1)]);
    const double rel_tol = opts.relation_tol.value_or(std::max(1e-8, 25.0 * max_dt));

    rep.relation_ok = true;
    rep.worst_relation_rel = 0.0;
    for (int k = 1; k < traj.levels(); ++k) {
        const EnergyRow& row = rep.rows[static_cast<std::size_t>(k)];
        const EnergyRow& prev = rep.rows[static_cast<std::size_t>(k - 1)];
        const double dt = row.t - prev.t;
        const double t1 = 0.5 * (row.y - prev.y) / dt;
        const double scale = std::max({std::abs(t1), row.diffusion_energy,
                                       std::abs(row.absorption_pairing),
                                       std::abs(row.nonlocal_pairing), 1e-300});
        const double rel = std::abs(row.relation_residual) / scale;
        if (rel > rep.worst_relation_rel) {
            rep.worst_relation_rel = rel;
            rep.worst_relation_level = k;
        }
        if (rel > rel_tol) rep.relation_ok = false;
    }

    const double y0 = rep.rows.front().y;
    rep.max_y = 0.0;
    for (const EnergyRow& row : rep.rows) rep.max_y = std::max(rep.max_y, row.y);
    rep.zero_ok = (y0 > 0.0) || rep.max_y <= 1e-20;

    const double rate = (rep.K > 0.0) ? 2.0 * rep.K * rep.c_eps : 0.0;
    rep.gronwall_ok = true;
    for (EnergyRow& row : rep.rows) {
        row.gronwall_bound = y0 * std::exp(rate * row.t);
        if (row.y > row.gronwall_bound * (1.0 + 1e-9) + 1e-30) rep.gronwall_ok = false;
    }

    rep.passed = rep.relation_ok && rep.zero_ok && rep.gronwall_ok && rep.epsilon_admissible;
    return rep;
}

} // namespace parvex
