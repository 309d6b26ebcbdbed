#include "parvex/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace parvex {

namespace {

// platform-stable uniform draw from raw generator bits
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

SpaceTimeFn constant_fn(double v) {
    return [v](std::array<double, 2>, double) { return v; };
}

void BoundedExponent::validate() const {
    if (!fn) throw StructuralError("exponent function is empty");
    if (!(lower > 1.0)) throw DomainError("alpha lower bound must exceed 1");
    if (!(upper >= lower) || !std::isfinite(upper))
        throw DomainError("alpha bounds out of order or infinite");
}

ExponentField BoundedExponent::sample(MeshPtr mesh) const {
    validate();
    GridFunction s = GridFunction::sample(mesh, fn);
    return ExponentField(std::move(mesh), s.values(), lower, upper);
}

void Nonlinearity::validate() const {
    if (kind != Kind::Tabulated) return;
    if (tau_grid.size() < 2 || tau_grid.size() != tau_values.size())
        throw StructuralError("tabulated nonlinearity needs matching tau grid and values");
    for (std::size_t i = 1; i < tau_grid.size(); ++i)
        if (!(tau_grid[i] > tau_grid[i - 1]))
            throw StructuralError("tabulated nonlinearity: tau grid not increasing");
}

void ProblemSpec::validate() const {
    if (!(p0 >= 2.0)) throw DomainError("problem: p0 must be >= 2");
    if (!(p >= 1.0)) throw DomainError("problem: p must be >= 1");
    if (!(s >= 1.0)) throw DomainError("problem: s must be >= 1");
    if (n < 3) throw DomainError("problem: n must be >= 3");
    if (!(A0 > 0.0)) throw DomainError("problem: A0 must be positive");
    if (!mesh) throw StructuralError("problem: missing mesh");
    if (mesh->has_time()) throw StructuralError("problem: mesh must be spatial");
    if (!(T > 0.0)) throw DomainError("problem: time horizon must be positive");
    if (time_samples < 1) throw DomainError("problem: time_samples must be >= 1");
    alpha.validate();
    form.validate();
    if (!a0 || !a1 || !a2 || !a3 || !g) throw StructuralError("problem: missing coefficient field");
    if (!h_is_zero && !h) throw StructuralError("problem: missing source field");
    // a2 >= A0 on the sampling grid
    const MeshPtr stm = space_time_mesh();
    const GridFunction a2f = GridFunction::sample(stm, a2);
    for (int i = 0; i < a2f.size(); ++i)
        if (a2f[i] < A0 - 1e-12)
            throw DomainError("problem: a2 falls below the uniform bound A0");
}

double ProblemSpec::nonlinearity_value(std::array<double, 2> x, double t, double tau) const {
    switch (form.kind) {
    case Nonlinearity::Kind::PowerSign: {
        if (tau == 0.0) return 0.0;
        const double a = alpha.fn(x, t);
        return a2(x, t) * abs_pow(tau, a - 2.0) * tau;
    }
    case Nonlinearity::Kind::PowerAbsPlusOffset: {
        const double a = alpha.fn(x, t);
        return a0(x, t) * abs_pow(tau, a - 1.0) + a1(x, t);
    }
    case Nonlinearity::Kind::Tabulated: {
        if (tau < form.tau_grid.front() || tau > form.tau_grid.back())
            throw ExtrapolationError("tabulated nonlinearity queried outside its tau range");
        const auto it = std::upper_bound(form.tau_grid.begin(), form.tau_grid.end(), tau);
        std::size_t j = static_cast<std::size_t>(it - form.tau_grid.begin());
        if (j == 0) j = 1;
        if (j >= form.tau_grid.size()) j = form.tau_grid.size() - 1;
        const double t0 = form.tau_grid[j - 1], t1 = form.tau_grid[j];
        const double w = (tau - t0) / (t1 - t0);
        const double val = (1.0 - w) * form.tau_values[j - 1] + w * form.tau_values[j];
        return (form.scale ? form.scale(x, t) : 1.0) * val;
    }
    }
    return 0.0;
}

double ProblemSpec::nonlinearity_derivative(std::array<double, 2> x, double t, double tau) const {
    switch (form.kind) {
    case Nonlinearity::Kind::PowerSign: {
        const double a = alpha.fn(x, t);
        if (tau == 0.0) return (a == 2.0) ? a2(x, t) : 0.0;
        return a2(x, t) * (a - 1.0) * abs_pow(tau, a - 2.0);
    }
    case Nonlinearity::Kind::PowerAbsPlusOffset: {
        const double a = alpha.fn(x, t);
        if (tau == 0.0) return 0.0;
        const double sgn = tau > 0.0 ? 1.0 : -1.0;
        return a0(x, t) * (a - 1.0) * abs_pow(tau, a - 2.0) * sgn;
    }
    case Nonlinearity::Kind::Tabulated: {
        if (tau < form.tau_grid.front() || tau > form.tau_grid.back())
            throw ExtrapolationError("tabulated nonlinearity queried outside its tau range");
        const auto it = std::upper_bound(form.tau_grid.begin(), form.tau_grid.end(), tau);
        std::size_t j = static_cast<std::size_t>(it - form.tau_grid.begin());
        if (j == 0) j = 1;
        if (j >= form.tau_grid.size()) j = form.tau_grid.size() - 1;
        const double slope = (form.tau_values[j] - form.tau_values[j - 1]) /
                             (form.tau_grid[j] - form.tau_grid[j - 1]);
        return (form.scale ? form.scale(x, t) : 1.0) * slope;
    }
    }
    return 0.0;
}

GridFunction ProblemSpec::sample_slice(const SpaceTimeFn& f, double t) const {
    const int ns = mesh->space_node_count();
    std::vector<double> v(static_cast<std::size_t>(ns));
    for (int i = 0; i < ns; ++i) v[static_cast<std::size_t>(i)] = f(mesh->position(i), t);
    return GridFunction(mesh, std::move(v));
}

GridFunction ProblemSpec::sample_h(double t) const {
    if (h_is_zero) return GridFunction::zero(mesh);
    return sample_slice(h, t);
}

TimeSeriesField ProblemSpec::sample_series(const SpaceTimeFn& f) const {
    TimeSeriesField ts;
    ts.mesh = mesh;
    const double dt = T / static_cast<double>(time_samples);
    for (int k = 0; k <= time_samples; ++k) {
        const double t = k * dt;
        ts.times.push_back(t);
        ts.slices.push_back(sample_slice(f, t));
    }
    ts.validate();
    return ts;
}

MeshPtr ProblemSpec::space_time_mesh() const {
    return std::make_shared<Mesh>(mesh->with_time(T, time_samples));
}

double eval_nonlinearity(const ProblemSpec& spec, std::array<double, 2> x, double t, double tau) {
    return spec.nonlinearity_value(x, t, tau);
}

GridFunction nonlocal_term(const GridFunction& u_slice, const GridFunction& g_slice, double p,
                           double s) {
    require_same_mesh(u_slice, g_slice, "nonlocal_term");
    if (!(p >= 1.0) || !(s >= 1.0)) throw DomainError("nonlocal_term: requires p, s >= 1");
    const double factor = abs_pow(lp_norm(u_slice, p), s);
    GridFunction out = g_slice;
    for (int i = 0; i < out.size(); ++i) out[i] *= factor;
    return out;
}

GrowthReport validate_growth_conditions(const ProblemSpec& spec, int sample_count,
                                        std::uint64_t seed, double tau_max, bool force_zero_a3) {
    if (sample_count < 1) throw DomainError("validate_growth_conditions: sample_count >= 1");
    std::mt19937_64 rng(seed);
    auto u01 = [&]() { return uniform01(rng); };

    GrowthReport rep;
    rep.upper_ok = true;
    rep.lower_ok = true;
    rep.worst_upper_margin = kInfinity;
    rep.worst_lower_margin = kInfinity;

    const double lx = spec.mesh->axis(0).length;
    const double ly = spec.mesh->dim() == 2 ? spec.mesh->axis(1).length : 0.0;
    const double log_lo = std::log(1e-6), log_hi = std::log(tau_max);

    auto evaluate = [&](const GrowthSample& smp) {
        const double a_val = spec.nonlinearity_value(smp.x, smp.t, smp.tau);
        const double alpha_v = spec.alpha.fn(smp.x, smp.t);
        const double a0v = spec.a0(smp.x, smp.t);
        const double a1v = spec.a1(smp.x, smp.t);
        const double a2v = spec.a2(smp.x, smp.t);
        const double a3v = force_zero_a3 ? 0.0 : spec.a3(smp.x, smp.t);

        const double up_rhs = a0v * abs_pow(smp.tau, alpha_v - 1.0) + a1v;
        const double up_margin = up_rhs - std::abs(a_val);
        const double lo_lhs = a_val * smp.tau;
        const double lo_rhs = a2v * abs_pow(smp.tau, alpha_v) - a3v;
        const double lo_margin = lo_lhs - lo_rhs;

        const double up_scale = std::max(1.0, std::abs(up_rhs));
        const double lo_scale = std::max({1.0, std::abs(lo_lhs), std::abs(lo_rhs)});
        if (up_margin < rep.worst_upper_margin) {
            rep.worst_upper_margin = up_margin;
            rep.worst_upper = smp;
        }
        if (lo_margin < rep.worst_lower_margin) {
            rep.worst_lower_margin = lo_margin;
            rep.worst_lower = smp;
        }
        if (up_margin < -1e-12 * up_scale) rep.upper_ok = false;
        if (lo_margin < -1e-12 * lo_scale) rep.lower_ok = false;
        ++rep.samples;
    };

    // deterministic probes at tau = 0 and the range ends, then the seeded sweep
    const std::array<double, 2> center{0.5 * lx, 0.5 * ly};
    for (double tau : {0.0, 1.0, -1.0, tau_max, -tau_max})
        evaluate(GrowthSample{center, 0.5 * spec.T, tau});
    for (int k = 0; k < sample_count; ++k) {
        GrowthSample smp;
        smp.x[0] = u01() * lx;
        smp.x[1] = spec.mesh->dim() == 2 ? u01() * ly : 0.0;
        smp.t = u01() * spec.T;
        const double mag = std::exp(log_lo + u01() * (log_hi - log_lo));
        smp.tau = (u01() < 0.5 ? -mag : mag);
        evaluate(smp);
    }
    rep.passed = rep.upper_ok && rep.lower_ok;
    return rep;
}

ExistenceReport validate_existence_profile(const ProblemSpec& spec, double eta) {
    ExistenceReport rep;
    rep.eta = eta;
    rep.s_condition = spec.s >= 1.0 && spec.s < spec.p0 - 1.0;
    rep.p_condition = spec.p <= spec.p0;

    const MeshPtr stm = spec.space_time_mesh();
    const ExponentField alpha_f = spec.alpha.sample(stm);
    const ExponentField beta = beta_exponent(alpha_f, spec.p0, eta);
    const ExponentField alpha_conj = conjugate(alpha_f);

    const GridFunction a0f = GridFunction::sample(stm, spec.a0);
    const GridFunction a1f = GridFunction::sample(stm, spec.a1);
    const GridFunction a2f = GridFunction::sample(stm, spec.a2);
    const GridFunction a3f = GridFunction::sample(stm, spec.a3);

    rep.a0_norm = luxemburg_norm(a0f, beta);
    rep.a1_norm = luxemburg_norm(a1f, alpha_conj);
    rep.a2_sup = a2f.max_abs();
    rep.a3_integral = 0.0;
    for (int i = 0; i < a3f.size(); ++i)
        rep.a3_integral += stm->node_weight(i) * std::abs(a3f[i]);

    rep.a0_ok = std::isfinite(rep.a0_norm);
    rep.a1_ok = std::isfinite(rep.a1_norm);
    rep.a2_ok = std::isfinite(rep.a2_sup);
    rep.a3_ok = std::isfinite(rep.a3_integral);

    if (spec.s + 1.0 < spec.p0) {
        const double r_time = spec.p0 / (spec.p0 - (spec.s + 1.0));
        const double r_space = critical_exponent(spec.n, spec.p0).p_tilde_conj;
        rep.g_mixed = mixed_norm(spec.sample_series(spec.g), r_time, r_space);
        rep.g_ok = std::isfinite(rep.g_mixed);
    }
    rep.passed = rep.s_condition && rep.p_condition && rep.a0_ok && rep.a1_ok && rep.a2_ok &&
                 rep.a3_ok && rep.g_ok;
    return rep;
}

SubcriticalReport validate_subcritical_profile(const ProblemSpec& spec) {
    SubcriticalReport rep;
    rep.alpha_condition = spec.alpha.upper < spec.p0;
    rep.s_condition = spec.s >= 1.0 && spec.s < spec.p0 - 1.0;
    rep.p_condition = spec.p <= spec.p0;

    const MeshPtr stm = spec.space_time_mesh();
    const ExponentField alpha_f = spec.alpha.sample(stm);
    const GridFunction a0f = GridFunction::sample(stm, spec.a0);
    const GridFunction a1f = GridFunction::sample(stm, spec.a1);

    if (rep.alpha_condition) {
        const ExponentField beta1 = beta1_exponent(alpha_f, spec.p0);
        rep.a0_norm = luxemburg_norm(a0f, beta1);
        rep.a0_ok = std::isfinite(rep.a0_norm);
    }
    rep.a1_norm = luxemburg_norm(a1f, conjugate(alpha_f));
    rep.a1_ok = std::isfinite(rep.a1_norm);

    if (spec.s + 1.0 < spec.p0) {
        const double r_time = spec.p0 / (spec.p0 - (spec.s + 1.0));
        const double r_space = critical_exponent(spec.n, spec.p0).p_tilde_conj;
        rep.g_mixed = mixed_norm(spec.sample_series(spec.g), r_time, r_space);
        rep.g_ok = std::isfinite(rep.g_mixed);
    }
    rep.passed = rep.alpha_condition && rep.s_condition && rep.p_condition && rep.a0_ok &&
                 rep.a1_ok && rep.g_ok;
    return rep;
}

DecayProfileReport validate_decay_profile(const ProblemSpec& spec, std::uint64_t seed) {
    DecayProfileReport rep;
    const MeshPtr stm = spec.space_time_mesh();
    rep.h_zero = spec.h_is_zero;
    if (!rep.h_zero && spec.h) {
        const GridFunction hf = GridFunction::sample(stm, spec.h);
        rep.h_zero = hf.max_abs() == 0.0;
    }
    rep.p_is_two = spec.p == 2.0;
    rep.p0_above_two = spec.p0 > 2.0;
    const GridFunction a3f = GridFunction::sample(stm, spec.a3);
    rep.a3_zero = a3f.max_abs() == 0.0;
    rep.lower_bound_ok =
        validate_growth_conditions(spec, 4000, seed, 10.0, /*force_zero_a3=*/true).lower_ok;

    rep.K = 0.0;
    const TimeSeriesField gs = spec.sample_series(spec.g);
    for (const GridFunction& slice : gs.slices) rep.K = std::max(rep.K, lp_norm(slice, 2.0));
    rep.g_bounded = std::isfinite(rep.K);

    rep.passed = rep.h_zero && rep.p_is_two && rep.p0_above_two && rep.a3_zero &&
                 rep.lower_bound_ok && rep.g_bounded;
    return rep;
}

} // namespace parvex
