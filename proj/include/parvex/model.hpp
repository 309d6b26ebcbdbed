// Problem data for the nonlocal degenerate parabolic equation
//
//   u_t - sum_i D_i(|u|^{p0-2} D_i u) + a(x,t,u) + g(x,t) ||u(.,t)||_{L^p}^s = h(x,t)
//   u(x,0) = 0,  u = 0 on the lateral boundary,
//
// together with validators for the structural growth conditions on a(x,t,tau)
// and for the hypothesis profiles of the existence and decay results.

#ifndef PARVEX_MODEL_HPP
#define PARVEX_MODEL_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "parvex/exponent_field.hpp"
#include "parvex/lebesgue.hpp"
#include "parvex/mesh.hpp"

namespace parvex {

// Scalar field on the space-time cylinder; y is ignored on 1-D meshes.
using SpaceTimeFn = std::function<double(std::array<double, 2>, double)>;

SpaceTimeFn constant_fn(double v);

// Exponent function alpha(x,t) with certified essential bounds.
struct BoundedExponent {
    SpaceTimeFn fn;
    double lower = 2.0;
    double upper = 2.0;

    void validate() const;
    ExponentField sample(MeshPtr mesh) const;
};

// Local nonlinearity a(x,t,tau).
struct Nonlinearity {
    enum class Kind {
        PowerSign,          // a2(x,t) |tau|^{alpha-2} tau
        PowerAbsPlusOffset, // a0(x,t) |tau|^{alpha-1} + a1(x,t)
        Tabulated           // scale(x,t) * piecewise-linear-in-tau table
    };
    Kind kind = Kind::PowerSign;
    std::vector<double> tau_grid;   // Tabulated only; strictly increasing
    std::vector<double> tau_values; // Tabulated only
    SpaceTimeFn scale;              // Tabulated only; defaults to 1

    void validate() const;
};

struct ProblemSpec {
    double p0 = 2.0; // diffusion exponent, >= 2
    double p = 2.0;  // nonlocal norm exponent, >= 1
    double s = 1.0;  // nonlocal power, >= 1
    int n = 3;       // dimension parameter for the exponent formulas, >= 3

    BoundedExponent alpha;
    Nonlinearity form;
    SpaceTimeFn a0, a1, a2, a3; // nonnegative coefficient fields
    double A0 = 1.0;            // uniform lower bound of a2, > 0
    SpaceTimeFn g;
    SpaceTimeFn h;     // ignored when h_is_zero
    bool h_is_zero = true;

    MeshPtr mesh;          // spatial mesh
    double T = 1.0;        // time horizon
    int time_samples = 16; // time resolution used by validators / sampled norms

    void validate() const;

    double nonlinearity_value(std::array<double, 2> x, double t, double tau) const;
    // d a / d tau, with the power singularities at tau = 0 clamped to 0
    double nonlinearity_derivative(std::array<double, 2> x, double t, double tau) const;

    GridFunction sample_slice(const SpaceTimeFn& f, double t) const;
    GridFunction sample_h(double t) const;
    TimeSeriesField sample_series(const SpaceTimeFn& f) const;
    // alpha / other fields sampled on the space-time validation mesh
    MeshPtr space_time_mesh() const;
};

// free-function form mirroring the operation signature
double eval_nonlinearity(const ProblemSpec& spec, std::array<double, 2> x, double t, double tau);

// g_slice scaled by ||u_slice||_{L^p}^s.
GridFunction nonlocal_term(const GridFunction& u_slice, const GridFunction& g_slice, double p,
                           double s);

struct GrowthSample {
    std::array<double, 2> x{0.0, 0.0};
    double t = 0.0;
    double tau = 0.0;
};

// Sampled check of the two growth inequalities
//   |a(x,t,tau)| <= a0 |tau|^{alpha-1} + a1          (upper growth)
//   a(x,t,tau) tau >= a2 |tau|^{alpha} - a3          (lower coercivity)
struct GrowthReport {
    bool upper_ok = false;
    bool lower_ok = false;
    bool passed = false;
    double worst_upper_margin = 0.0; // min over samples of rhs - lhs
    double worst_lower_margin = 0.0;
    GrowthSample worst_upper;
    GrowthSample worst_lower;
    int samples = 0;
};
GrowthReport validate_growth_conditions(const ProblemSpec& spec, int sample_count = 10000,
                                        std::uint64_t seed = 1, double tau_max = 10.0,
                                        bool force_zero_a3 = false);

// Hypotheses of the main existence result: 1 <= s < p0-1, p <= p0,
// a0 in L^{beta(x,t)}, a1 in L^{alpha*}, a2 in L^inf, a3 in L^1, and
// g in L^{p0/(p0-(s+1))}(0,T; L^{p_tilde*}).
struct ExistenceReport {
    bool s_condition = false;
    bool p_condition = false;
    bool a0_ok = false, a1_ok = false, a2_ok = false, a3_ok = false, g_ok = false;
    double a0_norm = 0.0, a1_norm = 0.0, a2_sup = 0.0, a3_integral = 0.0, g_mixed = 0.0;
    double eta = 0.01;
    bool passed = false;
};
ExistenceReport validate_existence_profile(const ProblemSpec& spec, double eta = 0.01);

// Alternate profile requiring alpha^+ < p0 (beta_1 finite everywhere).
struct SubcriticalReport {
    bool alpha_condition = false;
    bool s_condition = false;
    bool p_condition = false;
    bool a0_ok = false, a1_ok = false, g_ok = false;
    double a0_norm = 0.0, a1_norm = 0.0, g_mixed = 0.0;
    bool passed = false;
};
SubcriticalReport validate_subcritical_profile(const ProblemSpec& spec);

// Hypotheses under which the homogeneous problem admits only the trivial
// solution: h = 0, p = 2, p0 > 2, lower coercivity with a3 = 0, and
// sup_t ||g(.,t)||_{L^2} finite (returned as K).
struct DecayProfileReport {
    bool h_zero = false;
    bool p_is_two = false;
    bool p0_above_two = false;
    bool a3_zero = false;
    bool lower_bound_ok = false; // sampled coercivity with a3 forced to 0
    bool g_bounded = false;
    double K = 0.0; // sup_t ||g(.,t)||_{L^2}
    bool passed = false;
};
DecayProfileReport validate_decay_profile(const ProblemSpec& spec, std::uint64_t seed = 1);

} // namespace parvex

#endif
