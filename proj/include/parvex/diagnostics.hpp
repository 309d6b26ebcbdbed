// Energy, coercivity and decay monitors for computed trajectories: the
// pairing integrals of <f(u), u>, the lower coercivity bound implied by the
// structural growth condition, the Bochner pseudo-norm summary, the
// power-gradient (Sobolev form) identity, and the homogeneous-case decay
// relation with its Gronwall envelope.

#ifndef PARVEX_DIAGNOSTICS_HPP
#define PARVEX_DIAGNOSTICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "parvex/model.hpp"
#include "parvex/solver.hpp"

namespace parvex {

struct EnergyRow {
    double t = 0.0;
    double y = 0.0;                 // ||u||_{L^2}^2
    double diffusion_energy = 0.0;  // sum_f mean(|u|^{p0-2}) (Du)^2
    double sobolev_form = 0.0;      // (4/p0^2) sum_f (D|u|^{p0/2})^2
    double absorption_pairing = 0.0;// int a(x,t,u) u
    double nonlocal_pairing = 0.0;  // int g ||u||_p^s u
    double a2_alpha_modular = 0.0;  // int a2 |u|^alpha
    double a3_integral = 0.0;       // int |a3|
    double g_abs_pairing = 0.0;     // int |g| ||u||_p^s |u|
    double alpha_modular = 0.0;     // int |u|^alpha
    double relation_residual = 0.0; // filled per step by the decay check
    double gronwall_bound = 0.0;    // y(0) exp(2 K c(eps) t)
};

// pairing integrals of <f(u), u> and companions at one time level
EnergyRow pairing_terms(const GridFunction& u_slice, double t, const ProblemSpec& spec);

double diffusion_energy(const GridFunction& u, double p0);
double sobolev_form(const GridFunction& u, double p0);

// per-level rows for a whole trajectory (relation residual filled from the
// discrete time derivative of y)
std::vector<EnergyRow> energy_report(const SolutionTrajectory& traj, const ProblemSpec& spec);

struct CoercivityReport {
    bool passed = false;
    int worst_level = -1;
    double worst_margin = 0.0; // min over levels of lhs - rhs
    int levels = 0;
};
// At every level: <f(u),u> >= diffusion + int a2|u|^alpha - int a3 - int |g| ||u||^s |u|.
// Exact algebra given the pointwise lower growth bound, so it must pass
// whenever the growth validator passes (tolerance covers rounding).
CoercivityReport coercivity_lower_bound_check(const SolutionTrajectory& traj,
                                              const ProblemSpec& spec, double tol = 1e-8);

struct CoercivitySummary {
    double bochner_pn = 0.0;       // [u]_{L^{p0}(0,T; S ring_{1,(p0-2)q0,q0})}
    double sigma_alpha = 0.0;      // modular of u over the cylinder
    double luxemburg_alpha = 0.0;  // Luxemburg norm of u over the cylinder
    double g_weighted = 0.0;       // int ||g||_{p_tilde*} [u]^{s+1} dt
    double pairing_total = 0.0;    // int <f(u),u> dt
    double ratio = 0.0;            // pairing / ([u]^{p0} + ||u||_alpha^{alpha^-})
    bool ratio_defined = false;
    bool ratio_positive = false;
};
// Empirical coercivity inspection; asserts only positivity of the ratio for
// trajectories with pseudo-norm above the threshold.
CoercivitySummary coercivity_summary(const SolutionTrajectory& traj, const ProblemSpec& spec,
                                     double pseudonorm_threshold = 1e-8);

struct SobolevIdentityReport {
    double lhs = 0.0; // sum_i int |u|^{p0-2} (D_i u)^2
    double rhs = 0.0; // (4/p0^2) sum_i int (D_i |u|^{p0/2})^2
    double rel_gap = 0.0;
};
SobolevIdentityReport sobolev_form_identity_check(const GridFunction& u_slice, double p0);

// smallest eigenvalue of the discrete Dirichlet Laplacian on the tensor mesh
double dirichlet_laplacian_min_eigenvalue(const Mesh& mesh);
// default embedding constant c with ||v||^2 <= c ||grad v||^2 discretely
double rayleigh_embedding_constant(const Mesh& mesh);
// c(eps) of the scalar Young split y^{(s+1)/2} <= eps y^{p0/2} + c(eps) y
double young_constant(double epsilon, double s, double p0);

struct DecayOptions {
    std::optional<double> epsilon;      // default: half the admissibility threshold
    std::optional<double> embedding_c;  // default: discrete Rayleigh quotient
    std::optional<double> relation_tol; // default: max(1e-8, 25 * max dt)
};

struct DecayReport {
    bool skipped = false;
    std::string skip_reason;
    bool relation_ok = false;  // |T1+T2+T3+T4| <= tol * scale per step
    bool zero_ok = false;      // y(0) = 0  =>  max_t y <= 1e-20
    bool gronwall_ok = false;  // y(t) <= y(0) exp(2 K c(eps) t)
    bool epsilon_admissible = false;
    bool passed = false;
    double K = 0.0;
    double embedding_c = 0.0;
    double epsilon = 0.0;
    double epsilon_threshold = 0.0;
    double c_eps = 0.0;
    double max_y = 0.0;
    double worst_relation_rel = 0.0; // max over steps of |residual| / scale
    int worst_relation_level = -1;
    std::vector<EnergyRow> rows;     // per-level rows incl. residual + bound
};
DecayReport homogeneous_decay_check(const SolutionTrajectory& traj, const ProblemSpec& spec,
                                    const DecayOptions& opts = {});

} // namespace parvex

#endif
