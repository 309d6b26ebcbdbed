// Backward-Euler time stepping for the nonlocal degenerate parabolic problem
// on 1-D and 2-D boxes with homogeneous Dirichlet data and zero initial state.
//
// Diffusion is assembled in finite-volume flux form with face coefficients
// given by the arithmetic mean of the nodal |u|^{p0-2} (+ optional floor
// delta).  Two schemes:
//   imex_lagged     — lagged coefficients/absorption/nonlocal, one SPD solve
//                     with conjugate gradients per step;
//   implicit_newton — fully implicit step solved by damped Newton with the
//                     exact power-law derivatives and the rank-one derivative
//                     of the nonlocal scalar, BiCGSTAB inner solves.

#ifndef PARVEX_SOLVER_HPP
#define PARVEX_SOLVER_HPP

#include <optional>
#include <string>
#include <vector>

#include "parvex/model.hpp"

namespace parvex {

struct SolverConfig {
    enum class Scheme { ImexLagged, ImplicitNewton };

    double dt = 1e-2;
    Scheme scheme = Scheme::ImexLagged;
    double degeneracy_floor = 0.0; // delta added to |u|^{p0-2}
    double nonlinear_tol = 1e-10;
    int max_nonlinear_iters = 50;
    double linear_tol = 1e-10;
    int max_linear_iters = 0; // 0 = automatic (10 n + 100)
    // research mode: overrides the zero initial state (must vanish on the boundary)
    std::optional<GridFunction> initial_state;

    void validate() const;
};

struct StepDiagnostics {
    double time = 0.0;
    int nonlinear_iters = 0;
    double residual_norm = 0.0;
    int linear_iters = 0;
};

struct SolutionTrajectory {
    MeshPtr mesh;
    std::vector<double> times;
    std::vector<GridFunction> slices;
    std::vector<StepDiagnostics> steps;
    bool aborted = false;
    std::string abort_reason;

    int levels() const { return static_cast<int>(times.size()); }
    TimeSeriesField series() const;
};

// Negative discrete divergence of the degenerate flux: row i carries
// -div(kappa grad u)_i with kappa_face = mean(|u_i|^{p0-2}+delta, |u_j|^{p0-2}+delta).
// Boundary rows are zero.
GridFunction assemble_diffusion_divergence(const GridFunction& u, double p0, double delta);

// Alternative assembly through the transformed field: -(1/(p0-1)) Lap(|u|^{p0-2} u).
// Agrees with the divergence form to discretization order; exactly at p0 = 2.
GridFunction assemble_diffusion_transformed(const GridFunction& u, double p0);

// One backward-Euler step from `state` at time t to t + cfg.dt.
GridFunction time_step(const GridFunction& state, double t, const ProblemSpec& spec,
                       const SolverConfig& cfg);

// March from t = 0 to spec.T.  Step failures abort the run; the partial
// trajectory is retained and flagged.
SolutionTrajectory solve(const ProblemSpec& spec, const SolverConfig& cfg);

// Signed residual of the space-time weak-form relation against the test
// function w (admissible, sampled on the trajectory's time grid).
double weak_residual(const SolutionTrajectory& traj, const ProblemSpec& spec,
                     const TimeSeriesField& w);

} // namespace parvex

#endif
