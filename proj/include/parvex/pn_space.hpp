// Pseudo-norms and the signed-power homeomorphism for the nonlinear function
// classes S_{1,alpha,beta}: [u] = (sum_i int |u|^alpha |D_i u|^beta)^{1/(alpha+beta)},
// the map phi(u) = |u|^{alpha/beta} u identifying them with W^{1,beta}, the
// induced metric, Bochner-type time integrals, and the embedding predicates.
//
// Discrete gradients are face differences on the tensor mesh (forward
// differences on the cells); integrands are sampled at face midpoints.

#ifndef PARVEX_PN_SPACE_HPP
#define PARVEX_PN_SPACE_HPP

#include "parvex/mesh.hpp"

namespace parvex {

struct PnIndex {
    double alpha = 0.0; // >= 0
    double beta = 1.0;  // >= 1

    void validate() const;
    // index pair ((p0-2) q0, q0) tied to a diffusion exponent p0
    static PnIndex for_diffusion(double p0);
};

// Visit every spatial face: f(i, j, axis, h, measure) with i, j the adjacent
// node indices, h the spacing along `axis`, measure the face quadrature weight
// (spacing times transverse dual-cell widths).  Spatial meshes only.
template <typename F>
void for_each_face(const Mesh& m, F&& f) {
    if (m.dim() == 1) {
        const double h = m.axis(0).spacing();
        for (int i = 0; i + 1 < m.axis(0).nodes; ++i) f(i, i + 1, 0, h, h);
        return;
    }
    const Axis& ax = m.axis(0);
    const Axis& ay = m.axis(1);
    for (int iy = 0; iy < ay.nodes; ++iy) {
        const double wy = ay.weight(iy);
        for (int ix = 0; ix + 1 < ax.nodes; ++ix)
            f(m.space_index(ix, iy), m.space_index(ix + 1, iy), 0, ax.spacing(),
              ax.spacing() * wy);
    }
    for (int ix = 0; ix < ax.nodes; ++ix) {
        const double wx = ax.weight(ix);
        for (int iy = 0; iy + 1 < ay.nodes; ++iy)
            f(m.space_index(ix, iy), m.space_index(ix, iy + 1), 1, ay.spacing(),
              ay.spacing() * wx);
    }
}

// (sum over faces of |u_mid|^alpha |Du_face|^beta measure)^{1/(alpha+beta)}.
// With `ring` set the field must vanish on the boundary nodes.
double pn_pseudonorm(const GridFunction& u, const PnIndex& idx, bool ring = false);

// phi(u) = |u|^{alpha/beta} u, applied nodally.
GridFunction signed_power_map(const GridFunction& u, const PnIndex& idx);
// phi^{-1}(v) = |v|^{-alpha/(alpha+beta)} v with 0 -> 0.
GridFunction signed_power_inverse(const GridFunction& v, const PnIndex& idx);

struct GradientIdentityReport {
    double lhs = 0.0;     // ||D(phi(u))||_{L^beta}^beta via nodal phi
    double rhs = 0.0;     // ((alpha+beta)/beta)^beta [u]^{alpha+beta}
    double rel_gap = 0.0;
    bool holds = false;
};
// Chain-rule witness of the homeomorphism.  Exact (to rounding) for
// piecewise-linear fields of constant sign when alpha/beta is 0 or 1; for
// other indices or sign-changing fields the gap shrinks under refinement.
GradientIdentityReport gradient_identity_check(const GridFunction& u, const PnIndex& idx,
                                               double tol = 1e-8);

// d(u,v) = ||phi(u)-phi(v)||_{L^beta} + ||D(phi(u)-phi(v))||_{L^beta}.
double pn_metric(const GridFunction& u, const GridFunction& v, const PnIndex& idx);

// (int_0^T [u(t)]^p dt)^{1/p} over the slices of a time series.
double bochner_pseudonorm(const TimeSeriesField& series, double p, const PnIndex& idx);

struct EmbeddingReport {
    bool case_i = false;          // S ring_{1,a,b} subset of S ring_{1,a1,b1}
    bool case_ii = false;         // S ring_{1,a,b} subset of L^r
    bool case_ii_compact = false; // strict inequality in case (ii)
    bool case_iii = false;        // W_0^{1,p} subset of S ring_{1,a,b}
    double critical_r = 0.0;      // n(alpha+beta)/(n-beta) when n > beta
};
EmbeddingReport embedding_predicate(const PnIndex& idx, const PnIndex& idx1, int n, double r,
                                    double p);

} // namespace parvex

#endif
