// Generalized Lebesgue space machinery: the modular sigma_p, the Luxemburg
// norm, pointwise conjugate exponents, the Holder / norm-modular / inclusion
// inequality witnesses, and the derived exponents used by the solver
// hypotheses (beta(x,t), critical exponents, mixed space-time norms).

#ifndef PARVEX_LEBESGUE_HPP
#define PARVEX_LEBESGUE_HPP

#include <functional>
#include <limits>

#include "parvex/exponent_field.hpp"
#include "parvex/mesh.hpp"

namespace parvex {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// |u|^e with the conventions 0^0 = 1 and log-space evaluation for huge bases.
double abs_pow(double u, double e);

// sigma_p(u) = integral of |u|^{p(x,t)} over the mesh domain.
// Infinite-exponent nodes contribute 0 when |u| <= 1 and +inf otherwise.
double modular(const GridFunction& u, const ExponentField& p);

// inf { lambda > 0 : sigma_p(u / lambda) <= 1 }, by bracketed bisection on the
// monotone predicate.  Returns 0 for the zero field.
double luxemburg_norm(const GridFunction& u, const ExponentField& p);

// Generic Luxemburg root for a user-supplied modular lambda -> sigma(u/lambda).
// `sup_scale` seeds the initial bracket (use max|u| * |Q|^{1/p^-}).
double luxemburg_root(const std::function<double(double)>& modular_of_scaled, double sup_scale);

// Classical L^r norm for a constant exponent (no root finding).
double lp_norm(const GridFunction& u, double r);

// Pointwise conjugate p'(x,t) = p/(p-1); infinite nodes map to 1 and samples
// equal to 1 map to infinite nodes when allow_infinity is set.
ExponentField conjugate(const ExponentField& p, bool allow_infinity = true);

struct HolderReport {
    double lhs = 0.0; // integral of |u v|
    double rhs = 0.0; // 2 ||u||_p ||v||_p'
    bool holds = false;
};
HolderReport holder_pairing_check(const GridFunction& u, const GridFunction& v,
                                  const ExponentField& p, double tol = 1e-9);

struct SandwichReport {
    double norm = 0.0;
    double lower = 0.0; // min(||u||^{p^-}, ||u||^{p^+})
    double modular_value = 0.0;
    double upper = 0.0; // max(||u||^{p^-}, ||u||^{p^+})
    bool holds = false;
};
SandwichReport norm_modular_sandwich_check(const GridFunction& u, const ExponentField& p,
                                           double tol = 1e-9);

struct InclusionReport {
    double sigma_p2 = 0.0;
    double sigma_p1 = 0.0;
    double measure = 0.0; // |Q_T|
    bool holds = false;
};
// Requires p2 <= p1 pointwise; verifies sigma_{p2}(u) <= sigma_{p1}(u) + |Q_T|.
InclusionReport inclusion_modular_check(const GridFunction& u, const ExponentField& p1,
                                        const ExponentField& p2, double tol = 1e-9);

// beta(x,t): p0 a*(x,t) / (p0 - a(x,t)) where a(x,t) < p0 - eta, infinite
// elsewhere.  Requires p0 >= 2, eta in (0,1), 1 < alpha^- <= alpha^+ < inf.
ExponentField beta_exponent(const ExponentField& alpha, double p0, double eta = 0.01);

// beta_1(x,t) = p0 a*(x,t) / (p0 - a(x,t)), finite everywhere; requires
// alpha^+ < p0.
ExponentField beta1_exponent(const ExponentField& alpha, double p0);

struct CriticalExponents {
    double q0 = 0.0;           // p0 / (p0 - 1)
    double p_tilde = 0.0;      // n p0 / (n - q0)
    double p_tilde_conj = 0.0; // p_tilde / (p_tilde - 1)
};
CriticalExponents critical_exponent(int n, double p0);

// (int_0^T ||g(.,t)||_{L^{r_space}}^{r_time} dt)^{1/r_time}; r_time may be
// kInfinity (essential supremum over the time grid).
double mixed_norm(const TimeSeriesField& g, double r_time, double r_space);

} // namespace parvex

#endif
