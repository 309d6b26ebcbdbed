#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "parvex/model.hpp"
#include "spec_builder.hpp"
#include "support.hpp"

using namespace parvex;
using testsupport::Rng;
using testsupport::SpecBuilder;

namespace {

MeshPtr unit_line(int nodes) { return std::make_shared<Mesh>(Mesh::line(1.0, nodes)); }

} // namespace

TEST_CASE("nonlinearity evaluation per variant") {
    const MeshPtr mesh = unit_line(9);
    const std::array<double, 2> x{0.5, 0.0};

    SUBCASE("power sign") {
        const ProblemSpec spec = SpecBuilder(mesh).alpha_const(3.0).power_sign().build();
        CHECK(eval_nonlinearity(spec, x, 0.1, 0.0) == 0.0);
        // a2 = 1, alpha = 3: |−2|^{3−2}·(−2) = −4
        CHECK(eval_nonlinearity(spec, x, 0.1, -2.0) == doctest::Approx(-4.0));
        // odd in tau
        CHECK(eval_nonlinearity(spec, x, 0.1, 2.0) == doctest::Approx(4.0));
    }
    SUBCASE("power abs plus offset") {
        const ProblemSpec spec = SpecBuilder(mesh)
                                     .alpha_const(2.0)
                                     .power_abs_plus_offset()
                                     .a0(constant_fn(2.0))
                                     .a1(constant_fn(1.0))
                                     .build();
        CHECK(eval_nonlinearity(spec, x, 0.1, 3.0) == doctest::Approx(7.0)); // 2*3 + 1
        CHECK(eval_nonlinearity(spec, x, 0.1, 0.0) == doctest::Approx(1.0)); // offset only
    }
    SUBCASE("tabulated with linear interpolation") {
        const ProblemSpec spec =
            SpecBuilder(mesh).tabulated({-1.0, 0.0, 1.0}, {-2.0, 0.0, 4.0}).build();
        CHECK(eval_nonlinearity(spec, x, 0.0, 0.0) == 0.0);
        CHECK(eval_nonlinearity(spec, x, 0.0, 0.5) == doctest::Approx(2.0));
        CHECK(eval_nonlinearity(spec, x, 0.0, -0.25) == doctest::Approx(-0.5));
        CHECK_THROWS_AS(eval_nonlinearity(spec, x, 0.0, 2.0), ExtrapolationError);
    }
    SUBCASE("tabulated scale field") {
        const ProblemSpec spec =
            SpecBuilder(mesh)
                .tabulated({-1.0, 1.0}, {-1.0, 1.0},
                           [](std::array<double, 2> xx, double) { return 2.0 + xx[0]; })
                .build();
        CHECK(eval_nonlinearity(spec, {0.5, 0.0}, 0.0, 1.0) == doctest::Approx(2.5));
    }
}

TEST_CASE("nonlinearity derivatives match difference quotients") {
    const MeshPtr mesh = unit_line(9);
    Rng rng(3);
    const ProblemSpec ps = SpecBuilder(mesh).alpha_const(3.0).power_sign().build();
    const ProblemSpec pa = SpecBuilder(mesh)
                               .alpha_const(2.5)
                               .power_abs_plus_offset()
                               .a0(constant_fn(1.5))
                               .a1(constant_fn(0.3))
                               .build();
    for (int rep = 0; rep < 50; ++rep) {
        const std::array<double, 2> x{rng.uniform(0.0, 1.0), 0.0};
        const double t = rng.uniform(0.0, 1.0);
        double tau = rng.uniform(-3.0, 3.0);
        if (std::abs(tau) < 0.05) tau = 0.5;
        const double eps = 1e-6 * std::max(1.0, std::abs(tau));
        for (const ProblemSpec* spec : {&ps, &pa}) {
            const double fd = (spec->nonlinearity_value(x, t, tau + eps) -
                               spec->nonlinearity_value(x, t, tau - eps)) /
                              (2.0 * eps);
            CHECK(spec->nonlinearity_derivative(x, t, tau) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("growth validator: equality case has zero margins") {
    // power_sign with a0 = a2 and a1 = a3 = 0 satisfies both inequalities with
    // equality at every sample
    const MeshPtr mesh = unit_line(9);
    const ProblemSpec spec = SpecBuilder(mesh).alpha_const(2.5).power_sign().build();
    const GrowthReport rep = validate_growth_conditions(spec, 2000, 77);
    CHECK(rep.passed);
    CHECK(std::abs(rep.worst_upper_margin) <= 1e-10);
    CHECK(std::abs(rep.worst_lower_margin) <= 1e-10);
}

TEST_CASE("growth validator: the offset example fails the lower bound for negative tau") {
    // a = a0 |tau|^{alpha-1} with a0 = 1, a1 = 0: at tau = -1 the pairing
    // a(tau) tau = -1 sits below a2 |tau|^alpha = 1
    const MeshPtr mesh = unit_line(9);
    const ProblemSpec spec =
        SpecBuilder(mesh).alpha_const(2.0).power_abs_plus_offset().build();
    const GrowthReport rep = validate_growth_conditions(spec, 2000, 78);
    CHECK(rep.upper_ok);
    CHECK(!rep.lower_ok);
    CHECK(!rep.passed);
    CHECK(rep.worst_lower.tau < 0.0);
    CHECK(rep.worst_lower_margin <= -2.0 + 1e-9);
}

TEST_CASE("growth validator: zero nonlinearity passes with a3 = 1 on |tau| <= 1") {
    const MeshPtr mesh = unit_line(9);
    const ProblemSpec spec = SpecBuilder(mesh)
                                 .tabulated({-2.0, 2.0}, {0.0, 0.0})
                                 .a3(constant_fn(1.0))
                                 .build();
    const GrowthReport rep = validate_growth_conditions(spec, 2000, 79, /*tau_max=*/1.0);
    CHECK(rep.passed);
}

TEST_CASE("growth validator is deterministic for a fixed seed") {
    const MeshPtr mesh = unit_line(9);
    const ProblemSpec spec = SpecBuilder(mesh).alpha_const(2.2).power_sign().build();
    const GrowthReport a = validate_growth_conditions(spec, 500, 123);
    const GrowthReport b = validate_growth_conditions(spec, 500, 123);
    CHECK(a.worst_lower_margin == b.worst_lower_margin);
    CHECK(a.worst_upper_margin == b.worst_upper_margin);
    CHECK(a.worst_lower.tau == b.worst_lower.tau);
}

TEST_CASE("existence profile validator") {
    const MeshPtr mesh = unit_line(17);

    SUBCASE("s below p0 - 1 passes; the boundary case fails") {
        const ProblemSpec ok =
            SpecBuilder(mesh).p0(3.0).s(1.0).g(constant_fn(1.0)).build();
        const ExistenceReport rep = validate_existence_profile(ok);
        CHECK(rep.s_condition);
        CHECK(rep.p_condition);
        CHECK(rep.g_ok);
        CHECK(std::isfinite(rep.g_mixed));
        CHECK(rep.passed);

        const ProblemSpec bad = SpecBuilder(mesh).p0(3.0).s(2.0).build();
        CHECK(!validate_existence_profile(bad).s_condition);
        CHECK(!validate_existence_profile(bad).passed);
    }
    SUBCASE("bounded g has finite mixed norm") {
        const ProblemSpec spec = SpecBuilder(mesh).g(constant_fn(1.0)).build();
        const ExistenceReport rep = validate_existence_profile(spec);
        // |Omega| = T = 1 and g = 1: the mixed norm is exactly 1
        CHECK(rep.g_mixed == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("norms against the infinite beta branch stay finite") {
        // alpha touches p0 somewhere: beta has an infinite branch; a0 <= 1
        // there keeps the Luxemburg norm finite
        const ProblemSpec spec =
            SpecBuilder(mesh)
                .alpha([](std::array<double, 2> x, double) { return 2.0 + 1.2 * x[0]; }, 2.0, 3.2)
                .a0(constant_fn(0.5))
                .build();
        const ExistenceReport rep = validate_existence_profile(spec);
        CHECK(rep.a0_ok);
        CHECK(std::isfinite(rep.a0_norm));
    }
}

TEST_CASE("subcritical profile validator") {
    const MeshPtr mesh = unit_line(17);

    const ProblemSpec ok = SpecBuilder(mesh).p0(3.0).alpha_const(2.0).g(constant_fn(1.0)).build();
    const SubcriticalReport rep = validate_subcritical_profile(ok);
    CHECK(rep.alpha_condition);
    CHECK(rep.passed);

    // beta_1 = p0 alpha* / (p0 - alpha) = 3*2/(3-2) = 6 for alpha = 2, p0 = 3
    const MeshPtr stm = ok.space_time_mesh();
    const ExponentField beta1 = beta1_exponent(ok.alpha.sample(stm), ok.p0);
    CHECK(beta1[0] == doctest::Approx(6.0));

    const ProblemSpec at_p0 = SpecBuilder(mesh).p0(3.0).alpha_const(3.0).build();
    CHECK(!validate_subcritical_profile(at_p0).alpha_condition);

    // a0 = 0 is trivially in the space
    const ProblemSpec zero_a0 =
        SpecBuilder(mesh).alpha_const(2.0).a0(constant_fn(0.0)).g(constant_fn(1.0)).build();
    CHECK(validate_subcritical_profile(zero_a0).a0_ok);
}

TEST_CASE("decay profile validator and the constant K") {
    const MeshPtr mesh = unit_line(17);

    SUBCASE("g = 0 gives K = 0") {
        const ProblemSpec spec = SpecBuilder(mesh).build();
        const DecayProfileReport rep = validate_decay_profile(spec);
        CHECK(rep.passed);
        CHECK(rep.K == 0.0);
    }
    SUBCASE("g = 1 on the unit cylinder gives K = 1") {
        const ProblemSpec spec = SpecBuilder(mesh).g(constant_fn(1.0)).build();
        CHECK(validate_decay_profile(spec).K == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("g = t peaks at the horizon") {
        const ProblemSpec spec =
            SpecBuilder(mesh).g([](std::array<double, 2>, double t) { return t; }).build();
        CHECK(validate_decay_profile(spec).K == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("hypothesis failures are reported") {
        CHECK(!validate_decay_profile(SpecBuilder(mesh).p(2.5).build()).p_is_two);
        CHECK(!validate_decay_profile(SpecBuilder(mesh).p0(2.0).build()).p0_above_two);
        CHECK(!validate_decay_profile(SpecBuilder(mesh).a3(constant_fn(0.5)).build()).a3_zero);
        CHECK(!validate_decay_profile(
                   SpecBuilder(mesh).h([](std::array<double, 2>, double) { return 1.0; }).build())
                   .h_zero);
        // the offset nonlinearity breaks the zero-a3 lower bound
        CHECK(!validate_decay_profile(
                   SpecBuilder(mesh).alpha_const(2.0).power_abs_plus_offset().build())
                   .lower_bound_ok);
    }
}

TEST_CASE("nonlocal term") {
    const MeshPtr mesh = unit_line(101);
    const GridFunction g = GridFunction::sample(
        mesh, [](std::array<double, 2> x, double) { return 1.0 + x[0]; });

    SUBCASE("zero state annihilates the term") {
        const GridFunction out = nonlocal_term(GridFunction::zero(mesh), g, 2.0, 1.0);
        CHECK(out.max_abs() == 0.0);
    }
    SUBCASE("unit state leaves g unchanged on the unit domain") {
        const GridFunction out = nonlocal_term(GridFunction::constant(mesh, 1.0), g, 3.0, 2.0);
        for (int i = 0; i < out.size(); ++i)
            CHECK(out[i] == doctest::Approx(g[i]).epsilon(1e-12));
    }
    SUBCASE("u = x with p = s = 2 scales g by the quadrature of x^2") {
        const GridFunction u =
            GridFunction::sample(mesh, [](std::array<double, 2> x, double) { return x[0]; });
        // independent quadrature oracle for the scaling factor
        double oracle = 0.0;
        for (int i = 0; i < mesh->space_node_count(); ++i) {
            const double x = mesh->position(i)[0];
            oracle += mesh->space_weight(i) * x * x;
        }
        CHECK(oracle == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
        const GridFunction out = nonlocal_term(u, g, 2.0, 2.0);
        for (int i = 0; i < out.size(); ++i)
            CHECK(out[i] == doctest::Approx(g[i] * oracle).epsilon(1e-12));
    }
    SUBCASE("positive homogeneity of degree s") {
        Rng rng(9);
        for (double s : {1.0, 2.0, 2.5}) {
            const GridFunction u = testsupport::random_field(mesh, rng);
            const double c = rng.uniform(0.1, 5.0);
            GridFunction cu = u;
            for (int i = 0; i < cu.size(); ++i) cu[i] *= c;
            const GridFunction a = nonlocal_term(cu, g, 2.0, s);
            const GridFunction b = nonlocal_term(u, g, 2.0, s);
            for (int i = 0; i < a.size(); ++i)
                CHECK(a[i] == doctest::Approx(std::pow(c, s) * b[i]).epsilon(1e-10));
        }
    }
}

TEST_CASE("problem validation rejects bad data") {
    const MeshPtr mesh = unit_line(9);
    CHECK_THROWS_AS(SpecBuilder(mesh).p0(1.5).build(), DomainError);
    CHECK_THROWS_AS(SpecBuilder(mesh).s(0.5).build(), DomainError);
    CHECK_THROWS_AS(SpecBuilder(mesh).n(2).build(), DomainError);
    // a2 dips below the uniform bound A0
    CHECK_THROWS_AS(SpecBuilder(mesh)
                        .a2([](std::array<double, 2> x, double) { return 0.2 + x[0]; })
                        .A0(0.5)
                        .build(),
                    DomainError);
    CHECK_THROWS_AS(SpecBuilder(mesh).alpha(constant_fn(1.0), 1.0, 1.0).build(), DomainError);
}
