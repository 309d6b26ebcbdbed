#include "parvex/config.hpp"

#include <cmath>
#include <fstream>

#include "parvex/csvio.hpp"

namespace parvex {

namespace {

[[noreturn]] void config_error(const std::string& msg) {
    throw StructuralError("config: " + msg);
}

double require_number(const Json& j, const char* key, std::optional<double> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        config_error(std::string("missing numeric field '") + key + "'");
    }
    if (!j.at(key).is_number()) config_error(std::string("field '") + key + "' must be a number");
    return j.at(key).get<double>();
}

// 1-D profile of a separable factor
struct Profile {
    std::function<double(double)> fn;
    Json descriptor;
};

Profile parse_profile(const Json& j) {
    if (j.is_number()) {
        const double v = j.get<double>();
        return {[v](double) { return v; }, Json{{"kind", "constant"}, {"value", v}}};
    }
    if (!j.is_object() || !j.contains("kind")) config_error("profile must be an object with 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") {
        const double v = require_number(j, "value");
        return {[v](double) { return v; }, Json{{"kind", "constant"}, {"value", v}}};
    }
    if (kind == "affine") {
        const double a = require_number(j, "offset", 0.0);
        const double b = require_number(j, "slope", 0.0);
        return {[a, b](double s) { return a + b * s; },
                Json{{"kind", "affine"}, {"offset", a}, {"slope", b}}};
    }
    if (kind == "sinpi") {
        const double a = require_number(j, "amplitude", 1.0);
        const double k = require_number(j, "frequency", 1.0);
        return {[a, k](double s) { return a * std::sin(k * M_PI * s); },
                Json{{"kind", "sinpi"}, {"amplitude", a}, {"frequency", k}}};
    }
    if (kind == "cospi") {
        const double a = require_number(j, "amplitude", 1.0);
        const double k = require_number(j, "frequency", 1.0);
        return {[a, k](double s) { return a * std::cos(k * M_PI * s); },
                Json{{"kind", "cospi"}, {"amplitude", a}, {"frequency", k}}};
    }
    if (kind == "power") {
        const double c = require_number(j, "coefficient", 1.0);
        const double e = require_number(j, "exponent", 1.0);
        return {[c, e](double s) { return c * std::pow(s, e); },
                Json{{"kind", "power"}, {"coefficient", c}, {"exponent", e}}};
    }
    config_error("unknown profile kind '" + kind + "'");
}

} // namespace

FieldExpr parse_field_expr(const Json& j, const MeshPtr& mesh) {
    if (j.is_number()) {
        const double v = j.get<double>();
        return {constant_fn(v), Json{{"kind", "constant"}, {"value", v}}};
    }
    if (j.is_string() && j.get<std::string>() == "zero")
        return {constant_fn(0.0), Json{{"kind", "constant"}, {"value", 0.0}}};
    if (!j.is_object() || !j.contains("kind"))
        config_error("field expression must be a number or an object with 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") {
        const double v = require_number(j, "value");
        return {constant_fn(v), Json{{"kind", "constant"}, {"value", v}}};
    }
    if (kind == "affine") {
        const double c0 = require_number(j, "c0", 0.0);
        const double cx = require_number(j, "cx", 0.0);
        const double cy = require_number(j, "cy", 0.0);
        const double ct = require_number(j, "ct", 0.0);
        return {[c0, cx, cy, ct](std::array<double, 2> x, double t) {
                    return c0 + cx * x[0] + cy * x[1] + ct * t;
                },
                Json{{"kind", "affine"}, {"c0", c0}, {"cx", cx}, {"cy", cy}, {"ct", ct}}};
    }
    if (kind == "separable") {
        Json desc{{"kind", "separable"}};
        std::function<double(double)> fx = [](double) { return 1.0; };
        std::function<double(double)> fy = [](double) { return 1.0; };
        std::function<double(double)> ft = [](double) { return 1.0; };
        if (j.contains("x")) {
            Profile p = parse_profile(j.at("x"));
            fx = p.fn;
            desc["x"] = p.descriptor;
        }
        if (j.contains("y")) {
            Profile p = parse_profile(j.at("y"));
            fy = p.fn;
            desc["y"] = p.descriptor;
        }
        if (j.contains("t")) {
            Profile p = parse_profile(j.at("t"));
            ft = p.fn;
            desc["t"] = p.descriptor;
        }
        return {[fx, fy, ft](std::array<double, 2> x, double t) {
                    return fx(x[0]) * fy(x[1]) * ft(t);
                },
                desc};
    }
    if (kind == "csv") {
        if (!j.contains("path")) config_error("csv field expression needs 'path'");
        const std::string path = j.at("path").get<std::string>();
        if (!mesh) config_error("csv field expression needs a mesh context");
        // samples live on the space-time mesh; evaluation snaps to the nearest node
        auto table = std::make_shared<GridFunction>(load_grid_function_csv(mesh, path));
        MeshPtr m = mesh;
        return {[table, m](std::array<double, 2> x, double t) {
                    auto nearest = [](double c, const Axis& ax) {
                        int i = static_cast<int>(std::lround(c / ax.spacing()));
                        return std::min(std::max(i, 0), ax.nodes - 1);
                    };
                    int s = nearest(x[0], m->axis(0));
                    if (m->dim() == 2)
                        s = m->space_index(nearest(x[0], m->axis(0)), nearest(x[1], m->axis(1)));
                    const int k = m->has_time() ? nearest(t, m->time_axis()) : 0;
                    return (*table)[m->node_index(s, k)];
                },
                Json{{"kind", "csv"}, {"path", path}}};
    }
    config_error("unknown field expression kind '" + kind + "'");
}

RunConfig parse_run_config(const Json& j) {
    if (!j.is_object()) config_error("top level must be an object");
    if (!j.contains("problem")) config_error("missing 'problem' section");
    const Json& jp = j.at("problem");

    RunConfig rc;
    rc.raw = j;

    // mesh
    if (!jp.contains("mesh")) config_error("missing 'problem.mesh'");
    const Json& jm = jp.at("mesh");
    const auto extents = jm.at("extent").get<std::vector<double>>();
    const auto nodes = jm.at("nodes").get<std::vector<int>>();
    if (extents.size() != nodes.size() || extents.empty() || extents.size() > 2)
        config_error("mesh extent/nodes must both have 1 or 2 entries");
    MeshPtr mesh = extents.size() == 1
                       ? std::make_shared<Mesh>(Mesh::line(extents[0], nodes[0]))
                       : std::make_shared<Mesh>(Mesh::box(extents[0], nodes[0], extents[1], nodes[1]));

    ProblemSpec& spec = rc.problem;
    spec.mesh = mesh;
    spec.T = require_number(jp, "T", 1.0);
    spec.time_samples = jm.contains("time_samples") ? jm.at("time_samples").get<int>() : 16;
    spec.p0 = require_number(jp, "p0");
    spec.p = require_number(jp, "p", 2.0);
    spec.s = require_number(jp, "s", 1.0);
    spec.n = jp.contains("n") ? jp.at("n").get<int>() : 3;

    const MeshPtr stm = std::make_shared<Mesh>(mesh->with_time(spec.T, spec.time_samples));

    // alpha with certified bounds (sampled when not given)
    if (!jp.contains("alpha")) config_error("missing 'problem.alpha'");
    const Json& ja = jp.at("alpha");
    FieldExpr alpha_expr = parse_field_expr(ja.is_object() && ja.contains("expr") ? ja.at("expr") : ja, stm);
    spec.alpha.fn = alpha_expr.fn;
    if (ja.is_object() && ja.contains("lower") && ja.contains("upper")) {
        spec.alpha.lower = ja.at("lower").get<double>();
        spec.alpha.upper = ja.at("upper").get<double>();
    } else {
        const GridFunction sampled = GridFunction::sample(stm, spec.alpha.fn);
        double lo = kInfinity, hi = -kInfinity;
        for (int i = 0; i < sampled.size(); ++i) {
            lo = std::min(lo, sampled[i]);
            hi = std::max(hi, sampled[i]);
        }
        spec.alpha.lower = lo;
        spec.alpha.upper = hi;
    }

    // nonlinearity
    if (!jp.contains("nonlinearity")) config_error("missing 'problem.nonlinearity'");
    const Json& jn = jp.at("nonlinearity");
    const std::string variant = jn.at("variant").get<std::string>();
    if (variant == "power_sign") {
        spec.form.kind = Nonlinearity::Kind::PowerSign;
    } else if (variant == "power_abs_plus_offset") {
        spec.form.kind = Nonlinearity::Kind::PowerAbsPlusOffset;
    } else if (variant == "tabulated") {
        spec.form.kind = Nonlinearity::Kind::Tabulated;
        spec.form.tau_grid = jn.at("tau").get<std::vector<double>>();
        spec.form.tau_values = jn.at("values").get<std::vector<double>>();
        if (jn.contains("scale")) spec.form.scale = parse_field_expr(jn.at("scale"), stm).fn;
    } else {
        config_error("unknown nonlinearity variant '" + variant + "'");
    }

    // coefficients
    const Json& jc = jp.contains("coefficients") ? jp.at("coefficients") : Json::object();
    auto coeff = [&](const char* name, double fallback) {
        if (jc.contains(name)) return parse_field_expr(jc.at(name), stm).fn;
        return constant_fn(fallback);
    };
    spec.a0 = coeff("a0", 1.0);
    spec.a1 = coeff("a1", 0.0);
    spec.a2 = coeff("a2", 1.0);
    spec.a3 = coeff("a3", 0.0);
    spec.A0 = jc.contains("A0") ? jc.at("A0").get<double>() : 1.0;

    spec.g = jp.contains("g") ? parse_field_expr(jp.at("g"), stm).fn : constant_fn(0.0);
    if (jp.contains("h") && !(jp.at("h").is_string() && jp.at("h").get<std::string>() == "zero")) {
        spec.h = parse_field_expr(jp.at("h"), stm).fn;
        spec.h_is_zero = false;
    } else {
        spec.h = constant_fn(0.0);
        spec.h_is_zero = true;
    }

    // solver
    if (j.contains("solver")) {
        const Json& js = j.at("solver");
        rc.solver.dt = require_number(js, "dt", rc.solver.dt);
        if (js.contains("scheme")) {
            const std::string scheme = js.at("scheme").get<std::string>();
            if (scheme == "imex_lagged")
                rc.solver.scheme = SolverConfig::Scheme::ImexLagged;
            else if (scheme == "implicit_newton")
                rc.solver.scheme = SolverConfig::Scheme::ImplicitNewton;
            else
                config_error("unknown scheme '" + scheme + "'");
        }
        rc.solver.degeneracy_floor = require_number(js, "degeneracy_floor", 0.0);
        rc.solver.nonlinear_tol = require_number(js, "nonlinear_tol", rc.solver.nonlinear_tol);
        rc.solver.linear_tol = require_number(js, "linear_tol", rc.solver.linear_tol);
        if (js.contains("max_nonlinear_iterations"))
            rc.solver.max_nonlinear_iters = js.at("max_nonlinear_iterations").get<int>();
        if (js.contains("initial")) {
            // research mode: nonzero initial state, projected onto the admissible set
            FieldExpr init = parse_field_expr(js.at("initial"), stm);
            GridFunction u0 = GridFunction::sample(mesh, init.fn);
            u0.zero_boundary();
            rc.solver.initial_state = std::move(u0);
        }
    }

    // diagnostics
    if (j.contains("diagnostics")) {
        const Json& jd = j.at("diagnostics");
        if (jd.contains("enabled")) rc.diagnostics.enabled = jd.at("enabled").get<bool>();
        if (jd.contains("epsilon")) rc.diagnostics.epsilon = jd.at("epsilon").get<double>();
        if (jd.contains("embedding_constant"))
            rc.diagnostics.embedding_c = jd.at("embedding_constant").get<double>();
        if (jd.contains("relation_tolerance"))
            rc.diagnostics.relation_tol = jd.at("relation_tolerance").get<double>();
        if (jd.contains("pseudonorm_threshold"))
            rc.diagnostics.pseudonorm_threshold = jd.at("pseudonorm_threshold").get<double>();
    }

    if (j.contains("reference")) rc.reference = parse_field_expr(j.at("reference"), stm);

    if (j.contains("seed")) rc.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output") && j.at("output").contains("dir"))
        rc.out_dir = j.at("output").at("dir").get<std::string>();

    if (j.contains("sweep")) {
        for (const Json& axis : j.at("sweep")) {
            SweepAxis sa;
            sa.path = axis.at("path").get<std::string>();
            for (const Json& v : axis.at("values")) sa.values.push_back(v);
            rc.sweep.push_back(std::move(sa));
        }
    }

    spec.validate();
    rc.solver.validate();

    // normalized echo (alphabetical keys, defaults materialized)
    Json echo;
    echo["problem"] = jp;
    echo["problem"]["p"] = spec.p;
    echo["problem"]["s"] = spec.s;
    echo["problem"]["n"] = spec.n;
    echo["problem"]["T"] = spec.T;
    echo["problem"]["alpha"] =
        Json{{"expr", alpha_expr.descriptor}, {"lower", spec.alpha.lower}, {"upper", spec.alpha.upper}};
    echo["solver"] = Json{
        {"dt", rc.solver.dt},
        {"scheme", rc.solver.scheme == SolverConfig::Scheme::ImexLagged ? "imex_lagged"
                                                                        : "implicit_newton"},
        {"degeneracy_floor", rc.solver.degeneracy_floor},
        {"nonlinear_tol", rc.solver.nonlinear_tol},
        {"linear_tol", rc.solver.linear_tol},
        {"max_nonlinear_iterations", rc.solver.max_nonlinear_iters}};
    if (j.contains("solver") && j.at("solver").contains("initial"))
        echo["solver"]["initial"] = j.at("solver").at("initial");
    echo["diagnostics"] = Json{{"enabled", rc.diagnostics.enabled},
                               {"pseudonorm_threshold", rc.diagnostics.pseudonorm_threshold}};
    if (rc.diagnostics.epsilon) echo["diagnostics"]["epsilon"] = *rc.diagnostics.epsilon;
    if (rc.diagnostics.embedding_c)
        echo["diagnostics"]["embedding_constant"] = *rc.diagnostics.embedding_c;
    if (rc.diagnostics.relation_tol)
        echo["diagnostics"]["relation_tolerance"] = *rc.diagnostics.relation_tol;
    if (rc.reference) echo["reference"] = rc.reference->descriptor;
    echo["seed"] = rc.seed;
    echo["output"] = Json{{"dir", rc.out_dir}};
    if (j.contains("sweep")) echo["sweep"] = j.at("sweep");
    rc.echo = echo;
    return rc;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open config file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw StructuralError(std::string("config parse failure: ") + e.what());
    }
    return parse_run_config(j);
}

} // namespace parvex
