// JSON run configuration: problem data, solver settings, diagnostics options,
// sweep axes.  Coefficient fields are closed-form expression descriptors
// (constant / affine / separable 1-D profiles) or CSV tables, so configs stay
// diffable and runs reproducible.

#ifndef PARVEX_CONFIG_HPP
#define PARVEX_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "parvex/diagnostics.hpp"
#include "parvex/model.hpp"
#include "parvex/solver.hpp"

namespace parvex {

using Json = nlohmann::json;

// Closed-form space-time field together with its normalized descriptor.
struct FieldExpr {
    SpaceTimeFn fn;
    Json descriptor;
};

// `mesh` is needed for "csv" descriptors (samples live on mesh nodes).
FieldExpr parse_field_expr(const Json& j, const MeshPtr& mesh);

struct DiagnosticsConfig {
    bool enabled = true;
    std::optional<double> epsilon;
    std::optional<double> embedding_c;
    std::optional<double> relation_tol;
    double pseudonorm_threshold = 1e-8;
};

struct SweepAxis {
    std::string path; // dotted config path, e.g. "solver.dt"
    std::vector<Json> values;
};

struct RunConfig {
    ProblemSpec problem;
    SolverConfig solver;
    DiagnosticsConfig diagnostics;
    std::optional<FieldExpr> reference; // manufactured solution for error reporting
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    std::vector<SweepAxis> sweep;
    Json echo; // normalized configuration document
    Json raw;  // parsed input (sweep expansion re-parses from here)
};

RunConfig parse_run_config(const Json& j);
RunConfig load_run_config(const std::string& path);

} // namespace parvex

#endif
