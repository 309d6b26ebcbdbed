// Structured tensor meshes and nodal scalar fields.
//
// A Mesh is a uniform node-centered grid on a 1-D interval or a 2-D box,
// optionally extended by a time axis covering [0, T].  Nodes include the
// domain boundary; quadrature assigns each node its dual cell (full spacing
// in the interior, half spacing at the ends), so sums of nodal values times
// weights integrate the piecewise-constant dual-cell extension exactly and
// the weights sum to the domain measure.

#ifndef PARVEX_MESH_HPP
#define PARVEX_MESH_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "parvex/errors.hpp"

namespace parvex {

struct Axis {
    double length = 0.0; // extent of the axis ([0, length])
    int nodes = 0;       // node count, >= 2

    double spacing() const { return length / static_cast<double>(nodes - 1); }
    // dual-cell width of node i
    double weight(int i) const {
        const double h = spacing();
        return (i == 0 || i == nodes - 1) ? 0.5 * h : h;
    }
};

class Mesh {
  public:
    static Mesh line(double length, int nodes);
    static Mesh box(double lx, int nx, double ly, int ny);

    // Copy of this mesh with a time axis over [0, horizon] with `steps` intervals.
    Mesh with_time(double horizon, int steps) const;
    // Copy without the time axis.
    Mesh spatial() const;

    int dim() const { return static_cast<int>(space_.size()); }
    bool has_time() const { return time_.has_value(); }

    const Axis& axis(int a) const { return space_[static_cast<std::size_t>(a)]; }
    const Axis& time_axis() const;

    int space_node_count() const;
    int time_node_count() const { return time_ ? time_->nodes : 1; }
    int node_count() const { return space_node_count() * time_node_count(); }

    double domain_measure() const;                   // |Omega|
    double full_measure() const;                     // |Omega| (x T when time axis present)
    double time_horizon() const { return time_ ? time_->length : 0.0; }

    // spatial node index <-> per-axis indices
    std::array<int, 2> space_multi_index(int sidx) const;
    int space_index(int ix, int iy = 0) const;
    std::array<double, 2> position(int sidx) const;  // node coordinates (y = 0 in 1-D)
    bool is_space_boundary(int sidx) const;
    int interior_count() const;

    double space_weight(int sidx) const;             // spatial dual-cell volume
    double time_weight(int tidx) const;              // 1 when no time axis
    double node_weight(int node) const;              // full (space x time) weight

    // linear node index over space x time: node = tidx * space_node_count() + sidx
    int node_index(int sidx, int tidx) const { return tidx * space_node_count() + sidx; }
    double time_at(int tidx) const;
    std::vector<double> time_grid() const;

    bool same_layout(const Mesh& other) const;

  private:
    Mesh() = default;
    void validate() const;

    std::vector<Axis> space_;      // 1 or 2 axes
    std::optional<Axis> time_;
};

using MeshPtr = std::shared_ptr<const Mesh>;

// Nodal scalar field on a mesh (space or space-time).
class GridFunction {
  public:
    GridFunction() = default;
    GridFunction(MeshPtr mesh, std::vector<double> values);

    static GridFunction zero(MeshPtr mesh);
    static GridFunction constant(MeshPtr mesh, double value);
    // Sample f(x, y, t) at every node; t = 0 for space-only meshes.
    static GridFunction sample(MeshPtr mesh,
                               const std::function<double(std::array<double, 2>, double)>& f);

    const Mesh& mesh() const { return *mesh_; }
    MeshPtr mesh_ptr() const { return mesh_; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return values_[static_cast<std::size_t>(i)]; }
    int size() const { return static_cast<int>(values_.size()); }

    // true when all spatial-boundary nodes carry exact zeros (at every time level)
    bool is_admissible() const;
    void zero_boundary();
    double max_abs() const;

  private:
    MeshPtr mesh_;
    std::vector<double> values_;
};

void require_same_mesh(const GridFunction& a, const GridFunction& b, const char* op);

// Time-indexed sequence of spatial fields on a shared spatial mesh.
struct TimeSeriesField {
    MeshPtr mesh;                     // spatial mesh
    std::vector<double> times;        // strictly increasing, times.front() may be 0
    std::vector<GridFunction> slices; // one spatial GridFunction per time

    void validate() const;
    int levels() const { return static_cast<int>(times.size()); }
    // trapezoid weight of time level k
    double time_weight(int k) const;
};

} // namespace parvex

#endif
