#include "parvex/mesh.hpp"

#include <cmath>
#include <limits>

namespace parvex {

Mesh Mesh::line(double length, int nodes) {
    Mesh m;
    m.space_.push_back(Axis{length, nodes});
    m.validate();
    return m;
}

Mesh Mesh::box(double lx, int nx, double ly, int ny) {
    Mesh m;
    m.space_.push_back(Axis{lx, nx});
    m.space_.push_back(Axis{ly, ny});
    m.validate();
    return m;
}

Mesh Mesh::with_time(double horizon, int steps) const {
    Mesh m = *this;
    m.time_ = Axis{horizon, steps + 1};
    m.validate();
    return m;
}

Mesh Mesh::spatial() const {
    Mesh m = *this;
    m.time_.reset();
    return m;
}

const Axis& Mesh::time_axis() const {
    if (!time_) throw StructuralError("mesh has no time axis");
    return *time_;
}

void Mesh::validate() const {
    if (space_.empty() || space_.size() > 2)
        throw StructuralError("mesh must have 1 or 2 spatial axes");
    for (const Axis& a : space_) {
        if (!(a.length > 0.0)) throw StructuralError("axis length must be positive");
        if (a.nodes < 2) throw StructuralError("axis needs at least 2 nodes");
    }
    if (time_) {
        if (!(time_->length > 0.0)) throw StructuralError("time horizon must be positive");
        if (time_->nodes < 2) throw StructuralError("time axis needs at least 1 step");
    }
    // dual-cell volumes must tile the domain
    double sum = 0.0;
    for (int s = 0; s < space_node_count(); ++s) sum += space_weight(s);
    const double target = domain_measure();
    if (std::abs(sum - target) > 1e-12 * target)
        throw StructuralError("quadrature weights do not sum to the domain measure");
}

int Mesh::space_node_count() const {
    int n = 1;
    for (const Axis& a : space_) n *= a.nodes;
    return n;
}

double Mesh::domain_measure() const {
    double v = 1.0;
    for (const Axis& a : space_) v *= a.length;
    return v;
}

double Mesh::full_measure() const {
    return time_ ? domain_measure() * time_->length : domain_measure();
}

std::array<int, 2> Mesh::space_multi_index(int sidx) const {
    if (space_.size() == 1) return {sidx, 0};
    const int nx = space_[0].nodes;
    return {sidx % nx, sidx / nx};
}

int Mesh::space_index(int ix, int iy) const {
    if (space_.size() == 1) return ix;
    return iy * space_[0].nodes + ix;
}

std::array<double, 2> Mesh::position(int sidx) const {
    const auto mi = space_multi_index(sidx);
    std::array<double, 2> p{0.0, 0.0};
    p[0] = mi[0] * space_[0].spacing();
    if (space_.size() == 2) p[1] = mi[1] * space_[1].spacing();
    return p;
}

bool Mesh::is_space_boundary(int sidx) const {
    const auto mi = space_multi_index(sidx);
    for (std::size_t a = 0; a < space_.size(); ++a) {
        if (mi[a] == 0 || mi[a] == space_[a].nodes - 1) return true;
    }
    return false;
}

int Mesh::interior_count() const {
    int n = 1;
    for (const Axis& a : space_) n *= (a.nodes - 2);
    return n < 0 ? 0 : n;
}

double Mesh::space_weight(int sidx) const {
    const auto mi = space_multi_index(sidx);
    double w = 1.0;
    for (std::size_t a = 0; a < space_.size(); ++a)
        w *= space_[a].weight(mi[static_cast<int>(a)]);
    return w;
}

double Mesh::time_weight(int tidx) const {
    return time_ ? time_->weight(tidx) : 1.0;
}

double Mesh::node_weight(int node) const {
    const int ns = space_node_count();
    return space_weight(node % ns) * time_weight(node / ns);
}

double Mesh::time_at(int tidx) const {
    return time_ ? tidx * time_->spacing() : 0.0;
}

std::vector<double> Mesh::time_grid() const {
    std::vector<double> t(static_cast<std::size_t>(time_node_count()));
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = time_at(static_cast<int>(k));
    return t;
}

bool Mesh::same_layout(const Mesh& other) const {
    if (space_.size() != other.space_.size()) return false;
    for (std::size_t a = 0; a < space_.size(); ++a) {
        if (space_[a].nodes != other.space_[a].nodes) return false;
        if (space_[a].length != other.space_[a].length) return false;
    }
    if (time_.has_value() != other.time_.has_value()) return false;
    if (time_ && (time_->nodes != other.time_->nodes || time_->length != other.time_->length))
        return false;
    return true;
}

GridFunction::GridFunction(MeshPtr mesh, std::vector<double> values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
    if (!mesh_) throw StructuralError("grid function requires a mesh");
    if (static_cast<int>(values_.size()) != mesh_->node_count())
        throw StructuralError("grid function value count does not match mesh node count");
}

GridFunction GridFunction::zero(MeshPtr mesh) {
    std::vector<double> v(static_cast<std::size_t>(mesh->node_count()), 0.0);
    return GridFunction(std::move(mesh), std::move(v));
}

GridFunction GridFunction::constant(MeshPtr mesh, double value) {
    std::vector<double> v(static_cast<std::size_t>(mesh->node_count()), value);
    return GridFunction(std::move(mesh), std::move(v));
}

GridFunction GridFunction::sample(MeshPtr mesh,
                                  const std::function<double(std::array<double, 2>, double)>& f) {
    const int ns = mesh->space_node_count();
    const int nt = mesh->time_node_count();
    std::vector<double> v(static_cast<std::size_t>(ns * nt));
    for (int k = 0; k < nt; ++k) {
        const double t = mesh->time_at(k);
        for (int s = 0; s < ns; ++s)
            v[static_cast<std::size_t>(k * ns + s)] = f(mesh->position(s), t);
    }
    return GridFunction(std::move(mesh), std::move(v));
}

bool GridFunction::is_admissible() const {
    const int ns = mesh_->space_node_count();
    const int nt = mesh_->time_node_count();
    for (int k = 0; k < nt; ++k)
        for (int s = 0; s < ns; ++s)
            if (mesh_->is_space_boundary(s) && values_[static_cast<std::size_t>(k * ns + s)] != 0.0)
                return false;
    return true;
}

void GridFunction::zero_boundary() {
    const int ns = mesh_->space_node_count();
    const int nt = mesh_->time_node_count();
    for (int k = 0; k < nt; ++k)
        for (int s = 0; s < ns; ++s)
            if (mesh_->is_space_boundary(s)) values_[static_cast<std::size_t>(k * ns + s)] = 0.0;
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

void require_same_mesh(const GridFunction& a, const GridFunction& b, const char* op) {
    if (a.mesh_ptr().get() == b.mesh_ptr().get()) return;
    if (a.mesh_ptr() && b.mesh_ptr() && a.mesh().same_layout(b.mesh())) return;
    throw StructuralError(std::string(op) + ": operands live on different meshes");
}

void TimeSeriesField::validate() const {
    if (!mesh) throw StructuralError("time series requires a mesh");
    if (times.empty() || slices.empty()) throw StructuralError("time series is empty");
    if (times.size() != slices.size())
        throw StructuralError("time series: times and slices differ in length");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1])) throw StructuralError("time series: times not increasing");
    for (const GridFunction& s : slices)
        if (s.size() != mesh->space_node_count())
            throw StructuralError("time series: slice size does not match mesh");
}

double TimeSeriesField::time_weight(int k) const {
    const int m = levels();
    if (m == 1) return 1.0;
    const std::size_t i = static_cast<std::size_t>(k);
    if (k == 0) return 0.5 * (times[1] - times[0]);
    if (k == m - 1) return 0.5 * (times[i] - times[i - 1]);
    return 0.5 * (times[i + 1] - times[i - 1]);
}

} // namespace parvex
