#include "parvex/exponent_field.hpp"

#include <algorithm>
#include <cmath>

#include "parvex/lebesgue.hpp"

namespace parvex {

ExponentField::ExponentField(MeshPtr mesh, std::vector<double> samples, double lower, double upper,
                             std::vector<char> infinity_mask)
    : mesh_(std::move(mesh)), samples_(std::move(samples)), mask_(std::move(infinity_mask)),
      lower_(lower), upper_(upper) {
    validate();
}

ExponentField ExponentField::constant(MeshPtr mesh, double value) {
    std::vector<double> s(static_cast<std::size_t>(mesh->node_count()), value);
    return ExponentField(std::move(mesh), std::move(s), value, value);
}

ExponentField ExponentField::from_samples(MeshPtr mesh, std::vector<double> samples,
                                          std::vector<char> infinity_mask) {
    double lo = kInfinity, hi = 1.0;
    bool any_finite = false;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!infinity_mask.empty() && infinity_mask[i]) continue;
        lo = std::min(lo, samples[i]);
        hi = std::max(hi, samples[i]);
        any_finite = true;
    }
    if (!any_finite) { lo = 1.0; hi = 1.0; }
    return ExponentField(std::move(mesh), std::move(samples), lo, hi, std::move(infinity_mask));
}

bool ExponentField::has_infinite_nodes() const {
    for (char c : mask_)
        if (c) return true;
    return false;
}

void ExponentField::validate() const {
    if (!mesh_) throw StructuralError("exponent field requires a mesh");
    if (static_cast<int>(samples_.size()) != mesh_->node_count())
        throw StructuralError("exponent sample count does not match mesh node count");
    if (!mask_.empty() && mask_.size() != samples_.size())
        throw StructuralError("infinity mask length does not match samples");
    if (!(lower_ >= 1.0)) throw DomainError("exponent lower bound must be >= 1");
    if (!(upper_ >= lower_)) throw DomainError("exponent bounds out of order");
    if (!std::isfinite(upper_)) throw DomainError("exponent upper bound must be finite");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!mask_.empty() && mask_[i]) continue;
        const double p = samples_[i];
        if (!std::isfinite(p) || p < lower_ - 1e-12 || p > upper_ + 1e-12)
            throw DomainError("exponent sample outside certified bounds");
    }
}

} // namespace parvex
