// Sampled variable exponent p(x,t) with certified essential bounds.
//
// Finite samples satisfy 1 <= lower <= p(node) <= upper < inf.  Nodes may
// instead be marked infinite; there the modular uses the essential-supremum
// convention (zero contribution when |u| <= 1, +inf otherwise).

#ifndef PARVEX_EXPONENT_FIELD_HPP
#define PARVEX_EXPONENT_FIELD_HPP

#include <vector>

#include "parvex/mesh.hpp"

namespace parvex {

class ExponentField {
  public:
    ExponentField(MeshPtr mesh, std::vector<double> samples, double lower, double upper,
                  std::vector<char> infinity_mask = {});

    static ExponentField constant(MeshPtr mesh, double value);
    // Bounds are taken as the min/max of the finite samples.
    static ExponentField from_samples(MeshPtr mesh, std::vector<double> samples,
                                      std::vector<char> infinity_mask = {});

    const Mesh& mesh() const { return *mesh_; }
    MeshPtr mesh_ptr() const { return mesh_; }
    int size() const { return static_cast<int>(samples_.size()); }
    double operator[](int i) const { return samples_[static_cast<std::size_t>(i)]; }
    bool is_infinite(int i) const { return !mask_.empty() && mask_[static_cast<std::size_t>(i)] != 0; }
    bool has_infinite_nodes() const;

    double lower_bound() const { return lower_; }
    double upper_bound() const { return upper_; }

    const std::vector<double>& samples() const { return samples_; }
    const std::vector<char>& infinity_mask() const { return mask_; }

  private:
    void validate() const;

    MeshPtr mesh_;
    std::vector<double> samples_;
    std::vector<char> mask_; // empty means all finite
    double lower_ = 1.0;
    double upper_ = 1.0;
};

} // namespace parvex

#endif
