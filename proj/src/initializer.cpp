#include "gsparse/initializer.hpp"

#include <cmath>

#include "gsparse/error.hpp"

namespace gsparse {

RbfModel init_model(const Molecule& molecule, double decay) {
    require(decay > 0.0 && std::isfinite(decay), "decay must be positive");
    RbfModel model;
    model.bases.reserve(molecule.size());
    const double decay_sqrt = std::sqrt(decay);
    for (const Atom& a : molecule.atoms()) {
        EllipsoidRbf b;
        b.center = a.center;
        b.decay_sqrt = Vec3::Constant(decay_sqrt);
        b.coeff_sqrt = std::sqrt(std::exp(decay * a.radius * a.radius));
        model.bases.push_back(b);
    }
    return model;
}

}  // namespace gsparse
