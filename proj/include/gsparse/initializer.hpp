#pragma once

#include "gsparse/erbf_model.hpp"
#include "gsparse/pqr.hpp"

namespace gsparse {

/// One isotropic basis per atom that reproduces the Gaussian field exactly:
/// centre = atom centre, angles = 0, every effective decay = `decay`,
/// effective weight = exp(decay * r^2).
RbfModel init_model(const Molecule& molecule, double decay);

}  // namespace gsparse
