#pragma once

#include <span>

#include "gsparse/constraints.hpp"
#include "gsparse/erbf_model.hpp"

namespace gsparse {

/// f(X) = w_s * E_s + w_l * E_l1 evaluated directly on packed parameters.
///   E_s  = sum_k (phi~(y_k) - phi(y_k))^2
///   E_l1 = sum_i c~_i^2 + sum_p sum_i d~_ip^2
class Objective {
public:
    Objective(const ConstraintSet& constraints, ExecPolicy policy = {});

    struct Terms {
        double accuracy = 0.0;   // E_s
        double sparsity = 0.0;   // E_l1
        double max_error = 0.0;  // max_k |phi~(y_k) - phi(y_k)|
    };

    Terms terms(std::span<const double> packed, std::size_t basis_count) const;
    double value(std::span<const double> packed, std::size_t basis_count, ObjectiveWeights w) const;
    /// Writes the gradient into `grad` (size 10N) and returns f.
    double value_and_gradient(std::span<const double> packed, std::size_t basis_count, ObjectiveWeights w,
                              std::span<double> grad) const;

    static double sparsity_term(std::span<const double> packed, std::size_t basis_count);

    const ConstraintSet& constraints() const { return *constraints_; }

private:
    const ConstraintSet* constraints_;
    ExecPolicy policy_;
};

}  // namespace gsparse
