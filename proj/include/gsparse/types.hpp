#pragma once

#include <Eigen/Dense>

namespace gsparse {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Axis-aligned box, Å.
struct Box {
    Vec3 min = Vec3::Zero();
    Vec3 max = Vec3::Zero();

    Vec3 extent() const { return max - min; }
    bool contains(const Vec3& p) const {
        return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
    }
};

/// Worker-count hint and reduction policy shared by the parallel kernels.
struct ExecPolicy {
    unsigned threads = 1;       // 0 means hardware concurrency
    bool deterministic = true;  // fixed-size blocks reduced in index order
};

}  // namespace gsparse
