#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "gsparse/erbf_model.hpp"
#include "gsparse/mesh.hpp"
#include "gsparse/pqr.hpp"

namespace testsupport {

using gsparse::Vec3;

inline Vec3 uniform_point(std::mt19937_64& rng, const gsparse::Box& box) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {box.min.x() + u(rng) * (box.max.x() - box.min.x()), box.min.y() + u(rng) * (box.max.y() - box.min.y()),
            box.min.z() + u(rng) * (box.max.z() - box.min.z())};
}

// Loose cluster of atoms with radii in [1, 2].
inline gsparse::Molecule random_molecule(std::mt19937_64& rng, int n, double spread = 4.0) {
    std::uniform_real_distribution<double> pos(-spread, spread), rad(1.0, 2.0);
    std::vector<gsparse::Atom> atoms;
    for (int i = 0; i < n; ++i) {
        gsparse::Atom a;
        a.center = Vec3(pos(rng), pos(rng), pos(rng));
        a.radius = rad(rng);
        a.serial = i + 1;
        a.name = "C";
        atoms.push_back(a);
    }
    return gsparse::Molecule(std::move(atoms));
}

inline gsparse::Molecule single_atom(double r, Vec3 c = Vec3::Zero()) {
    gsparse::Atom a;
    a.center = c;
    a.radius = r;
    a.serial = 1;
    return gsparse::Molecule({a});
}

inline gsparse::RbfModel random_model(std::mt19937_64& rng, int n, double spread = 1.5) {
    std::uniform_real_distribution<double> pos(-spread, spread), cs(0.8, 1.8), ds(0.4, 1.0), ang(-3.0, 3.0);
    gsparse::RbfModel m;
    for (int i = 0; i < n; ++i) {
        gsparse::EllipsoidRbf b;
        b.coeff_sqrt = cs(rng);
        b.decay_sqrt = Vec3(ds(rng), ds(rng), ds(rng));
        b.center = Vec3(pos(rng), pos(rng), pos(rng));
        b.angles = {ang(rng), ang(rng), ang(rng)};
        m.bases.push_back(b);
    }
    return m;
}

// Rotation matrices written out entry by entry, independent of the library.
inline gsparse::Mat3 reference_rotation(double a, double b, double g) {
    gsparse::Mat3 rx, ry, rz;
    rx << 1, 0, 0, 0, std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a);
    ry << std::cos(b), 0, -std::sin(b), 0, 1, 0, std::sin(b), 0, std::cos(b);
    rz << std::cos(g), -std::sin(g), 0, std::sin(g), std::cos(g), 0, 0, 0, 1;
    return rz * ry * rx;
}

// Direct evaluation of c~^2 exp(-sum d~_p^2 u_p^2) from packed parameters.
inline double reference_model_value(const std::vector<double>& x, std::size_t n, const Vec3& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 c(x[4 * n + 3 * i], x[4 * n + 3 * i + 1], x[4 * n + 3 * i + 2]);
        const Vec3 u = reference_rotation(x[7 * n + i], x[8 * n + i], x[9 * n + i]) * (y - c);
        double e = 0.0;
        for (int p = 0; p < 3; ++p) e += x[(1 + p) * n + i] * x[(1 + p) * n + i] * u[p] * u[p];
        s += x[i] * x[i] * std::exp(-e);
    }
    return s;
}

inline double reference_objective(const std::vector<double>& x, std::size_t n, const std::vector<Vec3>& pts,
                                  const std::vector<double>& targets, double ws, double wl) {
    double es = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const double r = reference_model_value(x, n, pts[k]) - targets[k];
        es += r * r;
    }
    double el = 0.0;
    for (std::size_t j = 0; j < 4 * n; ++j) el += x[j] * x[j];
    return ws * es + wl * el;
}

// Axis-aligned unit cube [0,1]^3, 12 outward-wound triangles.
inline gsparse::TriMesh unit_cube(Vec3 offset = Vec3::Zero()) {
    gsparse::TriMesh m;
    for (int i = 0; i < 8; ++i) m.vertices.push_back(Vec3(i & 1, (i >> 1) & 1, (i >> 2) & 1) + offset);
    m.triangles = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
                   {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
    return m;
}

}  // namespace testsupport
