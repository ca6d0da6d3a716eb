#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "gsparse/constraints.hpp"
#include "gsparse/error.hpp"
#include "gsparse/gauss_field.hpp"
#include "gsparse/initializer.hpp"
#include "test_support.hpp"

using namespace gsparse;
using testsupport::random_molecule;
using testsupport::single_atom;
using testsupport::uniform_point;

TEST_SUITE("gauss_field") {

TEST_CASE("single atom values") {
    const GaussianField f(single_atom(1.7), 0.5, 1.0);
    CHECK(f(Vec3::Zero()) == doctest::Approx(std::exp(1.445)).epsilon(1e-15));
    CHECK(f(Vec3(1.7, 0, 0)) == 1.0);
    CHECK(f(Vec3(0, 0, -1.7)) == 1.0);
}

TEST_CASE("two symmetric atoms add") {
    std::vector<Atom> atoms(2);
    atoms[0].center = Vec3(-1.2, 0, 0);
    atoms[1].center = Vec3(1.2, 0, 0);
    atoms[0].radius = atoms[1].radius = 1.6;
    const GaussianField pair(Molecule(atoms), 0.5, 1.0);
    const GaussianField one(single_atom(1.6), 0.5, 1.0);
    CHECK(pair(Vec3::Zero()) == doctest::Approx(2.0 * one(Vec3(1.2, 0, 0))).epsilon(1e-15));
}

TEST_CASE("additivity over single-atom sub-molecules") {
    std::mt19937_64 rng(3);
    const Molecule m = random_molecule(rng, 8);
    const GaussianField all(m, 0.5, 1.0);
    const Box box = bounding_box(m, 2.0);
    for (int t = 0; t < 50; ++t) {
        const Vec3 p = uniform_point(rng, box);
        double sum = 0.0;
        for (const auto& a : m.atoms()) sum += GaussianField(Molecule({a}), 0.5, 1.0)(p);
        CHECK(all(p) == doctest::Approx(sum).epsilon(1e-13));
    }
}

TEST_CASE("level set radius for a general isovalue") {
    const double r = 1.4, d = 0.7, c = 0.6;
    const GaussianField f(single_atom(r), d, c);
    const double rho = std::sqrt(r * r - std::log(c) / d);
    CHECK(f(Vec3(0, rho, 0)) == doctest::Approx(c).epsilon(1e-14));
}

TEST_CASE("positive and vanishing at infinity") {
    std::mt19937_64 rng(5);
    const GaussianField f(random_molecule(rng, 5), 0.5, 1.0);
    CHECK(f(Vec3(3, -2, 1)) > 0.0);
    CHECK(f(Vec3(60, 0, 0)) < 1e-300);
}

TEST_CASE("batch evaluation matches the pointwise loop") {
    std::mt19937_64 rng(7);
    const Molecule m = random_molecule(rng, 12);
    const GaussianField f(m, 0.5, 1.0);
    const Box box = bounding_box(m, 3.0);
    std::vector<Vec3> pts(1000);
    for (auto& p : pts) p = uniform_point(rng, box);
    const auto v = f(pts);
    REQUIRE(v.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(v[i] == f(pts[i]));

    ExecPolicy par;
    par.threads = 4;
    CHECK(f(pts, par) == v);
    CHECK(f(std::span<const Vec3>{}).empty());
    CHECK(f(std::span<const Vec3>(pts.data(), 1)) == std::vector<double>{f(pts[0])});
}

TEST_CASE("kernel cutoff only drops negligible terms") {
    std::mt19937_64 rng(9);
    const Molecule m = random_molecule(rng, 20, 15.0);
    const GaussianField exact(m, 0.5, 1.0), cut(m, 0.5, 1.0, true);
    const Box box = bounding_box(m, 3.0);
    for (int t = 0; t < 200; ++t) {
        const Vec3 p = uniform_point(rng, box);
        CHECK(std::abs(exact(p) - cut(p)) <= 20 * std::exp(-30.0));
    }
}

TEST_CASE("bounding box") {
    const Box b = bounding_box(single_atom(1.5), 2.0);
    CHECK(b.min == Vec3::Constant(-3.5));
    CHECK(b.max == Vec3::Constant(3.5));

    std::vector<Atom> atoms(2);
    atoms[1].center = Vec3(10, 0, 0);
    atoms[0].radius = atoms[1].radius = 1.0;
    const Box b2 = bounding_box(Molecule(atoms), 0.0);
    CHECK(b2.min.x() == -1.0);
    CHECK(b2.max.x() == 11.0);

    CHECK(default_padding(single_atom(1.5)) == 4.5);
    CHECK_THROWS_AS(bounding_box(single_atom(1.5), -1.0), Error);
}

TEST_CASE("every atom sphere lies inside its box") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> g;
    const Molecule m = random_molecule(rng, 30, 10.0);
    const Box b = bounding_box(m, 0.0);
    for (const auto& a : m.atoms())
        for (int t = 0; t < 20; ++t) {
            const Vec3 dir = Vec3(g(rng), g(rng), g(rng)).normalized();
            CHECK(b.contains(a.center + a.radius * dir * (1 - 1e-12)));
        }
}

}  // TEST_SUITE

TEST_SUITE("constraint_sampler") {

TEST_CASE("grid counts") {
    const GridSpec g = make_grid({Vec3::Zero(), Vec3::Ones()}, 0.5);
    CHECK(g.counts == std::array<int, 3>{2, 2, 2});
    CHECK(g.point_count() == 27);

    const GridSpec g2 = make_grid({Vec3::Zero(), Vec3(10, 1, 1)}, 1.0);
    CHECK(g2.counts == std::array<int, 3>{10, 2, 2});

    const GridSpec g3 = make_grid({Vec3::Zero(), Vec3(1, 1, 1)}, 0.3);
    CHECK(g3.counts == std::array<int, 3>{4, 4, 4});
}

TEST_CASE("grid errors") {
    CHECK_THROWS_AS(make_grid({Vec3::Zero(), Vec3(1, 0, 1)}, 0.5), Error);
    CHECK_THROWS_AS(make_grid({Vec3::Zero(), Vec3::Ones()}, 0.0), Error);
    CHECK_THROWS_AS(make_grid({Vec3::Zero(), Vec3::Ones()}, -1.0), Error);
}

TEST_CASE("grid points follow the closed formula") {
    const Box box{Vec3(-2.5, 1.0, 3.0), Vec3(4.0, 2.2, 9.5)};
    const GridSpec g = make_grid(box, 0.37);
    std::mt19937_64 rng(17);
    const auto n = g.points_per_axis();
    const auto pts = g.points();
    REQUIRE(pts.size() == g.point_count());
    for (int t = 0; t < 20; ++t) {
        const int i = int(rng() % n[0]), j = int(rng() % n[1]), k = int(rng() % n[2]);
        const Vec3 expect(box.min.x() + i * ((box.max.x() - box.min.x()) / g.counts[0]),
                          box.min.y() + j * ((box.max.y() - box.min.y()) / g.counts[1]),
                          box.min.z() + k * ((box.max.z() - box.min.z()) / g.counts[2]));
        CHECK(g.point(i, j, k) == expect);
        CHECK(pts[(std::size_t(i) * n[1] + j) * n[2] + k] == expect);
    }
    CHECK(pts.front() == box.min);
    CHECK((pts.back() - box.max).norm() < 1e-12);
}

TEST_CASE("selection equals a brute-force filter") {
    std::mt19937_64 rng(19);
    const Molecule m = random_molecule(rng, 6);
    const GaussianField f(m, 0.5, 1.0);
    const GridSpec g = make_grid(bounding_box(m, default_padding(m)), 0.8);
    for (double band : {0.05, 0.3, 1.0}) {
        const ConstraintSet s = select_constraints(f, g, band);
        std::vector<Vec3> expect;
        for (const Vec3& p : g.points())
            if (std::abs(f(p) - 1.0) <= band) expect.push_back(p);
        REQUIRE(s.points == expect);
        REQUIRE(s.targets.size() == s.points.size());
        for (std::size_t k = 0; k < s.size(); ++k) CHECK(s.targets[k] == f(s.points[k]));
    }
}

TEST_CASE("single atom band postcondition and containment") {
    const Molecule m = single_atom(1.5);
    const GaussianField f(m, 0.5, 1.0);
    const Box box = bounding_box(m, default_padding(m));
    const ConstraintSet s = select_constraints(f, make_grid(box, 1.0), 1.0);
    CHECK(s.size() > 0);
    for (std::size_t k = 0; k < s.size(); ++k) {
        CHECK(std::abs(s.targets[k] - 1.0) <= 1.0);
        CHECK(box.contains(s.points[k]));
    }
}

TEST_CASE("huge band selects every grid point") {
    const Molecule m = single_atom(1.5);
    const GaussianField f(m, 0.5, 1.0);
    const GridSpec g = make_grid(bounding_box(m, 1.0), 0.5);
    CHECK(select_constraints(f, g, 1e300).size() == g.point_count());
}

TEST_CASE("band monotonicity") {
    std::mt19937_64 rng(23);
    const Molecule m = random_molecule(rng, 5);
    const GaussianField f(m, 0.5, 1.0);
    const GridSpec g = make_grid(bounding_box(m, 2.0), 0.7);
    const auto small = select_constraints(f, g, 0.2).points;
    const auto large = select_constraints(f, g, 0.6).points;
    std::size_t j = 0;
    for (const Vec3& p : small) {
        while (j < large.size() && large[j] != p) ++j;
        CHECK(j < large.size());
    }
}

TEST_CASE("empty selection") {
    const Molecule m = single_atom(1.0);
    const GaussianField f(m, 0.5, 1.0);
    // Box far from the atom: phi is ~0 there, so |phi - 1| ~ 1 > 0.5.
    const GridSpec g = make_grid({Vec3::Constant(50), Vec3::Constant(52)}, 1.0);
    try {
        select_constraints(f, g, 0.5);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptySelection);
    }
    CHECK_THROWS_AS(select_constraints(f, g, 0.0), Error);
}

TEST_CASE("selection is identical across worker counts") {
    std::mt19937_64 rng(29);
    const Molecule m = random_molecule(rng, 10);
    const GaussianField f(m, 0.5, 1.0);
    const GridSpec g = make_grid(bounding_box(m, default_padding(m)), 0.6);
    ExecPolicy p1, p4;
    p4.threads = 4;
    const auto a = select_constraints(f, g, 1.0, p1);
    const auto b = select_constraints(f, g, 1.0, p4);
    CHECK(a.points == b.points);
    CHECK(a.targets == b.targets);
}

TEST_CASE("csv dump") {
    ConstraintSet s;
    s.points = {Vec3(0.1, 0.2, 0.3)};
    s.targets = {1.5};
    std::ostringstream out;
    write_constraints_csv(out, s, "{\"a\":1}");
    CHECK(out.str() == "# config: {\"a\":1}\nx,y,z,phi\n0.10000000000000001,0.20000000000000001,0.29999999999999999,1.5\n");
}

}  // TEST_SUITE

TEST_SUITE("initializer") {

TEST_CASE("weights follow the atom radii") {
    std::vector<Atom> atoms(2);
    atoms[0].radius = 1.5;
    atoms[1].radius = 1e-300;  // radius must be positive; effectively zero
    atoms[1].center = Vec3(1, 2, 3);
    const RbfModel m = init_model(Molecule(atoms), 0.5);
    REQUIRE(m.size() == 2);
    CHECK(m.bases[0].weight() == doctest::Approx(std::exp(1.125)).epsilon(1e-15));
    CHECK(m.bases[1].coeff_sqrt == 1.0);
    CHECK(m.bases[1].center == Vec3(1, 2, 3));
    for (const auto& b : m.bases) {
        CHECK(b.angles.alpha == 0.0);
        CHECK(b.angles.beta == 0.0);
        CHECK(b.angles.gamma == 0.0);
        CHECK(b.decays().isApprox(Vec3::Constant(0.5), 1e-15));
    }
}

TEST_CASE("initial model reproduces the field") {
    std::mt19937_64 rng(31);
    for (double d : {0.3, 0.5, 0.7}) {
        const Molecule mol = random_molecule(rng, 15);
        const GaussianField f(mol, d, 1.0);
        const RbfModel m = init_model(mol, d);
        const Box box = bounding_box(mol, 3.0);
        double worst = 0.0;
        for (int t = 0; t < 200; ++t) {
            const Vec3 p = uniform_point(rng, box);
            worst = std::max(worst, std::abs(eval_model(m, p) - f(p)));
        }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("decay must be positive") {
    CHECK_THROWS_AS(init_model(single_atom(1.0), 0.0), Error);
}

}  // TEST_SUITE
