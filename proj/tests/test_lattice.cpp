#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <latboson/errors.hpp>
#include <latboson/lattice.hpp>

using namespace latboson;

TEST_CASE("torus geometry: coord/index round trip and periodic moves") {
    TorusLattice lat(2, 3);
    CHECK(lat.nsites() == 9);
    for (int i = 0; i < lat.nsites(); ++i) CHECK(lat.index(lat.coord(i)) == i);
    // neighbor wraps around the torus
    int corner = lat.index({2, 2});
    CHECK(lat.neighbor(corner, 0, +1) == lat.index({0, 2}));
    CHECK(lat.neighbor(corner, 1, +1) == lat.index({2, 0}));
    // 1-norm torus distance takes the shorter way around
    CHECK(lat.torus_distance(lat.index({0, 0}), lat.index({2, 2})) == 2);
    CHECK(lat.torus_distance(lat.index({0, 0}), lat.index({1, 1})) == 2);
    CHECK(lat.displace(lat.index({0, 0}), {-1, -1}) == lat.index({2, 2}));
}

TEST_CASE("site weight is eta^d") {
    TorusLattice lat(3, 2, 0.5);
    CHECK(lat.site_weight() == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("discrete Laplacian stencil") {
    SUBCASE("L=2 counts both directed bonds") {
        TorusLattice lat(1, 2);
        auto E = build_kinetic(lat, Laplacian{});
        CHECK(E.matrix(0, 0) == doctest::Approx(2.0));
        CHECK(E.matrix(0, 1) == doctest::Approx(-2.0));
        CHECK(E.matrix(1, 0) == doctest::Approx(-2.0));
        CHECK(E.translation_invariant);
        CHECK(E.min_eigenvalue() == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("L=4 with mass: diagonal 2d+m2, unit bonds -1, row sums m2") {
        TorusLattice lat(1, 4);
        auto E = build_kinetic(lat, LaplacianPlusMass{1.0});
        for (int x = 0; x < 4; ++x) {
            CHECK(E.matrix(x, x) == doctest::Approx(3.0));
            CHECK(E.matrix.row(x).sum() == doctest::Approx(1.0));
        }
        CHECK(E.matrix(0, 1) == doctest::Approx(-1.0));
        CHECK(E.matrix(0, 2) == doctest::Approx(0.0));
        CHECK(E.min_eigenvalue() == doctest::Approx(1.0));
    }
    SUBCASE("spacing scales the stencil by eta^-2") {
        TorusLattice lat(1, 4, 0.5);
        auto E = build_kinetic(lat, Laplacian{});
        CHECK(E.matrix(0, 0) == doctest::Approx(8.0));
        CHECK(E.matrix(0, 1) == doctest::Approx(-4.0));
    }
    SUBCASE("chemical potential shifts the diagonal") {
        TorusLattice lat(1, 3);
        auto E = build_kinetic(lat, Laplacian{}, -0.5);
        CHECK(E.matrix(0, 0) == doctest::Approx(2.5));
        CHECK(E.matrix(0, 1) == doctest::Approx(-1.0));
    }
    SUBCASE("external potential breaks translation invariance") {
        TorusLattice lat(1, 3);
        auto E = build_kinetic(lat, ExternalPotential{{0.0, 1.0, 2.0}});
        CHECK_FALSE(E.translation_invariant);
        CHECK(E.matrix(1, 1) == doctest::Approx(3.0));
        CHECK_THROWS_AS(build_kinetic(lat, ExternalPotential{{1.0}}), invalid_input_error);
    }
    SUBCASE("negative mass rejected") {
        TorusLattice lat(1, 2);
        CHECK_THROWS_AS(build_kinetic(lat, LaplacianPlusMass{-1.0}), invalid_input_error);
    }
}

TEST_CASE("interactions") {
    SUBCASE("onsite is diagonal v0") {
        TorusLattice lat(1, 3);
        auto v = build_interaction(lat, Onsite{0.5});
        CHECK(v.matrix.isApprox(0.5 * Eigen::MatrixXd::Identity(3, 3)));
        CHECK(v.nonnegative);
    }
    SUBCASE("radial profile builds the symmetric circulant") {
        TorusLattice lat(1, 4);
        auto v = build_interaction(lat, Profile{{1.0, 0.25, 0.0}});
        Eigen::Vector4d row0(1.0, 0.25, 0.0, 0.25);
        CHECK(v.matrix.row(0).transpose().isApprox(row0));
        CHECK(v.matrix.isApprox(v.matrix.transpose()));
    }
    SUBCASE("asymmetric full circulant row rejected") {
        TorusLattice lat(1, 4);
        CHECK_THROWS_AS(build_interaction(lat, Profile{{1.0, 0.3, 0.0, 0.2}}),
                        invalid_input_error);
    }
}

TEST_CASE("stochasticity of exp(-tau E)") {
    SUBCASE("Laplacian generates a stochastic process") {
        TorusLattice lat(1, 4);
        auto E = build_kinetic(lat, Laplacian{});
        auto rep = check_stochastic(E, {0.1, 0.5, 1.0, 2.0});
        CHECK(rep.ok);
        CHECK(rep.worst_entry >= -1e-12);
    }
    SUBCASE("off-diagonal generator without diagonal fails") {
        TorusLattice lat(1, 2);
        Eigen::MatrixXd m(2, 2);
        m << 0, 1, 1, 0;
        OneBodyOperator E{lat, m, false};
        auto rep = check_stochastic(E, {1.0});
        CHECK_FALSE(rep.ok);
        // exp(-tau X) = cosh(tau) 1 - sinh(tau) X: worst entry -sinh(1)
        CHECK(rep.worst_entry == doctest::Approx(-std::sinh(1.0)).epsilon(1e-12));
    }
}

TEST_CASE("semigroup") {
    TorusLattice lat(1, 3);
    auto E = build_kinetic(lat, LaplacianPlusMass{0.7});
    SUBCASE("tau = 0 gives the identity") {
        CHECK(semigroup(E, 0.0).isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-14));
    }
    SUBCASE("composition law") {
        Eigen::MatrixXd lhs = semigroup(E, 0.3) * semigroup(E, 0.9);
        CHECK((lhs - semigroup(E, 1.2)).cwiseAbs().maxCoeff() < 1e-13);
    }
    SUBCASE("scalar case is the exponential") {
        TorusLattice one(1, 1);
        Eigen::MatrixXd m(1, 1);
        m << 2.0;
        OneBodyOperator Es{one, m, true};
        CHECK(semigroup(Es, 1.0)(0, 0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    }
    SUBCASE("negative tau rejected") {
        CHECK_THROWS_AS(semigroup(E, -0.5), invalid_input_error);
    }
}
