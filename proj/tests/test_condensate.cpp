#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include <latboson/condensate.hpp>
#include <latboson/errors.hpp>

using namespace latboson;
using cd = std::complex<double>;

TEST_CASE("condensate free energy and its minimizer") {
    SUBCASE("parameter validation") {
        CHECK_THROWS_AS((CondensateParams{-1.0, 1.0, 0.0, 1.0}.validate()), invalid_input_error);
        CHECK_THROWS_AS(f_gamma(CondensateParams{1.0, 1.0, 0.0, 1.0}, 0.0), invalid_input_error);
    }
    SUBCASE("reference value F(1) = 1/2 at sigma=beta=v=1, m=0") {
        CHECK(f_gamma({1.0, 1.0, 0.0, 1.0}, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("golden-ratio minimizer") {
        double g = gamma_star({1.0, 1.0, 0.0, 1.0});
        CHECK(std::abs(g - (std::sqrt(5.0) - 1.0) / 2.0) <= 1e-12);
    }
    SUBCASE("non-interacting closed form and zero minimum") {
        CondensateParams p{2.0, 1.0, 0.0, 0.0};
        double g = gamma_star(p);
        CHECK(g == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(f_gamma(p, g) == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("gamma_star is a strict interior minimum") {
        CondensateParams p{1.5, 0.8, 0.3, 0.9};
        double g = gamma_star(p);
        double fg = f_gamma(p, g);
        CHECK(fg < f_gamma(p, g * 0.9));
        CHECK(fg < f_gamma(p, g * 1.1));
        CHECK(f_gamma(p, 1e-6) > fg + 5.0);   // log divergence at 0
        CHECK(f_gamma(p, 1e6) > fg + 1e3);    // quadratic growth at infinity
    }
    SUBCASE("denser systems condense at smaller gamma") {
        double prev = 1e300;
        for (double sigma : {0.5, 1.0, 2.0, 4.0}) {
            double g = gamma_star({sigma, 1.0, 0.0, 1.0});
            CHECK(g < prev);
            prev = g;
        }
    }
}

TEST_CASE("quadratic fluctuation form") {
    TorusLattice lat(1, 3);
    auto E = build_kinetic(lat, LaplacianPlusMass{0.2});
    double eps = 0.1, m = 0.3, v = 0.7;
    SUBCASE("c = 0 is two decoupled copies of 1 + eps m + eps E") {
        Eigen::MatrixXcd bl = bogoliubov_form(0.0, eps, m, v, E);
        REQUIRE(bl.rows() == 6);
        Eigen::MatrixXcd base =
            (1.0 + eps * m) * Eigen::MatrixXcd::Identity(3, 3) + eps * E.matrix.cast<cd>();
        CHECK((bl.block(0, 0, 3, 3) - base).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((bl.block(3, 3, 3, 3) - base).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(bl.block(0, 3, 3, 3).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("hermitian and positive semidefinite for complex condensates") {
        cd c(0.6, -0.8);
        Eigen::MatrixXcd bl = bogoliubov_form(c, eps, m, v, E);
        CHECK((bl - bl.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(bl);
        CHECK(es.eigenvalues()(0) > 0.0);
        // the condensate block contributes eigenvalues 0 and 2 eps v |c|^2
        Eigen::MatrixXcd bl0 = bogoliubov_form(0.0, eps, m, v, E);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es0(bl0);
        CHECK(es.eigenvalues()(5) <=
              es0.eigenvalues()(5) + 2.0 * eps * v * std::norm(c) + 1e-12);
        CHECK(es.eigenvalues()(0) >= es0.eigenvalues()(0) - 1e-12);
    }
}

TEST_CASE("Bogoliubov dispersion") {
    CHECK(bogoliubov_dispersion(0.0, 1.0) == 0.0);
    CHECK(bogoliubov_dispersion(1.0, 2.0) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
    SUBCASE("phonon slope w at small p") {
        double w = 1.3, p = 1e-6;
        CHECK(bogoliubov_dispersion(p, w) / p == doctest::Approx(w).epsilon(1e-9));
    }
    SUBCASE("upper bound p^2 + w^2/2") {
        for (double w : {0.0, 0.5, 2.0}) {
            for (double p = 0.0; p <= 5.0; p += 0.25) {
                CHECK(bogoliubov_dispersion(p, w) <= p * p + 0.5 * w * w + 1e-12);
            }
        }
    }
    CHECK_THROWS_AS(bogoliubov_dispersion(-1.0, 1.0), invalid_input_error);
}

TEST_CASE("real-space kernel of the dispersion semigroup") {
    SUBCASE("d = 3, w = 0 reproduces the Poisson kernel at the origin") {
        auto r = kernel_positivity(0.0, 1.0, 3, 128, 40.0);
        CHECK(r.poisson_ref == doctest::Approx(1.0 / (M_PI * M_PI)).epsilon(1e-12));
        CHECK(std::abs(r.value_at_origin - r.poisson_ref) < 0.02 * r.poisson_ref);
        CHECK(r.min_value > -1e-6);
    }
    SUBCASE("interacting dispersion stays pointwise nonnegative") {
        for (double w : {0.5, 2.0}) {
            auto r = kernel_positivity(w, 1.0, 1, 256, 60.0);
            CHECK(r.min_value > -1e-6);
            CHECK(r.value_at_origin > 0.0);
        }
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(kernel_positivity(1.0, 1.0, 3, 100, 40.0), invalid_input_error);
        CHECK_THROWS_AS(kernel_positivity(1.0, 1.0, 4, 128, 40.0), invalid_input_error);
    }
}
