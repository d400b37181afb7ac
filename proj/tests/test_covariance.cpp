#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include <latboson/covariance.hpp>
#include <latboson/errors.hpp>

using namespace latboson;

namespace {

OneBodyOperator scalar_energy(double e) {
    TorusLattice one(1, 1);
    Eigen::MatrixXd m(1, 1);
    m << e;
    return OneBodyOperator{one, m, true};
}

AuxField random_field(const TorusLattice& lat, int ntau, std::mt19937_64& rng, double scale = 1.0,
                      double imag_scale = 0.0) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd vals(ntau, lat.nsites());
    for (int j = 0; j < ntau; ++j) {
        for (int x = 0; x < lat.nsites(); ++x) {
            vals(j, x) = std::complex<double>(scale * g(rng), imag_scale * g(rng));
        }
    }
    return AuxField(lat, vals);
}

double residual_max(const BlockOperator& op, const BlockCovariance& cov) {
    Eigen::MatrixXcd dense = op.dense();
    int n = op.lattice().nsites();
    int dim = (op.ntau() + 1) * n;
    Eigen::MatrixXcd c(dim, dim);
    for (int j = 0; j <= op.ntau(); ++j) {
        for (int jp = 0; jp <= op.ntau(); ++jp) {
            c.block(j * n, jp * n, n, n) = cov.block(j, jp);
        }
    }
    return (dense * c - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("build_q dense layouts") {
    auto E = scalar_energy(1.0);
    SUBCASE("Q at h = 0, ntau = 1: [[1, -e^-1],[0, 1]]") {
        auto op = build_q(BlockVariant::Q, E, nullptr, nullptr, AuxField::zero(E.lattice, 1), 1.0);
        Eigen::MatrixXcd d = op.dense();
        CHECK(std::abs(d(0, 0) - 1.0) < 1e-15);
        CHECK(std::abs(d(0, 1) + std::exp(-1.0)) < 1e-15);
        CHECK(std::abs(d(1, 0)) == 0.0);
        CHECK(std::abs(d(1, 1) - 1.0) < 1e-15);
    }
    SUBCASE("Q1 carries the conjugate phase on the diagonal") {
        Eigen::MatrixXcd h1(1, 1);
        h1 << 2.0;
        auto op = build_q(BlockVariant::Q1, E, nullptr, nullptr, AuxField(E.lattice, h1), 1.0);
        CHECK(std::abs(op.diag(0)(0, 0) - 1.0) < 1e-15);
        CHECK(std::abs(op.diag(1)(0, 0) - std::exp(std::complex<double>(0, -2.0))) < 1e-15);
        CHECK(std::abs(op.super(0)(0, 0) + std::exp(-1.0)) < 1e-15);
    }
    SUBCASE("Q4 is linear in eps with unit super-diagonal") {
        auto op = build_q(BlockVariant::Q4, E, &E, nullptr, AuxField::zero(E.lattice, 2), 1.0);
        CHECK(std::abs(op.diag(1)(0, 0) - 1.5) < 1e-15);  // 1 + eps*E, eps = 0.5
        CHECK(std::abs(op.super(0)(0, 0) + 1.0) < 1e-15);
    }
    SUBCASE("K closes the time circle with corner -1") {
        auto op = build_q(BlockVariant::K, E, nullptr, nullptr, AuxField::zero(E.lattice, 2), 1.0);
        REQUIRE(op.has_corner());
        CHECK(std::abs(op.corner()(0, 0) + 1.0) < 1e-15);
        CHECK(std::abs(op.dense()(2, 0) + 1.0) < 1e-15);
    }
}

TEST_CASE("determinants") {
    std::mt19937_64 rng(7);
    TorusLattice lat(1, 3);
    auto E = build_kinetic(lat, LaplacianPlusMass{0.4});
    Eigen::VectorXd u = Eigen::VectorXd::Constant(3, 0.25);
    AuxField h = random_field(lat, 4, rng);

    SUBCASE("det Q is the exact unit, not a computed number") {
        auto op = build_q(BlockVariant::Q, E, nullptr, nullptr, h, 1.0);
        CHECK(det_block(op) == std::complex<double>(1.0, 0.0));
    }
    SUBCASE("Q2 single-mode value: all ntau+1 diagonal blocks carry exp(-eps u)") {
        auto Es = scalar_energy(1.0);
        Eigen::MatrixXcd h1(1, 1);
        h1 << 1.0;
        Eigen::VectorXd us(1);
        us << 0.5;
        auto op = build_q(BlockVariant::Q2, Es, &Es, &us, AuxField(Es.lattice, h1), 0.25);
        std::complex<double> expect = std::complex<double>(1.0, -0.5) * std::exp(-0.25);
        CHECK(std::abs(det_block(op) - expect) < 1e-15);
    }
    SUBCASE("block determinants agree with the dense determinant") {
        for (auto variant : {BlockVariant::Q1, BlockVariant::Q2, BlockVariant::Q3,
                             BlockVariant::Q4, BlockVariant::K}) {
            auto op = build_q(variant, E, &E, &u, h, 1.0);
            std::complex<double> dd = op.dense().determinant();
            CHECK(std::abs(det_block(op) - dd) <= 1e-11 * std::max(1.0, std::abs(dd)));
        }
    }
    SUBCASE("det K = det(1 - P) at h = 0 for a single mode") {
        auto Es = scalar_energy(1.0);
        auto op = build_q(BlockVariant::K, Es, nullptr, nullptr, AuxField::zero(Es.lattice, 4), 1.0);
        CHECK(std::abs(det_block(op) - (1.0 - std::exp(-1.0))) < 1e-13);
    }
}

TEST_CASE("inversion") {
    std::mt19937_64 rng(11);
    TorusLattice lat(1, 3);
    auto E = build_kinetic(lat, LaplacianPlusMass{0.4});
    Eigen::VectorXd u = Eigen::VectorXd::Constant(3, 0.2);

    SUBCASE("residual and exact triangular zeros across variants") {
        for (auto variant : {BlockVariant::Q, BlockVariant::Q1, BlockVariant::Q2,
                             BlockVariant::Q3, BlockVariant::Q4}) {
            AuxField h = random_field(lat, 8, rng);
            auto op = build_q(variant, E, &E, &u, h, 1.0);
            auto cov = invert(op);
            CHECK(cov.triangular());
            CHECK(residual_max(op, cov) <= 1e-11);
            CHECK(cov.residual() <= 1e-11);
            for (int j = 1; j <= 8; ++j) {
                for (int jp = 0; jp < j; ++jp) {
                    CHECK(cov.block(j, jp).cwiseAbs().maxCoeff() == 0.0);
                }
            }
        }
    }
    SUBCASE("free chain: C(0)_{j,j'} = exp(-(j'-j) eps E)") {
        int ntau = 6;
        auto op = build_q(BlockVariant::Q, E, nullptr, nullptr, AuxField::zero(lat, ntau), 1.2);
        auto cov = invert(op);
        double eps = 1.2 / ntau;
        for (int j = 0; j <= ntau; ++j) {
            for (int jp = j; jp <= ntau; ++jp) {
                Eigen::MatrixXcd expect =
                    semigroup(E, (jp - j) * eps).cast<std::complex<double>>();
                CHECK((cov.block(j, jp) - expect).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }
    SUBCASE("row 0 of the Q1 inverse equals row 0 of the Q inverse") {
        AuxField h = random_field(lat, 5, rng);
        auto cq = invert(build_q(BlockVariant::Q, E, nullptr, nullptr, h, 1.0));
        auto c1 = invert(build_q(BlockVariant::Q1, E, nullptr, nullptr, h, 1.0));
        for (int jp = 0; jp <= 5; ++jp) {
            CHECK((cq.block(0, jp) - c1.block(0, jp)).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    SUBCASE("complex fields inside the analyticity tube invert cleanly") {
        int ntau = 8;
        double eps = 1.0 / ntau;
        std::uniform_real_distribution<double> tube(-0.89 / std::sqrt(eps), 0.89 / std::sqrt(eps));
        std::normal_distribution<double> g;
        Eigen::MatrixXcd vals(ntau, lat.nsites());
        for (int j = 0; j < ntau; ++j)
            for (int x = 0; x < lat.nsites(); ++x) vals(j, x) = {g(rng), tube(rng)};
        AuxField h(lat, vals);
        auto op = build_q(BlockVariant::Q, E, nullptr, nullptr, h, 1.0);
        auto cov = invert(op);
        CHECK(residual_max(op, cov) <= 1e-9);
    }
    SUBCASE("Q2 free covariance drifts from exp(-(j'-j) eps (Etilde - u)) at rate O(1/ntau)") {
        auto drift = [&](int ntau) {
            auto op = build_q(BlockVariant::Q2, E, &E, &u, AuxField::zero(lat, ntau), 1.0);
            auto cov = invert(op);
            double eps = 1.0 / ntau;
            OneBodyOperator Eu{lat, E.matrix - Eigen::MatrixXd(u.asDiagonal()), false};
            double worst = 0.0;
            for (int j = 0; j <= ntau; ++j) {
                for (int jp = j; jp <= ntau; ++jp) {
                    Eigen::MatrixXcd expect =
                        semigroup(Eu, (jp - j) * eps).cast<std::complex<double>>();
                    worst = std::max(worst,
                                     (cov.block(j, jp) - expect).cwiseAbs().maxCoeff());
                }
            }
            return worst;
        };
        double d8 = drift(8), d16 = drift(16), d32 = drift(32);
        CHECK(d8 / d16 > 1.5);
        CHECK(d16 / d32 > 1.5);
    }
}

TEST_CASE("periodic variant K") {
    SUBCASE("single-mode inverse entry: G_{1,0} = e^{-1/2}/(1 - e^{-1})") {
        auto E = scalar_energy(1.0);  // plays E - mu
        auto op = build_q(BlockVariant::K, E, nullptr, nullptr, AuxField::zero(E.lattice, 2), 1.0);
        auto cov = invert(op);
        CHECK_FALSE(cov.triangular());
        double expect = std::exp(-0.5) / (1.0 - std::exp(-1.0));
        CHECK(std::abs(cov.block(1, 0)(0, 0) - expect) < 1e-13);
        CHECK(residual_max(op, cov) <= 1e-12);
    }
    SUBCASE("h = 0 inverse matches the free time-ordered two-point function") {
        TorusLattice lat(1, 2);
        auto Emu = build_kinetic(lat, LaplacianPlusMass{0.3}, -0.4);
        int ntau = 4;
        auto cov = invert(build_q(BlockVariant::K, Emu, nullptr, nullptr,
                                  AuxField::zero(lat, ntau), 1.0));
        auto free = green_free(Emu, 1.0, ntau);
        for (int j = 0; j <= ntau; ++j) {
            for (int jp = 0; jp <= ntau; ++jp) {
                CHECK((cov.block(j, jp) - free.block(j, jp)).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }
    SUBCASE("zero-mode kinetic operator makes 1 - P singular") {
        TorusLattice lat(1, 2);
        auto E = build_kinetic(lat, Laplacian{});  // min eigenvalue 0
        auto op = build_q(BlockVariant::K, E, nullptr, nullptr, AuxField::zero(lat, 4), 1.0);
        CHECK_THROWS_AS(invert(op), inversion_error);
    }
    SUBCASE("green_free rejects non-positive one-body operators") {
        auto E = scalar_energy(-0.5);
        CHECK_THROWS_AS(green_free(E, 1.0, 2), invalid_input_error);
    }
}

TEST_CASE("uniform covariance bound for stochastic generators") {
    std::mt19937_64 rng(23);
    TorusLattice lat(1, 3);
    auto E = build_kinetic(lat, Laplacian{});
    int ntau = 6;
    auto cov0 = invert(build_q(BlockVariant::Q, E, nullptr, nullptr, AuxField::zero(lat, ntau), 1.0));
    for (int rep = 0; rep < 50; ++rep) {
        AuxField h = random_field(lat, ntau, rng);
        auto cov = invert(build_q(BlockVariant::Q, E, nullptr, nullptr, h, 1.0));
        CHECK(uniform_bound_violation(cov, cov0) <= 1e-12);
    }
}

TEST_CASE("hermitian part") {
    auto E = scalar_energy(1.0);
    SUBCASE("single-mode value 1 - e^{-1}/2") {
        auto op = build_q(BlockVariant::Q, E, nullptr, nullptr, AuxField::zero(E.lattice, 1), 1.0);
        CHECK(herm_part_min_eig(op) == doctest::Approx(1.0 - 0.5 * std::exp(-1.0)).epsilon(1e-13));
    }
    SUBCASE("strictly positive for real fields when E > 0") {
        std::mt19937_64 rng(3);
        TorusLattice lat(1, 3);
        auto Em = build_kinetic(lat, LaplacianPlusMass{0.5});
        for (int rep = 0; rep < 20; ++rep) {
            AuxField h = random_field(lat, 4, rng);
            CHECK(herm_part_min_eig(build_q(BlockVariant::Q, Em, nullptr, nullptr, h, 1.0)) > 0.0);
        }
    }
    SUBCASE("Q4 hermitian part does not depend on h") {
        std::mt19937_64 rng(5);
        TorusLattice lat(1, 2);
        auto Em = build_kinetic(lat, LaplacianPlusMass{0.5});
        auto base = herm_part_min_eig(
            build_q(BlockVariant::Q4, Em, &Em, nullptr, AuxField::zero(lat, 3), 1.0));
        AuxField h = random_field(lat, 3, rng);
        auto withh = herm_part_min_eig(build_q(BlockVariant::Q4, Em, &Em, nullptr, h, 1.0));
        CHECK(withh == doctest::Approx(base).epsilon(1e-13));
    }
}

TEST_CASE("exponential splitting remainder") {
    std::mt19937_64 rng(17);
    auto random_herm = [&](int n) {
        std::normal_distribution<double> g;
        Eigen::MatrixXcd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = std::complex<double>(g(rng), g(rng));
        return Eigen::MatrixXcd((m + m.adjoint()) / 2.0);
    };
    SUBCASE("commuting pair: zero bound, zero defect") {
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(3, 3) * 0.7;
        Eigen::MatrixXcd B = random_herm(3);
        auto r = trotter_remainder(A, B, 0.3);
        CHECK(r.bound == 0.0);
        CHECK(r.actual <= 1e-13);
    }
    SUBCASE("actual <= bound and t^2 scaling") {
        Eigen::MatrixXcd A = random_herm(3), B = random_herm(3);
        double r1 = 0, r2 = 0;
        for (double t : {0.02, 0.005}) {
            auto r = trotter_remainder(A, B, t);
            CHECK(r.actual <= r.bound);
            (t == 0.02 ? r1 : r2) = r.actual / (t * t);
        }
        CHECK(std::abs(r1 / r2 - 1.0) < 0.2);
    }
}
