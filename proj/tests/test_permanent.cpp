#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include <latboson/errors.hpp>
#include <latboson/fock.hpp>
#include <latboson/permanent.hpp>

using namespace latboson;
using cd = std::complex<double>;

namespace {

Eigen::MatrixXcd random_complex(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = cd(g(rng), g(rng));
    return m;
}

cd brute_permanent(const Eigen::MatrixXcd& M) {
    int n = static_cast<int>(M.rows());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    cd total = 0.0;
    do {
        cd p = 1.0;
        for (int i = 0; i < n; ++i) p *= M(i, perm[i]);
        total += p;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

}  // namespace

TEST_CASE("ryser permanent") {
    SUBCASE("identity and all-ones") {
        CHECK(std::abs(ryser_permanent(Eigen::MatrixXcd::Identity(2, 2)) - cd(1.0)) < 1e-15);
        CHECK(std::abs(ryser_permanent(Eigen::MatrixXcd::Ones(3, 3)) - cd(6.0)) < 1e-13);
    }
    SUBCASE("2x2 closed form ad + bc") {
        std::mt19937_64 rng(1);
        Eigen::MatrixXcd m = random_complex(2, rng);
        cd expect = m(0, 0) * m(1, 1) + m(0, 1) * m(1, 0);
        CHECK(std::abs(ryser_permanent(m) - expect) < 1e-14);
    }
    SUBCASE("matches brute-force permutation sums up to 6x6") {
        std::mt19937_64 rng(2);
        for (int n : {3, 4, 5, 6}) {
            Eigen::MatrixXcd m = random_complex(n, rng);
            cd expect = brute_permanent(m);
            CHECK(std::abs(ryser_permanent(m) - expect) <= 1e-12 * std::abs(expect));
        }
    }
    SUBCASE("order cap") {
        CHECK_THROWS_AS(ryser_permanent(Eigen::MatrixXcd::Identity(21, 21)), scale_error);
        CHECK_THROWS_AS(ryser_permanent(Eigen::MatrixXcd::Ones(2, 3)), invalid_input_error);
    }
}

TEST_CASE("lattice-averaged permanent") {
    SUBCASE("single site: N! m^N") {
        Eigen::MatrixXcd m(1, 1);
        m << cd(0.7, 0.2);
        for (int N : {0, 1, 3}) {
            cd expect = std::tgamma(N + 1.0) * std::pow(m(0, 0), N);
            for (auto method : {PermanentMethod::naive, PermanentMethod::cycles}) {
                auto r = averaged_permanent(m, N, 1.0, method);
                CHECK(std::abs(r.value - expect) < 1e-13);
                CHECK(r.N == N);
            }
        }
    }
    SUBCASE("identity 2x2, N = 2: 4 identity tuples + 2 swap tuples") {
        auto r = averaged_permanent(Eigen::MatrixXcd::Identity(2, 2), 2, 1.0);
        CHECK(std::abs(r.value - cd(6.0)) < 1e-13);
    }
    SUBCASE("naive and cycle recursions agree on random complex matrices") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 5; ++trial) {
            Eigen::MatrixXcd m = random_complex(3, rng);
            auto a = averaged_permanent(m, 3, 0.5, PermanentMethod::naive);
            auto b = averaged_permanent(m, 3, 0.5, PermanentMethod::cycles);
            CHECK(std::abs(a.value - b.value) <= 1e-10 * std::abs(a.value));
        }
    }
    SUBCASE("invariant under site relabeling") {
        std::mt19937_64 rng(4);
        Eigen::MatrixXcd m = random_complex(4, rng);
        Eigen::PermutationMatrix<Eigen::Dynamic> p(4);
        p.setIdentity();
        std::shuffle(p.indices().data(), p.indices().data() + 4, rng);
        Eigen::MatrixXcd mp = p.transpose() * m * p;
        auto a = averaged_permanent(m, 3, 1.0);
        auto b = averaged_permanent(mp, 3, 1.0);
        CHECK(std::abs(a.value - b.value) <= 1e-11 * std::abs(a.value));
    }
    SUBCASE("naive enumeration cap") {
        CHECK_THROWS_AS(
            averaged_permanent(Eigen::MatrixXcd::Identity(10, 10), 10, 1.0, PermanentMethod::naive),
            scale_error);
    }
}

TEST_CASE("free-boson permanent identity") {
    // averaged_permanent(exp(-beta E), N) / N! equals the canonical trace at v = 0
    TorusLattice lat(1, 3);
    auto E = build_kinetic(lat, LaplacianPlusMass{0.5});
    auto v0 = build_interaction(lat, Onsite{0.0});
    double beta = 0.8;
    Eigen::MatrixXcd expE = semigroup(E, beta).cast<cd>();
    for (int N : {1, 2, 3, 4}) {
        double z = canonical_z_exact(E, v0, N, beta);
        auto r = averaged_permanent(expE, N, lat.site_weight());
        CHECK(std::abs(r.value / std::tgamma(N + 1.0) - cd(z)) <= 1e-10 * z);
    }
}

TEST_CASE("canonical integrand in a background field") {
    TorusLattice lat(1, 2);
    auto E = build_kinetic(lat, LaplacianPlusMass{0.4});
    auto v0 = build_interaction(lat, Onsite{0.0});
    int ntau = 4;
    SUBCASE("zero field reproduces the free partition function") {
        AuxField h0 = AuxField::zero(lat, ntau);
        double z = canonical_z_exact(E, v0, 2, 1.0);
        CHECK(std::abs(hs_integrand(E, h0, 2, 1.0, ntau) - cd(z)) <= 1e-12 * z);
    }
    SUBCASE("variants Q and Q1 give the same integrand pathwise") {
        std::mt19937_64 rng(9);
        std::normal_distribution<double> g;
        Eigen::MatrixXcd vals(ntau, 2);
        for (int j = 0; j < ntau; ++j)
            for (int x = 0; x < 2; ++x) vals(j, x) = g(rng);
        AuxField h(lat, vals);
        cd a = hs_integrand(E, h, 2, 1.0, ntau, BlockVariant::Q);
        cd b = hs_integrand(E, h, 2, 1.0, ntau, BlockVariant::Q1);
        CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
    }
}
