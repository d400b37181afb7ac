#include "checks.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <latboson/condensate.hpp>
#include <latboson/covariance.hpp>
#include <latboson/fock.hpp>
#include <latboson/hs.hpp>
#include <latboson/lattice.hpp>
#include <latboson/permanent.hpp>
#include <latboson/walks.hpp>

namespace latboson::cli {

namespace {

using namespace latboson;

struct Suite {
    int failures = 0;
    void run(const std::string& name, const std::function<bool(std::string&)>& fn) {
        std::string detail;
        bool ok = false;
        try {
            ok = fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (ok) {
            std::printf("PASS %s\n", name.c_str());
        } else {
            ++failures;
            std::printf("FAIL %s%s%s\n", name.c_str(), detail.empty() ? "" : " -- ",
                        detail.c_str());
        }
    }
};

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

int run_checks(bool quick, std::uint64_t seed, int workers) {
    Suite s;
    const int max_ntau = quick ? 8 : 16;
    const int ndraws = quick ? 200 : 2000;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    s.run("semigroup composition", [&](std::string& d) {
        TorusLattice lat(1, 4);
        auto E = build_kinetic(lat, LaplacianPlusMass{0.3});
        double worst = 0;
        for (double a : {0.1, 0.5, 1.0}) {
            for (double b : {0.1, 0.5, 1.0}) {
                worst = std::max(worst, (semigroup(E, a) * semigroup(E, b) - semigroup(E, a + b))
                                            .cwiseAbs()
                                            .maxCoeff());
            }
        }
        d = "max " + std::to_string(worst);
        return worst <= 1e-12;
    });

    s.run("laplacian semigroup stochastic, rows sum to one", [&](std::string& d) {
        for (int L = 2; L <= 6; ++L) {
            TorusLattice lat(1, L);
            auto E = build_kinetic(lat, Laplacian{});
            auto rep = check_stochastic(E, {0.01, 0.1, 1.0, 10.0}, 1e-13);
            if (!rep.ok) {
                d = "negative entry at L=" + std::to_string(L);
                return false;
            }
            Eigen::VectorXd rows = semigroup(E, 1.0).rowwise().sum();
            if ((rows.array() - 1.0).abs().maxCoeff() > 1e-12) {
                d = "row sum off at L=" + std::to_string(L);
                return false;
            }
        }
        return true;
    });

    s.run("translation-invariant semigroup is circulant", [&](std::string&) {
        TorusLattice lat(1, 5);
        auto E = build_kinetic(lat, LaplacianPlusMass{0.7});
        Eigen::MatrixXd k = semigroup(E, 0.8);
        for (int x = 0; x < 5; ++x) {
            for (int y = 0; y < 5; ++y) {
                if (std::abs(k(x, y) - k(0, ((y - x) % 5 + 5) % 5)) > 1e-12) return false;
            }
        }
        return true;
    });

    s.run("sector dimension formula", [&](std::string&) {
        TorusLattice lat(2, 2);
        return OccupationBasis(lat, 2).size() == fock_dimension(4, 2) && fock_dimension(4, 2) == 10;
    });

    s.run("sector Hamiltonian hermitian, V diagonal", [&](std::string&) {
        TorusLattice lat(1, 3);
        auto E = build_kinetic(lat, Laplacian{});
        auto v = build_interaction(lat, Profile{{1.0, 0.25}});
        OccupationBasis basis(lat, 3);
        auto hs = hamiltonian_sector(E, v, basis);
        bool herm = max_abs(hs.h0 - hs.h0.adjoint()) <= 1e-13;
        bool diag = max_abs(hs.v - Eigen::MatrixXcd(hs.v.diagonal().asDiagonal())) == 0.0;
        return herm && diag;
    });

    s.run("canonical Z energy-shift covariance", [&](std::string& d) {
        TorusLattice lat(1, 3);
        auto E = build_kinetic(lat, Laplacian{});
        auto v = build_interaction(lat, Onsite{0.8});
        OneBodyOperator Eshift{lat, E.matrix + 0.37 * Eigen::MatrixXd::Identity(3, 3), true};
        double lhs = canonical_z_exact(Eshift, v, 2, 1.3);
        double rhs = std::exp(-0.37 * 1.3 * 2) * canonical_z_exact(E, v, 2, 1.3);
        d = "rel " + std::to_string(std::abs(lhs - rhs) / rhs);
        return std::abs(lhs - rhs) <= 1e-11 * rhs;
    });

    s.run("trotter trace equals walk transfer and enumeration", [&](std::string& d) {
        for (int L : {2, 3}) {
            TorusLattice lat(1, L);
            auto E = build_kinetic(lat, Laplacian{});
            auto v = build_interaction(lat, Onsite{1.0});
            for (int N : {1, 2}) {
                for (int nt : {2, 4, max_ntau}) {
                    double zt = canonical_z_trotter(E, v, N, 1.0, nt);
                    double zw = z_walks_transfer(E, v, N, 1.0, nt);
                    if (std::abs(zt - zw) > 1e-11 * zt) {
                        d = "transfer mismatch";
                        return false;
                    }
                    double cost = std::pow(L, (nt - 1) * N) * std::tgamma(N + 1.0);
                    if (cost <= 1e6 && std::abs(z_walks_enumerate(E, v, N, 1.0, nt) - zt) > 1e-11 * zt) {
                        d = "enumeration mismatch";
                        return false;
                    }
                }
            }
        }
        return true;
    });

    s.run("identity-only permutation sum breaks the trace identity", [&](std::string&) {
        TorusLattice lat(1, 2);
        auto E = build_kinetic(lat, Laplacian{});
        auto v = build_interaction(lat, Onsite{1.0});
        double full = z_walks_transfer(E, v, 2, 1.0, 4);
        double idonly = z_walks_transfer(E, v, 2, 1.0, 4, true);
        return std::abs(full - idonly) > 1e-6;
    });

    s.run("free-boson permanent identity", [&](std::string& d) {
        for (int L : {2, 3}) {
            TorusLattice lat(1, L);
            auto E = build_kinetic(lat, LaplacianPlusMass{0.4});
            auto v0 = build_interaction(lat, Onsite{0.0});
            Eigen::MatrixXcd kb = semigroup(E, 1.0).cast<std::complex<double>>();
            for (int N : {1, 2, 3}) {
                double fact = std::tgamma(N + 1.0);
                double perm = averaged_permanent(kb, N, 1.0).value.real() / fact;
                double zf = canonical_z_exact(E, v0, N, 1.0);
                if (std::abs(perm - zf) > 1e-10 * zf) {
                    d = "L=" + std::to_string(L) + " N=" + std::to_string(N);
                    return false;
                }
            }
        }
        return true;
    });

    s.run("averaged permanent: naive and cycle methods agree", [&](std::string& d) {
        for (int L : {2, 3, 4}) {
            Eigen::MatrixXcd M = Eigen::MatrixXcd::Random(L, L);
            for (int N : {1, 2, 3}) {
                auto a = averaged_permanent(M, N, 1.0, PermanentMethod::naive);
                auto b = averaged_permanent(M, N, 1.0, PermanentMethod::cycles);
                if (std::abs(a.value - b.value) > 1e-10 * std::max(1.0, std::abs(a.value))) {
                    d = "L=" + std::to_string(L);
                    return false;
                }
            }
        }
        return true;
    });

    s.run("block inverses: residual, triangular zeros, det Q = 1", [&](std::string& d) {
        TorusLattice lat(1, 3);
        auto E = build_kinetic(lat, Laplacian{});
        auto v = build_interaction(lat, Onsite{1.0});
        GaussianSpec spec(v, max_ntau);
        Eigen::VectorXd u = 0.5 * v.matrix.diagonal();
        for (std::uint64_t k = 0; k < 10; ++k) {
            AuxField h = sample_aux(spec, seed, k);
            for (auto variant : {BlockVariant::Q, BlockVariant::Q1, BlockVariant::Q2,
                                 BlockVariant::Q3, BlockVariant::Q4, BlockVariant::K}) {
                auto op = build_q(variant, E, &E, &u, h, 1.0);
                if (variant == BlockVariant::Q &&
                    std::abs(det_block(op) - std::complex<double>(1.0)) != 0.0) {
                    d = "det Q != 1";
                    return false;
                }
                auto cov = invert(op);
                if (cov.residual() > 1e-11) {
                    d = "residual " + std::to_string(cov.residual());
                    return false;
                }
                if (variant != BlockVariant::K) {
                    for (int j = 0; j <= max_ntau; ++j) {
                        for (int jp = 0; jp < j; ++jp) {
                            if (max_abs(cov.block(j, jp)) != 0.0) {
                                d = "lower block nonzero";
                                return false;
                            }
                        }
                    }
                }
            }
        }
        return true;
    });

    s.run("zero-field covariance equals the kinetic chain", [&](std::string& d) {
        TorusLattice lat(1, 3);
        auto E = build_kinetic(lat, Laplacian{});
        AuxField h0 = AuxField::zero(lat, max_ntau);
        auto cov = invert(build_q(BlockVariant::Q, E, nullptr, nullptr, h0, 1.0));
        double eps = 1.0 / max_ntau;
        double worst = 0;
        for (int j = 0; j <= max_ntau; ++j) {
            for (int jp = j; jp <= max_ntau; ++jp) {
                Eigen::MatrixXcd want = semigroup(E, (jp - j) * eps).cast<std::complex<double>>();
                worst = std::max(worst, max_abs(cov.block(j, jp) - want));
            }
        }
        d = "max " + std::to_string(worst);
        return worst <= 1e-12;
    });

    s.run("row zero of the Q1 inverse equals row zero of the Q inverse", [&](std::string&) {
        TorusLattice lat(1, 2);
        auto E = build_kinetic(lat, Laplacian{});
        auto v = build_interaction(lat, Onsite{1.0});
        GaussianSpec spec(v, 6);
        AuxField h = sample_aux(spec, seed, 1);
        auto cq = invert(build_q(BlockVariant::Q, E, nullptr, nullptr, h, 1.0));
        auto c1 = invert(build_q(BlockVariant::Q1, E, nullptr, nullptr, h, 1.0));
        for (int jp = 0; jp <= 6; ++jp) {
            if (max_abs(cq.block(0, jp) - c1.block(0, jp)) > 1e-12) return false;
        }
        return true;
    });

    s.run("uniform covariance bound over random fields", [&](std::string& d) {
        TorusLattice lat(1, 3);
        auto E = build_kinetic(lat, Laplacian{});
        auto Em = build_kinetic(lat, LaplacianPlusMass{0.5}, -0.25);
        auto v = build_interaction(lat, Onsite{1.0});
        GaussianSpec spec(v, 8);
        AuxField h0 = AuxField::zero(lat, 8);
        auto cq0 = invert(build_q(BlockVariant::Q, E, nullptr, nullptr, h0, 1.0));
        auto ck0 = invert(build_q(BlockVariant::K, Em, nullptr, nullptr, h0, 1.0));
        double worst = -1e300;
        for (int k = 0; k < ndraws; ++k) {
            AuxField h = sample_aux(spec, seed + 1, k);
            worst = std::max(worst, uniform_bound_violation(
                                        invert(build_q(BlockVariant::Q, E, nullptr, nullptr, h, 1.0)), cq0));
            worst = std::max(worst, uniform_bound_violation(
                                        invert(build_q(BlockVariant::K, Em, nullptr, nullptr, h, 1.0)), ck0));
        }
        d = "worst " + std::to_string(worst);
        return worst <= 1e-12;
    });

    s.run("zero-field K inverse equals the free Green function", [&](std::string& d) {
        TorusLattice lat(1, 3);
        auto Em = build_kinetic(lat, LaplacianPlusMass{0.5}, -0.25);
        AuxField h0 = AuxField::zero(lat, max_ntau);
        auto g = invert(build_q(BlockVariant::K, Em, nullptr, nullptr, h0, 1.0));
        auto gf = green_free(Em, 1.0, max_ntau);
        double worst = 0;
        for (int j = 0; j <= max_ntau; ++j) {
            for (int jp = 0; jp <= max_ntau; ++jp) {
                worst = std::max(worst, max_abs(g.block(j, jp) - gf.block(j, jp)));
            }
        }
        d = "max " + std::to_string(worst);
        return worst <= 1e-12;
    });

    s.run("hermitian part positive for Q; field-independent for Q4", [&](std::string&) {
        TorusLattice lat(1, 2);
        auto E = build_kinetic(lat, LaplacianPlusMass{0.2});
        auto v = build_interaction(lat, Onsite{1.0});
        GaussianSpec spec(v, 4);
        AuxField h0 = AuxField::zero(lat, 4);
        double ref4 = herm_part_min_eig(build_q(BlockVariant::Q4, E, &E, nullptr, h0, 1.0));
        for (int k = 0; k < 20; ++k) {
            AuxField h = sample_aux(spec, seed + 2, k);
            if (herm_part_min_eig(build_q(BlockVariant::Q, E, nullptr, nullptr, h, 1.0)) <= 0.0) {
                return false;
            }
            double e4 = herm_part_min_eig(build_q(BlockVariant::Q4, E, &E, nullptr, h, 1.0));
            if (std::abs(e4 - ref4) > 1e-12) return false;
        }
        return true;
    });

    s.run("per-path equality of the Q and Q1 integrands", [&](std::string&) {
        TorusLattice lat(1, 2);
        auto E = build_kinetic(lat, Laplacian{});
        auto v = build_interaction(lat, Onsite{1.0});
        GaussianSpec spec(v, 8);
        for (int k = 0; k < 20; ++k) {
            AuxField h = sample_aux(spec, seed + 3, k);
            auto a = hs_integrand(E, h, 2, 1.0, 8, BlockVariant::Q);
            auto b = hs_integrand(E, h, 2, 1.0, 8, BlockVariant::Q1);
            if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) return false;
        }
        return true;
    });

    s.run("estimator is bit-identical across worker counts", [&](std::string&) {
        TorusLattice lat(1, 2);
        auto E = build_kinetic(lat, Laplacian{});
        auto v = build_interaction(lat, Onsite{1.0});
        auto one = estimate_zc(E, v, 2, 1.0, 4, BlockVariant::Q, 500, seed, 1);
        auto many = estimate_zc(E, v, 2, 1.0, 4, BlockVariant::Q, 500, seed, std::max(2, workers));
        return one.mean == many.mean && one.stderr_re == many.stderr_re;
    });

    s.run("canonical MC agrees with the transfer value", [&](std::string& d) {
        TorusLattice lat(1, 2);
        auto E = build_kinetic(lat, Laplacian{});
        auto v = build_interaction(lat, Onsite{1.0});
        double exact = z_walks_transfer(E, v, 2, 1.0, 4);
        auto mc = estimate_zc(E, v, 2, 1.0, 4, BlockVariant::Q, quick ? 4000 : 40000, seed, workers);
        double z = std::abs(mc.mean.real() - exact) / mc.stderr_re;
        d = "z-score " + std::to_string(z);
        return z <= 4.0;
    });

    s.run("grand MC agrees with the particle-number sum", [&](std::string& d) {
        TorusLattice lat(1, 1);
        OneBodyOperator E{lat, Eigen::MatrixXd::Constant(1, 1, 1.0), true};
        OneBodyOperator Em{lat, Eigen::MatrixXd::Constant(1, 1, 1.5), true};
        InteractionOperator v{lat, Eigen::MatrixXd::Constant(1, 1, 0.5), true};
        double exact = grand_z_exact(E, v, -0.5, 1.0, 60).value;
        auto mc = estimate_zg(Em, v, 1.0, 8, quick ? 4000 : 40000, seed, workers);
        double z = std::abs(mc.mean.real() - exact) / mc.stderr_re;
        d = "z-score " + std::to_string(z) + ", positivity failures " +
            std::to_string(mc.positivity_failures);
        return z <= 4.0 && mc.positivity_failures == 0;
    });

    s.run("onsite generating function stays inside exp(|z|)", [&](std::string&) {
        for (double r : {0.5, 2.0, 5.0, 10.0}) {
            for (int a = 0; a < 8; ++a) {
                double phi_arg = a * 0.785398163397448;
                std::complex<double> z = r * std::exp(std::complex<double>(0, phi_arg));
                auto p = phi_onsite(z, 0.3);
                if (std::abs(p.phi) > std::exp(r) * (1 + 1e-12)) return false;
            }
        }
        return true;
    });

    s.run("Gaussian integration-by-parts residuals", [&](std::string& d) {
        TorusLattice lat(1, 1);
        InteractionOperator v{lat, Eigen::MatrixXd::Constant(1, 1, 0.7), true};
        double worst = 0;
        for (auto kind : {SteinFKind::constant, SteinFKind::coordinate, SteinFKind::phase}) {
            auto r = stein_residual(v, 1, 0, kind, 0.9, 4, 0.1, 40);
            worst = std::max(worst, r.stein_residual);
        }
        d = "worst " + std::to_string(worst);
        return worst <= 1e-10;
    });

    s.run("Gaussian pair moments match brute-force permutation sums", [&](std::string&) {
        Eigen::MatrixXcd Q = Eigen::MatrixXcd::Random(2, 2);
        Q += 3.0 * Eigen::MatrixXcd::Identity(2, 2);  // make the hermitian part positive
        Eigen::MatrixXcd qinv = Q.inverse();
        std::vector<std::pair<int, int>> pairs = {{0, 1}, {1, 0}};
        std::complex<double> brute =
            qinv(pairs[0].second, pairs[0].first) * qinv(pairs[1].second, pairs[1].first) +
            qinv(pairs[0].second, pairs[1].first) * qinv(pairs[1].second, pairs[0].first);
        return std::abs(gaussian_moment_perm(Q, pairs) - brute) <= 1e-12;
    });

    s.run("condensate minimizer and free-energy shape", [&](std::string&) {
        CondensateParams p{1.0, 1.0, 0.0, 1.0};
        double g = gamma_star(p);
        if (std::abs(g - (std::sqrt(5.0) - 1.0) / 2.0) > 1e-12) return false;
        // divergence at both ends (logarithmic on the left, quadratic on the right)
        if (!(f_gamma(p, 1e-6) > 10.0 && f_gamma(p, 1e6) > 1e3)) return false;
        // convexity on a grid
        double prev2 = f_gamma(p, 0.1), prev1 = f_gamma(p, 0.2);
        for (double x = 0.3; x < 5.0; x += 0.1) {
            double cur = f_gamma(p, x);
            if (cur - 2 * prev1 + prev2 < -1e-12) return false;
            prev2 = prev1;
            prev1 = cur;
        }
        return true;
    });

    s.run("dispersion interpolation bound", [&](std::string&) {
        for (double w : {0.5, 1.0, 2.0}) {
            for (double p = 0.0; p <= 10.0; p += 0.05) {
                if (bogoliubov_dispersion(p, w) > p * p + 0.5 * w * w + 1e-12) return false;
            }
        }
        return true;
    });

    s.run("Bogoliubov form hermitian with PSD condensate block", [&](std::string&) {
        TorusLattice lat(1, 3);
        auto E = build_kinetic(lat, Laplacian{});
        std::complex<double> c{0.8, -0.3};
        auto b = bogoliubov_form(c, 0.1, 0.2, 1.0, E);
        if (max_abs(b - b.adjoint()) > 1e-14) return false;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> full(b, Eigen::EigenvaluesOnly);
        Eigen::MatrixXcd base = bogoliubov_form(0.0, 0.1, 0.2, 1.0, E);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> b0(base, Eigen::EigenvaluesOnly);
        return full.eigenvalues()(0) >= b0.eigenvalues()(0) - 1e-12;
    });

    s.run("real-space kernel positivity", [&](std::string& d) {
        double worst = 0;
        for (double w : {0.5, 1.0, 2.0}) {
            auto r = kernel_positivity(w, 1.0, quick ? 1 : 3, quick ? 128 : 64, 40.0);
            worst = std::min(worst, r.min_value);
        }
        d = "min " + std::to_string(worst);
        return worst >= -1e-6;
    });

    s.run("product-formula remainder stays under its bound", [&](std::string&) {
        for (int k = 0; k < (quick ? 20 : 100); ++k) {
            Eigen::MatrixXcd A = Eigen::MatrixXcd::Random(2, 2);
            Eigen::MatrixXcd B = Eigen::MatrixXcd::Random(2, 2);
            A = (0.5 * (A + A.adjoint())).eval();
            B = (0.5 * (B + B.adjoint())).eval();
            for (double t : {0.01, 0.1}) {
                auto r = trotter_remainder(A, B, t);
                if (r.actual > r.bound + 1e-13) return false;
            }
        }
        return true;
    });

    std::printf("%s: %d failure(s)\n", s.failures == 0 ? "OK" : "FAILED", s.failures);
    return s.failures;
}

}  // namespace latboson::cli
