#include "latboson/hs.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <thread>

#include "latboson/permanent.hpp"

namespace latboson {

namespace {

constexpr std::complex<double> I{0.0, 1.0};

// Ordered per-sample evaluation fanned out over a fixed worker count; the
// sequential reduction makes the estimate independent of `workers`.
MCEstimate run_mc(std::uint64_t nsamples, std::uint64_t seed, int workers,
                  const std::function<std::complex<double>(std::uint64_t, std::uint64_t&)>& eval) {
    if (nsamples == 0) throw invalid_input_error("monte carlo: need at least one sample");
    if (workers < 1) throw invalid_input_error("monte carlo: workers must be >= 1");
    std::vector<std::complex<double>> values(nsamples);
    std::vector<std::uint64_t> failures(workers, 0);

    auto work = [&](int w) {
        std::uint64_t fail = 0;
        for (std::uint64_t k = w; k < nsamples; k += workers) values[k] = eval(k, fail);
        failures[w] = fail;
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }

    std::complex<double> sum = 0.0;
    double sum_re2 = 0.0, sum_im2 = 0.0;
    for (const auto& z : values) {
        sum += z;
        sum_re2 += z.real() * z.real();
        sum_im2 += z.imag() * z.imag();
    }
    double n = static_cast<double>(nsamples);
    std::complex<double> mean = sum / n;
    auto sem = [&](double s2, double m) {
        double var = std::max(0.0, s2 / n - m * m);
        return std::sqrt(var / n);
    };
    std::uint64_t fail_total = 0;
    for (auto f : failures) fail_total += f;
    return MCEstimate{mean,
                      sem(sum_re2, mean.real()),
                      sem(sum_im2, mean.imag()),
                      nsamples,
                      seed,
                      std::abs(mean.imag()),
                      fail_total};
}

}  // namespace

GaussianSpec::GaussianSpec(const InteractionOperator& v_in, int ntau_in) : v(v_in), ntau(ntau_in) {
    if (ntau < 1) throw invalid_input_error("GaussianSpec: ntau must be >= 1");
    const int n = v.matrix.rows();
    Eigen::LLT<Eigen::MatrixXd> llt(v.matrix);
    if (llt.info() == Eigen::Success) {
        factor = llt.matrixL();
    } else {
        // semidefinite fallback: spectral square root with zero modes clamped
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(v.matrix);
        if (es.info() != Eigen::Success) throw numeric_error("GaussianSpec: eigendecomposition failed");
        if (es.eigenvalues()(0) < -1e-10) {
            throw numeric_error("GaussianSpec: covariance is indefinite");
        }
        Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        factor = es.eigenvectors() * root.asDiagonal();
    }
    double rec = (factor * factor.transpose() - v.matrix).cwiseAbs().maxCoeff();
    if (rec > 1e-10 * std::max(1.0, v.matrix.cwiseAbs().maxCoeff())) {
        throw numeric_error("GaussianSpec: factorization residual too large");
    }
    (void)n;
}

AuxField sample_aux(const GaussianSpec& spec, std::uint64_t seed, std::uint64_t k) {
    const int n = spec.v.lattice.nsites();
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd vals(spec.ntau, n);
    Eigen::VectorXd z(n);
    for (int j = 0; j < spec.ntau; ++j) {
        for (int x = 0; x < n; ++x) z(x) = gauss(rng);
        vals.row(j) = (spec.factor * z).transpose().cast<std::complex<double>>();
    }
    return AuxField(spec.v.lattice, vals);
}

MCEstimate estimate_zc(const OneBodyOperator& E, const InteractionOperator& v, int N, double beta,
                       int ntau, BlockVariant variant, std::uint64_t nsamples, std::uint64_t seed,
                       int workers, bool include_B, const OneBodyOperator* Etilde,
                       const Eigen::VectorXd* u) {
    if (include_B && variant != BlockVariant::Q2) {
        throw invalid_input_error("estimate_zc: B reweighting applies to Q2 only");
    }
    GaussianSpec spec(v, ntau);
    const double eps = beta / ntau;
    const double sq = std::sqrt(eps);

    Eigen::VectorXd u_default;
    if (variant == BlockVariant::Q2 && u == nullptr) {
        u_default = 0.5 * v.matrix.diagonal();
        u = &u_default;
    }

    auto eval = [&](std::uint64_t k, std::uint64_t&) -> std::complex<double> {
        AuxField h = sample_aux(spec, seed, k);
        std::complex<double> val = hs_integrand(E, h, N, beta, ntau, variant, Etilde, u);
        if (include_B) {
            const OneBodyOperator* et = Etilde != nullptr ? Etilde : &E;
            BlockOperator op = build_q(variant, E, et, u, h, beta);
            std::complex<double> phase = std::exp(-I * sq * h.values.sum());
            val *= phase / det_block(op);
        }
        return val;
    };
    return run_mc(nsamples, seed, workers, eval);
}

MCEstimate estimate_zg(const OneBodyOperator& E_minus_mu, const InteractionOperator& v, double beta,
                       int ntau, std::uint64_t nsamples, std::uint64_t seed, int workers) {
    GaussianSpec spec(v, ntau);
    const int n = E_minus_mu.lattice.nsites();

    auto eval = [&](std::uint64_t k, std::uint64_t& failures) -> std::complex<double> {
        AuxField h = sample_aux(spec, seed, k);
        BlockOperator op = build_q(BlockVariant::K, E_minus_mu, nullptr, nullptr, h, beta);
        if (herm_part_min_eig(op) <= 0.0) ++failures;
        // det K = det(1 - A_1 ... A_ntau), cheaper than the dense determinant
        Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(n, n);
        for (int j = 0; j < ntau; ++j) p = p * (-op.super(j));
        std::complex<double> det = (Eigen::MatrixXcd::Identity(n, n) - p).determinant();
        if (det == 0.0) throw inversion_error("estimate_zg: singular K", 0.0);
        return 1.0 / det;
    };
    return run_mc(nsamples, seed, workers, eval);
}

PhiResult phi_onsite(std::complex<double> z, double eps_v, double tol) {
    if (!(tol > 0.0)) throw invalid_input_error("phi_onsite: tol must be positive");
    if (eps_v < 0.0) throw invalid_input_error("phi_onsite: eps_v must be nonnegative");
    std::complex<double> sum = 1.0, term = 1.0;
    int n = 0;
    while (n < 10000) {
        ++n;
        term *= z / static_cast<double>(n);
        std::complex<double> contrib = term * std::exp(-0.5 * eps_v * n * n);
        sum += contrib;
        if (std::abs(contrib) < tol * std::abs(sum) && static_cast<double>(n) > std::abs(z)) break;
    }
    if (std::abs(sum) > std::exp(std::abs(z)) * (1.0 + 1e-12)) {
        throw numeric_error("phi_onsite: growth bound violated");
    }
    if (sum == 0.0) throw branch_error("phi_onsite: Phi vanished, log branch undefined");
    return PhiResult{sum, -std::log(sum), n + 1};
}

void gauss_hermite(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    if (order < 2) throw invalid_input_error("gauss_hermite: order must be >= 2");
    // Golub-Welsch on the symmetric Jacobi matrix, off-diagonal sqrt(k/2)
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) {
        double b = std::sqrt(0.5 * k);
        J(k, k - 1) = b;
        J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success) throw numeric_error("gauss_hermite: eigensolver failed");
    nodes.resize(order);
    weights.resize(order);
    const double sqrt_pi = std::sqrt(std::acos(-1.0));
    for (int k = 0; k < order; ++k) {
        nodes[k] = es.eigenvalues()(k);
        double v0 = es.eigenvectors()(0, k);
        weights[k] = sqrt_pi * v0 * v0;
    }
}

SteinReport stein_residual(const InteractionOperator& v, int jtau, int x, SteinFKind kind,
                           double phase_a, int ntau, double eps, int quad_order) {
    if (jtau < 1 || jtau > ntau) throw invalid_input_error("stein_residual: jtau out of range");
    if (x < 0 || x >= v.lattice.nsites()) throw invalid_input_error("stein_residual: site out of range");
    const double vxx = v.matrix(x, x);
    std::vector<double> t, w;
    gauss_hermite(quad_order, t, w);

    // test function of the single component h = h_{jtau,x}, with its
    // analytic h-derivative
    auto G = [&](double h) -> std::complex<double> {
        switch (kind) {
            case SteinFKind::constant: return 1.0;
            case SteinFKind::coordinate: return h;
            case SteinFKind::phase: return std::exp(I * phase_a * h);
        }
        return 0.0;
    };
    auto dG = [&](double h) -> std::complex<double> {
        switch (kind) {
            case SteinFKind::constant: return 0.0;
            case SteinFKind::coordinate: return 1.0;
            case SteinFKind::phase: return I * phase_a * std::exp(I * phase_a * h);
        }
        return 0.0;
    };

    const double sigma = std::sqrt(std::max(0.0, vxx));
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::acos(-1.0));
    std::complex<double> e_hg = 0.0, e_dg = 0.0, e_delta_f = 0.0, e_f = 0.0;
    const double sq = std::sqrt(eps);
    for (int k = 0; k < quad_order; ++k) {
        double h = std::sqrt(2.0) * sigma * t[k];
        double wk = inv_sqrt_pi * w[k];
        std::complex<double> g = G(h);
        e_hg += wk * h * g;
        e_dg += wk * dG(h);
        std::complex<double> delta = std::exp(-I * sq * h) - 1.0 + I * sq * h;
        e_delta_f += wk * delta * g;
        e_f += wk * g;
    }
    double stein = std::abs(e_hg - vxx * e_dg);
    double delta_res = std::abs(e_delta_f + 0.5 * eps * vxx * e_f);
    return SteinReport{stein, delta_res};
}

std::complex<double> gaussian_moment_perm(const Eigen::MatrixXcd& Q,
                                          const std::vector<std::pair<int, int>>& pairs) {
    if (Q.rows() != Q.cols()) throw invalid_input_error("gaussian_moment_perm: Q must be square");
    Eigen::MatrixXcd herm = 0.5 * (Q + Q.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success || es.eigenvalues()(0) <= 0.0) {
        throw invalid_input_error("gaussian_moment_perm: Q + Q^dagger must be positive");
    }
    Eigen::MatrixXcd qinv = Q.inverse();
    const int K = static_cast<int>(pairs.size());
    Eigen::MatrixXcd R(K, K);
    for (int k = 0; k < K; ++k) {
        for (int l = 0; l < K; ++l) {
            int nk = pairs[k].second, ml = pairs[l].first;
            if (nk < 0 || nk >= Q.rows() || ml < 0 || ml >= Q.rows()) {
                throw invalid_input_error("gaussian_moment_perm: index out of range");
            }
            R(k, l) = qinv(nk, ml);
        }
    }
    return ryser_permanent(R);
}

}  // namespace latboson
