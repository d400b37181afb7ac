#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "latboson/covariance.hpp"
#include "latboson/lattice.hpp"

namespace latboson {

/// Time-local Gaussian measure on the auxiliary field: each slice is an
/// independent N(0, v) vector, realized through a factor with
/// factor * factor^T = v (triangular when v is definite, spectral square
/// root with clamped zero modes otherwise).
struct GaussianSpec {
    InteractionOperator v;
    int ntau;
    Eigen::MatrixXd factor;

    GaussianSpec(const InteractionOperator& v_in, int ntau_in);
};

/// One auxiliary-field draw. Sample index `k` always yields the same field
/// for a given seed, independent of how samples are distributed over
/// workers.
AuxField sample_aux(const GaussianSpec& spec, std::uint64_t seed, std::uint64_t k);

struct MCEstimate {
    std::complex<double> mean;
    double stderr_re;            // standard error of the real part
    double stderr_im;            // standard error of the imaginary part
    std::uint64_t nsamples;
    std::uint64_t seed;
    double imaginary_residual;   // |Im mean|
    std::uint64_t positivity_failures = 0;
};

/// Monte Carlo estimate of the canonical partition function:
/// mean over h-draws of averaged_permanent(C(h)_{0,ntau})/N! for the chosen
/// variant. With include_B (Q2 only) each sample is reweighted by
/// B(h,u) = exp(-i sqrt(eps) <1,h>) / det Q2(h,u). For Q2 the default
/// u_x = v_{x,x}/2 and Etilde = E are used unless supplied.
MCEstimate estimate_zc(const OneBodyOperator& E, const InteractionOperator& v, int N, double beta,
                       int ntau, BlockVariant variant, std::uint64_t nsamples, std::uint64_t seed,
                       int workers = 1, bool include_B = false,
                       const OneBodyOperator* Etilde = nullptr,
                       const Eigen::VectorXd* u = nullptr);

/// Monte Carlo estimate of the grand-canonical partition function as the
/// mean of 1/det K(h) = 1/det(1 - P(h)). Samples whose K has a
/// non-positive hermitian part are counted, not skipped.
MCEstimate estimate_zg(const OneBodyOperator& E_minus_mu, const InteractionOperator& v, double beta,
                       int ntau, std::uint64_t nsamples, std::uint64_t seed, int workers = 1);

struct PhiResult {
    std::complex<double> phi;
    std::complex<double> V;  // -log phi, principal branch
    int terms_used;
};

/// Phi(z) = sum_{n>=0} z^n/n! exp(-eps_v n^2 / 2), summed to relative
/// tolerance; satisfies |Phi(z)| <= exp(|z|).
PhiResult phi_onsite(std::complex<double> z, double eps_v, double tol = 1e-14);

enum class SteinFKind { constant, coordinate, phase };

struct SteinReport {
    double stein_residual;  // |E[h G] - sum_y v_{x,y} E[dG/dh_y]|
    double delta_residual;  // |E[Delta_eps(h) F] + (eps/2) v_{x,x} E[F]|
};

/// Gauss-Hermite check of the Gaussian integration-by-parts identity for a
/// test function G of the single field component h_{jtau,x}, and of the
/// small-eps decomposition Delta_eps(h) = exp(-i sqrt(eps) h) - 1 + i sqrt(eps) h.
SteinReport stein_residual(const InteractionOperator& v, int jtau, int x, SteinFKind kind,
                           double phase_a, int ntau, double eps, int quad_order);

/// Gaussian moment of pairs (m_k, n_k):
/// sum over pi in S_K of prod_k (Q^{-1})_{n_k, m_{pi(k)}}; requires
/// Q + Q^dagger > 0.
std::complex<double> gaussian_moment_perm(const Eigen::MatrixXcd& Q,
                                          const std::vector<std::pair<int, int>>& pairs);

/// Gauss-Hermite nodes and weights for weight exp(-x^2) (Golub-Welsch).
void gauss_hermite(int order, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace latboson
