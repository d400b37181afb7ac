#pragma once

#include <Eigen/Dense>
#include <complex>

#include "latboson/covariance.hpp"
#include "latboson/lattice.hpp"

namespace latboson {

/// Permanent of an N x N matrix by Ryser inclusion-exclusion with Gray-code
/// column updates, O(2^N N). N <= 20.
std::complex<double> ryser_permanent(const Eigen::MatrixXcd& M);

enum class PermanentMethod { naive, cycles };

struct AveragedPermanentResult {
    std::complex<double> value;
    PermanentMethod method;
    int N;
};

/// Lattice-averaged permanent of an |Lambda| x |Lambda| matrix:
///   sum over pi in S_N and x_1..x_N of prod_n M_{x_n, x_pi(n)},
/// each site sum weighted by eta^d. The cycles method evaluates it through
/// the recursion Z_N = (1/N) sum_{k=1..N} tr(M'^k) Z_{N-k} with M' the
/// weighted matrix, returning N! Z_N; naive enumerates all tuples and
/// permutations directly.
AveragedPermanentResult averaged_permanent(const Eigen::MatrixXcd& M, int N, double eta_weight,
                                           PermanentMethod method = PermanentMethod::cycles);

/// Canonical-ensemble integrand in background field h: the averaged
/// permanent of the (0, ntau) covariance block of the chosen variant,
/// divided by N!. For Q2 pass u (and Etilde defaults to E when null).
std::complex<double> hs_integrand(const OneBodyOperator& E, const AuxField& h, int N, double beta,
                                  int ntau, BlockVariant variant = BlockVariant::Q,
                                  const OneBodyOperator* Etilde = nullptr,
                                  const Eigen::VectorXd* u = nullptr);

}  // namespace latboson
