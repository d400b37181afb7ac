#include "latboson/permanent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace latboson {

namespace {

// all permutations of 0..N-1 via std::next_permutation
template <typename F>
void for_each_permutation(int N, F&& f) {
    std::vector<int> p(N);
    std::iota(p.begin(), p.end(), 0);
    do {
        f(p);
    } while (std::next_permutation(p.begin(), p.end()));
}

double factorial(int N) {
    double r = 1.0;
    for (int k = 2; k <= N; ++k) r *= k;
    return r;
}

}  // namespace

std::complex<double> ryser_permanent(const Eigen::MatrixXcd& M) {
    if (M.rows() != M.cols()) throw invalid_input_error("ryser_permanent: matrix must be square");
    const int N = static_cast<int>(M.rows());
    if (N == 0) return 1.0;
    if (N > 20) throw scale_error("ryser_permanent: order above 20");

    // Gray-code sweep over nonempty column subsets; row sums updated in O(N)
    Eigen::VectorXcd rowsum = Eigen::VectorXcd::Zero(N);
    std::complex<double> total = 0.0;
    std::uint32_t gray = 0;
    const std::uint32_t count = 1u << N;
    for (std::uint32_t k = 1; k < count; ++k) {
        std::uint32_t next = k ^ (k >> 1);
        std::uint32_t bit = gray ^ next;
        int col = std::countr_zero(bit);
        if (next & bit) {
            rowsum += M.col(col);
        } else {
            rowsum -= M.col(col);
        }
        gray = next;
        std::complex<double> prod = rowsum.prod();
        total += (std::popcount(next) & 1u ? -1.0 : 1.0) * prod;  // (-1)^{|S|}
    }
    return ((N & 1) ? -1.0 : 1.0) * total;  // overall (-1)^N
}

AveragedPermanentResult averaged_permanent(const Eigen::MatrixXcd& M, int N, double eta_weight,
                                           PermanentMethod method) {
    if (M.rows() != M.cols()) throw invalid_input_error("averaged_permanent: matrix must be square");
    if (N < 0) throw invalid_input_error("averaged_permanent: N must be nonnegative");
    const int L = static_cast<int>(M.rows());
    Eigen::MatrixXcd Mw = eta_weight * M;  // one eta^d per site sum

    std::complex<double> value = 0.0;
    if (N == 0) {
        value = 1.0;
    } else if (method == PermanentMethod::naive) {
        double cost = std::pow(static_cast<double>(L), N) * factorial(N);
        if (cost > 1e8) throw scale_error("averaged_permanent: naive enumeration too large");
        std::vector<int> x(N, 0);
        bool done = false;
        while (!done) {
            for_each_permutation(N, [&](const std::vector<int>& pi) {
                std::complex<double> prod = 1.0;
                for (int n = 0; n < N; ++n) prod *= Mw(x[n], x[pi[n]]);
                value += prod;
            });
            int i = 0;
            for (; i < N; ++i) {
                if (++x[i] < L) break;
                x[i] = 0;
            }
            done = (i == N);
        }
    } else {
        // power-sum recursion: Z_N = (1/N) sum_k tr(Mw^k) Z_{N-k}; returns N! Z_N
        std::vector<std::complex<double>> traces(N + 1);
        Eigen::MatrixXcd pw = Eigen::MatrixXcd::Identity(L, L);
        for (int k = 1; k <= N; ++k) {
            pw = pw * Mw;
            traces[k] = pw.trace();
        }
        std::vector<std::complex<double>> z(N + 1);
        z[0] = 1.0;
        for (int n = 1; n <= N; ++n) {
            std::complex<double> s = 0.0;
            for (int k = 1; k <= n; ++k) s += traces[k] * z[n - k];
            z[n] = s / static_cast<double>(n);
        }
        value = z[N] * factorial(N);
    }
    return AveragedPermanentResult{value, method, N};
}

std::complex<double> hs_integrand(const OneBodyOperator& E, const AuxField& h, int N, double beta,
                                  int ntau, BlockVariant variant, const OneBodyOperator* Etilde,
                                  const Eigen::VectorXd* u) {
    if (h.ntau != ntau) throw invalid_input_error("hs_integrand: field slice count mismatch");
    const OneBodyOperator* et = Etilde;
    if (et == nullptr && (variant == BlockVariant::Q2 || variant == BlockVariant::Q3 ||
                          variant == BlockVariant::Q4)) {
        et = &E;
    }
    BlockOperator op = build_q(variant, E, et, u, h, beta);
    BlockCovariance cov = invert(op);
    AveragedPermanentResult p =
        averaged_permanent(cov.block(0, ntau), N, E.lattice.site_weight(), PermanentMethod::cycles);
    return p.value / factorial(N);
}

}  // namespace latboson
