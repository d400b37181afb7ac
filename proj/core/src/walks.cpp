#include "latboson/walks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace latboson {

namespace {

double factorial(int N) {
    double r = 1.0;
    for (int k = 2; k <= N; ++k) r *= k;
    return r;
}

// V_N(x) = 1/2 sum_{k,k'} v(x_k, x_k') over one time slice
double slice_interaction(const std::vector<int>& sites, const InteractionOperator& v,
                         bool include_self) {
    double s = 0.0;
    for (std::size_t k = 0; k < sites.size(); ++k) {
        for (std::size_t kp = 0; kp < sites.size(); ++kp) {
            if (!include_self && k == kp) continue;
            s += v.matrix(sites[k], sites[kp]);
        }
    }
    return 0.5 * s;
}

bool advance_tuple(std::vector<int>& t, int base) {
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (++t[i] < base) return true;
        t[i] = 0;
    }
    return false;
}

}  // namespace

double interaction_functional(const std::vector<std::vector<int>>& paths,
                              const InteractionOperator& v, double eps, bool include_self) {
    if (paths.empty()) return 0.0;
    const std::size_t len = paths[0].size();
    for (const auto& p : paths) {
        if (p.size() != len) throw invalid_input_error("interaction_functional: unequal path lengths");
    }
    std::vector<int> slice(paths.size());
    double total = 0.0;
    for (std::size_t j = 1; j < len; ++j) {
        for (std::size_t k = 0; k < paths.size(); ++k) slice[k] = paths[k][j];
        total += slice_interaction(slice, v, include_self);
    }
    return eps * total;
}

double z_walks_enumerate(const OneBodyOperator& E, const InteractionOperator& v, int N, double beta,
                         int ntau) {
    if (N < 0 || ntau < 1) throw invalid_input_error("z_walks_enumerate: bad N or ntau");
    if (N == 0) return 1.0;
    const int L = E.lattice.nsites();
    double cost = std::pow(static_cast<double>(L), (ntau - 1) * N) * factorial(N);
    if (cost > 1e7) throw scale_error("z_walks_enumerate: configuration space too large");

    const double eps = beta / ntau;
    Eigen::MatrixXd kin = semigroup(E, eps);
    const double site_w = E.lattice.site_weight();

    std::vector<int> perm(N);
    std::iota(perm.begin(), perm.end(), 0);
    double total = 0.0;
    do {
        std::vector<int> starts(N, 0);
        do {
            // interior slice sites for times 1..ntau-1, walk-major odometer
            std::vector<int> interior(static_cast<std::size_t>(N) * (ntau - 1), 0);
            do {
                std::vector<std::vector<int>> paths(N, std::vector<int>(ntau + 1));
                for (int k = 0; k < N; ++k) {
                    paths[k][0] = starts[k];
                    for (int j = 1; j < ntau; ++j) paths[k][j] = interior[k * (ntau - 1) + (j - 1)];
                    paths[k][ntau] = starts[perm[k]];
                }
                double w = 1.0;
                for (int k = 0; k < N; ++k) {
                    for (int j = 1; j <= ntau; ++j) w *= kin(paths[k][j - 1], paths[k][j]);
                }
                if (w != 0.0) {
                    total += w * std::exp(-interaction_functional(paths, v, eps)) *
                             std::pow(site_w, static_cast<double>(N) * ntau);
                }
            } while (advance_tuple(interior, L));
        } while (advance_tuple(starts, L));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total / factorial(N);
}

double z_walks_transfer(const OneBodyOperator& E, const InteractionOperator& v, int N, double beta,
                        int ntau, bool identity_only) {
    if (N < 0 || ntau < 1) throw invalid_input_error("z_walks_transfer: bad N or ntau");
    if (N == 0) return 1.0;
    const int L = E.lattice.nsites();
    double dimd = std::pow(static_cast<double>(L), N);
    if (dimd > 1e4) throw scale_error("z_walks_transfer: tensor space too large");
    const int dim = static_cast<int>(dimd);

    const double eps = beta / ntau;
    Eigen::MatrixXd kin = semigroup(E, eps);
    const double site_w = E.lattice.site_weight();

    // tuple index: x = sum_k x_k L^k
    auto decode = [&](int idx, std::vector<int>& t) {
        for (int k = 0; k < N; ++k) {
            t[k] = idx % L;
            idx /= L;
        }
    };

    Eigen::MatrixXd T(dim, dim);
    std::vector<int> a(N), b(N);
    for (int col = 0; col < dim; ++col) {
        decode(col, b);
        double boltz = std::exp(-eps * slice_interaction(b, v, true));
        for (int row = 0; row < dim; ++row) {
            decode(row, a);
            double w = 1.0;
            for (int k = 0; k < N; ++k) w *= kin(a[k], b[k]);
            T(row, col) = w * boltz * std::pow(site_w, N);
        }
    }

    // T^ntau by binary powering
    Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(dim, dim);
    Eigen::MatrixXd base = T;
    int p = ntau;
    while (p > 0) {
        if (p & 1) acc = acc * base;
        p >>= 1;
        if (p > 0) base = base * base;
    }

    std::vector<int> perm(N);
    std::iota(perm.begin(), perm.end(), 0);
    double total = 0.0;
    std::vector<int> x(N);
    do {
        for (int idx = 0; idx < dim; ++idx) {
            decode(idx, x);
            int pidx = 0;
            for (int k = N - 1; k >= 0; --k) pidx = pidx * L + x[perm[k]];
            total += acc(idx, pidx);
        }
        if (identity_only) break;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total / factorial(N);
}

}  // namespace latboson
