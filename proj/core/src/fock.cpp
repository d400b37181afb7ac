#include "latboson/fock.hpp"

#include <algorithm>
#include <cmath>

namespace latboson {

namespace {

// binomial with overflow guard; saturates at uint64 max
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        std::uint64_t q = r / i;
        if (q > (~std::uint64_t{0}) / (n - k + i)) return ~std::uint64_t{0};
        r = q * (n - k + i) + (r % i) * (n - k + i) / i;
    }
    return r;
}

void fill_states(std::vector<std::vector<int>>& out, std::vector<int>& cur, int slot, int remaining) {
    if (slot == static_cast<int>(cur.size()) - 1) {
        cur[slot] = remaining;
        out.push_back(cur);
        return;
    }
    for (int k = 0; k <= remaining; ++k) {
        cur[slot] = k;
        fill_states(out, cur, slot + 1, remaining - k);
    }
}

Eigen::MatrixXcd sector_hamiltonian_total(const OneBodyOperator& E, const InteractionOperator& v,
                                          const OccupationBasis& basis) {
    SectorHamiltonian h = hamiltonian_sector(E, v, basis);
    return h.h0 + h.v;
}

}  // namespace

std::uint64_t fock_dimension(int nsites, int N) {
    if (nsites <= 0 || N < 0) throw invalid_input_error("fock_dimension: bad arguments");
    return binomial(static_cast<std::uint64_t>(nsites) + N - 1, static_cast<std::uint64_t>(nsites) - 1);
}

OccupationBasis::OccupationBasis(const TorusLattice& lattice, int N, std::uint64_t cap)
    : lattice_(lattice), N_(N) {
    if (N < 0) throw invalid_input_error("particle number must be nonnegative");
    std::uint64_t dim = fock_dimension(lattice.nsites(), N);
    if (dim > cap) throw scale_error("sector dimension exceeds cap");
    states_.reserve(dim);
    std::vector<int> cur(lattice.nsites(), 0);
    fill_states(states_, cur, 0, N);
}

std::size_t OccupationBasis::index_of(const std::vector<int>& nu) const {
    auto it = std::lower_bound(states_.begin(), states_.end(), nu);
    if (it == states_.end() || *it != nu) throw invalid_input_error("occupation vector not in basis");
    return static_cast<std::size_t>(it - states_.begin());
}

SectorHamiltonian hamiltonian_sector(const OneBodyOperator& E, const InteractionOperator& v,
                                     const OccupationBasis& basis) {
    const int n = E.lattice.nsites();
    if (v.lattice.nsites() != n || basis.lattice().nsites() != n) {
        throw invalid_input_error("hamiltonian_sector: lattice mismatch");
    }
    const std::size_t dim = basis.size();
    Eigen::MatrixXcd h0 = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd vmat = Eigen::MatrixXcd::Zero(dim, dim);

    std::vector<int> nu2;
    for (std::size_t i = 0; i < dim; ++i) {
        const std::vector<int>& nu = basis.state(i);
        double diag_v = 0.0;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) diag_v += v.matrix(x, y) * nu[x] * nu[y];
        vmat(i, i) = 0.5 * diag_v;

        // a+_x a_y |nu> = sqrt(nu_y) sqrt(nu_x + 1 - delta_{x,y}) |nu - e_y + e_x>
        for (int y = 0; y < n; ++y) {
            if (nu[y] == 0) continue;
            for (int x = 0; x < n; ++x) {
                if (E.matrix(x, y) == 0.0) continue;
                if (x == y) {
                    h0(i, i) += E.matrix(x, x) * static_cast<double>(nu[x]);
                    continue;
                }
                nu2 = nu;
                nu2[y] -= 1;
                nu2[x] += 1;
                std::size_t j = basis.index_of(nu2);
                double amp = std::sqrt(static_cast<double>(nu[y]) * (nu[x] + 1));
                h0(j, i) += E.matrix(x, y) * amp;
            }
        }
    }
    return SectorHamiltonian{std::move(h0), std::move(vmat)};
}

Eigen::MatrixXcd hopping_sector(const OccupationBasis& basis, int x, int y) {
    const std::size_t dim = basis.size();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    std::vector<int> nu2;
    for (std::size_t i = 0; i < dim; ++i) {
        const std::vector<int>& nu = basis.state(i);
        if (nu[y] == 0) continue;
        if (x == y) {
            m(i, i) = static_cast<double>(nu[x]);
            continue;
        }
        nu2 = nu;
        nu2[y] -= 1;
        nu2[x] += 1;
        std::size_t j = basis.index_of(nu2);
        m(j, i) = std::sqrt(static_cast<double>(nu[y]) * (nu[x] + 1));
    }
    return m;
}

double canonical_z_exact(const OneBodyOperator& E, const InteractionOperator& v, int N, double beta) {
    if (!(beta > 0.0)) throw invalid_input_error("canonical_z_exact: beta must be positive");
    OccupationBasis basis(E.lattice, N);
    Eigen::MatrixXcd h = sector_hamiltonian_total(E, v, basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw numeric_error("canonical_z_exact: eigensolver failed");
    return (-beta * es.eigenvalues().array()).exp().sum();
}

double canonical_z_trotter(const OneBodyOperator& E, const InteractionOperator& v, int N, double beta,
                           int ntau, bool reversed_order) {
    if (ntau < 1) throw invalid_input_error("canonical_z_trotter: ntau must be >= 1");
    const double eps = beta / ntau;
    OccupationBasis basis(E.lattice, N);
    SectorHamiltonian h = hamiltonian_sector(E, v, basis);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.h0);
    if (es.info() != Eigen::Success) throw numeric_error("canonical_z_trotter: eigensolver failed");
    Eigen::VectorXd lam = (-eps * es.eigenvalues().array()).exp();
    Eigen::MatrixXcd exp_h0 = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
    Eigen::VectorXcd exp_v = (-eps * h.v.diagonal().array()).exp();

    Eigen::MatrixXcd step = reversed_order ? Eigen::MatrixXcd(exp_v.asDiagonal() * exp_h0)
                                           : Eigen::MatrixXcd(exp_h0 * exp_v.asDiagonal());

    // step^ntau by binary powering
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(step.rows(), step.cols());
    Eigen::MatrixXcd base = step;
    int k = ntau;
    while (k > 0) {
        if (k & 1) acc = acc * base;
        k >>= 1;
        if (k > 0) base = base * base;
    }
    std::complex<double> tr = acc.trace();
    if (std::abs(tr.imag()) > 1e-11 * std::max(1.0, std::abs(tr.real()))) {
        throw numeric_error("canonical_z_trotter: non-real trace");
    }
    return tr.real();
}

GrandZResult grand_z_exact(const OneBodyOperator& E, const InteractionOperator& v, double mu,
                           double beta, int Ncut) {
    if (Ncut < 0) throw invalid_input_error("grand_z_exact: Ncut must be >= 0");
    bool v_zero = v.matrix.isZero(0.0);
    if (v_zero && mu >= E.min_eigenvalue()) {
        throw divergence_error("grand_z_exact: for v = 0 need mu < min spec E");
    }

    double sum = 1.0;  // N = 0 term
    double prev_term = 1.0;
    double last_term = 1.0;
    int terms = 1;
    bool stopped = false;
    for (int N = 1; N <= Ncut; ++N) {
        double term = std::exp(beta * mu * N) * canonical_z_exact(E, v, N, beta);
        sum += term;
        ++terms;
        if (N >= 2 && term > prev_term && term > 1e-14 * sum) {
            // growing terms are fine early on, but with an interaction that
            // has zero modes they signal true divergence
            if (v.matrix.diagonal().minCoeff() <= 0.0 && N > Ncut / 2) {
                throw divergence_error("grand_z_exact: terms growing, sum appears divergent");
            }
        }
        prev_term = last_term;
        last_term = term;
        if (term < 1e-16 * sum) {
            stopped = true;
            break;
        }
    }
    double tail = 0.0;
    if (!stopped && terms >= 2 && prev_term > 0.0) {
        double ratio = last_term / prev_term;
        tail = ratio < 1.0 ? last_term * ratio / (1.0 - ratio) : std::numeric_limits<double>::infinity();
    } else {
        tail = last_term;  // bounded by the last computed term once terms decay fast
    }
    return GrandZResult{sum, tail, terms, stopped};
}

std::complex<double> canonical_correlation(const OneBodyOperator& E, const InteractionOperator& v,
                                           int N, double beta, int x, int y) {
    OccupationBasis basis(E.lattice, N);
    Eigen::MatrixXcd h = sector_hamiltonian_total(E, v, basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) throw numeric_error("canonical_correlation: eigensolver failed");
    Eigen::VectorXd w = (-beta * es.eigenvalues().array()).exp();
    Eigen::MatrixXcd op = hopping_sector(basis, x, y);
    // tr(e^{-beta H} op) / tr(e^{-beta H}) in the eigenbasis
    Eigen::MatrixXcd op_eig = es.eigenvectors().adjoint() * op * es.eigenvectors();
    std::complex<double> num = (op_eig.diagonal().array() * w.array().cast<std::complex<double>>()).sum();
    return num / w.sum();
}

std::complex<double> projected_matrix_element(const Eigen::VectorXcd& a_left,
                                              const Eigen::VectorXcd& a_right, int N,
                                              const Eigen::MatrixXcd* F) {
    if (a_left.size() != a_right.size()) throw invalid_input_error("projected_matrix_element: size mismatch");
    std::complex<double> ip = a_left.dot(a_right);  // <conj(a_left), a_right>
    if (F == nullptr) {
        std::complex<double> r = 1.0;
        for (int k = 1; k <= N; ++k) r *= ip / static_cast<double>(k);
        return r;
    }
    if (N == 0) return 0.0;
    if (F->rows() != a_left.size() || F->cols() != a_left.size()) {
        throw invalid_input_error("projected_matrix_element: F dimension mismatch");
    }
    std::complex<double> r = 1.0;
    for (int k = 1; k <= N - 1; ++k) r *= ip / static_cast<double>(k);
    Eigen::MatrixXcd ins = Eigen::MatrixXcd::Identity(F->rows(), F->cols()) / static_cast<double>(N) + *F;
    return r * a_left.dot(ins * a_right);
}

CoherentVector::CoherentVector(const TorusLattice& lattice, const Eigen::VectorXcd& amplitude, int nmax)
    : lattice_(lattice), amplitude_(amplitude), nmax_(nmax) {
    if (amplitude.size() != lattice.nsites()) throw invalid_input_error("CoherentVector: amplitude size mismatch");
    if (nmax < 0) throw invalid_input_error("CoherentVector: nmax must be >= 0");
    bases_.reserve(nmax + 1);
    coeffs_.reserve(nmax + 1);
    for (int n = 0; n <= nmax; ++n) {
        bases_.emplace_back(lattice, n);
        const OccupationBasis& b = bases_.back();
        Eigen::VectorXcd c(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) {
            const std::vector<int>& nu = b.state(i);
            std::complex<double> val = 1.0;
            for (int x = 0; x < lattice.nsites(); ++x) {
                for (int k = 1; k <= nu[x]; ++k) val *= amplitude(x) / std::sqrt(static_cast<double>(k));
            }
            c(i) = val;
        }
        coeffs_.push_back(std::move(c));
    }
}

std::complex<double> CoherentVector::inner_truncated(const CoherentVector& other) const {
    int nm = std::min(nmax_, other.nmax_);
    std::complex<double> s = 0.0;
    for (int n = 0; n <= nm; ++n) s += coeffs_[n].dot(other.coeffs_[n]);
    return s;
}

Eigen::VectorXcd apply_semigroup_sector(const OneBodyOperator& E, double tau, const CoherentVector& coh,
                                        int n) {
    if (n < 0 || n > coh.nmax()) throw invalid_input_error("apply_semigroup_sector: sector out of range");
    const OccupationBasis& basis = coh.sector_basis(n);
    InteractionOperator zero{E.lattice, Eigen::MatrixXd::Zero(E.lattice.nsites(), E.lattice.nsites()), true};
    SectorHamiltonian h = hamiltonian_sector(E, zero, basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.h0);
    if (es.info() != Eigen::Success) throw numeric_error("apply_semigroup_sector: eigensolver failed");
    Eigen::VectorXd lam = (-tau * es.eigenvalues().array()).exp();
    return es.eigenvectors() * (lam.asDiagonal() * (es.eigenvectors().adjoint() * coh.sector_coefficients(n)));
}

}  // namespace latboson
