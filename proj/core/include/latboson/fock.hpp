#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "latboson/lattice.hpp"

namespace latboson {

/// Number of N-boson states on `nsites` sites: binomial(nsites+N-1, nsites-1).
std::uint64_t fock_dimension(int nsites, int N);

/// The N-particle sector basis: all occupation vectors nu with sum nu = N,
/// in lexicographic order.
class OccupationBasis {
  public:
    OccupationBasis(const TorusLattice& lattice, int N, std::uint64_t cap = 1000000);

    const TorusLattice& lattice() const { return lattice_; }
    int particle_number() const { return N_; }
    std::size_t size() const { return states_.size(); }
    const std::vector<int>& state(std::size_t i) const { return states_[i]; }

    /// Position of nu in the ordered state list; throws if absent.
    std::size_t index_of(const std::vector<int>& nu) const;

  private:
    TorusLattice lattice_;
    int N_;
    std::vector<std::vector<int>> states_;
};

struct SectorHamiltonian {
    Eigen::MatrixXcd h0;  // hopping part <a+, E a> restricted to the sector
    Eigen::MatrixXcd v;   // interaction 1/2 <n, v n>, diagonal in the basis
};

SectorHamiltonian hamiltonian_sector(const OneBodyOperator& E, const InteractionOperator& v,
                                     const OccupationBasis& basis);

/// Matrix of a+_x a_y restricted to the N-particle sector.
Eigen::MatrixXcd hopping_sector(const OccupationBasis& basis, int x, int y);

/// tr exp(-beta H_N) by exact diagonalization of the sector Hamiltonian.
double canonical_z_exact(const OneBodyOperator& E, const InteractionOperator& v, int N, double beta);

/// tr [(exp(-eps H0) exp(-eps V))^ntau], eps = beta/ntau. The reversed
/// factor order exp(-eps V) exp(-eps H0) is available for error-scaling
/// experiments; it has the same trace at F = 1 but is kept separate so the
/// discretized operators themselves can be compared.
double canonical_z_trotter(const OneBodyOperator& E, const InteractionOperator& v, int N, double beta,
                           int ntau, bool reversed_order = false);

struct GrandZResult {
    double value;
    double tail_estimate;
    int terms_used;
    bool stopped_by_tolerance;  // otherwise the Ncut cap was reached
};

/// sum_{N=0..Ncut} exp(beta mu N) Z_N with a last-term tail estimate.
GrandZResult grand_z_exact(const OneBodyOperator& E, const InteractionOperator& v, double mu,
                           double beta, int Ncut);

/// <a+_x a_y> in the canonical ensemble at particle number N.
std::complex<double> canonical_correlation(const OneBodyOperator& E, const InteractionOperator& v,
                                           int N, double beta, int x, int y);

/// <coh(a_left) | P_N coh(a_right)> = (<conj(a_left), a_right>)^N / N!,
/// or with a one-body insertion F:
/// (<conj(a_left), a_right>)^(N-1)/(N-1)! * <conj(a_left), (1/N + F) a_right>.
std::complex<double> projected_matrix_element(const Eigen::VectorXcd& a_left,
                                              const Eigen::VectorXcd& a_right, int N,
                                              const Eigen::MatrixXcd* F = nullptr);

/// Coherent state coh(a) truncated at particle number nmax; the coefficient
/// on the occupation vector nu is prod_x a_x^{nu_x} / sqrt(nu_x!).
class CoherentVector {
  public:
    CoherentVector(const TorusLattice& lattice, const Eigen::VectorXcd& amplitude, int nmax);

    int nmax() const { return nmax_; }
    const Eigen::VectorXcd& amplitude() const { return amplitude_; }
    const OccupationBasis& sector_basis(int n) const { return bases_[n]; }
    const Eigen::VectorXcd& sector_coefficients(int n) const { return coeffs_[n]; }

    /// Fock inner product truncated at min(nmax, other.nmax).
    std::complex<double> inner_truncated(const CoherentVector& other) const;

  private:
    TorusLattice lattice_;
    Eigen::VectorXcd amplitude_;
    int nmax_;
    std::vector<OccupationBasis> bases_;
    std::vector<Eigen::VectorXcd> coeffs_;
};

/// Coefficients of exp(-tau H0) applied to the n-particle component of a
/// coherent vector (exact within the sector).
Eigen::VectorXcd apply_semigroup_sector(const OneBodyOperator& E, double tau,
                                        const CoherentVector& coh, int n);

}  // namespace latboson
