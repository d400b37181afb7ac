#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "latboson/lattice.hpp"

namespace latboson {

/// Auxiliary field over time slices 1..ntau and the lattice; the slice at
/// time index 0 is identically zero and not stored. Complex values are
/// accepted (analyticity probes); real fields are the sampling default.
struct AuxField {
    int ntau;
    TorusLattice lattice;
    Eigen::MatrixXcd values;  // row j-1 holds slice j, one column per site

    AuxField(const TorusLattice& lat, const Eigen::MatrixXcd& vals);
    static AuxField zero(const TorusLattice& lat, int ntau);

    std::complex<double> at(int jtau, int x) const {
        return jtau == 0 ? std::complex<double>(0.0) : values(jtau - 1, x);
    }
};

enum class BlockVariant { Q, Q1, Q2, Q3, Q4, K };

/// Block upper-bidiagonal operator on the (ntau+1)*|lattice| space
/// (variant K adds one corner block at row ntau, column 0 closing the time
/// circle). Only the nonzero blocks are stored.
class BlockOperator {
  public:
    BlockOperator(BlockVariant variant, const TorusLattice& lattice, int ntau, double epsilon,
                  std::vector<Eigen::MatrixXcd> diag, std::vector<Eigen::MatrixXcd> super,
                  Eigen::MatrixXcd corner = {});

    BlockVariant variant() const { return variant_; }
    const TorusLattice& lattice() const { return lattice_; }
    int ntau() const { return ntau_; }
    double epsilon() const { return epsilon_; }

    const Eigen::MatrixXcd& diag(int j) const { return diag_[j]; }         // block (j, j)
    const Eigen::MatrixXcd& super(int j) const { return super_[j]; }       // block (j, j+1)
    bool has_corner() const { return corner_.size() != 0; }
    const Eigen::MatrixXcd& corner() const { return corner_; }             // block (ntau, 0)

    /// Full (ntau+1)|lattice| square matrix.
    Eigen::MatrixXcd dense() const;

  private:
    BlockVariant variant_;
    TorusLattice lattice_;
    int ntau_;
    double epsilon_;
    std::vector<Eigen::MatrixXcd> diag_;
    std::vector<Eigen::MatrixXcd> super_;
    Eigen::MatrixXcd corner_;
};

/// Inverse of a BlockOperator, stored as the full block grid. For the
/// bidiagonal variants the strictly-lower blocks are exact zeros (they are
/// never computed).
class BlockCovariance {
  public:
    BlockCovariance(const TorusLattice& lattice, int ntau, bool triangular);

    const TorusLattice& lattice() const { return lattice_; }
    int ntau() const { return ntau_; }
    bool triangular() const { return triangular_; }
    double residual() const { return residual_; }

    const Eigen::MatrixXcd& block(int j, int jp) const { return blocks_[idx(j, jp)]; }
    Eigen::MatrixXcd& block(int j, int jp) { return blocks_[idx(j, jp)]; }
    void set_residual(double r) { residual_ = r; }

  private:
    std::size_t idx(int j, int jp) const { return static_cast<std::size_t>(j) * (ntau_ + 1) + jp; }
    TorusLattice lattice_;
    int ntau_;
    bool triangular_;
    double residual_ = 0.0;
    std::vector<Eigen::MatrixXcd> blocks_;
};

/// Assembles the discretized quadratic form in background field h, with
/// eps = beta/ntau:
///   Q  : diag 1,                      super -exp(-eps E) exp(i sqrt(eps) h_{j+1})
///   Q1 : diag exp(-i sqrt(eps) h_j),  super -exp(-eps E)
///   Q2 : diag (1 - i sqrt(eps) h_j) exp(-eps u),  super -exp(-eps Etilde)
///   Q3 : diag (1 - i sqrt(eps) h_j),  super -(1 - eps Etilde)
///   Q4 : diag (1 + eps Etilde - i sqrt(eps) h_j),  super -1
///   K  : Q plus the corner block -1 at (ntau, 0); the caller folds the
///        chemical potential into E.
BlockOperator build_q(BlockVariant variant, const OneBodyOperator& E,
                      const OneBodyOperator* Etilde, const Eigen::VectorXd* u, const AuxField& h,
                      double beta);

/// Block back-substitution for the bidiagonal variants; for K the periodic
/// part is added via a dense solve of (1 - P), P = A_1 ... A_ntau. The
/// max-norm residual of op * result - 1 is recorded on the result.
BlockCovariance invert(const BlockOperator& op);

/// Free time-ordered two-point function: with M = E_minus_mu > 0,
///   G_{j,j'} = (1 - exp(-beta M))^{-1} exp(-(j'-j) eps M)       for j' >= j,
///   G_{j,j'} = (1 - exp(-beta M))^{-1} exp(-(beta-(j-j')eps) M) for j' < j,
/// evaluated spectrally.
BlockCovariance green_free(const OneBodyOperator& E_minus_mu, double beta, int ntau);

/// Determinant: exactly 1 for Q (returned symbolically), products of the
/// diagonal-block determinants for Q1..Q4, dense determinant for K.
std::complex<double> det_block(const BlockOperator& op);

/// max over all entries of |cov_h| - cov_0; a positive return is a
/// violation of the uniform covariance bound.
double uniform_bound_violation(const BlockCovariance& cov_h, const BlockCovariance& cov_0);

/// Smallest eigenvalue of (op + op^dagger)/2 over the full space.
double herm_part_min_eig(const BlockOperator& op);

struct TrotterRemainder {
    double actual;  // ||exp(t(A+B)) - exp(tA) exp(tB)|| in the operator 2-norm
    double bound;   // t^2 exp(t(2||B|| + 4||A||)) ||[A,B]|| / 2
};

TrotterRemainder trotter_remainder(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, double t);

}  // namespace latboson
