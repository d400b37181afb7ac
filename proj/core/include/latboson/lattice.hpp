#pragma once

#include <Eigen/Dense>
#include <variant>
#include <vector>

#include "latboson/errors.hpp"

namespace latboson {

/// Discrete torus (Z/L)^d with lattice spacing eta. Sites are indexed
/// 0..L^d-1 in row-major coordinate order; all displacement arithmetic is
/// periodic in each dimension.
class TorusLattice {
  public:
    TorusLattice(int d, int L, double eta = 1.0);

    int dim() const { return d_; }
    int length() const { return L_; }
    double spacing() const { return eta_; }
    int nsites() const { return nsites_; }

    /// eta^d, the weight of one term of a spatial sum.
    double site_weight() const;

    std::vector<int> coord(int index) const;
    int index(const std::vector<int>& c) const;

    /// Site reached from `site` by the given coordinate shift (mod L).
    int displace(int site, const std::vector<int>& shift) const;
    /// Neighbor one step (+1 or -1) along `dimension`.
    int neighbor(int site, int dimension, int step) const;
    /// Torus distance in the 1-norm, min over periodic images per dimension.
    int torus_distance(int a, int b) const;

  private:
    int d_;
    int L_;
    double eta_;
    int nsites_;
};

/// One-body kinetic operator: |lattice| x |lattice| real symmetric matrix.
struct OneBodyOperator {
    TorusLattice lattice;
    Eigen::MatrixXd matrix;
    bool translation_invariant = false;

    double min_eigenvalue() const;
};

/// Two-body pair potential v_{x,y}, real symmetric.
struct InteractionOperator {
    TorusLattice lattice;
    Eigen::MatrixXd matrix;
    bool nonnegative = false;
};

struct Laplacian {};
struct LaplacianPlusMass {
    double m2;
};
struct ExternalPotential {
    std::vector<double> W;  // one value per site
};
using KineticKind = std::variant<Laplacian, LaplacianPlusMass, ExternalPotential>;

struct Onsite {
    double v0;
};
/// Radial profile over torus distance: p[0] = v(0), p[r] = v at 1-norm
/// distance r. For d=1 a full circulant row of length L is also accepted
/// (indexed by signed displacement); it must satisfy p[r] == p[L-r].
struct Profile {
    std::vector<double> p;
};
using InteractionKind = std::variant<Onsite, Profile>;

/// Kinetic operator E - mu*1. The discrete Laplacian stencil is
/// (-Delta)_{x,y} = eta^{-2} (2d delta_{x,y} - #{unit steps from x to y}),
/// so on L=2 both directed bonds between the two sites contribute.
OneBodyOperator build_kinetic(const TorusLattice& lattice, const KineticKind& kind, double mu = 0.0);

InteractionOperator build_interaction(const TorusLattice& lattice, const InteractionKind& kind);

struct StochasticReport {
    bool ok;
    double worst_entry;
};

/// Checks whether exp(-tau*E) has nonnegative entries (>= -tol) for every
/// tau in `taus`, i.e. whether E generates a stochastic process.
StochasticReport check_stochastic(const OneBodyOperator& E, const std::vector<double>& taus,
                                  double tol = 1e-12);

/// exp(-tau*E) via real symmetric eigendecomposition, tau >= 0.
Eigen::MatrixXd semigroup(const OneBodyOperator& E, double tau);

}  // namespace latboson
