#include "latboson/lattice.hpp"

#include <cmath>
#include <cstdlib>

namespace latboson {

TorusLattice::TorusLattice(int d, int L, double eta) : d_(d), L_(L), eta_(eta) {
    if (d <= 0 || L <= 0) {
        throw invalid_input_error("invalid lattice: d and L must be positive");
    }
    if (!(eta > 0.0)) {
        throw invalid_input_error("invalid lattice: eta must be positive");
    }
    double n = std::pow(static_cast<double>(L), d);
    if (n > 1e8) {
        throw scale_error("lattice too large");
    }
    nsites_ = 1;
    for (int k = 0; k < d; ++k) nsites_ *= L;
}

double TorusLattice::site_weight() const {
    return std::pow(eta_, d_);
}

std::vector<int> TorusLattice::coord(int index) const {
    if (index < 0 || index >= nsites_) throw invalid_input_error("site index out of range");
    std::vector<int> c(d_);
    for (int k = d_ - 1; k >= 0; --k) {
        c[k] = index % L_;
        index /= L_;
    }
    return c;
}

int TorusLattice::index(const std::vector<int>& c) const {
    if (static_cast<int>(c.size()) != d_) throw invalid_input_error("coordinate dimension mismatch");
    int idx = 0;
    for (int k = 0; k < d_; ++k) {
        int ck = ((c[k] % L_) + L_) % L_;
        idx = idx * L_ + ck;
    }
    return idx;
}

int TorusLattice::displace(int site, const std::vector<int>& shift) const {
    std::vector<int> c = coord(site);
    for (int k = 0; k < d_; ++k) c[k] += shift[k];
    return index(c);
}

int TorusLattice::neighbor(int site, int dimension, int step) const {
    std::vector<int> c = coord(site);
    c[dimension] += step;
    return index(c);
}

int TorusLattice::torus_distance(int a, int b) const {
    std::vector<int> ca = coord(a), cb = coord(b);
    int dist = 0;
    for (int k = 0; k < d_; ++k) {
        int delta = std::abs(ca[k] - cb[k]);
        dist += std::min(delta, L_ - delta);
    }
    return dist;
}

double OneBodyOperator::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw numeric_error("eigendecomposition failed");
    return es.eigenvalues()(0);
}

OneBodyOperator build_kinetic(const TorusLattice& lattice, const KineticKind& kind, double mu) {
    const int n = lattice.nsites();
    const double w = 1.0 / (lattice.spacing() * lattice.spacing());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);

    // -Delta: 2d on the diagonal, -1 per directed unit bond (mod L).
    for (int x = 0; x < n; ++x) {
        for (int k = 0; k < lattice.dim(); ++k) {
            for (int step : {+1, -1}) {
                int y = lattice.neighbor(x, k, step);
                m(x, x) += w;
                m(x, y) -= w;
            }
        }
    }

    bool translation_invariant = true;
    if (std::holds_alternative<LaplacianPlusMass>(kind)) {
        double m2 = std::get<LaplacianPlusMass>(kind).m2;
        if (m2 < 0.0) throw invalid_input_error("mass term m2 must be nonnegative");
        m.diagonal().array() += m2;
    } else if (std::holds_alternative<ExternalPotential>(kind)) {
        const auto& W = std::get<ExternalPotential>(kind).W;
        if (static_cast<int>(W.size()) != n) {
            throw invalid_input_error("external potential size must equal site count");
        }
        for (int x = 0; x < n; ++x) {
            if (!std::isfinite(W[x])) throw invalid_input_error("external potential must be finite");
            m(x, x) += W[x];
        }
        translation_invariant = false;
    }

    m.diagonal().array() -= mu;
    return OneBodyOperator{lattice, std::move(m), translation_invariant};
}

InteractionOperator build_interaction(const TorusLattice& lattice, const InteractionKind& kind) {
    const int n = lattice.nsites();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);

    if (std::holds_alternative<Onsite>(kind)) {
        double v0 = std::get<Onsite>(kind).v0;
        double scale = std::pow(lattice.spacing(), -lattice.dim());
        m.diagonal().setConstant(v0 * scale);
    } else {
        const auto& p = std::get<Profile>(kind).p;
        if (lattice.dim() == 1 && static_cast<int>(p.size()) == lattice.length() && lattice.length() > 2) {
            // full signed circulant row; must be even under displacement negation
            for (int r = 1; r < lattice.length(); ++r) {
                if (std::abs(p[r] - p[lattice.length() - r]) > 1e-12) {
                    throw invalid_input_error("invalid interaction: profile not symmetric under negation");
                }
            }
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y) m(x, y) = p[((y - x) % n + n) % n];
        } else {
            for (int x = 0; x < n; ++x) {
                for (int y = 0; y < n; ++y) {
                    int r = lattice.torus_distance(x, y);
                    if (r < static_cast<int>(p.size())) m(x, y) = p[r];
                }
            }
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    bool nonneg = es.info() == Eigen::Success && es.eigenvalues()(0) >= -1e-12;
    return InteractionOperator{lattice, std::move(m), nonneg};
}

StochasticReport check_stochastic(const OneBodyOperator& E, const std::vector<double>& taus, double tol) {
    if (taus.empty()) throw invalid_input_error("check_stochastic: need at least one tau");
    double worst = std::numeric_limits<double>::infinity();
    for (double tau : taus) {
        Eigen::MatrixXd k = semigroup(E, tau);
        worst = std::min(worst, k.minCoeff());
    }
    return StochasticReport{worst >= -tol, worst};
}

Eigen::MatrixXd semigroup(const OneBodyOperator& E, double tau) {
    if (tau < 0.0) throw invalid_input_error("semigroup: tau must be nonnegative");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(E.matrix);
    if (es.info() != Eigen::Success) throw numeric_error("semigroup: eigendecomposition failed");
    Eigen::VectorXd lam = (-tau * es.eigenvalues().array()).exp();
    Eigen::MatrixXd r = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    // symmetrize away roundoff
    return 0.5 * (r + r.transpose());
}

}  // namespace latboson
