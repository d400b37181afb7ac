#include "latboson/covariance.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace latboson {

namespace {

constexpr std::complex<double> I{0.0, 1.0};

double two_norm(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

double smallest_sv(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

Eigen::MatrixXcd checked_inverse(const Eigen::MatrixXcd& m, const char* what) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    Eigen::MatrixXcd inv = lu.inverse();
    double res = (m * inv - Eigen::MatrixXcd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
    if (!std::isfinite(res) || res > 1e-8) {
        throw inversion_error(what, smallest_sv(m));
    }
    return inv;
}

// A_j = -super(j-1) for the unit-diagonal variants (Q, K), j = 1..ntau
Eigen::MatrixXcd chain_factor(const BlockOperator& op, int j) { return -op.super(j - 1); }

}  // namespace

AuxField::AuxField(const TorusLattice& lat, const Eigen::MatrixXcd& vals)
    : ntau(static_cast<int>(vals.rows())), lattice(lat), values(vals) {
    if (vals.cols() != lat.nsites()) throw invalid_input_error("AuxField: column count must equal site count");
    if (ntau < 1) throw invalid_input_error("AuxField: need at least one time slice");
    if (!values.allFinite()) throw invalid_input_error("AuxField: values must be finite");
}

AuxField AuxField::zero(const TorusLattice& lat, int ntau) {
    return AuxField(lat, Eigen::MatrixXcd::Zero(ntau, lat.nsites()));
}

BlockOperator::BlockOperator(BlockVariant variant, const TorusLattice& lattice, int ntau,
                             double epsilon, std::vector<Eigen::MatrixXcd> diag,
                             std::vector<Eigen::MatrixXcd> super, Eigen::MatrixXcd corner)
    : variant_(variant),
      lattice_(lattice),
      ntau_(ntau),
      epsilon_(epsilon),
      diag_(std::move(diag)),
      super_(std::move(super)),
      corner_(std::move(corner)) {
    if (static_cast<int>(diag_.size()) != ntau_ + 1 || static_cast<int>(super_.size()) != ntau_) {
        throw invalid_input_error("BlockOperator: inconsistent block counts");
    }
}

Eigen::MatrixXcd BlockOperator::dense() const {
    const int n = lattice_.nsites();
    const int dim = (ntau_ + 1) * n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (int j = 0; j <= ntau_; ++j) m.block(j * n, j * n, n, n) = diag_[j];
    for (int j = 0; j < ntau_; ++j) m.block(j * n, (j + 1) * n, n, n) = super_[j];
    if (has_corner()) m.block(ntau_ * n, 0, n, n) = corner_;
    return m;
}

BlockCovariance::BlockCovariance(const TorusLattice& lattice, int ntau, bool triangular)
    : lattice_(lattice), ntau_(ntau), triangular_(triangular) {
    blocks_.assign(static_cast<std::size_t>(ntau + 1) * (ntau + 1),
                   Eigen::MatrixXcd::Zero(lattice.nsites(), lattice.nsites()));
}

BlockOperator build_q(BlockVariant variant, const OneBodyOperator& E, const OneBodyOperator* Etilde,
                      const Eigen::VectorXd* u, const AuxField& h, double beta) {
    const int n = E.lattice.nsites();
    if (h.lattice.nsites() != n) throw invalid_input_error("build_q: lattice mismatch");
    if (!(beta > 0.0)) throw invalid_input_error("build_q: beta must be positive");
    const int ntau = h.ntau;
    const double eps = beta / ntau;
    const double sq = std::sqrt(eps);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);

    auto need_etilde = [&]() -> const Eigen::MatrixXd& {
        if (Etilde == nullptr) throw invalid_input_error("build_q: variant requires Etilde");
        if (Etilde->lattice.nsites() != n) throw invalid_input_error("build_q: Etilde lattice mismatch");
        return Etilde->matrix;
    };

    std::vector<Eigen::MatrixXcd> diag(ntau + 1, id);
    std::vector<Eigen::MatrixXcd> super(ntau);
    Eigen::MatrixXcd corner;

    switch (variant) {
        case BlockVariant::Q:
        case BlockVariant::K: {
            Eigen::MatrixXcd expE = semigroup(E, eps).cast<std::complex<double>>();
            for (int j = 0; j < ntau; ++j) {
                Eigen::VectorXcd phase = (I * sq * h.values.row(j).transpose().array()).exp();
                super[j] = -(expE * phase.asDiagonal());
            }
            if (variant == BlockVariant::K) corner = -id;
            break;
        }
        case BlockVariant::Q1: {
            Eigen::MatrixXcd expE = semigroup(E, eps).cast<std::complex<double>>();
            for (int j = 1; j <= ntau; ++j) {
                diag[j] = Eigen::MatrixXcd(
                    Eigen::VectorXcd((-I * sq * h.values.row(j - 1).transpose().array()).exp())
                        .asDiagonal());
            }
            for (int j = 0; j < ntau; ++j) super[j] = -expE;
            break;
        }
        case BlockVariant::Q2: {
            if (u == nullptr) throw invalid_input_error("build_q: Q2 requires u");
            if (u->size() != n) throw invalid_input_error("build_q: u size mismatch");
            const Eigen::MatrixXd& et = need_etilde();
            Eigen::VectorXcd expu = (-eps * u->array()).exp().cast<std::complex<double>>();
            diag[0] = Eigen::MatrixXcd(expu.asDiagonal());
            for (int j = 1; j <= ntau; ++j) {
                Eigen::VectorXcd d =
                    (1.0 - I * sq * h.values.row(j - 1).transpose().array()) * expu.array();
                diag[j] = Eigen::MatrixXcd(d.asDiagonal());
            }
            Eigen::MatrixXcd expEt =
                semigroup(OneBodyOperator{E.lattice, et, false}, eps).cast<std::complex<double>>();
            for (int j = 0; j < ntau; ++j) super[j] = -expEt;
            break;
        }
        case BlockVariant::Q3: {
            const Eigen::MatrixXd& et = need_etilde();
            for (int j = 1; j <= ntau; ++j) {
                Eigen::VectorXcd d = 1.0 - I * sq * h.values.row(j - 1).transpose().array();
                diag[j] = Eigen::MatrixXcd(d.asDiagonal());
            }
            Eigen::MatrixXcd s = -(id - eps * et.cast<std::complex<double>>());
            for (int j = 0; j < ntau; ++j) super[j] = s;
            break;
        }
        case BlockVariant::Q4: {
            const Eigen::MatrixXd& et = need_etilde();
            Eigen::MatrixXcd base = id + eps * et.cast<std::complex<double>>();
            diag[0] = base;
            for (int j = 1; j <= ntau; ++j) {
                diag[j] = base;
                diag[j].diagonal() -= I * sq * h.values.row(j - 1).transpose();
            }
            for (int j = 0; j < ntau; ++j) super[j] = -id;
            break;
        }
    }
    return BlockOperator(variant, E.lattice, ntau, eps, std::move(diag), std::move(super),
                         std::move(corner));
}

BlockCovariance invert(const BlockOperator& op) {
    const int ntau = op.ntau();
    const int n = op.lattice().nsites();
    const bool periodic = op.variant() == BlockVariant::K;
    BlockCovariance cov(op.lattice(), ntau, !periodic);

    // diagonal inverses and the back-substitution steps -D_j^{-1} S_j
    std::vector<Eigen::MatrixXcd> dinv(ntau + 1);
    for (int j = 0; j <= ntau; ++j) dinv[j] = checked_inverse(op.diag(j), "invert: singular diagonal block");
    std::vector<Eigen::MatrixXcd> step(ntau);
    for (int j = 0; j < ntau; ++j) step[j] = -(dinv[j] * op.super(j));

    // triangular part: C_{j,j'} = step_j ... step_{j'-1} D_{j'}^{-1}
    for (int j = ntau; j >= 0; --j) {
        cov.block(j, j) = dinv[j];
        for (int jp = j + 1; jp <= ntau; ++jp) cov.block(j, jp) = step[j] * cov.block(j + 1, jp);
    }

    if (periodic) {
        // prefix[j] = A_1 ... A_j, suffix[j] = A_{j+1} ... A_ntau, P = prefix[ntau]
        std::vector<Eigen::MatrixXcd> prefix(ntau + 1), suffix(ntau + 1);
        prefix[0] = Eigen::MatrixXcd::Identity(n, n);
        for (int j = 1; j <= ntau; ++j) prefix[j] = prefix[j - 1] * chain_factor(op, j);
        suffix[ntau] = Eigen::MatrixXcd::Identity(n, n);
        for (int j = ntau - 1; j >= 0; --j) suffix[j] = chain_factor(op, j + 1) * suffix[j + 1];

        Eigen::MatrixXcd one_minus_p = Eigen::MatrixXcd::Identity(n, n) - prefix[ntau];
        Eigen::MatrixXcd resolvent = checked_inverse(one_minus_p, "invert: singular 1 - P");
        for (int j = 0; j <= ntau; ++j) {
            Eigen::MatrixXcd left = suffix[j] * resolvent;
            for (int jp = 0; jp <= ntau; ++jp) cov.block(j, jp) += left * prefix[jp];
        }
    }

    // residual of op * cov - 1, using the sparse row structure of op
    double res = 0.0;
    for (int j = 0; j <= ntau; ++j) {
        for (int jp = 0; jp <= ntau; ++jp) {
            if (!periodic && jp < j) continue;  // exact zeros by construction
            Eigen::MatrixXcd r = op.diag(j) * cov.block(j, jp);
            if (j < ntau) r += op.super(j) * cov.block(j + 1, jp);
            if (periodic && j == ntau) r += op.corner() * cov.block(0, jp);
            if (j == jp) r -= Eigen::MatrixXcd::Identity(n, n);
            res = std::max(res, r.cwiseAbs().maxCoeff());
        }
    }
    cov.set_residual(res);
    if (!std::isfinite(res) || res > 1e-6) throw numeric_error("invert: residual check failed");
    return cov;
}

BlockCovariance green_free(const OneBodyOperator& E_minus_mu, double beta, int ntau) {
    if (ntau < 1) throw invalid_input_error("green_free: ntau must be >= 1");
    if (!(beta > 0.0)) throw invalid_input_error("green_free: beta must be positive");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(E_minus_mu.matrix);
    if (es.info() != Eigen::Success) throw numeric_error("green_free: eigendecomposition failed");
    if (es.eigenvalues()(0) <= 0.0) throw invalid_input_error("green_free: need E - mu > 0");

    const double eps = beta / ntau;
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Eigen::MatrixXd& U = es.eigenvectors();
    Eigen::ArrayXd geom = 1.0 / (1.0 - (-beta * lam.array()).exp());

    BlockCovariance cov(E_minus_mu.lattice, ntau, false);
    for (int j = 0; j <= ntau; ++j) {
        for (int jp = 0; jp <= ntau; ++jp) {
            double t = jp >= j ? (jp - j) * eps : beta - (j - jp) * eps;
            Eigen::VectorXd g = (geom * (-t * lam.array()).exp()).matrix();
            cov.block(j, jp) = (U * g.asDiagonal() * U.transpose()).cast<std::complex<double>>();
        }
    }
    return cov;
}

std::complex<double> det_block(const BlockOperator& op) {
    switch (op.variant()) {
        case BlockVariant::Q:
            return 1.0;  // unit-diagonal triangular: exact, not computed
        case BlockVariant::Q1:
        case BlockVariant::Q2:
        case BlockVariant::Q3: {
            std::complex<double> d = 1.0;
            for (int j = 0; j <= op.ntau(); ++j) d *= op.diag(j).diagonal().prod();
            return d;
        }
        case BlockVariant::Q4: {
            std::complex<double> d = 1.0;
            for (int j = 0; j <= op.ntau(); ++j) d *= op.diag(j).determinant();
            return d;
        }
        case BlockVariant::K:
            return op.dense().determinant();
    }
    throw invalid_input_error("det_block: unknown variant");
}

double uniform_bound_violation(const BlockCovariance& cov_h, const BlockCovariance& cov_0) {
    if (cov_h.ntau() != cov_0.ntau() || cov_h.lattice().nsites() != cov_0.lattice().nsites()) {
        throw invalid_input_error("uniform_bound_violation: shape mismatch");
    }
    double worst = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= cov_h.ntau(); ++j) {
        for (int jp = 0; jp <= cov_h.ntau(); ++jp) {
            Eigen::ArrayXXd diff =
                cov_h.block(j, jp).cwiseAbs().array() - cov_0.block(j, jp).real().array();
            worst = std::max(worst, diff.maxCoeff());
        }
    }
    return worst;
}

double herm_part_min_eig(const BlockOperator& op) {
    Eigen::MatrixXcd m = op.dense();
    Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw numeric_error("herm_part_min_eig: eigensolver failed");
    return es.eigenvalues()(0);
}

TrotterRemainder trotter_remainder(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, double t) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
        throw invalid_input_error("trotter_remainder: need square matrices of equal size");
    }
    if (t < 0.0) throw invalid_input_error("trotter_remainder: t must be nonnegative");
    Eigen::MatrixXcd lhs = (t * (A + B)).exp();
    Eigen::MatrixXcd rhs = (t * A).exp() * (t * B).exp();
    double actual = two_norm(lhs - rhs);
    double na = two_norm(A), nb = two_norm(B);
    double comm = two_norm(A * B - B * A);
    double bound = t * t * std::exp(t * (2.0 * nb + 4.0 * na)) * 0.5 * comm;
    return TrotterRemainder{actual, bound};
}

}  // namespace latboson
