#pragma once

#include <Eigen/Dense>
#include <complex>

#include "latboson/lattice.hpp"

namespace latboson {

struct CondensateParams {
    double sigma;  // inverse density 1/rho
    double beta;
    double m;      // mass term (zero-momentum interaction value)
    double v;      // onsite coupling

    void validate() const;
};

/// Simplified condensate free energy
/// F(gamma) = sigma[(1+beta m) gamma + (v beta/2) gamma^2] - 1 - ln(sigma gamma).
double f_gamma(const CondensateParams& p, double gamma);

/// Unique positive minimizer of F, from the closed-form quadratic root of
/// sigma v beta gamma^2 + sigma(1+beta m) gamma - 1 = 0.
double gamma_star(const CondensateParams& p);

/// Quadratic fluctuation form around a condensate amplitude c:
/// bL(c) = 1_2 (x) (1 + eps m + eps E) + eps v [[|c|^2, c^2],[cbar^2, |c|^2]] (x) 1.
Eigen::MatrixXcd bogoliubov_form(std::complex<double> c, double eps, double m, double v,
                                 const OneBodyOperator& E_block);

/// E_B(p) = |p| sqrt(w^2 + p^2).
double bogoliubov_dispersion(double p_norm, double w);

struct KernelReport {
    double min_value;        // minimum of the real-space kernel on the grid
    double value_at_origin;  // kernel at x = 0
    double poisson_ref;      // d=3, w=0 continuum value at the origin, else 0
};

/// Real-space kernel of p -> exp(-t E_B(p)) on a periodic grid with grid_n
/// points per dimension and period `box`, via a cosine transform (the
/// symbol is even). grid_n must be a power of two. Passing w = 0 selects
/// the symbol exp(-t |p|), whose d=3 transform is the Poisson kernel used
/// as the closed-form reference.
KernelReport kernel_positivity(double w, double t, int d, int grid_n, double box);

}  // namespace latboson
