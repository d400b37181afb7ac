#include "latboson/condensate.hpp"

#include <fftw3.h>

#include <cmath>
#include <vector>

namespace latboson {

void CondensateParams::validate() const {
    if (!(sigma > 0.0) || !(beta > 0.0) || v < 0.0) {
        throw invalid_input_error("condensate parameters: need sigma > 0, beta > 0, v >= 0");
    }
}

double f_gamma(const CondensateParams& p, double gamma) {
    p.validate();
    if (!(gamma > 0.0)) throw invalid_input_error("f_gamma: gamma must be positive");
    return p.sigma * ((1.0 + p.beta * p.m) * gamma + 0.5 * p.v * p.beta * gamma * gamma) - 1.0 -
           std::log(p.sigma * gamma);
}

double gamma_star(const CondensateParams& p) {
    p.validate();
    const double a = p.sigma * p.v * p.beta;
    const double b = p.sigma * (1.0 + p.beta * p.m);
    double root;
    if (a == 0.0) {
        if (b <= 0.0) throw invalid_input_error("gamma_star: no positive stationary point");
        root = 1.0 / b;
    } else {
        double disc = b * b + 4.0 * a;
        root = (-b + std::sqrt(disc)) / (2.0 * a);
        if (!(root > 0.0)) throw invalid_input_error("gamma_star: no positive stationary point");
    }
    double fprime = p.sigma * ((1.0 + p.beta * p.m) + p.v * p.beta * root) - 1.0 / root;
    if (std::abs(fprime) > 1e-12) throw numeric_error("gamma_star: stationarity residual too large");
    return root;
}

Eigen::MatrixXcd bogoliubov_form(std::complex<double> c, double eps, double m, double v,
                                 const OneBodyOperator& E_block) {
    const int n = E_block.lattice.nsites();
    Eigen::MatrixXcd base =
        Eigen::MatrixXcd::Identity(n, n) * (1.0 + eps * m) + eps * E_block.matrix;
    Eigen::MatrixXcd out(2 * n, 2 * n);
    const double c2 = std::norm(c);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    out.topLeftCorner(n, n) = base + eps * v * c2 * id;
    out.bottomRightCorner(n, n) = base + eps * v * c2 * id;
    out.topRightCorner(n, n) = eps * v * (c * c) * id;
    out.bottomLeftCorner(n, n) = eps * v * std::conj(c * c) * id;
    return out;
}

double bogoliubov_dispersion(double p_norm, double w) {
    if (p_norm < 0.0 || w < 0.0) throw invalid_input_error("bogoliubov_dispersion: need p, w >= 0");
    return p_norm * std::sqrt(w * w + p_norm * p_norm);
}

KernelReport kernel_positivity(double w, double t, int d, int grid_n, double box) {
    if (!(w >= 0.0) || !(t > 0.0) || !(box > 0.0)) {
        throw invalid_input_error("kernel_positivity: need w >= 0, t > 0, box > 0");
    }
    if (d < 1 || d > 3) throw invalid_input_error("kernel_positivity: d must be 1, 2 or 3");
    if (grid_n < 2 || (grid_n & (grid_n - 1)) != 0) {
        throw invalid_input_error("kernel_positivity: grid_n must be a power of two");
    }

    // The symbol is even in every momentum component, so the transform over
    // the symmetric grid p_k = 2 pi k / box, k = -n/2+1 .. n/2, reduces to a
    // type-I cosine transform on the m = n/2 + 1 nonnegative frequencies.
    const int m = grid_n / 2 + 1;
    const double dp = 2.0 * std::acos(-1.0) / box;

    std::size_t total = 1;
    for (int k = 0; k < d; ++k) total *= m;
    std::vector<double> data(total);

    std::vector<int> idx(d, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        double p2 = 0.0;
        for (int k = 0; k < d; ++k) {
            double pk = idx[k] * dp;
            p2 += pk * pk;
        }
        // w = 0 selects the |p| factor kernel (the Poisson case used as the
        // closed-form reference); w > 0 gives the full dispersion symbol.
        double pn = std::sqrt(p2);
        data[flat] = std::exp(-t * (w == 0.0 ? pn : bogoliubov_dispersion(pn, w)));
        for (int k = d - 1; k >= 0; --k) {
            if (++idx[k] < m) break;
            idx[k] = 0;
        }
    }

    std::vector<int> dims(d, m);
    std::vector<fftw_r2r_kind> kinds(d, FFTW_REDFT00);
    fftw_plan plan = fftw_plan_r2r(d, dims.data(), data.data(), data.data(), kinds.data(),
                                   FFTW_ESTIMATE);
    if (plan == nullptr) throw numeric_error("kernel_positivity: transform planning failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    const double scale = 1.0 / std::pow(box, d);
    double min_value = std::numeric_limits<double>::infinity();
    for (double y : data) min_value = std::min(min_value, y * scale);
    double origin = data[0] * scale;

    double poisson = 0.0;
    if (d == 3 && w == 0.0) {
        double pi = std::acos(-1.0);
        poisson = t / (pi * pi * t * t * t * t);  // (1/pi^2) t/(t^2+r^2)^2 at r = 0
    }
    return KernelReport{min_value, origin, poisson};
}

}  // namespace latboson
