#pragma once

#include <latboson/lattice.hpp>

#include "config.hpp"

namespace latboson::cli {

struct Model {
    latboson::TorusLattice lattice;
    latboson::OneBodyOperator E;          // kinetic operator (no chemical potential)
    latboson::OneBodyOperator E_minus_mu; // kinetic operator shifted by ensemble.mu
    latboson::InteractionOperator v;
    int N;
    double mu;
    double beta;
};

inline Model build_model(const Config& cfg) {
    using namespace latboson;
    int d = cfg.get_int("model.d", 1);
    int L = cfg.get_int("model.L", 2);
    double eta = cfg.get_double("model.eta", 1.0);
    TorusLattice lattice(d, L, eta);

    KineticKind kind = Laplacian{};
    std::string ks = cfg.get("model.kinetic", "laplacian");
    if (ks == "laplacian") {
        kind = Laplacian{};
    } else if (ks == "laplacian_plus_mass") {
        kind = LaplacianPlusMass{cfg.get_double("model.m2", 1.0)};
    } else if (ks == "external_potential") {
        kind = ExternalPotential{cfg.get_list("model.W", {})};
    } else {
        throw config_parse_error("unknown model.kinetic: " + ks);
    }

    InteractionKind ik = Onsite{1.0};
    std::string is = cfg.get("model.interaction", "onsite");
    if (is == "onsite") {
        ik = Onsite{cfg.get_double("model.v0", 1.0)};
    } else if (is == "profile") {
        ik = Profile{cfg.get_list("model.profile", {})};
    } else {
        throw config_parse_error("unknown model.interaction: " + is);
    }

    double mu = cfg.get_double("ensemble.mu", 0.0);
    return Model{lattice,
                 build_kinetic(lattice, kind, 0.0),
                 build_kinetic(lattice, kind, mu),
                 build_interaction(lattice, ik),
                 cfg.get_int("ensemble.N", 2),
                 mu,
                 cfg.get_double("ensemble.beta", 1.0)};
}

}  // namespace latboson::cli
