#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <latboson/condensate.hpp>
#include <latboson/covariance.hpp>
#include <latboson/fock.hpp>
#include <latboson/hs.hpp>
#include <latboson/permanent.hpp>
#include <latboson/walks.hpp>

#include "checks.hpp"
#include "config.hpp"
#include "model.hpp"
#include "output.hpp"

namespace {

using latboson::cli::Config;
using latboson::cli::Model;
using latboson::cli::Table;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int workers = 0;
    bool quick = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "configuration file (section.key = value lines)");
    cmd->add_option("--set", args.overrides, "override, repeatable: section.key=value");
    cmd->add_option("--out", args.out_path, "output file path (default stdout)");
    cmd->add_option("--seed", args.seed, "random seed")->each([&](const std::string&) {
        args.seed_given = true;
    });
    cmd->add_option("--workers", args.workers, "worker threads for sampling");
    cmd->add_flag("--quick", args.quick, "reduced sweep sizes");
}

Config load_config(const CommonArgs& args) {
    Config cfg;
    if (!args.config_path.empty()) cfg.load_file(args.config_path);
    for (const auto& o : args.overrides) cfg.apply_override(o);
    if (args.seed_given) cfg.apply_override("mc.seed=" + std::to_string(args.seed));
    if (args.workers > 0) cfg.apply_override("mc.workers=" + std::to_string(args.workers));
    return cfg;
}

latboson::BlockVariant variant_from(const Config& cfg) {
    std::string v = cfg.get("discretization.variant", "Q");
    if (v == "Q") return latboson::BlockVariant::Q;
    if (v == "Q1") return latboson::BlockVariant::Q1;
    if (v == "Q2") return latboson::BlockVariant::Q2;
    if (v == "Q3") return latboson::BlockVariant::Q3;
    if (v == "Q4") return latboson::BlockVariant::Q4;
    throw latboson::cli::config_parse_error("unknown discretization.variant: " + v);
}

struct Emitter {
    Config cfg;
    std::string subcommand;
    std::string out_path;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void write(const Table& t, const std::map<std::string, double>& extras = {}) const {
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::string format = cfg.get("output.format", "");
        std::string path = out_path.empty() ? cfg.get("output.path", "") : out_path;
        if (format.empty()) {
            format = path.size() > 5 && path.substr(path.size() - 5) == ".json" ? "json" : "csv";
        }
        latboson::cli::emit(t, cfg, subcommand, extras, wall, path, format);
    }
};

int cmd_exact(const Config& cfg, const Emitter& em) {
    Model m = latboson::cli::build_model(cfg);
    double z = latboson::canonical_z_exact(m.E, m.v, m.N, m.beta);
    Table t{{"x", "y", "corr_re", "corr_im", "z_exact"}, {}};
    for (int x = 0; x < m.lattice.nsites(); ++x) {
        for (int y = 0; y < m.lattice.nsites(); ++y) {
            auto c = latboson::canonical_correlation(m.E, m.v, m.N, m.beta, x, y);
            t.rows.push_back({static_cast<double>(x), static_cast<double>(y), c.real(), c.imag(), z});
        }
    }
    em.write(t, {{"z_exact", z}});
    return 0;
}

int cmd_trotter(const Config& cfg, const Emitter& em) {
    Model m = latboson::cli::build_model(cfg);
    Table t{{"ntau", "z_ntau"}, {}};
    for (int nt : cfg.get_int_list("discretization.ntau", {8, 16, 32, 64})) {
        t.rows.push_back({static_cast<double>(nt), latboson::canonical_z_trotter(m.E, m.v, m.N, m.beta, nt)});
    }
    em.write(t);
    return 0;
}

int cmd_converge(const Config& cfg, const Emitter& em) {
    Model m = latboson::cli::build_model(cfg);
    double z = latboson::canonical_z_exact(m.E, m.v, m.N, m.beta);
    Table t{{"ntau", "z_ntau", "z_exact", "abs_err"}, {}};
    std::vector<double> lx, ly;
    for (int nt : cfg.get_int_list("discretization.ntau", {8, 16, 32, 64})) {
        double zn = latboson::canonical_z_trotter(m.E, m.v, m.N, m.beta, nt);
        double err = std::abs(zn - z);
        t.rows.push_back({static_cast<double>(nt), zn, z, err});
        if (err > 0) {
            lx.push_back(std::log(static_cast<double>(nt)));
            ly.push_back(std::log(err));
        }
    }
    double slope = std::nan("");
    if (lx.size() >= 2) {
        double n = static_cast<double>(lx.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sx += lx[i];
            sy += ly[i];
            sxx += lx[i] * lx[i];
            sxy += lx[i] * ly[i];
        }
        slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    em.write(t, {{"slope", slope}});
    std::fprintf(stderr, "fitted log-log slope: %.4f\n", slope);
    return 0;
}

int cmd_hs_mc(const Config& cfg, const Emitter& em) {
    Model m = latboson::cli::build_model(cfg);
    auto variant = variant_from(cfg);
    std::uint64_t nsamples = cfg.get_u64("mc.nsamples", 10000);
    std::uint64_t seed = cfg.get_u64("mc.seed", 1);
    int workers = cfg.get_int("mc.workers", 1);
    Table t{{"ntau", "nsamples", "mean_re", "mean_im", "stderr", "exact", "zscore"}, {}};
    for (int nt : cfg.get_int_list("discretization.ntau", {8})) {
        auto est = latboson::estimate_zc(m.E, m.v, m.N, m.beta, nt, variant, nsamples, seed, workers);
        double exact = std::nan("");
        if (std::pow(m.lattice.nsites(), m.N) <= 1e4) {
            exact = latboson::z_walks_transfer(m.E, m.v, m.N, m.beta, nt);
        }
        double zscore = std::isfinite(exact) ? (est.mean.real() - exact) / est.stderr_re : std::nan("");
        t.rows.push_back({static_cast<double>(nt), static_cast<double>(nsamples), est.mean.real(),
                          est.mean.imag(), est.stderr_re, exact, zscore});
    }
    em.write(t);
    return 0;
}

int cmd_walks(const Config& cfg, const Emitter& em) {
    Model m = latboson::cli::build_model(cfg);
    Table t{{"ntau", "z_transfer", "z_enumerate"}, {}};
    for (int nt : cfg.get_int_list("discretization.ntau", {2, 3, 4})) {
        double zt = latboson::z_walks_transfer(m.E, m.v, m.N, m.beta, nt);
        double ze = std::nan("");
        double cost = std::pow(m.lattice.nsites(), (nt - 1) * m.N) * std::tgamma(m.N + 1.0);
        if (cost <= 1e7) ze = latboson::z_walks_enumerate(m.E, m.v, m.N, m.beta, nt);
        t.rows.push_back({static_cast<double>(nt), zt, ze});
    }
    em.write(t);
    return 0;
}

int cmd_grand(const Config& cfg, const Emitter& em) {
    Model m = latboson::cli::build_model(cfg);
    int ncut = cfg.get_int("ensemble.ncut", 40);
    std::uint64_t nsamples = cfg.get_u64("mc.nsamples", 10000);
    std::uint64_t seed = cfg.get_u64("mc.seed", 1);
    int workers = cfg.get_int("mc.workers", 1);
    auto exact = latboson::grand_z_exact(m.E, m.v, m.mu, m.beta, ncut);
    Table t{{"ntau", "nsamples", "mean_re", "mean_im", "stderr", "exact", "zscore"}, {}};
    for (int nt : cfg.get_int_list("discretization.ntau", {8})) {
        auto est = latboson::estimate_zg(m.E_minus_mu, m.v, m.beta, nt, nsamples, seed, workers);
        double zscore = (est.mean.real() - exact.value) / est.stderr_re;
        t.rows.push_back({static_cast<double>(nt), static_cast<double>(nsamples), est.mean.real(),
                          est.mean.imag(), est.stderr_re, exact.value, zscore});
    }
    em.write(t, {{"grand_exact", exact.value}, {"tail_estimate", exact.tail_estimate}});
    return 0;
}

int cmd_bogoliubov(const Config& cfg, const Emitter& em) {
    double w = cfg.get_double("bogoliubov.w", 1.0);
    double tt = cfg.get_double("bogoliubov.t", 1.0);
    int d = cfg.get_int("bogoliubov.d", 3);
    int grid_n = cfg.get_int("bogoliubov.grid_n", 128);
    double box = cfg.get_double("bogoliubov.box", 40.0);
    double pmax = cfg.get_double("bogoliubov.pmax", 5.0);
    int steps = cfg.get_int("bogoliubov.psteps", 50);
    Table t{{"p", "e_b"}, {}};
    for (int i = 0; i <= steps; ++i) {
        double p = pmax * i / steps;
        t.rows.push_back({p, latboson::bogoliubov_dispersion(p, w)});
    }
    auto kr = latboson::kernel_positivity(w, tt, d, grid_n, box);
    em.write(t, {{"kernel_min", kr.min_value},
                 {"kernel_origin", kr.value_at_origin},
                 {"poisson_ref", kr.poisson_ref}});
    std::fprintf(stderr, "kernel: min %.6g, origin %.6g, reference %.6g\n", kr.min_value,
                 kr.value_at_origin, kr.poisson_ref);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice-boson partition-function laboratory"};
    app.require_subcommand(1);

    std::map<std::string, CommonArgs> args;
    for (const char* name : {"exact", "trotter", "hs-mc", "walks", "grand", "converge",
                             "bogoliubov", "check"}) {
        add_common(app.add_subcommand(name), args[name]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string sub = app.get_subcommands().front()->get_name();
    const CommonArgs& a = args[sub];
    try {
        Config cfg = load_config(a);
        if (a.quick) cfg.apply_override("run.quick=1");
        Emitter em{cfg, sub, a.out_path};
        if (sub == "exact") return cmd_exact(cfg, em);
        if (sub == "trotter") return cmd_trotter(cfg, em);
        if (sub == "converge") return cmd_converge(cfg, em);
        if (sub == "hs-mc") return cmd_hs_mc(cfg, em);
        if (sub == "walks") return cmd_walks(cfg, em);
        if (sub == "grand") return cmd_grand(cfg, em);
        if (sub == "bogoliubov") return cmd_bogoliubov(cfg, em);
        if (sub == "check") {
            int failures = latboson::cli::run_checks(a.quick, cfg.get_u64("mc.seed", 1),
                                                     std::max(1, cfg.get_int("mc.workers", 2)));
            return failures == 0 ? 0 : 1;
        }
    } catch (const latboson::cli::config_parse_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
