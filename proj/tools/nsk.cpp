// Command-line front end: validates a config, reports hypothesis-gate
// warnings, and dispatches the named experiment.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "nsk/experiment.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    long long seed = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file");
    cmd->add_option("--seed", opts.seed, "override the run seed");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--override", opts.overrides,
                    "config override as section.key=value (repeatable)");
}

int execute(nsk::ExperimentKind kind, const CommonOpts& opts) {
    nsk::json raw = nsk::json::object();
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path);
        if (!in) {
            std::cerr << "error: cannot open config " << opts.config_path << "\n";
            return 2;
        }
        try {
            in >> raw;
        } catch (const std::exception& e) {
            std::cerr << "error: config parse failure: " << e.what() << "\n";
            return 2;
        }
    }
    try {
        for (const auto& ov : opts.overrides) nsk::apply_override(raw, ov);
        if (opts.seed >= 0) raw["seed"] = static_cast<std::uint64_t>(opts.seed);
        if (!opts.out_dir.empty()) raw["output"]["dir"] = opts.out_dir;

        auto vr = nsk::validate_config(raw, kind);
        for (const auto& w : vr.warnings) std::cerr << "warning: " << w << "\n";
        if (!vr.ok()) {
            for (const auto& e : vr.errors) std::cerr << "error: " << e << "\n";
            return 2;
        }
        nsk::json manifest = nsk::run(*vr.config, vr.warnings);
        std::cout << "wrote " << vr.config->out_dir << "/manifest.json ("
                  << manifest["outputs"].size() << " output files)\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-spectral simulator and norm-analysis toolkit for the compressible "
                 "Navier-Stokes-Korteweg system in the zero-sound-speed regime"};
    app.require_subcommand(1);

    struct Sub {
        nsk::ExperimentKind kind;
        const char* help;
    };
    const Sub subs[] = {
        {nsk::ExperimentKind::Classify, "sweep (nu_bar, kappa_bar) and classify spectral regimes"},
        {nsk::ExperimentKind::LinearEvolve, "evolve with the exact linear propagator"},
        {nsk::ExperimentKind::Simulate, "nonlinear exponential time stepping"},
        {nsk::ExperimentKind::Norms, "trajectory with j-resolved norm table output"},
        {nsk::ExperimentKind::Gevrey, "analyticity multiplier norms and radius tracking"},
        {nsk::ExperimentKind::ProbeEstimates, "Monte-Carlo constants for the inequality suite"},
        {nsk::ExperimentKind::Sweep, "run an experiment over a list of parameter values"},
    };

    std::vector<std::unique_ptr<CommonOpts>> opt_store;
    nsk::ExperimentKind chosen{};
    CommonOpts* chosen_opts = nullptr;
    for (const auto& s : subs) {
        auto* cmd = app.add_subcommand(nsk::kind_name(s.kind), s.help);
        opt_store.push_back(std::make_unique<CommonOpts>());
        CommonOpts* opts = opt_store.back().get();
        add_common(cmd, *opts);
        cmd->callback([&chosen, &chosen_opts, s, opts]() {
            chosen = s.kind;
            chosen_opts = opts;
        });
    }

    CLI11_PARSE(app, argc, argv);
    if (!chosen_opts) return 2;
    return execute(chosen, *chosen_opts);
}
