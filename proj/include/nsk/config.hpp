#pragma once

#include <json.hpp>

#include <optional>
#include <set>

#include "nsk/integrator.hpp"
#include "nsk/random_fields.hpp"

namespace nsk {

using json = nlohmann::json;

enum class ExperimentKind { Classify, LinearEvolve, Simulate, Norms, Gevrey, ProbeEstimates, Sweep };

inline const char* kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Classify: return "classify";
        case ExperimentKind::LinearEvolve: return "linear-evolve";
        case ExperimentKind::Simulate: return "simulate";
        case ExperimentKind::Norms: return "norms";
        case ExperimentKind::Gevrey: return "gevrey";
        case ExperimentKind::ProbeEstimates: return "probe-estimates";
        case ExperimentKind::Sweep: return "sweep";
    }
    return "?";
}

inline ExperimentKind kind_from_name(const std::string& s) {
    for (ExperimentKind k :
         {ExperimentKind::Classify, ExperimentKind::LinearEvolve, ExperimentKind::Simulate,
          ExperimentKind::Norms, ExperimentKind::Gevrey, ExperimentKind::ProbeEstimates,
          ExperimentKind::Sweep})
        if (s == kind_name(k)) return k;
    throw std::invalid_argument("unknown experiment kind: " + s);
}

/// Initial-data recipe, drawn deterministically from the run seed.
struct InitialSpec {
    enum class Kind { Zero, SingleMode, SmoothRandom, White };
    Kind kind = Kind::SmoothRandom;
    double amplitude = 1e-4;
    double decay = 0.5;            // width of the Gaussian spectral envelope
    std::array<int, 3> mode{1, 0, 0};
    bool momentum = true;          // also populate m, not just a

    FluidState build(const TorusGrid& g, std::uint64_t seed) const {
        FluidState st = FluidState::zero(g);
        std::mt19937_64 rng(seed);
        switch (kind) {
            case Kind::Zero: break;
            case Kind::SingleMode: {
                std::size_t flat = 0;
                for (int a = 0; a < g.dim(); ++a) {
                    int k = mode[a] >= 0 ? mode[a] : mode[a] + g.n();
                    flat = flat * g.n() + static_cast<std::size_t>(k);
                }
                st.a.at(0, flat) = 0.5 * amplitude;
                st.a.symmetrize();
                break;
            }
            case Kind::SmoothRandom: {
                st.a = random_gaussian_spectrum(g, rng, 1, decay, amplitude);
                if (momentum) st.m = random_gaussian_spectrum(g, rng, g.dim(), decay, amplitude);
                break;
            }
            case Kind::White: {
                st.a = random_white(g, rng, 1, amplitude);
                if (momentum) st.m = random_white(g, rng, g.dim(), amplitude);
                break;
            }
        }
        dealias(st.a);
        dealias(st.m);
        return st;
    }

    static Kind kind_from_name(const std::string& s) {
        if (s == "zero") return Kind::Zero;
        if (s == "single-mode") return Kind::SingleMode;
        if (s == "smooth-random") return Kind::SmoothRandom;
        if (s == "white") return Kind::White;
        throw std::invalid_argument("unknown initial-data kind: " + s);
    }
};

/// Fully resolved experiment configuration.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Simulate;
    TorusGrid grid = TorusGrid::make(2, 64, 16.0 * M_PI);
    FluidParams params = FluidParams::make(1.0, 1.0, 2.0, 1.0);
    double p = 2.0, q = 2.0;
    int j0 = 0;
    IntegratorConfig integrator;
    std::optional<double> c0_override;
    double fit_lo = 0.1, fit_hi = 10.0;
    InitialSpec initial;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::string snapshot_format = "none"; // none | csv | binary

    // classify sweep ranges
    double nu_min = 0.5, nu_max = 4.0;
    int nu_count = 20;
    double kappa_min = 0.1, kappa_max = 4.0;
    int kappa_count = 20;

    // probe options
    int probe_samples = 64;
    int probe_n = 32;
    int probe_dim = 2;
    double probe_decay = 2.0;

    // norms/gevrey options
    bool linear_flow = false;

    // sweep options
    std::string sweep_path;       // dotted config key, e.g. "initial.amplitude"
    std::vector<double> sweep_values;
    ExperimentKind sweep_kind = ExperimentKind::Simulate;

    json resolved; // the validated raw document, for the manifest

    double c0(const FluidParams& pp) const {
        return c0_override ? *c0_override : default_gevrey_c0(pp);
    }
};

struct ValidationResult {
    std::optional<ExperimentConfig> config;
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    bool ok() const { return errors.empty(); }
};

namespace detail {

inline void check_keys(const json& obj, const std::string& where,
                       const std::set<std::string>& allowed, std::vector<std::string>& errors) {
    if (!obj.is_object()) {
        errors.push_back(where + ": expected an object");
        return;
    }
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            errors.push_back(where + ": unknown key '" + it.key() + "'");
}

inline Polynomial poly_from(const json& arr) {
    std::vector<double> c = arr.get<std::vector<double>>();
    if (c.empty()) c.push_back(0.0);
    return Polynomial(std::move(c));
}

} // namespace detail

/// Validate a raw config document.  Hard errors (unknown keys, inadmissible
/// physics) are collected; hypothesis-gate violations come back as warnings
/// so runs outside the covered theory remain possible but never silent.
inline ValidationResult validate_config(const json& raw,
                                        std::optional<ExperimentKind> kind_override = {}) {
    ValidationResult res;
    auto& errors = res.errors;
    ExperimentConfig cfg;

    detail::check_keys(raw, "config",
                       {"grid", "params", "indices", "integrator", "gevrey", "initial",
                        "experiment", "seed", "output", "classify", "probes", "norms", "sweep"},
                       errors);
    if (!errors.empty()) return res;

    try {
        if (raw.contains("experiment")) cfg.kind = kind_from_name(raw["experiment"].get<std::string>());
        if (kind_override) cfg.kind = *kind_override;

        if (raw.contains("seed")) cfg.seed = raw["seed"].get<std::uint64_t>();

        int dim = 2, n = 64;
        double period = 16.0 * M_PI;
        if (raw.contains("grid")) {
            const json& g = raw["grid"];
            detail::check_keys(g, "grid", {"dim", "n", "period", "period_over_2pi"}, errors);
            if (g.contains("period") && g.contains("period_over_2pi"))
                errors.push_back("grid: give either period or period_over_2pi, not both");
            if (!errors.empty()) return res;
            if (g.contains("dim")) dim = g["dim"].get<int>();
            if (g.contains("n")) n = g["n"].get<int>();
            if (g.contains("period")) period = g["period"].get<double>();
            if (g.contains("period_over_2pi")) period = 2.0 * M_PI * g["period_over_2pi"].get<double>();
        }
        cfg.grid = TorusGrid::make(dim, n, period);

        double mu_bar = 1.0, lambda_bar = 1.0, kappa_bar = 2.0, rho_star = 1.0;
        std::optional<Polynomial> P, Mu, La, Ka;
        if (raw.contains("params")) {
            const json& p = raw["params"];
            detail::check_keys(
                p, "params",
                {"mu_bar", "lambda_bar", "kappa_bar", "rho_star", "pressure", "mu", "lambda", "kappa"},
                errors);
            if (!errors.empty()) return res;
            if (p.contains("mu_bar")) mu_bar = p["mu_bar"].get<double>();
            if (p.contains("lambda_bar")) lambda_bar = p["lambda_bar"].get<double>();
            if (p.contains("kappa_bar")) kappa_bar = p["kappa_bar"].get<double>();
            if (p.contains("rho_star")) rho_star = p["rho_star"].get<double>();
            if (p.contains("pressure")) P = detail::poly_from(p["pressure"]);
            if (p.contains("mu")) Mu = detail::poly_from(p["mu"]);
            if (p.contains("lambda")) La = detail::poly_from(p["lambda"]);
            if (p.contains("kappa")) Ka = detail::poly_from(p["kappa"]);
        }
        cfg.params = FluidParams::from_closures(
            rho_star, P ? *P : Polynomial({1.0, 0.0, 1.0}),
            Mu ? *Mu : Polynomial::constant(mu_bar * rho_star),
            La ? *La : Polynomial::constant(lambda_bar * rho_star),
            Ka ? *Ka : Polynomial::constant(kappa_bar / rho_star));

        if (raw.contains("indices")) {
            const json& ix = raw["indices"];
            detail::check_keys(ix, "indices", {"p", "q", "j0"}, errors);
            if (!errors.empty()) return res;
            if (ix.contains("p")) cfg.p = ix["p"].get<double>();
            if (ix.contains("q")) cfg.q = ix["q"].get<double>();
            if (ix.contains("j0")) cfg.j0 = ix["j0"].get<int>();
        }
        if (cfg.p < 1.0 || cfg.q < 1.0) errors.push_back("indices: p and q must be >= 1");

        if (raw.contains("integrator")) {
            const json& it = raw["integrator"];
            detail::check_keys(it, "integrator",
                               {"scheme", "dt", "t_end", "adapt", "adapt_tol", "dt_min", "dt_max",
                                "snapshot_stride", "density_margin"},
                               errors);
            if (!errors.empty()) return res;
            if (it.contains("scheme"))
                cfg.integrator.scheme = IntegratorConfig::scheme_from_name(it["scheme"].get<std::string>());
            if (it.contains("dt")) cfg.integrator.dt = it["dt"].get<double>();
            if (it.contains("t_end")) cfg.integrator.t_end = it["t_end"].get<double>();
            if (it.contains("adapt")) cfg.integrator.adapt = it["adapt"].get<bool>();
            if (it.contains("adapt_tol")) cfg.integrator.adapt_tol = it["adapt_tol"].get<double>();
            if (it.contains("dt_min")) cfg.integrator.dt_min = it["dt_min"].get<double>();
            if (it.contains("dt_max")) cfg.integrator.dt_max = it["dt_max"].get<double>();
            if (it.contains("snapshot_stride"))
                cfg.integrator.snapshot_stride = it["snapshot_stride"].get<int>();
            if (it.contains("density_margin"))
                cfg.integrator.density_margin = it["density_margin"].get<double>();
            cfg.integrator.validate();
        }

        if (raw.contains("gevrey")) {
            const json& gv = raw["gevrey"];
            detail::check_keys(gv, "gevrey", {"c0", "fit_lo", "fit_hi"}, errors);
            if (!errors.empty()) return res;
            if (gv.contains("c0") && !gv["c0"].is_null()) cfg.c0_override = gv["c0"].get<double>();
            if (gv.contains("fit_lo")) cfg.fit_lo = gv["fit_lo"].get<double>();
            if (gv.contains("fit_hi")) cfg.fit_hi = gv["fit_hi"].get<double>();
        }

        if (raw.contains("initial")) {
            const json& in = raw["initial"];
            detail::check_keys(in, "initial", {"kind", "amplitude", "decay", "mode", "momentum"},
                               errors);
            if (!errors.empty()) return res;
            if (in.contains("kind"))
                cfg.initial.kind = InitialSpec::kind_from_name(in["kind"].get<std::string>());
            if (in.contains("amplitude")) cfg.initial.amplitude = in["amplitude"].get<double>();
            if (in.contains("decay")) cfg.initial.decay = in["decay"].get<double>();
            if (in.contains("momentum")) cfg.initial.momentum = in["momentum"].get<bool>();
            if (in.contains("mode")) {
                auto v = in["mode"].get<std::vector<int>>();
                for (std::size_t i = 0; i < v.size() && i < 3; ++i) cfg.initial.mode[i] = v[i];
            }
        }

        if (raw.contains("output")) {
            const json& o = raw["output"];
            detail::check_keys(o, "output", {"dir", "snapshots"}, errors);
            if (!errors.empty()) return res;
            if (o.contains("dir")) cfg.out_dir = o["dir"].get<std::string>();
            if (o.contains("snapshots")) {
                cfg.snapshot_format = o["snapshots"].get<std::string>();
                if (cfg.snapshot_format != "none" && cfg.snapshot_format != "csv" &&
                    cfg.snapshot_format != "binary")
                    errors.push_back("output.snapshots must be none, csv or binary");
            }
        }

        if (raw.contains("classify")) {
            const json& c = raw["classify"];
            detail::check_keys(c, "classify",
                               {"nu_min", "nu_max", "nu_count", "kappa_min", "kappa_max",
                                "kappa_count"},
                               errors);
            if (!errors.empty()) return res;
            if (c.contains("nu_min")) cfg.nu_min = c["nu_min"].get<double>();
            if (c.contains("nu_max")) cfg.nu_max = c["nu_max"].get<double>();
            if (c.contains("nu_count")) cfg.nu_count = c["nu_count"].get<int>();
            if (c.contains("kappa_min")) cfg.kappa_min = c["kappa_min"].get<double>();
            if (c.contains("kappa_max")) cfg.kappa_max = c["kappa_max"].get<double>();
            if (c.contains("kappa_count")) cfg.kappa_count = c["kappa_count"].get<int>();
        }

        if (raw.contains("probes")) {
            const json& pr = raw["probes"];
            detail::check_keys(pr, "probes", {"samples", "n", "dim", "decay"}, errors);
            if (!errors.empty()) return res;
            if (pr.contains("samples")) cfg.probe_samples = pr["samples"].get<int>();
            if (pr.contains("n")) cfg.probe_n = pr["n"].get<int>();
            if (pr.contains("dim")) cfg.probe_dim = pr["dim"].get<int>();
            if (pr.contains("decay")) cfg.probe_decay = pr["decay"].get<double>();
        }

        if (raw.contains("norms")) {
            const json& nm = raw["norms"];
            detail::check_keys(nm, "norms", {"linear"}, errors);
            if (!errors.empty()) return res;
            if (nm.contains("linear")) cfg.linear_flow = nm["linear"].get<bool>();
        }

        if (raw.contains("sweep")) {
            const json& sw = raw["sweep"];
            detail::check_keys(sw, "sweep", {"path", "values", "kind"}, errors);
            if (!errors.empty()) return res;
            if (sw.contains("path")) cfg.sweep_path = sw["path"].get<std::string>();
            if (sw.contains("values")) cfg.sweep_values = sw["values"].get<std::vector<double>>();
            if (sw.contains("kind")) cfg.sweep_kind = kind_from_name(sw["kind"].get<std::string>());
        }
    } catch (const std::exception& e) {
        errors.push_back(e.what());
    }
    if (!errors.empty()) return res;

    // Hypothesis gates: warnings, never silent passes.
    const double d = cfg.grid.dim();
    auto warn = [&](const std::string& s) { res.warnings.push_back("outside theorem hypotheses: " + s); };
    if (!(1.0 <= cfg.q && cfg.q <= cfg.p))
        warn("index condition 1 <= q <= p violated (q=" + std::to_string(cfg.q) +
             ", p=" + std::to_string(cfg.p) + ")");
    if (!(cfg.p <= 2.0 * cfg.q)) warn("index condition p <= 2q violated");
    if (!(cfg.p < d))
        warn("index condition p < d violated (p=" + std::to_string(cfg.p) +
             ", d=" + std::to_string(cfg.grid.dim()) + ")");
    if (!(1.0 / cfg.q < 1.0 / cfg.p + 2.0 / d)) warn("index condition 1/q < 1/p + 2/d violated");
    if (cfg.grid.dim() < 3) warn("dimension d < 3");
    if (cfg.params.regime() == Regime::Complex &&
        (cfg.kind == ExperimentKind::Simulate || cfg.kind == ExperimentKind::Norms ||
         cfg.kind == ExperimentKind::Sweep))
        warn("complex spectral regime for a nonlinear run (covered theory needs nu_bar^2 >= 4 kappa_bar)");
    if (cfg.kind == ExperimentKind::Gevrey && cfg.q == 1.0)
        warn("analyticity statement requires q != 1");

    cfg.resolved = raw;
    res.config = cfg;
    return res;
}

/// Apply one --override key=value entry (dotted path) onto a raw document.
inline void apply_override(json& raw, const std::string& entry) {
    auto eq = entry.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("override must look like section.key=value: " + entry);
    std::string path = entry.substr(0, eq), value = entry.substr(eq + 1);
    json* node = &raw;
    std::size_t pos = 0;
    while (true) {
        auto dot = path.find('.', pos);
        std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (dot == std::string::npos) {
            json parsed = json::parse(value, nullptr, false);
            (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
            return;
        }
        node = &(*node)[key];
        pos = dot + 1;
    }
}

} // namespace nsk
