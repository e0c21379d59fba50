#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>

#include "nsk/config.hpp"
#include "nsk/csv.hpp"
#include "nsk/gevrey.hpp"
#include "nsk/probes.hpp"

namespace nsk {

inline constexpr const char* version_string = "0.1.0";

namespace detail {

/// FNV-1a 64-bit over the file bytes, hex encoded.
inline std::string file_checksum(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checksum: cannot open " + path.string());
    std::uint64_t h = 1469598103934665603ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i)
            h = (h ^ static_cast<unsigned char>(buf[i])) * 1099511628211ULL;
        if (!in) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

inline void write_snapshot_csv(const std::filesystem::path& path, double t, const FluidState& s) {
    std::ofstream out(path);
    out << "# schema=1\n# time=" << CsvWriter::fmt(t) << "\nfield,component,flat_index,re,im\n";
    auto dump = [&](const char* name, const SpectralField& f) {
        for (int c = 0; c < f.components(); ++c)
            for (std::size_t i = 0; i < f.modes(); ++i)
                out << name << ',' << c << ',' << i << ',' << CsvWriter::fmt(f.at(c, i).real())
                    << ',' << CsvWriter::fmt(f.at(c, i).imag()) << '\n';
    };
    dump("a", s.a);
    dump("m", s.m);
}

inline void write_snapshot_binary(const std::filesystem::path& path, double t,
                                  const FluidState& s) {
    std::ofstream out(path, std::ios::binary);
    const char magic[8] = {'N', 'S', 'K', 'S', 'N', 'A', 'P', '1'};
    out.write(magic, 8);
    std::int32_t dim = s.grid().dim(), n = s.grid().n();
    double period = s.grid().period();
    out.write(reinterpret_cast<const char*>(&dim), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&period), 8);
    out.write(reinterpret_cast<const char*>(&t), 8);
    auto dump = [&](const SpectralField& f) {
        std::int32_t comps = f.components();
        out.write(reinterpret_cast<const char*>(&comps), 4);
        for (const auto& z : f.raw()) {
            double re = z.real(), im = z.imag();
            out.write(reinterpret_cast<const char*>(&re), 8);
            out.write(reinterpret_cast<const char*>(&im), 8);
        }
    };
    dump(s.a);
    dump(s.m);
}

/// norms.csv rows: j-resolved weighted block norms of the (grad a, m) pair
/// for the sup-part indices, one row per (time, norm side).
inline void write_norms_csv(const std::filesystem::path& path, const TrajectoryRecord& traj,
                            const ExperimentConfig& cfg, const DyadicFilterBank& bank) {
    std::vector<std::string> header{"time", "norm_id"};
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) header.push_back("j" + std::to_string(j));
    header.push_back("total");
    CsvWriter csv(path.string(), header);
    const double d = cfg.grid.dim();
    HybridNormSpec spec(NormSpec(d / cfg.p - 1.0, cfg.p, 1.0), NormSpec(d / cfg.q - 3.0, cfg.q, inf),
                        cfg.j0);
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        SpectralField ga = gradient(traj.states[i].a);
        const SpectralField& m = traj.states[i].m;
        std::vector<std::string> cells{CsvWriter::fmt(traj.times[i]), "state-hybrid-sup"};
        double total = hybrid_norm(ga, spec, bank) + hybrid_norm(m, spec, bank);
        for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
            const NormSpec& side = j >= cfg.j0 ? spec.high : spec.low;
            double w = std::pow(2.0, side.s * j);
            double v = w * (lp_norm(bank.block(ga, j), side.p) + lp_norm(bank.block(m, j), side.p));
            cells.push_back(CsvWriter::fmt(v));
        }
        cells.push_back(CsvWriter::fmt(total));
        csv.row(cells);
    }
}

inline void write_radius_csv(const std::filesystem::path& path, const RadiusSeries& series) {
    CsvWriter csv(path.string(), {"time", "radius", "fit_band_lo", "fit_band_hi", "residual"});
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const auto& e = series.estimates[i];
        csv.row_values({series.times[i], e.radius, e.band_lo, e.band_hi, e.residual});
    }
}

} // namespace detail

/// The default probe suite: every estimate the acceptance gate exercises,
/// with admissible index choices in d = 2 (where p < d forces p < 2).  The
/// Gevrey variants run at a fixed modest rate constant: large rates push all
/// the weight onto the top dyadic shell and destabilize the fitted max.
inline std::vector<std::pair<std::string, std::map<std::string, double>>> default_probe_suite(
    double c0 = 0.45) {
    using M = std::map<std::string, double>;
    std::vector<std::pair<std::string, M>> out;
    out.emplace_back("besov-algebra", M{{"s", 1.0}, {"p", 2.0}, {"r", 1.0}});
    out.emplace_back("product-critical-r1", M{{"s1", 1.0}, {"s2", 0.5}, {"p", 2.0}});
    out.emplace_back("product-critical-rinf", M{{"s1", 1.0}, {"s2", 0.5}, {"p", 2.0}});
    out.emplace_back("product-lowfreq-qp", M{{"p", 1.5}, {"q", 1.25}});
    out.emplace_back("paraproduct-shift",
                     M{{"s", 1.0}, {"k1", 1.0}, {"k2", 0.5}, {"p", 2.0}, {"q", 1.5}});
    out.emplace_back("remainder-shift",
                     M{{"s", 1.5}, {"k1", 1.0}, {"k2", 0.0}, {"p", 2.0}, {"q", 1.5}});
    for (double t : {0.0, 0.5}) {
        out.emplace_back("paraproduct-shift-gevrey", M{{"s", 1.0},
                                                       {"k1", 1.0},
                                                       {"k2", 0.5},
                                                       {"p", 2.0},
                                                       {"q", 1.5},
                                                       {"c0", c0},
                                                       {"t", t}});
        out.emplace_back("remainder-shift-gevrey", M{{"s", 1.5},
                                                     {"k1", 1.0},
                                                     {"k2", 0.0},
                                                     {"p", 2.0},
                                                     {"q", 1.5},
                                                     {"c0", c0},
                                                     {"t", t}});
    }
    for (int closure = 0; closure < ClosureTable::count; ++closure)
        out.emplace_back("composition-gevrey", M{{"closure", double(closure)},
                                                 {"s", 2.5},
                                                 {"p", 2.0},
                                                 {"c0", c0},
                                                 {"t", 0.5}});
    return out;
}

/// Execute one experiment; returns the manifest (also written to
/// out_dir/manifest.json).
inline json run(const ExperimentConfig& cfg, const std::vector<std::string>& warnings = {});

namespace detail {

inline TrajectoryRecord linear_trajectory(const ExperimentConfig& cfg) {
    FluidState u0 = cfg.initial.build(cfg.grid, cfg.seed);
    u0.a.symmetrize();
    u0.m.symmetrize();
    TrajectoryRecord rec;
    double dt = cfg.integrator.dt * cfg.integrator.snapshot_stride;
    FluidState u = u0;
    rec.times.push_back(0.0);
    rec.states.push_back(u);
    for (double t = dt; t <= cfg.integrator.t_end + 1e-12; t += dt) {
        u = propagate_linear(u, cfg.params, dt);
        rec.times.push_back(t);
        rec.states.push_back(u);
    }
    return rec;
}

inline TrajectoryRecord make_trajectory(const ExperimentConfig& cfg) {
    if (cfg.linear_flow || cfg.kind == ExperimentKind::LinearEvolve) return linear_trajectory(cfg);
    FluidState u0 = cfg.initial.build(cfg.grid, cfg.seed);
    return simulate(u0, cfg.integrator, cfg.params, build_closures(cfg.params));
}

inline void write_snapshots(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                            const TrajectoryRecord& traj, std::vector<std::string>& files) {
    if (cfg.snapshot_format == "none") return;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "snapshot_%06zu.%s", i,
                      cfg.snapshot_format == "csv" ? "csv" : "bin");
        auto path = dir / name;
        if (cfg.snapshot_format == "csv")
            write_snapshot_csv(path, traj.times[i], traj.states[i]);
        else
            write_snapshot_binary(path, traj.times[i], traj.states[i]);
        files.push_back(name);
    }
}

} // namespace detail

inline json run(const ExperimentConfig& cfg, const std::vector<std::string>& warnings) {
    namespace fs = std::filesystem;
    auto t0 = std::chrono::steady_clock::now();
    fs::path dir(cfg.out_dir);
    fs::create_directories(dir);

    std::vector<std::string> files;
    json extra;
    std::vector<GuardEvent> guards;

    switch (cfg.kind) {
        case ExperimentKind::Classify: {
            CsvWriter csv((dir / "regimes.csv").string(),
                          {"mu_bar", "lambda_bar", "kappa_bar", "discriminant", "regime",
                           "alpha_plus", "alpha_minus"});
            const double mu = cfg.params.mu_bar();
            for (int i = 0; i < cfg.nu_count; ++i) {
                double nu = cfg.nu_count == 1 ? cfg.nu_min
                                              : cfg.nu_min + (cfg.nu_max - cfg.nu_min) * i /
                                                                 (cfg.nu_count - 1);
                double lambda = nu - 2.0 * mu;
                for (int k = 0; k < cfg.kappa_count; ++k) {
                    double kap = cfg.kappa_count == 1
                                     ? cfg.kappa_min
                                     : cfg.kappa_min + (cfg.kappa_max - cfg.kappa_min) * k /
                                                           (cfg.kappa_count - 1);
                    double disc = nu * nu - 4.0 * kap;
                    Regime reg = std::abs(disc) < 1e-10 * nu * nu
                                     ? Regime::Critical
                                     : (disc > 0 ? Regime::RealSeparated : Regime::Complex);
                    std::vector<std::string> cells{
                        CsvWriter::fmt(mu), CsvWriter::fmt(lambda), CsvWriter::fmt(kap),
                        CsvWriter::fmt(disc), regime_name(reg)};
                    if (reg == Regime::Complex) {
                        cells.push_back("nan");
                        cells.push_back("nan");
                    } else {
                        double root = std::sqrt(std::max(disc, 0.0));
                        cells.push_back(CsvWriter::fmt(0.5 * (nu + root)));
                        cells.push_back(CsvWriter::fmt(0.5 * (nu - root)));
                    }
                    csv.row(cells);
                }
            }
            files.push_back("regimes.csv");
            break;
        }

        case ExperimentKind::LinearEvolve:
        case ExperimentKind::Simulate:
        case ExperimentKind::Norms: {
            TrajectoryRecord traj = detail::make_trajectory(cfg);
            guards = traj.guard_events;
            DyadicFilterBank bank(cfg.grid, cfg.j0);
            detail::write_norms_csv(dir / "norms.csv", traj, cfg, bank);
            files.push_back("norms.csv");
            {
                CsvWriter csv((dir / "diagnostics.csv").string(),
                              {"time", "dt", "a_linf", "alias_fraction"});
                for (const auto& dgn : traj.diagnostics)
                    csv.row_values({dgn.time, dgn.dt, dgn.a_linf, dgn.alias_fraction});
                files.push_back("diagnostics.csv");
            }
            double T = traj.times.back();
            json summary;
            summary["t_final"] = T;
            summary["completed"] = traj.completed;
            summary["snapshots"] = traj.times.size();
            if (traj.times.size() >= 2 && T > 0.0)
                summary["epq_norm"] = epq_norm(traj.times, traj.states, cfg.p, cfg.q, cfg.j0, T, bank);
            if (cfg.kind != ExperimentKind::LinearEvolve && traj.states.size() >= 3 &&
                !cfg.linear_flow)
                summary["max_residual"] =
                    residual_check(traj, cfg.params, build_closures(cfg.params));
            std::ofstream(dir / "summary.json") << summary.dump(2) << "\n";
            files.push_back("summary.json");
            detail::write_snapshots(dir, cfg, traj, files);
            extra["summary"] = summary;
            break;
        }

        case ExperimentKind::Gevrey: {
            TrajectoryRecord traj = detail::make_trajectory(cfg);
            guards = traj.guard_events;
            DyadicFilterBank bank(cfg.grid, cfg.j0);
            double c0 = cfg.c0(cfg.params);
            json summary;
            summary["c0"] = c0;
            double T = traj.times.back();
            summary["gevrey_trajectory_norm"] = gevrey_trajectory_norm(
                traj.times, traj.states, GevreySpec::with_c0(c0), cfg.p, cfg.q, cfg.j0, T, bank);
            summary["heat_composition_max_exponent"] =
                heat_composition_max_exponent(cfg.grid, c0, 1.0);
            summary["heat_composition_ceiling"] = cfg.grid.dim() * c0 / 4.0;
            try {
                auto [series, fit] = track_radius(traj.times, traj.states, cfg.fit_lo, cfg.fit_hi);
                detail::write_radius_csv(dir / "radius.csv", series);
                files.push_back("radius.csv");
                summary["radius_fit"] = {{"prefactor", fit.prefactor},
                                         {"exponent", fit.exponent},
                                         {"residual", fit.residual},
                                         {"points", fit.points}};
            } catch (const std::exception& e) {
                summary["radius_fit_error"] = e.what();
            }
            std::ofstream(dir / "gevrey_summary.json") << summary.dump(2) << "\n";
            files.push_back("gevrey_summary.json");
            extra["summary"] = summary;
            break;
        }

        case ExperimentKind::ProbeEstimates: {
            TorusGrid pg = TorusGrid::make(cfg.probe_dim, cfg.probe_n, 2.0 * M_PI);
            DyadicFilterBank bank(pg);
            ClosureTable cl = build_closures(cfg.params);
            ProbeContext ctx{pg, &bank, cfg.seed, cfg.probe_samples, cfg.probe_decay, 0.25, &cl};
            json reports = json::array();
            for (const auto& [id, prm] : default_probe_suite()) {
                ProbeReport rep = probe_inequality(id, prm, ctx);
                json jr;
                jr["estimate_id"] = rep.estimate_id;
                jr["params"] = rep.params;
                jr["n_samples"] = rep.n_samples;
                jr["fitted_constant"] = rep.fitted_constant;
                jr["seed"] = rep.seed;
                reports.push_back(jr);
            }
            std::ofstream(dir / "probes.json") << reports.dump(2) << "\n";
            files.push_back("probes.json");
            break;
        }

        case ExperimentKind::Sweep: {
            if (cfg.sweep_path.empty() || cfg.sweep_values.empty())
                throw std::invalid_argument("sweep: needs sweep.path and sweep.values");
            auto done = csv_first_column((dir / "sweep.csv").string());
            std::set<std::string> done_set(done.begin(), done.end());
            bool fresh = done.empty();
            std::vector<std::string> header{"index", "value", "completed", "guard_events",
                                            "t_final", "epq_norm"};
            std::optional<CsvWriter> csv;
            if (fresh)
                csv.emplace((dir / "sweep.csv").string(), header);
            else
                csv.emplace((dir / "sweep.csv").string(), header, 1, /*append=*/true);

            struct PointResult {
                bool completed = false;
                std::size_t guard_count = 0;
                double t_final = 0.0;
                double epq = 0.0;
            };
            auto run_point = [&](std::size_t i) {
                json sub_raw = cfg.resolved;
                sub_raw.erase("sweep");
                sub_raw["experiment"] = kind_name(cfg.sweep_kind);
                apply_override(sub_raw, cfg.sweep_path + "=" +
                                            CsvWriter::fmt(cfg.sweep_values[i]));
                auto vr = validate_config(sub_raw);
                if (!vr.ok()) throw std::runtime_error("sweep point config invalid");
                ExperimentConfig sub = *vr.config;
                sub.out_dir = (dir / ("point_" + std::to_string(i))).string();
                json manifest = run(sub, vr.warnings);
                PointResult r;
                r.completed = manifest["guard_events"].empty();
                r.guard_count = manifest["guard_events"].size();
                if (manifest.contains("summary") && manifest["summary"].contains("t_final"))
                    r.t_final = manifest["summary"]["t_final"].get<double>();
                if (manifest.contains("summary") && manifest["summary"].contains("epq_norm"))
                    r.epq = manifest["summary"]["epq_norm"].get<double>();
                return r;
            };

            std::vector<std::optional<PointResult>> results(cfg.sweep_values.size());
            std::vector<std::pair<std::size_t, std::future<PointResult>>> futures;
            const std::size_t max_parallel = 4;
            std::size_t next = 0;
            auto drain_one = [&]() {
                auto& [idx, fut] = futures.front();
                results[idx] = fut.get();
                futures.erase(futures.begin());
            };
            for (; next < cfg.sweep_values.size(); ++next) {
                if (done_set.count(std::to_string(next))) continue;
                if (futures.size() >= max_parallel) drain_one();
                futures.emplace_back(next, std::async(std::launch::async, run_point, next));
            }
            while (!futures.empty()) drain_one();

            for (std::size_t i = 0; i < results.size(); ++i) {
                if (!results[i]) continue; // already present from a previous run
                const auto& r = *results[i];
                csv->row({std::to_string(i), CsvWriter::fmt(cfg.sweep_values[i]),
                          r.completed ? "1" : "0", std::to_string(r.guard_count),
                          CsvWriter::fmt(r.t_final), CsvWriter::fmt(r.epq)});
            }
            files.push_back("sweep.csv");
            break;
        }
    }

    auto t1 = std::chrono::steady_clock::now();
    json manifest;
    manifest["version"] = version_string;
    manifest["experiment"] = kind_name(cfg.kind);
    manifest["seed"] = cfg.seed;
    manifest["config"] = cfg.resolved;
    manifest["warnings"] = warnings;
    manifest["wall_time_s"] = std::chrono::duration<double>(t1 - t0).count();
    json jg = json::array();
    for (const auto& ev : guards) jg.push_back({{"time", ev.time}, {"what", ev.what}});
    manifest["guard_events"] = jg;
    json outputs = json::array();
    for (const auto& f : files)
        outputs.push_back({{"path", f}, {"checksum", detail::file_checksum(dir / f)}});
    manifest["outputs"] = outputs;
    if (!extra.is_null())
        for (auto it = extra.begin(); it != extra.end(); ++it) manifest[it.key()] = it.value();
    std::ofstream(dir / "manifest.json") << manifest.dump(2) << "\n";
    return manifest;
}

} // namespace nsk
