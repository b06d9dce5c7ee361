#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "latcs/asymptotics.hpp"
#include "latcs/config.hpp"
#include "latcs/exhaustion.hpp"
#include "latcs/format.hpp"
#include "latcs/green_function.hpp"
#include "latcs/version.hpp"

namespace latcs {

struct RunResult {
    int status = 0; // 0: certificates pass, 1: solver failure, 2: config failure
    std::vector<std::string> files;
    nlohmann::json summary;
};

namespace detail {

/// Writes through a sibling temp file and renames, so consumers never see a
/// partially written output.
inline void write_file_atomic(const std::filesystem::path& target, const std::string& content) {
    const std::filesystem::path dir = target.parent_path();
    if (!dir.empty()) std::filesystem::create_directories(dir);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        if (!out) throw Error("cannot write output file " + target.string());
    }
    std::filesystem::rename(tmp, target);
}

inline std::string csv_header(int dim, const std::string& prefix, const std::string& tail) {
    std::string h = prefix;
    for (int d = 0; d < dim; ++d) h += "x" + std::to_string(d + 1) + ",";
    return h + tail + "\n";
}

inline void append_point(std::string& row, const Point& x) {
    for (int c : x) {
        row += std::to_string(c);
        row += ",";
    }
}

/// One row per window vertex: coordinates, then u and v.
inline std::string fields_csv(const FieldPair& fields, const std::string& lambda_column = "") {
    const LatticeBox& box = fields.domain();
    std::string csv = csv_header(box.dim(), lambda_column.empty() ? "" : "lambda,", "u,v");
    for (std::int64_t i = 0; i < box.closure_size(); ++i) {
        std::string row = lambda_column;
        if (!lambda_column.empty()) row += ",";
        append_point(row, box.closure_point(i));
        row += g17(fields.u[i]) + "," + g17(fields.v[i]) + "\n";
        csv += row;
    }
    return csv;
}

inline nlohmann::json report_to_json(const SolveReport& r) {
    nlohmann::json j;
    j["outer_iters"] = r.outer_iters;
    j["final_diff"] = r.final_diff;
    j["monotone_ok"] = r.monotone_ok;
    j["max_monotone_violation"] = r.max_monotone_violation;
    j["residual_u"] = r.residual_u;
    j["residual_v"] = r.residual_v;
    j["flux_defect_u"] = r.flux_defect_u;
    j["flux_defect_v"] = r.flux_defect_v;
    j["exp_mass_sum"] = r.exp_mass_sum;
    return j;
}

inline std::int64_t interior_count(int dim, int radius) {
    std::int64_t n = 1;
    for (int d = 0; d < dim; ++d) n *= 2 * static_cast<std::int64_t>(radius) + 1;
    return n;
}

/// Flux and mass certificates for one accepted box solve. The iteration
/// itself already enforces monotonicity and the residual contract by
/// throwing; these are the reported inequalities a summary must still judge.
inline bool stage_certificates_pass(const SolveReport& r, int dim, int radius, double lambda,
                                    double B, nlohmann::json* out) {
    const double flux_tol = 1e-8 * (lambda * static_cast<double>(interior_count(dim, radius)) + B);
    const double mass_cap = B / lambda + 1e-8;
    const bool flux_ok = r.flux_defect_u <= flux_tol && r.flux_defect_v <= flux_tol;
    const bool mass_ok = r.exp_mass_sum <= mass_cap;
    if (out) {
        (*out)["flux_tol"] = flux_tol;
        (*out)["flux_ok"] = flux_ok;
        (*out)["exp_mass_cap"] = mass_cap;
        (*out)["exp_mass_ok"] = mass_ok;
    }
    return r.monotone_ok && flux_ok && mass_ok;
}

inline nlohmann::json stages_to_json(const MaximalSolution& sol, const VortexConfig& cfg,
                                     bool* all_pass) {
    nlohmann::json arr = nlohmann::json::array();
    const double B = cfg.total_mass();
    for (const RadiusStage& s : sol.stages) {
        nlohmann::json j = report_to_json(s.report);
        j["radius"] = s.radius;
        j["window_diff"] = s.window_diff;
        const bool ok =
            stage_certificates_pass(s.report, cfg.dim(), s.radius, sol.lambda, B, &j);
        j["certificates_ok"] = ok;
        if (all_pass) *all_pass = *all_pass && ok;
        arr.push_back(j);
    }
    return arr;
}

inline SchemeParams scheme_from_config(const ExperimentConfig& c) {
    SchemeParams p = SchemeParams::for_lambda(*c.lambda);
    p.stop_tol = c.stop_tol;
    p.max_outer = c.max_outer;
    return p;
}

inline GreenParams green_from_config(const ExperimentConfig& c) {
    GreenParams g;
    g.tol = c.green_tol;
    g.mc_seed = c.seed;
    g.workers = c.workers;
    return g;
}

inline void run_solve(const ExperimentConfig& c, const std::filesystem::path& dir,
                      RunResult& result) {
    const VortexConfig cfg = make_vortex_config(c);
    MaximalSolution sol =
        solve_maximal(cfg, scheme_from_config(c), *c.radii, c.window_radius, c.ext_tol);

    bool pass = true;
    result.summary["stages"] = stages_to_json(sol, cfg, &pass);
    result.summary["final_radius"] = sol.final_radius;
    result.summary["sup_u"] = sol.fields.u.sup_norm();
    result.summary["sup_v"] = sol.fields.v.sup_norm();
    result.summary["certificates_pass"] = pass;
    if (!pass) result.status = 1;

    const std::filesystem::path csv = dir / "fields.csv";
    write_file_atomic(csv, fields_csv(sol.fields));
    result.files.push_back(csv.string());
}

inline void run_sweep_lambda(const ExperimentConfig& c, const std::filesystem::path& dir,
                             RunResult& result) {
    const VortexConfig cfg = make_vortex_config(c);
    SweepParams p;
    if (c.radii) p.radii = *c.radii;
    p.ext_tol = c.ext_tol;
    p.stop_tol = c.stop_tol;
    p.max_outer = c.max_outer;
    p.workers = c.workers;
    LambdaSweep sweep = sweep_lambda(cfg, *c.lambdas, c.window_radius, p);

    bool pass = true;
    nlohmann::json arr = nlohmann::json::array();
    const double B = cfg.total_mass();
    std::string csv = csv_header(c.dim, "lambda,", "u,v");
    for (const LambdaSnapshot& s : sweep.snapshots) {
        nlohmann::json j = report_to_json(s.report);
        j["lambda"] = s.lambda;
        j["final_radius"] = s.final_radius;
        j["sup_u"] = s.sup_u;
        j["sup_v"] = s.sup_v;
        j["min_u_plus_v"] = s.min_u_plus_v;
        const bool ok =
            stage_certificates_pass(s.report, c.dim, s.final_radius, s.lambda, B, &j);
        j["certificates_ok"] = ok;
        pass = pass && ok;

        // The proven floor on u + v applies whenever it is defined; record it
        // for every coupling past 2B and judge it only where enforced.
        if (s.lambda > 2.0 * B) {
            LargeLambdaReport floor = check_large_lambda_bound(s.fields, s.lambda, cfg);
            nlohmann::json f;
            f["bound"] = floor.bound;
            f["min_sum"] = floor.min_sum;
            f["margin"] = floor.margin;
            f["enforced"] = floor.enforced;
            f["passed"] = floor.passed;
            j["large_lambda"] = f;
            pass = pass && floor.passed;
        }
        arr.push_back(j);

        const std::string lam = g17(s.lambda);
        for (std::int64_t i = 0; i < sweep.window->closure_size(); ++i) {
            std::string row = lam + ",";
            append_point(row, sweep.window->closure_point(i));
            row += g17(s.fields.u[i]) + "," + g17(s.fields.v[i]) + "\n";
            csv += row;
        }
    }
    result.summary["snapshots"] = arr;
    result.summary["max_monotone_violation"] = sweep.max_monotone_violation;
    result.summary["monotone_in_coupling"] = sweep.max_monotone_violation <= 1e-9;
    result.summary["certificates_pass"] = pass;
    if (!pass) result.status = 1;

    const std::filesystem::path out = dir / "sweep.csv";
    write_file_atomic(out, csv);
    result.files.push_back(out.string());
}

inline void run_small_lambda(const ExperimentConfig& c, const std::filesystem::path& dir,
                             RunResult& result) {
    const VortexConfig cfg = make_vortex_config(c);
    SmallLambdaParams p = SmallLambdaParams::for_dimension(c.dim);
    p.lambdas = *c.lambdas;
    if (c.radii) p.radii = *c.radii;
    if (p.radii.size() != p.lambdas.size())
        throw ConfigError("one box radius per coupling required", {"radii", "lambdas"});
    p.stop_tol = c.stop_tol;
    p.max_outer = c.max_outer;
    p.workers = c.workers;
    p.green = green_from_config(c);
    SmallLambdaReport rep = check_small_lambda_limit(cfg, c.window_radius, p);

    auto side_json = [](const SmallLambdaSide& s) {
        nlohmann::json j;
        j["source_present"] = s.source_present;
        j["identically_zero"] = s.identically_zero;
        j["min_values"] = s.min_values;
        j["drops"] = s.drops;
        j["sup_distance"] = s.sup_distance;
        j["limit_sup"] = s.limit_sup;
        j["monotone"] = s.monotone;
        j["within_tol"] = s.within_tol;
        j["note"] = s.note;
        return j;
    };
    result.summary["mode"] = rep.mode;
    result.summary["u"] = side_json(rep.u);
    result.summary["v"] = side_json(rep.v);
    result.summary["certificates_pass"] = rep.passed;
    if (!rep.passed) result.status = 1;

    std::string csv;
    if (rep.mode == "divergent") {
        csv = "lambda,radius,min_u,min_v\n";
        for (std::size_t k = 0; k < rep.lambdas.size(); ++k) {
            csv += g17(rep.lambdas[k]) + "," + std::to_string(rep.radii[k]) + ",";
            csv += (rep.u.min_values.empty() ? "0" : g17(rep.u.min_values[k])) + ",";
            csv += (rep.v.min_values.empty() ? "0" : g17(rep.v.min_values[k])) + "\n";
        }
    } else {
        csv = "lambda,radius,dist_u,dist_v\n";
        for (std::size_t k = 0; k < rep.lambdas.size(); ++k) {
            csv += g17(rep.lambdas[k]) + "," + std::to_string(rep.radii[k]) + ",";
            csv += (rep.u.sup_distance.empty() ? "0" : g17(rep.u.sup_distance[k])) + ",";
            csv += (rep.v.sup_distance.empty() ? "0" : g17(rep.v.sup_distance[k])) + "\n";
        }
    }
    const std::filesystem::path out = dir / "small_lambda.csv";
    write_file_atomic(out, csv);
    result.files.push_back(out.string());
}

inline void run_green_table(const ExperimentConfig& c, const std::filesystem::path& dir,
                            RunResult& result) {
    GreenTable table(c.dim, c.table_radius, green_from_config(c));

    double worst_defect = 0.0;
    bool defects_checked = false;
    bool defects_ok = true;
    for (const auto& [key, entry] : table.classes()) {
        const Point x(std::span<const int>{key});
        std::int64_t l1 = 0;
        for (int coord : key) l1 += std::abs(coord);
        if (l1 + 1 > c.table_radius) continue;
        if (entry.method != "quadrature") continue; // sampled entries are too noisy to judge
        defects_checked = true;
        const double defect = table.stencil_defect(x);
        worst_defect = std::max(worst_defect, defect);
        defects_ok = defects_ok && defect <= 5e-6;
    }

    const bool sign_ok = table.max_value() < 0.0;
    const bool origin_ok = table.origin_is_minimum();
    const bool pass = sign_ok && origin_ok && (!defects_checked || defects_ok);
    result.summary["max_value"] = table.max_value();
    result.summary["negative_everywhere"] = sign_ok;
    result.summary["origin_is_minimum"] = origin_ok;
    result.summary["worst_stencil_defect"] = worst_defect;
    result.summary["stencil_defects_ok"] = defects_ok;
    result.summary["certificates_pass"] = pass;
    if (!pass) result.status = 1;

    std::ostringstream csv;
    table.write_csv(csv);
    const std::filesystem::path out = dir / "green.csv";
    write_file_atomic(out, csv.str());
    result.files.push_back(out.string());
}

inline void run_decay(const ExperimentConfig& c, const std::filesystem::path& dir,
                      RunResult& result) {
    const VortexConfig cfg = make_vortex_config(c);
    MaximalSolution sol =
        solve_maximal(cfg, scheme_from_config(c), *c.radii, c.window_radius, c.ext_tol);
    DecayFit fit = estimate_decay_rate(sol, c.axis);
    const double m = guaranteed_decay_rate(*c.lambda, c.dim);

    bool pass = true;
    result.summary["stages"] = stages_to_json(sol, cfg, &pass);
    result.summary["rate"] = fit.rate;
    result.summary["r2"] = fit.r2;
    result.summary["intercept"] = fit.intercept;
    result.summary["points_used"] = fit.points_used;
    result.summary["guaranteed_rate"] = m;
    result.summary["rate_floor"] = 0.8 * m;
    const bool decay_ok = fit.rate >= 0.8 * m && fit.r2 >= 0.98;
    result.summary["decay_ok"] = decay_ok;
    result.summary["certificates_pass"] = pass && decay_ok;
    if (!(pass && decay_ok)) result.status = 1;

    std::string csv = "t,u,log_abs_u\n";
    const int wr = static_cast<int>(sol.window->hi()[c.axis] - sol.center[c.axis]);
    for (int t = 0; t <= wr; ++t) {
        const double val = sol.fields.u(sol.center.shifted(c.axis, t));
        csv += std::to_string(t) + "," + g17(val) + ",";
        csv += (val == 0.0 ? "-inf" : g17(std::log(std::abs(val)))) + "\n";
    }
    const std::filesystem::path out = dir / "decay.csv";
    write_file_atomic(out, csv);
    result.files.push_back(out.string());
}

inline void run_uniqueness(const ExperimentConfig& c, const std::filesystem::path& dir,
                           RunResult& result) {
    const VortexConfig cfg = make_vortex_config(c);
    UniquenessParams p;
    if (c.radii) p.radii = *c.radii;
    p.ext_tol = c.ext_tol;
    p.stop_tol = c.stop_tol;
    p.max_outer = c.max_outer;
    p.agree_tol = c.agree_tol;
    p.workers = c.workers;
    p.green = green_from_config(c);
    UniquenessReport rep = uniqueness_probe(cfg, c.dim, *c.lambda, c.window_radius, p);

    nlohmann::json starts = nlohmann::json::array();
    std::string csv = "start,converged,iterations,residual\n";
    for (const ProbeStart& s : rep.starts) {
        nlohmann::json j;
        j["name"] = s.name;
        j["converged"] = s.converged;
        j["iterations"] = s.iterations;
        j["residual"] = s.residual;
        j["note"] = s.note;
        starts.push_back(j);
        csv += s.name + "," + (s.converged ? "1" : "0") + "," + std::to_string(s.iterations) +
               "," + g17(s.residual) + "\n";
    }
    result.summary["lambda"] = rep.lambda;
    result.summary["regime_flag"] = rep.regime_flag;
    result.summary["regime_min"] = rep.regime_min;
    result.summary["starts"] = starts;
    result.summary["pairwise"] = rep.pair_notes;
    result.summary["max_pairwise"] = rep.max_pairwise;
    result.summary["certificates_pass"] = rep.passed;
    if (!rep.passed) result.status = 1;

    const std::filesystem::path out = dir / "uniqueness.csv";
    write_file_atomic(out, csv);
    result.files.push_back(out.string());
}

} // namespace detail

/// Resolution order for the output directory: explicit config field, then
/// the LATCS_OUT_DIR environment variable, then the working directory.
inline std::string resolve_out_dir(const ExperimentConfig& c) {
    if (!c.out_dir.empty()) return c.out_dir;
    if (const char* env = std::getenv("LATCS_OUT_DIR"); env && *env) return env;
    return ".";
}

/// Runs one validated experiment and writes its outputs. Solver failures are
/// caught, recorded in the summary, and reported as status 1; the summary
/// itself is always written (atomically) when the output directory is known.
inline RunResult run_experiment(const ExperimentConfig& c) {
    validate_config(c);
    const std::filesystem::path dir = resolve_out_dir(c);
    RunResult result;
    result.summary["version"] = kVersion;
    result.summary["config"] = config_to_json(c);
    result.summary["kind"] = c.kind;

    const auto start = std::chrono::steady_clock::now();
    try {
        if (c.kind == "solve") detail::run_solve(c, dir, result);
        else if (c.kind == "sweep_lambda") detail::run_sweep_lambda(c, dir, result);
        else if (c.kind == "small_lambda") detail::run_small_lambda(c, dir, result);
        else if (c.kind == "green_table") detail::run_green_table(c, dir, result);
        else if (c.kind == "decay") detail::run_decay(c, dir, result);
        else detail::run_uniqueness(c, dir, result);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        result.status = 1;
        result.summary["error"] = e.what();
        result.summary["certificates_pass"] = false;
    }
    const auto stop = std::chrono::steady_clock::now();
    result.summary["timing_ms"] =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start)
            .count();

    const std::filesystem::path summary_path = dir / "summary.json";
    detail::write_file_atomic(summary_path, result.summary.dump(2) + "\n");
    result.files.push_back(summary_path.string());
    return result;
}

/// The CLI entry path: load a config file, apply command-line overrides,
/// check the subcommand fronts that kind, run. Config problems come back as
/// status 2 with the diagnostic on stderr; solver failures as status 1.
inline int run_from_file(const std::string& subcommand, const std::string& config_path,
                         const std::string& out_override, bool has_seed,
                         std::uint64_t seed_override, int workers_override,
                         std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        ExperimentConfig c = load_config(config_path);
        if (!kind_matches_subcommand(subcommand, c.kind))
            throw ConfigError("config kind \"" + c.kind + "\" does not belong to the " +
                                  subcommand + " subcommand",
                              {"kind"});
        if (!out_override.empty()) c.out_dir = out_override;
        if (has_seed) c.seed = seed_override;
        if (workers_override > 0) c.workers = workers_override;
        validate_config(c);

        RunResult result = run_experiment(c);
        for (const std::string& f : result.files) out << "wrote " << f << "\n";
        if (result.status != 0 && result.summary.contains("error"))
            err << "error: " << result.summary["error"].get<std::string>() << "\n";
        else if (result.status != 0)
            err << "error: certificates failed; see summary.json\n";
        return result.status;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace latcs
