#include "datasim/csv.hpp"
#include "datasim/methods.hpp"
#include "datasim/oracles.hpp"
#include "datasim/runner.hpp"
#include "datasim/stats.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

using namespace datasim;

int cmd_compare(const std::string& file_a, const std::string& file_b, const std::string& method,
                const std::string& graph, bool has_target, std::uint64_t seed,
                const std::string& mapping_out) {
    const CsvLoadResult a = load_csv(file_a, has_target);
    const CsvLoadResult b = load_csv(file_b, has_target);
    if (!mapping_out.empty()) {
        write_code_mapping_csv(a, mapping_out);
    }
    const MethodSpec spec = MethodSpec::parse(method, graph);
    const SimilarityOutcome out =
        evaluate_method(spec, {a.dataset, b.dataset}, seed);

    std::cout << "method," << spec.label() << "\n";
    std::cout << "status," << to_string(out.status) << "\n";
    if (out.ok()) {
        std::cout << "statistic," << format_double(out.statistic) << "\n";
        std::cout << "direction," << to_string(out.direction) << "\n";
        if (out.p_value) std::cout << "p_value," << format_double(*out.p_value) << "\n";
    } else {
        std::cout << "reason," << out.reason << "\n";
    }
    for (const auto& [key, value] : out.diagnostics) {
        std::cout << "diag:" << key << "," << format_double(value) << "\n";
    }
    return 0;
}

std::vector<MethodSpec> menu_from_flag(const std::string& methods_flag, bool with_targets) {
    if (methods_flag.empty() || methods_flag == "default") {
        return default_method_menu(with_targets);
    }
    std::vector<MethodSpec> out;
    std::string cur;
    std::istringstream in(methods_flag);
    while (std::getline(in, cur, ';')) {
        if (cur.empty()) continue;
        const auto colon = cur.find(':');
        if (colon == std::string::npos) {
            out.push_back(MethodSpec::parse(cur));
        } else {
            out.push_back(MethodSpec::parse(cur.substr(0, colon), cur.substr(colon + 1)));
        }
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dataset-similarity statistics for categorical data"};
    app.require_subcommand(1);

    // compare
    auto* compare = app.add_subcommand("compare", "Compare two CSV datasets with one method");
    std::string file_a, file_b, method = "fr", graph, mapping_out;
    bool has_target = false;
    std::uint64_t seed = 42;
    compare->add_option("a", file_a, "first dataset CSV")->required();
    compare->add_option("b", file_b, "second dataset CSV")->required();
    compare->add_option("--method", method, "method id (fr, cf, ccs, zc, c2st-knn, c2st-nn, hmn, ymrzl, petrie, mmcm, cm, ggrl, otdd)");
    compare->add_option("--graph", graph, "graph spec for edge-count tests, e.g. 5mst-u");
    compare->add_flag("--target", has_target, "last CSV column is a binary target");
    compare->add_option("--seed", seed, "seed for stochastic methods");
    compare->add_option("--mapping-out", mapping_out, "write the code/label mapping CSV here");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run a scenario grid");
    std::string grid_path, out_dir, methods_flag = "default";
    std::size_t reps = 100;
    std::uint64_t sim_seed = 42;
    int jobs = 1;
    double timeout = 60.0;
    bool no_resume = false;
    simulate->add_option("grid", grid_path, "grid config file")->required();
    simulate->add_option("--out", out_dir, "output directory")->required();
    simulate->add_option("--reps", reps, "repetitions per scenario");
    simulate->add_option("--seed", sim_seed, "master seed");
    simulate->add_option("--jobs", jobs, "worker threads");
    simulate->add_option("--methods", methods_flag,
                         "semicolon-separated method list (method[:graph]), or 'default'");
    simulate->add_option("--timeout", timeout, "per-call budget in seconds (0 disables)");
    simulate->add_flag("--no-resume", no_resume, "ignore an existing journal");

    // pesr
    auto* pesr_cmd = app.add_subcommand("pesr", "Aggregate a finished run into PESR tables");
    std::string run_dir, pesr_out = "pesr.csv";
    bool plots = false;
    pesr_cmd->add_option("dir", run_dir, "simulate output directory")->required();
    pesr_cmd->add_option("--out", pesr_out, "PESR table path");
    pesr_cmd->add_flag("--plots", plots, "write SVG power-curve panels");

    // bench
    auto* bench = app.add_subcommand("bench", "Per-method runtime benchmark on one scenario");
    std::string bench_grid, bench_methods = "default";
    std::uint64_t bench_seed = 42;
    int bench_min_reps = 10;
    double bench_min_total = 1.0;
    bench->add_option("grid", bench_grid, "grid config (first scenario is used)")->required();
    bench->add_option("--methods", bench_methods, "method list as in simulate");
    bench->add_option("--seed", bench_seed, "seed");
    bench->add_option("--min-reps", bench_min_reps, "minimum calls per method");
    bench->add_option("--min-total", bench_min_total, "minimum accumulated seconds per method");

    // verify
    auto* verify = app.add_subcommand("verify", "Run the oracle cross-check suite");
    std::uint64_t verify_seed = 7;
    verify->add_option("--seed", verify_seed, "seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*compare) {
            return cmd_compare(file_a, file_b, method, graph, has_target, seed, mapping_out);
        }
        if (*simulate) {
            RunManifest manifest;
            manifest.scenarios = load_grid_config(grid_path);
            if (manifest.scenarios.empty()) {
                std::cerr << "grid config expands to no valid scenarios\n";
                return 1;
            }
            bool with_targets = false;
            for (const auto& s : manifest.scenarios) {
                with_targets = with_targets || s.ogm != OgmVariant::None;
            }
            manifest.methods = menu_from_flag(methods_flag, with_targets);
            manifest.reps = reps;
            manifest.master_seed = sim_seed;
            manifest.out_dir = out_dir;
            manifest.jobs = jobs;
            manifest.timeout_seconds = timeout;
            manifest.resume = !no_resume;
            const auto rows = run(manifest);
            write_scenarios_csv(manifest.scenarios,
                                (std::filesystem::path(out_dir) / "scenarios.csv").string());
            std::size_t failures = 0;
            for (const auto& r : rows) {
                if (r.status != "ok") ++failures;
            }
            std::cout << rows.size() << " evaluations, " << failures << " non-ok rows, results in "
                      << out_dir << "/results.csv\n";
            return 0;
        }
        if (*pesr_cmd) {
            const auto rows =
                read_results_csv((std::filesystem::path(run_dir) / "results.csv").string());
            // Scenario specs are reconstructed from scenarios.csv written by simulate.
            std::vector<ScenarioSpec> scenarios;
            {
                std::ifstream f((std::filesystem::path(run_dir) / "scenarios.csv").string());
                if (!f) {
                    std::cerr << "missing scenarios.csv in " << run_dir << "\n";
                    return 1;
                }
                std::string line;
                std::getline(f, line);
                while (std::getline(f, line)) {
                    if (line.empty()) continue;
                    std::vector<std::string> cells;
                    std::string cur;
                    for (char c : line) {
                        if (c == ',') {
                            cells.push_back(cur);
                            cur.clear();
                        } else if (c != '\r') {
                            cur.push_back(c);
                        }
                    }
                    cells.push_back(cur);
                    ScenarioSpec s;
                    s.k = std::stoi(cells[1]);
                    s.total_n = std::stoull(cells[2]);
                    s.p = std::stoull(cells[3]);
                    s.arity = static_cast<Code>(std::stoi(cells[4]));
                    s.balance = balance_from_string(cells[5]);
                    s.family = family_from_string(cells[6]);
                    s.delta = std::stod(cells[7]);
                    if (s.k == 4) s.grouping = grouping_from_string(cells[8]);
                    s.ogm = ogm_from_string(cells[9]);
                    scenarios.push_back(s);
                }
            }
            const auto records = compute_pesr_records(rows, scenarios);
            write_pesr_csv(records, pesr_out);
            const GapSummary gaps = gap_to_best(records);
            const std::string gap_path =
                (std::filesystem::path(pesr_out).parent_path() / "gap_to_best.csv").string();
            write_gap_csv(gaps, gap_path.empty() ? "gap_to_best.csv" : gap_path);
            if (plots) {
                write_pesr_plots(records,
                                 (std::filesystem::path(run_dir) / "plots").string());
            }
            std::cout << records.size() << " PESR records written to " << pesr_out << "\n";
            return 0;
        }
        if (*bench) {
            const auto scenarios = load_grid_config(bench_grid);
            if (scenarios.empty()) {
                std::cerr << "grid config expands to no valid scenarios\n";
                return 1;
            }
            bool with_targets = scenarios.front().ogm != OgmVariant::None;
            const auto methods = menu_from_flag(bench_methods, with_targets);
            const auto results =
                bench_runtime(methods, scenarios.front(), bench_seed, bench_min_reps, bench_min_total);
            std::cout << "method,calls,median_s,q25_s,q75_s\n";
            for (const auto& r : results) {
                std::cout << r.method_id << "," << r.calls << "," << format_double(r.median_seconds)
                          << "," << format_double(r.q25_seconds) << ","
                          << format_double(r.q75_seconds) << "\n";
            }
            return 0;
        }
        if (*verify) {
            const auto report = oracles::run_verification(verify_seed);
            for (const auto& line : report.lines) std::cout << line << "\n";
            std::cout << (report.ok ? "verification passed" : "verification FAILED") << "\n";
            return report.ok ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
