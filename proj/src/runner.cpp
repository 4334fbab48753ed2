#include "datasim/runner.hpp"

#include "datasim/rng.hpp"
#include "datasim/stats.hpp"
#include "datasim/svgplot.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace datasim {

namespace {

std::string csv_escape(const std::string& s) {
    // Result identifiers never contain commas or quotes; keep it simple.
    return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r' && c != '\n') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

std::string row_to_csv(const RunRow& r, bool include_seconds) {
    std::ostringstream ss;
    ss << csv_escape(r.scenario_id) << "," << csv_escape(r.method_id) << "," << r.repetition << ","
       << r.status << ",";
    if (r.status == "ok") ss << format_double(r.statistic);
    ss << ",";
    if (r.p_value) ss << format_double(*r.p_value);
    ss << "," << r.direction << "," << csv_escape(r.reason);
    if (include_seconds) ss << "," << format_double(r.seconds);
    return ss.str();
}

} // namespace

void write_results_csv(const std::vector<RunRow>& rows, const std::string& path,
                       bool include_seconds) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << "scenario,method,repetition,status,statistic,p_value,direction,reason";
    if (include_seconds) f << ",seconds";
    f << "\n";
    for (const auto& r : rows) {
        f << row_to_csv(r, include_seconds) << "\n";
    }
}

std::vector<RunRow> read_results_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::vector<RunRow> rows;
    std::string line;
    std::getline(f, line);  // header
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() < 8) continue;
        RunRow r;
        r.scenario_id = cells[0];
        r.method_id = cells[1];
        r.repetition = static_cast<std::size_t>(std::stoull(cells[2]));
        r.status = cells[3];
        r.statistic = cells[4].empty() ? std::numeric_limits<double>::quiet_NaN()
                                       : std::stod(cells[4]);
        if (!cells[5].empty()) r.p_value = std::stod(cells[5]);
        r.direction = cells[6];
        r.reason = cells[7];
        if (cells.size() > 8 && !cells[8].empty()) r.seconds = std::stod(cells[8]);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_scenarios_csv(const std::vector<ScenarioSpec>& scenarios, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << "scenario,k,n,p,arity,balance,family,delta,grouping,ogm\n";
    for (const auto& s : scenarios) {
        f << s.id() << "," << s.k << "," << s.total_n << "," << s.p << "," << s.arity << ","
          << to_string(s.balance) << "," << to_string(s.family) << "," << format_double(s.delta)
          << "," << (s.k == 4 ? to_string(s.grouping) : "") << "," << to_string(s.ogm) << "\n";
    }
}

std::vector<RunRow> run(const RunManifest& manifest) {
    namespace fs = std::filesystem;
    for (const auto& s : manifest.scenarios) s.validate();
    for (const auto& m : manifest.methods) validate_method(m);

    const bool journaled = !manifest.out_dir.empty();
    fs::path journal_path;
    if (journaled) {
        std::error_code ec;
        fs::create_directories(manifest.out_dir, ec);
        if (!fs::exists(manifest.out_dir)) {
            throw std::runtime_error("cannot create output directory " + manifest.out_dir);
        }
        journal_path = fs::path(manifest.out_dir) / "journal.csv";
    }

    struct Triple {
        std::size_t scenario;
        std::size_t method;
        std::size_t rep;
    };
    std::vector<Triple> triples;
    for (std::size_t s = 0; s < manifest.scenarios.size(); ++s) {
        for (std::size_t m = 0; m < manifest.methods.size(); ++m) {
            for (std::size_t r = 0; r < manifest.reps; ++r) {
                triples.push_back({s, m, r});
            }
        }
    }

    std::vector<RunRow> rows(triples.size());
    std::vector<char> done(triples.size(), 0);

    // Resume: previously journaled triples are reused verbatim.
    if (journaled && manifest.resume && fs::exists(journal_path)) {
        std::map<std::string, std::size_t> index;
        for (std::size_t t = 0; t < triples.size(); ++t) {
            const auto& tr = triples[t];
            index[manifest.scenarios[tr.scenario].id() + "|" +
                  manifest.methods[tr.method].label() + "|" + std::to_string(tr.rep)] = t;
        }
        for (auto& row : read_results_csv(journal_path.string())) {
            const auto it =
                index.find(row.scenario_id + "|" + row.method_id + "|" + std::to_string(row.repetition));
            if (it != index.end() && !done[it->second]) {
                rows[it->second] = std::move(row);
                done[it->second] = 1;
            }
        }
    }

    std::ofstream journal;
    std::mutex journal_mutex;
    if (journaled) {
        const bool fresh = !fs::exists(journal_path) || !manifest.resume;
        journal.open(journal_path, fresh ? std::ios::trunc : std::ios::app);
        if (fresh) {
            journal << "scenario,method,repetition,status,statistic,p_value,direction,reason,seconds\n";
            journal.flush();
        }
    }

    auto evaluate_triple = [&](std::size_t t) {
        const auto& tr = triples[t];
        const ScenarioSpec& scen = manifest.scenarios[tr.scenario];
        const MethodSpec& meth = manifest.methods[tr.method];

        RunRow row;
        row.scenario_id = scen.id();
        row.method_id = meth.label();
        row.repetition = tr.rep;

        const auto started = std::chrono::steady_clock::now();
        SimilarityOutcome outcome;
        try {
            const std::vector<CategoricalDataset> datasets =
                generate(scen, manifest.master_seed, tr.rep);
            const std::uint64_t seed = substream_seed(manifest.master_seed, scen.hash(), tr.rep,
                                                      hash_string(meth.label()));
            outcome = evaluate_method(meth, datasets, seed);
        } catch (const std::exception& e) {
            outcome = SimilarityOutcome::error(e.what(), Direction::LowMeansSimilar);
        }
        const auto ended = std::chrono::steady_clock::now();
        row.seconds = std::chrono::duration<double>(ended - started).count();

        row.status = to_string(outcome.status);
        row.statistic = outcome.statistic;
        row.p_value = outcome.p_value;
        row.direction = to_string(outcome.direction);
        row.reason = outcome.reason;
        if (manifest.timeout_seconds > 0.0 && row.seconds > manifest.timeout_seconds) {
            row.status = "timeout";
            row.statistic = std::numeric_limits<double>::quiet_NaN();
            row.p_value.reset();
            row.reason = "per-call budget exceeded";
        }

        if (journaled) {
            std::lock_guard<std::mutex> lock(journal_mutex);
            journal << row_to_csv(row, true) << "\n";
            journal.flush();
        }
        rows[t] = std::move(row);
    };

    std::vector<std::size_t> pending;
    for (std::size_t t = 0; t < triples.size(); ++t) {
        if (!done[t]) pending.push_back(t);
    }

    const int jobs = std::max(1, manifest.jobs);
    if (jobs == 1 || pending.size() <= 1) {
        for (std::size_t t : pending) evaluate_triple(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(jobs));
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= pending.size()) break;
                    evaluate_triple(pending[i]);
                }
            });
        }
        for (auto& w : workers) w.join();
    }

    std::sort(rows.begin(), rows.end(), [](const RunRow& a, const RunRow& b) {
        if (a.scenario_id != b.scenario_id) return a.scenario_id < b.scenario_id;
        if (a.method_id != b.method_id) return a.method_id < b.method_id;
        return a.repetition < b.repetition;
    });
    if (journaled) {
        write_results_csv(rows, (fs::path(manifest.out_dir) / "results.csv").string(), false);
    }
    return rows;
}

std::vector<BenchResult> bench_runtime(const std::vector<MethodSpec>& methods,
                                       const ScenarioSpec& scenario, std::uint64_t seed,
                                       int min_reps, double min_total_seconds) {
    const std::vector<CategoricalDataset> datasets = generate(scenario, seed, 0);
    std::vector<BenchResult> out;
    for (const auto& m : methods) {
        // Warmup call so lazily built state does not distort the first sample.
        evaluate_method(m, datasets, seed);
        std::vector<double> times;
        double total = 0.0;
        while (static_cast<int>(times.size()) < min_reps || total < min_total_seconds) {
            const auto t0 = std::chrono::steady_clock::now();
            evaluate_method(m, datasets, seed + times.size());
            const auto t1 = std::chrono::steady_clock::now();
            const double s = std::chrono::duration<double>(t1 - t0).count();
            times.push_back(s);
            total += s;
            if (times.size() > 2000000) break;
        }
        std::sort(times.begin(), times.end());
        BenchResult r;
        r.method_id = m.label();
        r.calls = static_cast<int>(times.size());
        r.median_seconds = times[times.size() / 2];
        r.q25_seconds = times[times.size() / 4];
        r.q75_seconds = times[(3 * times.size()) / 4];
        out.push_back(r);
    }
    return out;
}

namespace {

std::map<std::string, std::vector<std::string>> parse_config_pairs(const std::string& text) {
    std::map<std::string, std::vector<std::string>> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        std::vector<std::string> values;
        std::string cur;
        for (char c : line.substr(eq + 1)) {
            if (c == ',') {
                values.push_back(trim(cur));
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        values.push_back(trim(cur));
        values.erase(std::remove(values.begin(), values.end(), std::string{}), values.end());
        if (!key.empty() && !values.empty()) kv[key] = values;
    }
    return kv;
}

} // namespace

std::vector<ScenarioSpec> expand_grid_config(const std::string& text) {
    auto kv = parse_config_pairs(text);
    auto values_or = [&](const std::string& key, std::vector<std::string> fallback) {
        const auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    };

    const auto ks = values_or("k", {"2"});
    const auto ns = values_or("n", {"100"});
    const auto ps = values_or("p", {"2"});
    const auto arities = values_or("arity", {"2"});
    const auto balances = values_or("balance", {"balanced"});
    const auto families = values_or("family", {"null"});
    const auto deltas = values_or("delta", {"0"});
    const auto groupings = values_or("grouping", {"3+1"});
    const auto ogms = values_or("ogm", {"none"});

    std::vector<ScenarioSpec> out;
    std::set<std::string> seen;
    for (const auto& k : ks)
        for (const auto& n : ns)
            for (const auto& p : ps)
                for (const auto& arity : arities)
                    for (const auto& balance : balances)
                        for (const auto& family : families)
                            for (const auto& delta : deltas)
                                for (const auto& grouping : groupings)
                                    for (const auto& ogm : ogms) {
                                        ScenarioSpec s;
                                        s.k = std::stoi(k);
                                        s.total_n = std::stoull(n);
                                        s.p = std::stoull(p);
                                        s.arity = static_cast<Code>(std::stoi(arity));
                                        s.balance = balance_from_string(balance);
                                        s.family = family_from_string(family);
                                        s.delta = std::stod(delta);
                                        s.grouping = grouping_from_string(grouping);
                                        s.ogm = ogm_from_string(ogm);
                                        if (s.family == DeviationFamily::Null) s.delta = 0.0;
                                        try {
                                            s.validate();
                                        } catch (const std::exception&) {
                                            continue;  // invalid factorial cell
                                        }
                                        if (seen.insert(s.id()).second) out.push_back(s);
                                    }
    return out;
}

std::vector<ScenarioSpec> load_grid_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return expand_grid_config(ss.str());
}

std::vector<PesrRecord> compute_pesr_records(const std::vector<RunRow>& rows,
                                             const std::vector<ScenarioSpec>& scenarios) {
    std::map<std::string, const ScenarioSpec*> spec_of;
    for (const auto& s : scenarios) spec_of[s.id()] = &s;

    // Matched null scenario per (k, N, p, arity, balance, ogm-presence).
    auto null_key = [](const ScenarioSpec& s) {
        std::ostringstream ss;
        ss << s.k << "|" << s.total_n << "|" << s.p << "|" << s.arity << "|" << to_string(s.balance)
           << "|" << (s.ogm == OgmVariant::None ? "plain" : "target");
        return ss.str();
    };
    std::map<std::string, std::string> null_scenario_of;
    for (const auto& s : scenarios) {
        const bool is_null = s.family == DeviationFamily::Null &&
                             (s.ogm == OgmVariant::None || s.ogm == OgmVariant::True);
        if (is_null) null_scenario_of[null_key(s)] = s.id();
    }

    // statistics per (scenario, method)
    struct Cell {
        std::vector<double> stats;
        std::size_t missing = 0;
        Direction dir = Direction::LowMeansSimilar;
    };
    std::map<std::pair<std::string, std::string>, Cell> cells;
    for (const auto& r : rows) {
        auto& cell = cells[{r.scenario_id, r.method_id}];
        if (r.status == "ok" && std::isfinite(r.statistic)) {
            cell.stats.push_back(r.statistic);
        } else {
            cell.stats.push_back(std::numeric_limits<double>::quiet_NaN());
            ++cell.missing;
        }
        cell.dir = r.direction == "high-means-similar" ? Direction::HighMeansSimilar
                                                       : Direction::LowMeansSimilar;
    }

    std::vector<PesrRecord> records;
    for (const auto& [key, cell] : cells) {
        const auto& [scenario_id, method_id] = key;
        const auto spec_it = spec_of.find(scenario_id);
        if (spec_it == spec_of.end()) continue;
        const ScenarioSpec& spec = *spec_it->second;
        const bool is_null = spec.family == DeviationFamily::Null &&
                             (spec.ogm == OgmVariant::None || spec.ogm == OgmVariant::True);
        if (is_null) continue;

        const auto null_it = null_scenario_of.find(null_key(spec));
        if (null_it == null_scenario_of.end()) continue;
        const auto null_cell_it = cells.find({null_it->second, method_id});
        if (null_cell_it == cells.end()) continue;

        PesrRecord rec;
        rec.scenario_id = scenario_id;
        rec.method_id = method_id;
        rec.k = spec.k;
        rec.total_n = spec.total_n;
        rec.p = spec.p;
        rec.arity = spec.arity;
        rec.balance = to_string(spec.balance);
        rec.family = to_string(spec.family);
        rec.delta = spec.delta;
        rec.grouping = spec.k == 4 ? to_string(spec.grouping) : "";
        try {
            const PesrResult res = pesr(null_cell_it->second.stats, cell.stats, cell.dir);
            rec.pesr = res.pesr;
            rec.mcse = res.mcse;
            rec.n_valid = res.n_valid;
            rec.n_missing = res.n_missing;
        } catch (const std::exception&) {
            rec.n_missing = cell.stats.size();
        }
        records.push_back(std::move(rec));
    }
    std::sort(records.begin(), records.end(), [](const PesrRecord& a, const PesrRecord& b) {
        if (a.scenario_id != b.scenario_id) return a.scenario_id < b.scenario_id;
        return a.method_id < b.method_id;
    });
    return records;
}

void write_pesr_csv(const std::vector<PesrRecord>& records, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << "scenario,method,k,n,p,arity,balance,family,delta,grouping,pesr,mcse,n_valid,n_missing\n";
    for (const auto& r : records) {
        f << r.scenario_id << "," << r.method_id << "," << r.k << "," << r.total_n << "," << r.p
          << "," << r.arity << "," << r.balance << "," << r.family << "," << format_double(r.delta)
          << "," << r.grouping << ",";
        if (r.pesr) f << format_double(*r.pesr);
        f << "," << format_double(r.mcse) << "," << r.n_valid << "," << r.n_missing << "\n";
    }
}

void write_gap_csv(const GapSummary& gaps, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << "cell,method,median_gap\n";
    for (const auto& [method, gap] : gaps.overall) {
        f << "overall," << method << "," << format_double(gap) << "\n";
    }
    for (const auto& [cell, methods] : gaps.per_cell) {
        for (const auto& [method, gap] : methods) {
            f << cell << "," << method << "," << format_double(gap) << "\n";
        }
    }
}

void write_pesr_plots(const std::vector<PesrRecord>& records, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);

    // One panel per (k, N, p, arity, balance, family, grouping).
    std::map<std::string, std::map<std::string, std::map<double, std::pair<double, double>>>> panels;
    for (const auto& r : records) {
        if (!r.pesr) continue;
        std::ostringstream key;
        key << "k" << r.k << "-n" << r.total_n << "-p" << r.p << "-c" << r.arity << "-" << r.balance
            << "-" << r.family;
        if (!r.grouping.empty()) key << "-g" << r.grouping;
        panels[key.str()][r.method_id][r.delta] = {*r.pesr, r.mcse};
    }
    for (const auto& [panel, methods] : panels) {
        std::vector<PlotSeries> series;
        for (const auto& [method, points] : methods) {
            PlotSeries s;
            s.name = method;
            for (const auto& [delta, value] : points) {
                s.x.push_back(delta);
                s.y.push_back(value.first);
                s.err.push_back(value.second);
            }
            series.push_back(std::move(s));
        }
        std::string fname = panel;
        std::replace(fname.begin(), fname.end(), '+', 'x');
        write_svg_lineplot((fs::path(dir) / (fname + ".svg")).string(), panel, series, "delta",
                           "PESR");
    }
}

} // namespace datasim
