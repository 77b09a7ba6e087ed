// corrclust command-line front end: solve / exact / gen / check / bench.
//
// Exit codes: 0 success, 2 input or argument error, 3 enumeration or size
// budget exceeded, 4 internal invariant violation.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "corrclust/complete_solver.hpp"
#include "corrclust/errors.hpp"
#include "corrclust/instance_io.hpp"
#include "corrclust/pipeline.hpp"
#include "corrclust/report_json.hpp"

namespace cc = corrclust;

namespace {

struct SolveArgs {
    std::string input;
    std::string delta = "1/65";
    int max_k = 8;
    std::string complete_solver = "pivot";
    std::string cut_solver = "isolating";
    int repeats = 5;
    long long enum_max_subsets = 4096;
    int enum_max_size = 0;
    std::uint64_t seed = 0;
    std::string json_out;
};

cc::PipelineConfig make_config(const SolveArgs& a) {
    cc::PipelineConfig cfg;
    cfg.delta = cc::DeltaParams{cc::Rational::parse(a.delta)};
    cfg.max_k = a.max_k;
    cfg.solver.kind = a.complete_solver == "exact" ? cc::SolverKind::Exact : cc::SolverKind::Pivot;
    cfg.solver.repeats = a.repeats;
    cfg.cut_solver =
        a.cut_solver == "exact" ? cc::CutSolverKind::Exact : cc::CutSolverKind::Isolating;
    cfg.budget.max_subsets = a.enum_max_subsets;
    cfg.budget.max_subset_size = a.enum_max_size;
    cfg.seed = a.seed;
    return cfg;
}

int run_solve(const SolveArgs& a) {
    cc::SignedGraph g = cc::load_instance(a.input);
    cc::RunReport report = cc::solve(g, make_config(a));
    std::string text = cc::report_to_string(report);
    std::cout << text;
    if (!a.json_out.empty()) cc::write_file_atomic(a.json_out, text);
    return 0;
}

int run_exact(const std::string& input, int max_n, const std::string& json_out) {
    cc::SignedGraph g = cc::load_instance(input);
    auto t0 = std::chrono::steady_clock::now();
    cc::Clustering best = cc::exact_cc(g, cc::vset::range(g.size()), max_n);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    cc::MistakeReport m =
        g.size() > 0 ? cc::count_mistakes(g, best) : cc::MistakeReport{};
    cc::Json j;
    j["version"] = 1;
    j["n"] = g.size();
    j["exact_opt"] = m.total;
    j["mistakes"] = {{"positive", m.positive}, {"negative", m.negative}, {"total", m.total}};
    cc::Json clusters = cc::Json::array();
    for (const auto& cluster : best.clusters()) clusters.push_back(cluster);
    j["clusters"] = std::move(clusters);
    j["runtime_ms"] = ms;
    std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (!json_out.empty()) cc::write_file_atomic(json_out, text);
    return 0;
}

int run_gen(const cc::InstanceSpec& spec, const std::string& out, const std::string& truth_out) {
    cc::PlantedInstance planted = cc::gen_planted(spec);
    cc::write_file_atomic(out, cc::write_instance(planted.graph));
    if (!truth_out.empty())
        cc::write_file_atomic(truth_out, cc::write_clustering(planted.ground_truth));
    std::cout << "n=" << planted.graph.size()
              << " labeled_pairs=" << planted.graph.labeled_pair_count()
              << " flipped=" << planted.flipped_labeled_pairs << " -> " << out << "\n";
    return 0;
}

int run_check(const std::string& input, const std::string& clustering_path) {
    cc::SignedGraph g = cc::load_instance(input);
    cc::Clustering c = cc::parse_clustering(cc::read_file(clustering_path), g.size());
    cc::MistakeReport m = cc::count_mistakes(g, c);
    cc::Json j;
    j["version"] = 1;
    j["n"] = g.size();
    j["num_clusters"] = c.cluster_count();
    j["mistakes"] = {{"positive", m.positive}, {"negative", m.negative}, {"total", m.total}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

struct BenchRow {
    std::string file;
    bool ok = false;
    std::string error;
    int n = 0;
    int k = 0;
    long long mistakes = 0;
    std::optional<long long> exact_opt;
    std::optional<double> ratio;
    bool violation = false;
    long long runtime_ms = 0;
};

int run_bench(const std::string& suite, const std::string& json_out) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    {
        std::error_code ec;
        fs::directory_iterator it(suite, ec);
        if (ec) throw cc::parse_error("cannot read suite directory '" + suite + "'");
        for (const auto& entry : it)
            if (entry.is_regular_file() && entry.path().extension() == ".ccg")
                files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw cc::parse_error("no .ccg instances under '" + suite + "'");

    std::vector<BenchRow> rows(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= files.size()) return;
            BenchRow& row = rows[i];
            row.file = files[i].filename().string();
            try {
                cc::SignedGraph g = cc::load_instance(files[i].string());
                cc::RunReport report = cc::solve(g, cc::PipelineConfig{});
                row.n = report.n;
                row.k = report.k;
                row.mistakes = report.mistakes.total;
                row.runtime_ms = report.runtime_ms;
                if (g.size() <= cc::kDefaultExactCap) {
                    long long opt =
                        cc::count_mistakes(g, cc::exact_cc(g, cc::vset::range(g.size()))).total;
                    row.exact_opt = opt;
                    row.violation = row.mistakes < opt;
                    if (opt > 0)
                        row.ratio = static_cast<double>(row.mistakes) / static_cast<double>(opt);
                    else if (row.mistakes == 0)
                        row.ratio = 1.0;
                }
                row.ok = true;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };
    std::size_t n_threads = std::min<std::size_t>(
        files.size(), std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    double ratio_sum = 0.0, ratio_max = 0.0;
    long long ratio_count = 0, violations = 0, failures = 0, total_ms = 0;
    cc::Json results = cc::Json::array();
    for (const auto& row : rows) {
        cc::Json j;
        j["file"] = row.file;
        if (!row.ok) {
            j["error"] = row.error;
            ++failures;
            results.push_back(std::move(j));
            continue;
        }
        j["n"] = row.n;
        j["k"] = row.k;
        j["mistakes"] = row.mistakes;
        if (row.exact_opt) j["exact_opt"] = *row.exact_opt;
        if (row.ratio) {
            j["ratio"] = *row.ratio;
            ratio_sum += *row.ratio;
            ratio_max = std::max(ratio_max, *row.ratio);
            ++ratio_count;
        }
        if (row.violation) ++violations;
        j["runtime_ms"] = row.runtime_ms;
        total_ms += row.runtime_ms;
        results.push_back(std::move(j));
    }
    cc::Json j;
    j["version"] = 1;
    j["suite"] = suite;
    j["instances"] = static_cast<long long>(files.size());
    j["results"] = std::move(results);
    cc::Json summary;
    summary["failures"] = failures;
    summary["violations"] = violations;
    summary["ratio_count"] = ratio_count;
    if (ratio_count > 0) {
        summary["mean_ratio"] = ratio_sum / static_cast<double>(ratio_count);
        summary["max_ratio"] = ratio_max;
    }
    summary["total_runtime_ms"] = total_ms;
    j["summary"] = std::move(summary);
    std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (!json_out.empty()) cc::write_file_atomic(json_out, text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"correlation clustering with missing pairs"};
    app.require_subcommand(1);

    SolveArgs sa;
    auto* solve_cmd = app.add_subcommand("solve", "run the clustering pipeline on an instance");
    solve_cmd->add_option("--input", sa.input, "instance file")->required();
    solve_cmd->add_option("--delta", sa.delta, "cleanness parameter, e.g. 1/65");
    solve_cmd->add_option("--max-k", sa.max_k, "largest tolerated missing-pair cover");
    solve_cmd->add_option("--complete-solver", sa.complete_solver, "pivot|exact")
        ->check(CLI::IsMember({"pivot", "exact"}));
    solve_cmd->add_option("--cut-solver", sa.cut_solver, "isolating|exact")
        ->check(CLI::IsMember({"isolating", "exact"}));
    solve_cmd->add_option("--repeats", sa.repeats, "pivot restarts per subproblem");
    solve_cmd->add_option("--enum-max-subsets", sa.enum_max_subsets,
                          "cap on enumerated subsets per family");
    solve_cmd->add_option("--enum-max-size", sa.enum_max_size,
                          "subset size cap once truncating (0 = automatic)");
    solve_cmd->add_option("--seed", sa.seed, "random seed");
    solve_cmd->add_option("--json-out", sa.json_out, "also write the report here");

    std::string ex_input, ex_json_out;
    int ex_max_n = cc::kDefaultExactCap;
    auto* exact_cmd = app.add_subcommand("exact", "brute-force optimum for a small instance");
    exact_cmd->add_option("--input", ex_input, "instance file")->required();
    exact_cmd->add_option("--max-n", ex_max_n, "refuse instances larger than this");
    exact_cmd->add_option("--json-out", ex_json_out, "also write the report here");

    cc::InstanceSpec spec;
    std::string gen_out, gen_truth_out;
    auto* gen_cmd = app.add_subcommand("gen", "generate a planted instance");
    gen_cmd->add_option("--n", spec.n, "good vertices")->required();
    gen_cmd->add_option("--bad-k", spec.k_bad, "vertices with missing pairs");
    gen_cmd->add_option("--clusters", spec.num_clusters, "planted clusters");
    gen_cmd->add_option("--flip-prob", spec.flip_prob, "label noise probability");
    gen_cmd->add_option("--missing-frac", spec.missing_frac,
                        "fraction of bad-incident pairs left unlabeled");
    gen_cmd->add_option("--seed", spec.seed, "random seed");
    gen_cmd->add_option("--out", gen_out, "instance file to write")->required();
    gen_cmd->add_option("--truth-out", gen_truth_out, "also write the planted clustering here");

    std::string chk_input, chk_clustering;
    auto* check_cmd = app.add_subcommand("check", "score a clustering file against an instance");
    check_cmd->add_option("--input", chk_input, "instance file")->required();
    check_cmd->add_option("--clustering", chk_clustering, "clustering file")->required();

    std::string bench_suite, bench_json_out;
    auto* bench_cmd = app.add_subcommand("bench", "solve every .ccg instance in a directory");
    bench_cmd->add_option("--suite", bench_suite, "directory of instances")->required();
    bench_cmd->add_option("--json-out", bench_json_out, "also write the report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*solve_cmd) return run_solve(sa);
        if (*exact_cmd) return run_exact(ex_input, ex_max_n, ex_json_out);
        if (*gen_cmd) return run_gen(spec, gen_out, gen_truth_out);
        if (*check_cmd) return run_check(chk_input, chk_clustering);
        if (*bench_cmd) return run_bench(bench_suite, bench_json_out);
    } catch (const cc::parse_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const cc::budget_error& e) {
        std::cerr << "budget exceeded: " << e.what();
        if (e.lower_bound() >= 0) std::cerr << " (lower bound " << e.lower_bound() << ")";
        std::cerr << "\n";
        return 3;
    } catch (const cc::invariant_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
