// Serial against OpenMP timings for every verification suite, then the
// step-count table across evaluators.

#include "rosetta/verify/bench.hpp"
#include "rosetta/verify/suites.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <iostream>

using namespace rosetta;

namespace {

double seconds(const verify::Corpus& corpus, const std::string& suite, verify::SuiteConfig cfg,
               verify::Execution mode, std::vector<verify::VerifyReport>& out) {
    cfg.execution = mode;
    const auto t0 = std::chrono::steady_clock::now();
    out = verify::run_suite(suite, corpus, cfg);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same(const std::vector<verify::VerifyReport>& a, const std::vector<verify::VerifyReport>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].instance != b[i].instance || a[i].n != b[i].n || a[i].m != b[i].m || a[i].pass != b[i].pass)
            return false;
    return true;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Suite timings, serial and parallel"};
    verify::SuiteConfig cfg;
    cfg.random_terms = 100;
    cfg.random_systems = 20;
    cfg.fuel = 2000;
    std::vector<std::string> suites = verify::suite_names();
    bool skip_table = false;
    app.add_option("--suite", suites, "Suites to time")->check(CLI::IsMember(verify::suite_names()));
    app.add_option("--fuel", cfg.fuel, "Step budget per run");
    app.add_option("--random-terms", cfg.random_terms, "Random λ-terms per λ suite");
    app.add_option("--random-systems", cfg.random_systems, "Random systems per system suite");
    app.add_option("--seed", cfg.seed, "Generator seed");
    app.add_flag("--no-table", skip_table, "Skip the step-count table");
    CLI11_PARSE(app, argc, argv);

    const auto corpus = verify::load_corpus(verify::default_corpus_dir());
    std::printf("threads: %d\n%-12s %10s %10s %8s %s\n", omp_get_max_threads(), "suite", "serial_s", "omp_s", "speedup",
                "agree");
    bool ok = true;
    for (const auto& s : suites) {
        std::vector<verify::VerifyReport> serial, parallel;
        const double ts = seconds(corpus, s, cfg, verify::Execution::Serial, serial);
        const double tp = seconds(corpus, s, cfg, verify::Execution::Parallel, parallel);
        const bool agree = same(serial, parallel);
        ok = ok && agree && verify::all_passed(serial);
        std::printf("%-12s %10.3f %10.3f %8.2f %s\n", s.c_str(), ts, tp, tp > 0 ? ts / tp : 0.0, agree ? "yes" : "NO");
    }
    if (!skip_table) {
        verify::BenchConfig bc;
        bc.seed = cfg.seed;
        std::cout << '\n' << verify::bench_table(verify::run_bench(corpus, bc));
    }
    return ok ? 0 : 1;
}
