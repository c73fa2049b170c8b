#pragma once

#include "rosetta/verify/corpus.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rosetta::verify {

struct BenchRow {
    std::string input;
    bool lambda_origin = false;       // λ-term input (else a first-order call)
    std::uint64_t size = 0;           // |M| or |t|
    std::uint64_t lambda_steps = 0;   // CBV steps of M, or of the compiled call
    std::uint64_t first_order_steps = 0;  // Φ steps, or rewrite steps
    std::uint64_t graph_steps = 0;
    std::uint64_t max_graph = 0;
    bool within_bound = true;         // graph size bound along the run (λ rows)
    double wall_ms = 0;               // graph run
};

struct BenchConfig {
    std::uint64_t seed = 1;
    std::uint64_t fuel = 100000;
    std::vector<std::size_t> sizes{4, 8, 16, 32};
    std::size_t random_terms = 8;
};

/// ADD on p = q numerals, Church additions of growing numerals, the corpus
/// λ-terms and seeded random terms.
std::vector<BenchRow> run_bench(const Corpus& corpus, const BenchConfig& cfg);

/// Least-squares slope of log(wall) against log(steps * peak size), over
/// rows with nonzero measurements; 0 if fewer than two such rows.
double envelope_degree(const std::vector<BenchRow>& rows);

std::string bench_table(const std::vector<BenchRow>& rows);
std::string bench_json(const std::vector<BenchRow>& rows);

} // namespace rosetta::verify
