#pragma once

#include "rosetta/verify/corpus.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rosetta::verify {

/// Outcome of one verification instance.
struct VerifyReport {
    std::string suite;
    std::string instance;
    std::uint64_t n = 0;     // source-side steps
    std::uint64_t m = 0;     // target-side steps
    std::uint64_t size = 0;  // input size, or peak graph size for graph suites
    double k = 0;            // measured constant, where one applies
    bool pass = true;
    std::string detail;      // first failure, empty on success
};

enum class Execution { Serial, Parallel };

struct SuiteConfig {
    std::uint64_t seed = 1;
    std::uint64_t fuel = 10000;
    std::size_t random_terms = 500;     // random closed λ-terms per λ suite
    std::size_t random_systems = 40;    // random rewrite systems per system suite
    std::size_t max_term_size = 40;
    Execution execution = Execution::Parallel;
};

/// cbv-sim, cbn-sim, trs2lam, graph-sim, size-bound, fixpoint, pat-oracle,
/// subterm, invariants.
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

/// Reports are ordered by instance, independently of the execution mode.
/// Throws rosetta::Error for an unknown suite name.
std::vector<VerifyReport> run_suite(const std::string& name, const Corpus& corpus, const SuiteConfig& cfg);

/// One independent unit of work. `run` fills in counts and the verdict;
/// an escaping exception marks the instance failed with its message.
struct Job {
    std::string suite;
    std::string instance;
    std::function<void(VerifyReport&)> run;
};

/// Calls f(a1..an) for every function f, with arguments of height at most
/// `depth`, at most `cap` calls per function.
std::vector<trs::Term> small_calls(const trs::Signature& sig, std::size_t depth, std::size_t cap);

/// Runs jobs in order (serial) or across an OpenMP team (parallel).
std::vector<VerifyReport> run_jobs(const std::vector<Job>& jobs, Execution execution);

bool all_passed(const std::vector<VerifyReport>& reports);
const VerifyReport* first_failure(const std::vector<VerifyReport>& reports);

std::string to_json(const std::vector<VerifyReport>& reports);
/// One line per report plus a summary line.
std::string to_text(const std::vector<VerifyReport>& reports);

} // namespace rosetta::verify
