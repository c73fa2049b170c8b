#include "rosetta/compile/compiler.hpp"
#include "rosetta/defunc/phi.hpp"
#include "rosetta/defunc/psi.hpp"
#include "rosetta/defunc/syntax.hpp"
#include "rosetta/error.hpp"
#include "rosetta/graph/rewrite.hpp"
#include "rosetta/lambda/eval.hpp"
#include "rosetta/lambda/syntax.hpp"
#include "rosetta/trs/syntax.hpp"
#include "rosetta/verify/bench.hpp"
#include "rosetta/verify/corpus.hpp"
#include "rosetta/verify/suites.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace rosetta;
using nlohmann::json;

namespace {

constexpr int kCompleted = 0;
constexpr int kVerificationFailed = 1;
constexpr int kUsageError = 2;

struct UsageError : Error {
    using Error::Error;
};

struct Options {
    std::string file;
    std::string term;
    std::string strategy = "cbv";
    std::uint64_t fuel = 100000;
    bool json = false;
    std::uint64_t seed = 1;
    std::string out;
    std::string corpus;
    std::string suite;
    bool serial = false;
    bool rules = false;
};

std::uint64_t default_fuel() {
    const char* env = std::getenv("ROSETTA_FUEL");
    if (!env || !*env) return 100000;
    try {
        std::size_t used = 0;
        const auto v = std::stoull(env, &used);
        if (used == std::string(env).size() && v > 0) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("ROSETTA_FUEL must be a positive integer");
}

// λ-term source in the Greek-letter spelling; the parsers accept both.
std::string show(const lambda::Term& m) {
    std::string s = lambda::to_string(m), out;
    for (char c : s) {
        if (c == '\\') out += "λ";
        else out += c;
    }
    return out;
}

std::string show(const trs::Term& t, const defunc::Registry& reg) {
    std::string s = defunc::to_string(t, reg), out;
    for (char c : s) {
        if (c == '\\') out += "λ";
        else out += c;
    }
    return out;
}

std::string extension(const std::string& path) { return std::filesystem::path(path).extension().string(); }

lambda::Strategy strategy(const Options& o) {
    return o.strategy == "cbn" ? lambda::Strategy::CBN : lambda::Strategy::CBV;
}

// The λ-term named by the positional file, or by --term when no file is given.
lambda::Term lambda_input(const Options& o) {
    if (!o.file.empty()) {
        if (extension(o.file) == ".trs") throw UsageError("expected a λ-term, got a rewrite system");
        auto m = lambda::parse(verify::read_file(o.file));
        if (!m.closed()) throw UsageError("the term must be closed");
        return m;
    }
    if (o.term.empty()) throw UsageError("give an input file or --term");
    auto m = lambda::parse(o.term);
    if (!m.closed()) throw UsageError("the term must be closed");
    return m;
}

trs::RewriteSystem system_input(const Options& o) {
    auto sys = trs::parse_system(verify::read_file(o.file));
    auto problems = trs::validate(sys);
    if (!problems.empty()) throw UsageError("invalid system: " + problems.front().message);
    return sys;
}

trs::Term call_input(const Options& o, const trs::RewriteSystem& sys) {
    if (o.term.empty()) throw UsageError("a rewrite system needs --term");
    auto t = trs::parse_term(o.term, sys.signature);
    if (!t.closed()) throw UsageError("the term must be closed");
    return t;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw UsageError("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

int cmd_reduce(const Options& o) {
    Output out(o.out);
    auto& os = out.stream();
    if (!o.file.empty() && extension(o.file) == ".trs") {
        auto sys = system_input(o);
        auto t = call_input(o, sys);
        json trace = json::array({{{"step", 0}, {"term", trs::to_string(t)}}});
        auto res = trs::normalize(sys, t, o.fuel, [&](std::uint64_t k, const trs::Firing& f) {
            if (o.json) trace.push_back({{"step", k}, {"term", trs::to_string(f.result)}, {"rule", f.rule}});
        });
        if (o.json) {
            os << json{{"status", trs::to_string(res.status)},
                       {"steps", res.steps},
                       {"result", trs::to_string(res.result)},
                       {"trace", trace}}
                      .dump(2)
               << '\n';
        } else if (res.status == trs::Status::FuelExhausted) {
            os << "FuelExhausted at " << res.steps << '\n';
        } else {
            if (res.status == trs::Status::Deadlock) os << "Deadlock: ";
            os << trs::to_string(res.result) << ", " << res.steps << " steps\n";
        }
        return kCompleted;
    }

    auto m = lambda_input(o);
    json trace = json::array({{{"step", 0}, {"term", show(m)}}});
    auto res = lambda::normalize(m, strategy(o), o.fuel, [&](std::uint64_t k, const lambda::Term& t) {
        if (o.json) trace.push_back({{"step", k}, {"term", show(t)}});
    });
    const bool normal = res.status == lambda::Status::NormalForm;
    if (o.json) {
        os << json{{"status", normal ? "NormalForm" : "FuelExhausted"},
                   {"strategy", o.strategy},
                   {"steps", res.steps},
                   {"result", show(res.result)},
                   {"trace", trace}}
                  .dump(2)
           << '\n';
    } else if (!normal) {
        os << "FuelExhausted at " << res.steps << '\n';
    } else {
        os << show(res.result) << ", " << res.steps << " steps\n";
    }
    return kCompleted;
}

json constructors_json(const std::vector<std::size_t>& ks, const defunc::Registry& reg) {
    json out = json::array();
    for (auto k : ks) {
        const auto& c = reg.at(k);
        out.push_back({{"index", c.index}, {"symbol", c.symbol}, {"binder", c.binder}, {"body", show(c.body)}, {"params", c.params}});
    }
    return out;
}

int cmd_encode(const Options& o) {
    Output out(o.out);
    auto& os = out.stream();
    auto m = lambda_input(o);
    defunc::Registry reg;
    const bool cbn = o.strategy == "cbn";
    const trs::Term t = cbn ? defunc::encode_spine(m, reg) : defunc::encode(m, reg);

    // Rules of the reachable fragment: every constructor met within the fuel.
    std::string rules;
    if (o.rules) {
        std::vector<trs::Term> trace{t};
        if (cbn) {
            auto rep = defunc::simulate_cbn(m, reg, {o.fuel, true});
            for (const auto& row : rep.rows) trace.push_back(row.psi_term);
        } else {
            auto rep = defunc::simulate_cbv(m, reg, {o.fuel, true});
            for (const auto& row : rep.rows) trace.push_back(row.phi_term);
        }
        std::string dumped = defunc::dump_rules(defunc::constructors_in(trace, reg), reg);
        for (char c : dumped) {
            if (c == '\\') rules += "λ";
            else rules += c;
        }
    }
    std::vector<std::size_t> all;
    for (std::size_t k = 0; k < reg.size(); ++k) all.push_back(k);
    if (o.json) {
        json j{{"term", show(t, reg)}, {"strategy", o.strategy}, {"constructors", constructors_json(all, reg)}};
        if (o.rules) j["rules"] = rules;
        os << j.dump(2) << '\n';
    } else {
        os << show(t, reg) << '\n';
        if (o.rules) os << rules;
    }
    return kCompleted;
}

int cmd_readback(const Options& o) {
    Output out(o.out);
    auto& os = out.stream();
    std::string src = !o.file.empty() ? verify::read_file(o.file) : o.term;
    if (src.empty()) throw UsageError("give an input file or --term");
    defunc::Registry reg;
    auto t = defunc::parse_term(src, reg);
    auto m = defunc::readback(t, reg);
    if (o.json)
        os << json{{"term", show(m)}, {"canonical", defunc::phi_canonical(t)}}.dump(2) << '\n';
    else
        os << show(m) << '\n';
    return kCompleted;
}

int cmd_compile(const Options& o) {
    auto sys = system_input(o);
    compile::CompiledSystem cs(sys);
    const auto calibration = verify::small_calls(sys.signature, 2, 64);
    const double k = compile::measure_k(cs, calibration, o.fuel);
    if (k > 0) cs.set_k(k);

    json manifest{{"system", std::filesystem::path(o.file).filename().string()}, {"k", k}};
    json cons = json::object(), funs = json::object();
    for (std::size_t i = 0; i < sys.signature.constructors.size(); ++i)
        cons[sys.signature.constructors[i].name] = show(cs.constructor(i));
    for (std::size_t i = 0; i < sys.signature.functions.size(); ++i)
        funs[sys.signature.functions[i].name] = show(cs.function(i));
    manifest["constructors"] = cons;
    manifest["functions"] = funs;

    int code = kCompleted;
    if (!o.term.empty()) {
        auto t = call_input(o, sys);
        json run{{"input", trs::to_string(t)}};
        try {
            auto rep = compile::verify_simulation(cs, t, {o.fuel, 50'000'000, std::nullopt, true});
            run["status"] = trs::to_string(rep.status);
            run["first_order_steps"] = rep.trs_steps;
            run["lambda_steps"] = rep.lambda_steps;
            run["result"] = trs::to_string(rep.trs_result);
            run["ratio"] = rep.ratio;
            run["within_bound"] = true;
        } catch (const SimulationMismatch& e) {
            run["within_bound"] = false;
            run["error"] = e.what();
            code = kVerificationFailed;
        }
        manifest["run"] = run;
    }

    if (o.json || !o.out.empty()) {
        Output out(o.out);
        out.stream() << manifest.dump(2) << '\n';
    }
    if (!o.json) {
        for (const auto& c : sys.signature.constructors) std::cout << "# constructor " << c.name << '\n' << cons[c.name].get<std::string>() << '\n';
        for (const auto& f : sys.signature.functions) std::cout << "# function " << f.name << '\n' << funs[f.name].get<std::string>() << '\n';
        std::cout << "# k = " << k << '\n';
        if (manifest.contains("run")) {
            const auto& run = manifest["run"];
            if (run.contains("error")) std::cout << "# mismatch: " << run["error"].get<std::string>() << '\n';
            else
                std::cout << "# " << run["input"].get<std::string>() << ": " << run["status"].get<std::string>() << ", "
                          << run["first_order_steps"] << " first-order steps, " << run["lambda_steps"] << " λ steps\n";
        }
    }
    return code;
}

int cmd_graph_run(const Options& o) {
    Output out(o.out);
    auto& os = out.stream();
    graph::GraphOutcome res;
    if (!o.file.empty() && extension(o.file) == ".trs") {
        auto sys = system_input(o);
        graph::SystemRules rules(sys);
        res = graph::graph_normalize(graph::from_term(call_input(o, sys)), rules, o.fuel);
    } else {
        auto m = lambda_input(o);
        defunc::Registry reg;
        graph::ClosureRules rules(reg);
        res = graph::graph_normalize(graph::from_term(defunc::encode(m, reg)), rules, o.fuel);
    }
    if (o.json) {
        os << json{{"status", trs::to_string(res.status)},
                   {"steps", res.steps},
                   {"trace", json::parse(graph::trace_to_json(res.trace))},
                   {"graph", json::parse(graph::to_json(res.graph))}}
                  .dump(2)
           << '\n';
    } else {
        os << graph::to_dot(res.graph);
        std::cerr << trs::to_string(res.status) << " after " << res.steps << " steps, " << res.graph.size()
                  << " vertices\n";
    }
    return kCompleted;
}

verify::Corpus corpus(const Options& o) {
    return verify::load_corpus(o.corpus.empty() ? verify::default_corpus_dir() : std::filesystem::path(o.corpus));
}

int cmd_verify(const Options& o) {
    if (o.suite != "all" && !verify::is_suite(o.suite)) throw UsageError("unknown suite " + o.suite);
    const auto c = corpus(o);
    verify::SuiteConfig cfg;
    cfg.seed = o.seed;
    cfg.fuel = o.fuel;
    cfg.execution = o.serial ? verify::Execution::Serial : verify::Execution::Parallel;
    std::vector<verify::VerifyReport> reports;
    for (const auto& name : verify::suite_names()) {
        if (o.suite != "all" && o.suite != name) continue;
        auto part = verify::run_suite(name, c, cfg);
        reports.insert(reports.end(), part.begin(), part.end());
    }
    Output out(o.out);
    out.stream() << (o.json ? verify::to_json(reports) + "\n" : verify::to_text(reports));
    return verify::all_passed(reports) ? kCompleted : kVerificationFailed;
}

int cmd_bench(const Options& o) {
    verify::BenchConfig cfg;
    cfg.seed = o.seed;
    cfg.fuel = o.fuel;
    auto rows = verify::run_bench(corpus(o), cfg);
    Output out(o.out);
    out.stream() << (o.json ? verify::bench_json(rows) + "\n" : verify::bench_table(rows));
    return kCompleted;
}

} // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Translate and run terms across λ-calculus, term rewriting and graph rewriting"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    try {
        o.fuel = default_fuel();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    }
    app.add_option("--strategy", o.strategy, "Evaluation strategy")->check(CLI::IsMember({"cbv", "cbn"}));
    app.add_option("--fuel", o.fuel, "Step budget (default 100000, or $ROSETTA_FUEL)")->check(CLI::PositiveNumber);
    app.add_flag("--json", o.json, "Machine-readable output");
    app.add_option("--seed", o.seed, "Seed for randomized inputs");
    app.add_option("--term", o.term, "Input term given inline");
    app.add_option("--out", o.out, "Write the output to a file");
    app.add_option("--corpus", o.corpus, "Corpus directory (default: the bundled corpus)");

    auto* reduce = app.add_subcommand("reduce", "Normalize a λ-term or a first-order call");
    reduce->add_option("file", o.file, "A .lam or .trs file");
    auto* encode = app.add_subcommand("encode", "Translate a closed λ-term to a first-order term");
    encode->add_option("file", o.file, "A .lam file");
    encode->add_flag("--rules", o.rules, "Also print the rules of the reachable fragment");
    auto* readback = app.add_subcommand("readback", "Translate a first-order term back to a λ-term");
    readback->add_option("file", o.file, "A file holding one first-order term");
    auto* compile = app.add_subcommand("compile", "Compile a rewrite system to λ-terms");
    compile->add_option("file", o.file, "A .trs file")->required();
    auto* graph_run = app.add_subcommand("graph-run", "Normalize by graph rewriting");
    graph_run->add_option("file", o.file, "A .lam or .trs file");
    auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
    verify_cmd->add_option("suite", o.suite, "Suite name or 'all'")->required();
    verify_cmd->add_flag("--serial", o.serial, "Run instances one after another");
    auto* bench = app.add_subcommand("bench", "Step counts and timings across evaluators");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kCompleted : kUsageError;
    }

    try {
        if (reduce->parsed()) return cmd_reduce(o);
        if (encode->parsed()) return cmd_encode(o);
        if (readback->parsed()) return cmd_readback(o);
        if (compile->parsed()) return cmd_compile(o);
        if (graph_run->parsed()) return cmd_graph_run(o);
        if (verify_cmd->parsed()) return cmd_verify(o);
        if (bench->parsed()) return cmd_bench(o);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kUsageError;
    } catch (const SimulationMismatch& e) {
        std::cerr << "verification failed: " << e.what() << '\n';
        return kVerificationFailed;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return kUsageError;
}
