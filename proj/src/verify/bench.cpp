#include "rosetta/verify/bench.hpp"

#include "rosetta/compile/compiler.hpp"
#include "rosetta/defunc/phi.hpp"
#include "rosetta/error.hpp"
#include "rosetta/graph/rewrite.hpp"
#include "rosetta/lambda/eval.hpp"
#include "rosetta/lambda/syntax.hpp"
#include "rosetta/trs/syntax.hpp"
#include "rosetta/verify/random.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace rosetta::verify {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

trs::Term numeral(std::size_t n) {
    trs::Term t = trs::Term::constructor("0");
    while (n--) t = trs::Term::constructor("s", {t});
    return t;
}

std::string church(std::size_t n) {
    std::string body = "x";
    for (std::size_t i = 0; i < n; ++i) body = "f (" + body + ")";
    return "(\\f.\\x." + body + ")";
}

BenchRow lambda_row(const std::string& name, const lambda::Term& m, std::uint64_t fuel) {
    BenchRow row;
    row.input = name;
    row.lambda_origin = true;
    row.size = m.length();
    row.lambda_steps = lambda::normalize(m, lambda::Strategy::CBV, fuel).steps;

    defunc::Registry reg;
    const trs::Term start = defunc::encode(m, reg);
    row.first_order_steps = trs::normalize_with(start, defunc::phi_contractor(reg), fuel).steps;

    graph::ClosureRules rules(reg);
    const auto t0 = Clock::now();
    auto out = graph::graph_normalize(graph::from_term(start), rules, fuel);
    row.wall_ms = ms_since(t0);
    row.graph_steps = out.steps;
    for (const auto& r : out.trace) row.max_graph = std::max<std::uint64_t>(row.max_graph, r.graph_size);
    row.within_bound = graph::check_size_bound(m, out.trace);
    return row;
}

} // namespace

std::vector<BenchRow> run_bench(const Corpus& corpus, const BenchConfig& cfg) {
    std::vector<BenchRow> rows;

    if (const auto* add = corpus.system("add")) {
        compile::CompiledSystem cs(add->system);
        graph::SystemRules rules(add->system);
        for (auto p : cfg.sizes) {
            const trs::Term t = trs::Term::function("add", {numeral(p), numeral(p)});
            BenchRow row;
            row.input = "add(" + std::to_string(p) + "," + std::to_string(p) + ")";
            row.size = t.length();
            row.first_order_steps = trs::normalize(add->system, t, cfg.fuel).steps;
            row.lambda_steps = lambda::normalize(cs.compile_input(t), lambda::Strategy::CBV, 100 * cfg.fuel).steps;
            const auto t0 = Clock::now();
            auto out = graph::graph_normalize(graph::from_term(t), rules, cfg.fuel);
            row.wall_ms = ms_since(t0);
            row.graph_steps = out.steps;
            for (const auto& r : out.trace) row.max_graph = std::max<std::uint64_t>(row.max_graph, r.graph_size);
            rows.push_back(row);
        }
    }

    const std::string plus = "(\\m.\\n.\\f.\\x.m f (n f x))";
    for (auto p : cfg.sizes) {
        auto m = lambda::parse(plus + " " + church(p) + " " + church(p) + " (\\y.y) (\\w.w)");
        rows.push_back(lambda_row("church-add(" + std::to_string(p) + "," + std::to_string(p) + ")", m, cfg.fuel));
    }
    for (const auto& t : corpus.terms) rows.push_back(lambda_row(t.name, t.term, std::min<std::uint64_t>(cfg.fuel, 1000)));
    Rng rng(cfg.seed);
    for (std::size_t i = 0; i < cfg.random_terms; ++i)
        rows.push_back(lambda_row("random#" + std::to_string(i), random_closed_term(rng), std::min<std::uint64_t>(cfg.fuel, 1000)));
    return rows;
}

double envelope_degree(const std::vector<BenchRow>& rows) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows)
        if (r.wall_ms > 0 && r.graph_steps > 0 && r.max_graph > 0)
            pts.emplace_back(std::log(static_cast<double>(r.graph_steps) * static_cast<double>(r.max_graph)),
                             std::log(r.wall_ms));
    if (pts.size() < 2) return 0;
    double sx = 0, sy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
    }
    const double mx = sx / pts.size(), my = sy / pts.size();
    double num = 0, den = 0;
    for (auto [x, y] : pts) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    return den > 0 ? num / den : 0;
}

std::string bench_table(const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << std::left << std::setw(26) << "input" << std::right << std::setw(7) << "size" << std::setw(10) << "lambda"
       << std::setw(10) << "first" << std::setw(10) << "graph" << std::setw(10) << "peak" << std::setw(8) << "bound"
       << std::setw(12) << "wall_ms" << '\n';
    for (const auto& r : rows) {
        os << std::left << std::setw(26) << r.input << std::right << std::setw(7) << r.size << std::setw(10)
           << r.lambda_steps << std::setw(10) << r.first_order_steps << std::setw(10) << r.graph_steps << std::setw(10)
           << r.max_graph << std::setw(8) << (r.lambda_origin ? (r.within_bound ? "ok" : "FAIL") : "-")
           << std::setw(12) << std::fixed << std::setprecision(3) << r.wall_ms << '\n';
    }
    os << "wall-clock envelope degree in steps*size: " << std::setprecision(2) << envelope_degree(rows) << '\n';
    return os.str();
}

std::string bench_json(const std::vector<BenchRow>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows)
        out.push_back({{"input", r.input},
                       {"lambda_origin", r.lambda_origin},
                       {"size", r.size},
                       {"lambda_steps", r.lambda_steps},
                       {"first_order_steps", r.first_order_steps},
                       {"graph_steps", r.graph_steps},
                       {"max_graph_size", r.max_graph},
                       {"within_bound", r.within_bound},
                       {"wall_ms", r.wall_ms}});
    return nlohmann::json{{"rows", out}, {"envelope_degree", envelope_degree(rows)}}.dump(2);
}

} // namespace rosetta::verify
