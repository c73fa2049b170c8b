#include "rosetta/verify/suites.hpp"

#include "rosetta/compile/compiler.hpp"
#include "rosetta/defunc/phi.hpp"
#include "rosetta/defunc/psi.hpp"
#include "rosetta/error.hpp"
#include "rosetta/graph/rewrite.hpp"
#include "rosetta/lambda/eval.hpp"
#include "rosetta/lambda/syntax.hpp"
#include "rosetta/trs/syntax.hpp"
#include "rosetta/verify/pat_oracle.hpp"
#include "rosetta/verify/random.hpp"

#include <json.hpp>
#include <omp.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace rosetta::verify {

namespace {

void require(VerifyReport& r, bool ok, const std::string& what) {
    if (!ok && r.pass) {
        r.pass = false;
        r.detail = what;
    }
}

std::string count_str(std::uint64_t a, std::uint64_t b) { return std::to_string(a) + " vs " + std::to_string(b); }

// Corpus terms followed by seeded random closed terms.
std::vector<NamedTerm> lambda_instances(const Corpus& corpus, const SuiteConfig& cfg, std::uint64_t salt) {
    std::vector<NamedTerm> out = corpus.terms;
    Rng rng(cfg.seed * 1000003 + salt);
    for (std::size_t i = 0; i < cfg.random_terms; ++i)
        out.push_back({"random#" + std::to_string(i), random_closed_term(rng, {cfg.max_term_size, false})});
    return out;
}

std::vector<NamedSystem> system_instances(const Corpus& corpus, const SuiteConfig& cfg, std::uint64_t salt) {
    std::vector<NamedSystem> out = corpus.systems;
    Rng rng(cfg.seed * 1000003 + salt);
    for (std::size_t i = 0; i < cfg.random_systems; ++i) out.push_back({"random#" + std::to_string(i), random_system(rng)});
    return out;
}

std::vector<Job> cbv_jobs(const Corpus& corpus, const SuiteConfig& cfg) {
    std::vector<Job> jobs;
    for (const auto& [name, m] : lambda_instances(corpus, cfg, 1)) {
        jobs.push_back({"cbv-sim", name, [m, fuel = cfg.fuel](VerifyReport& r) {
                            defunc::Registry reg;
                            auto rep = defunc::simulate_cbv(m, reg, {fuel, false});
                            r.n = rep.lambda_steps;
                            r.m = rep.phi_steps;
                            r.size = m.length();
                            require(r, r.n == r.m, "step counts differ: " + count_str(r.n, r.m));
                            if (rep.normal)
                                require(r, defunc::readback(rep.phi_result, reg) == rep.lambda_result,
                                        "readback of the first-order result differs");
                        }});
    }
    return jobs;
}

std::vector<Job> cbn_jobs(const Corpus& corpus, const SuiteConfig& cfg) {
    std::vector<Job> jobs;
    for (const auto& [name, m] : lambda_instances(corpus, cfg, 2)) {
        jobs.push_back({"cbn-sim", name, [m, fuel = cfg.fuel](VerifyReport& r) {
                            defunc::Registry reg;
                            auto rep = defunc::simulate_cbn(m, reg, {fuel, false});
                            r.n = rep.lambda_steps;
                            r.m = rep.psi_steps;
                            r.size = m.length();
                            if (r.n > 0) r.k = static_cast<double>(r.m) / static_cast<double>(r.n);
                            if (rep.normal) {
                                require(r, r.n <= r.m && r.m <= 2 * r.n, "n <= m <= 2n fails: " + count_str(r.n, r.m));
                                require(r, defunc::readback(rep.psi_result, reg) == rep.lambda_result,
                                        "readback of the first-order result differs");
                            }
                        }});
    }
    return jobs;
}

std::vector<Job> trs2lam_jobs(const Corpus& corpus, const SuiteConfig& cfg) {
    std::vector<Job> jobs;
    Rng rng(cfg.seed * 1000003 + 3);
    for (const auto& [name, sys] : system_instances(corpus, cfg, 4)) {
        auto calibration = small_calls(sys.signature, 2, 64);
        std::vector<trs::Term> inputs = calibration;
        for (int i = 0; i < 12; ++i) inputs.push_back(random_call(rng, sys.signature, 2));
        jobs.push_back({"trs2lam", name, [sys = sys, calibration, inputs, fuel = cfg.fuel](VerifyReport& r) {
                            compile::CompiledSystem cs(sys);
                            const double k = compile::measure_k(cs, calibration, fuel);
                            r.k = k;
                            compile::TranslationOptions opt;
                            opt.fuel = fuel;
                            if (k > 0) opt.k = k;
                            for (const auto& t : inputs) {
                                try {
                                    auto rep = compile::verify_simulation(cs, t, opt);
                                    r.n += rep.trs_steps;
                                    r.m += rep.lambda_steps;
                                    r.size = std::max<std::uint64_t>(r.size, rep.size);
                                } catch (const Error& e) {
                                    require(r, false, trs::to_string(t) + ": " + e.what());
                                }
                            }
                        }});
    }
    return jobs;
}

void align_system(VerifyReport& r, const trs::RewriteSystem& sys, const trs::Term& t, std::uint64_t fuel) {
    graph::SystemRules rules(sys);
    std::vector<trs::Term> states{t};
    auto ref = trs::normalize(sys, t, fuel, [&](std::uint64_t, const trs::Firing& f) { states.push_back(f.result); });
    bool aligned = true, shared = true;
    std::uint64_t peak = 0;
    auto out = graph::graph_normalize(graph::from_term(t), rules, fuel,
                                      [&](std::uint64_t k, const graph::TermGraph& g, const graph::FireInfo&) {
                                          aligned = aligned && k < states.size() && graph::unfold(g) == states[k];
                                          shared = shared && graph::constructor_shared(g);
                                          peak = std::max<std::uint64_t>(peak, g.size());
                                      });
    const std::string where = trs::to_string(t) + ": ";
    r.n += ref.steps;
    r.m += out.steps;
    r.size = std::max(r.size, peak);
    require(r, aligned, where + "unfolding differs from the term trace");
    require(r, shared, where + "graph lost constructor sharing");
    require(r, out.steps == ref.steps, where + "step counts differ: " + count_str(ref.steps, out.steps));
    require(r, out.status == ref.status, where + "statuses differ");
    require(r, graph::unfold(out.graph) == ref.result, where + "results differ");
}

void align_closure(VerifyReport& r, const lambda::Term& m, std::uint64_t fuel) {
    defunc::Registry reg;
    graph::ClosureRules rules(reg);
    std::vector<trs::Term> states{defunc::encode(m, reg)};
    auto ref = trs::normalize_with(states.front(), defunc::phi_contractor(reg), fuel,
                                   [&](std::uint64_t, const trs::Firing& f) { states.push_back(f.result); });
    bool aligned = true, shared = true;
    auto out = graph::graph_normalize(graph::from_term(states.front()), rules, fuel,
                                      [&](std::uint64_t k, const graph::TermGraph& g, const graph::FireInfo&) {
                                          aligned = aligned && k < states.size() && graph::unfold(g) == states[k];
                                          shared = shared && graph::constructor_shared(g);
                                      });
    r.n = ref.steps;
    r.m = out.steps;
    r.size = m.length();
    require(r, aligned, "unfolding differs from the closure-system trace");
    require(r, shared, "graph lost constructor sharing");
    require(r, out.steps == ref.steps, "step counts differ: " + count_str(ref.steps, out.steps));
    require(r, out.status == ref.status, "statuses differ");
}

std::vector<Job> graph_jobs(const Corpus& corpus, const SuiteConfig& cfg) {
    std::vector<Job> jobs;
    Rng rng(cfg.seed * 1000003 + 5);
    for (const auto& [name, sys] : system_instances(corpus, cfg, 6)) {
        std::vector<trs::Term> inputs = small_calls(sys.signature, 1, 8);
        for (int i = 0; i < 8; ++i) inputs.push_back(random_call(rng, sys.signature, 2));
        jobs.push_back({"graph-sim", name, [sys = sys, inputs, fuel = cfg.fuel](VerifyReport& r) {
                            for (const auto& t : inputs) align_system(r, sys, t, fuel);
                        }});
    }
    // Closure-system graphs compare against full unfoldings, which can be
    // exponentially larger than the graph, so the step budget is capped.
    const std::uint64_t closure_fuel = std::min<std::uint64_t>(cfg.fuel, 200);
    SuiteConfig few = cfg;
    few.random_terms = cfg.random_terms / 5;
    for (const auto& [name, m] : lambda_instances(corpus, few, 7))
        jobs.push_back({"graph-sim", "closure:" + name, [m, closure_fuel](VerifyReport& r) { align_closure(r, m, closure_fuel); }});
    return jobs;
}

std::vector<Job> size_jobs(const Corpus& corpus, const SuiteConfig& cfg) {
    std::vector<Job> jobs;
    for (const auto& [name, m] : lambda_instances(corpus, cfg, 8)) {
        jobs.push_back({"size-bound", name, [m, fuel = cfg.fuel](VerifyReport& r) {
                            defunc::Registry reg;
                            graph::ClosureRules rules(reg);
                            auto out = graph::graph_normalize(graph::from_term(defunc::encode(m, reg)), rules, fuel);
                            r.n = out.steps;
                            r.m = m.length();
                            for (const auto& row : out.trace) r.size = std::max<std::uint64_t>(r.size, row.graph_size);
                            require(r, graph::check_size_bound(m, out.trace), "graph size exceeds (n+1)|M| or grows by more than |M|");
                        }});
    }
    return jobs;
}

std::vector<Job> fixpoint_jobs(const SuiteConfig& cfg) {
    std::vector<Job> jobs;
    Rng rng(cfg.seed * 1000003 + 9);
    for (std::size_t n = 1; n <= 4; ++n) {
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<lambda::Term> values;
            for (std::size_t j = 0; j < n; ++j)
                values.push_back(lambda::Term::abs("q", random_closed_term(rng, {12, false})));
            jobs.push_back({"fixpoint", "n=" + std::to_string(n) + "#" + std::to_string(trial), [n, values](VerifyReport& r) {
                                const auto hs = compile::fixpoint_family(n);
                                r.n = n;
                                for (std::size_t i = 0; i < n; ++i) {
                                    std::vector<lambda::Term> unfolded;
                                    for (std::size_t j = 0; j < n; ++j) {
                                        auto args = values;
                                        args.push_back(lambda::Term::var("x"));
                                        unfolded.push_back(lambda::Term::abs("x", lambda::Term::apps(hs[j], args)));
                                    }
                                    const auto target = lambda::Term::apps(values[i], unfolded);
                                    lambda::Term cur = lambda::Term::apps(hs[i], values);
                                    std::uint64_t k = 0;
                                    while (!lambda::alpha_equivalent(cur, target) && k <= 2 * n) {
                                        auto next = lambda::step_cbv(cur);
                                        if (!next) break;
                                        cur = *next;
                                        ++k;
                                    }
                                    r.m = std::max(r.m, k);
                                    require(r, lambda::alpha_equivalent(cur, target) && k <= 2 * n,
                                            "H" + std::to_string(i + 1) + " did not unfold within 2n steps");
                                }
                            }});
        }
    }
    return jobs;
}

std::vector<Job> pat_jobs(const Corpus& corpus, const SuiteConfig& cfg) {
    std::vector<Job> jobs;
    auto systems = system_instances(corpus, cfg, 10);
    for (std::size_t s = 0; s < systems.size(); ++s) {
        const auto& [name, sys] = systems[s];
        const bool exhaustive = s < corpus.systems.size();
        for (const auto& f : sys.signature.functions) {
            std::vector<compile::PatternRow> rows;
            for (const auto& rule : sys.rules)
                if (rule.head == f.name) rows.push_back(rule.lhs_args);
            jobs.push_back({"pat-oracle", name + ":" + f.name, [sig = sys.signature, rows, width = f.arity, exhaustive](VerifyReport& r) {
                                compile::ScottContext ctx(sig);
                                auto subjects = enumerate_constructor_terms(sig, 2);
                                if (!exhaustive && subjects.size() > 14) subjects.resize(14);
                                auto res = check_pattern_match(ctx, rows, width, subjects);
                                r.n = res.tuples;
                                r.m = res.bottom_tuples;
                                r.size = subjects.size();
                                require(r, res.mismatches == 0,
                                        std::to_string(res.mismatches) + " mismatches, first " + res.first_mismatch);
                            }});
        }
    }
    return jobs;
}

std::set<std::pair<std::string, std::string>> abstractions(const lambda::Term& m) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& s : lambda::subterms(m))
        if (s.is_abs()) out.emplace(s.name(), lambda::to_string(s.body()));
    return out;
}

std::vector<Job> subterm_jobs(const Corpus& corpus, const SuiteConfig& cfg) {
    std::vector<Job> jobs;
    const std::uint64_t fuel = std::min<std::uint64_t>(cfg.fuel, 2000);
    for (const auto& [name, m] : lambda_instances(corpus, cfg, 11)) {
        jobs.push_back({"subterm", name, [m, fuel](VerifyReport& r) {
                            const std::size_t bound = abstractions(m).size();
                            r.size = m.length();
                            r.m = bound;
                            {
                                defunc::Registry reg;
                                auto rep = defunc::simulate_cbv(m, reg, {fuel, true});
                                std::vector<trs::Term> trace;
                                for (const auto& row : rep.rows) trace.push_back(row.phi_term);
                                require(r, defunc::check_subterm_property(m, trace, reg), "call-by-value trace has a foreign body");
                                r.n = defunc::constructors_in(trace, reg).size();
                                require(r, reg.size() <= bound, "more closure constructors than abstractions");
                            }
                            defunc::Registry reg;
                            auto rep = defunc::simulate_cbn(m, reg, {fuel, true});
                            std::vector<trs::Term> trace;
                            for (const auto& row : rep.rows) trace.push_back(row.psi_term);
                            require(r, defunc::check_subterm_property(m, trace, reg), "call-by-name trace has a foreign body");
                            require(r, reg.size() <= bound, "more closure constructors than abstractions");
                        }});
    }
    return jobs;
}

std::vector<Job> invariant_jobs(const SuiteConfig& cfg) {
    std::vector<Job> jobs;
    const std::size_t count = 1000;
    Rng rng(cfg.seed * 1000003 + 12);

    for (std::size_t i = 0; i < count; ++i) {
        auto m = random_closed_term(rng, {cfg.max_term_size, false});
        jobs.push_back({"invariants", "canonical#" + std::to_string(i), [m](VerifyReport& r) {
                            defunc::Registry reg;
                            trs::Term t = defunc::encode(m, reg);
                            for (int k = 0; k < 50; ++k) {
                                require(r, defunc::phi_canonical(t), "call-by-value step left canonical form");
                                auto next = defunc::phi_step(t, reg);
                                if (!next) break;
                                t = *next;
                                ++r.n;
                            }
                            trs::Term u = defunc::encode_spine(m, reg);
                            for (int k = 0; k < 50; ++k) {
                                require(r, defunc::psi_canonical(u) || defunc::psi_semi_canonical(u),
                                        "call-by-name step left semi-canonical form");
                                auto next = defunc::psi_step(u, reg);
                                if (!next) break;
                                u = next->result;
                                ++r.m;
                            }
                        }});
    }
    for (std::size_t i = 0; i < count; ++i) {
        auto m = random_closed_term(rng, {cfg.max_term_size, false});
        jobs.push_back({"invariants", "readback#" + std::to_string(i), [m](VerifyReport& r) {
                            defunc::Registry reg;
                            r.size = m.length();
                            require(r, defunc::readback(defunc::encode(m, reg), reg) == m, "value encoding");
                            require(r, defunc::readback(defunc::encode_spine(m, reg), reg) == m, "spine encoding");
                            require(r, defunc::readback(defunc::encode_frozen(m, reg), reg) == m, "frozen encoding");
                        }});
    }
    for (std::size_t i = 0; i < count; ++i) {
        auto open = random_term(rng, 1 + i % 25, {"a", "b"});
        auto va = random_closed_term(rng, {10, false});
        auto vb = random_closed_term(rng, {10, false});
        jobs.push_back({"invariants", "substitution#" + std::to_string(i), [open, va, vb](VerifyReport& r) {
                            defunc::Registry reg;
                            const trs::Term ta = defunc::encode(va, reg), tb = defunc::encode(vb, reg);
                            const trs::Term t = defunc::encode(open, reg);
                            trs::Substitution s{{"a", ta}, {"b", tb}};
                            std::vector<std::pair<std::string, lambda::Term>> ls{{"a", defunc::readback(ta, reg)},
                                                                                 {"b", defunc::readback(tb, reg)}};
                            r.size = open.length();
                            require(r, defunc::readback(trs::instantiate(t, s), reg) ==
                                           lambda::substitute(defunc::readback(t, reg), ls),
                                    "substitution does not commute with readback");
                        }});
    }
    for (std::size_t i = 0; i < count; ++i) {
        auto sys = random_system(rng);
        auto t = random_call(rng, sys.signature, 3);
        jobs.push_back({"invariants", "graph-roundtrip#" + std::to_string(i), [t](VerifyReport& r) {
                            auto g = graph::from_term(t);
                            r.size = g.size();
                            require(r, graph::unfold(g) == t, "unfold(from_term(t)) differs from t");
                            require(r, graph::constructor_shared(g), "tree graph is not constructor-shared");
                        }});
    }
    for (std::size_t i = 0; i < count; ++i) {
        auto fun = lambda::Term::abs("z", random_term(rng, 1 + i % 12, {"z"}));
        auto arg = lambda::Term::abs("q", random_term(rng, 1 + i % 7, {"q"}));
        jobs.push_back({"invariants", "non-canonical#" + std::to_string(i), [fun, arg](VerifyReport& r) {
                            defunc::Registry reg;
                            const auto& outer = reg.intern("x", lambda::Term::var("y"));
                            const trs::Term redex = trs::Term::function(
                                defunc::kApp, {defunc::encode(fun, reg), defunc::encode(arg, reg)});
                            const trs::Term t = trs::Term::constructor(outer.symbol, {redex});
                            const auto back = defunc::readback(t, reg);
                            require(r, back == lambda::Term::abs("x", lambda::Term::app(fun, arg)), "readback");
                            require(r, !defunc::phi_canonical(t) && !defunc::psi_canonical(t), "term counted as canonical");
                            require(r, defunc::phi_step(t, reg).has_value(), "no first-order step under the closure");
                            require(r, defunc::psi_step_anywhere(t, reg).has_value(), "no call-by-name step under the closure");
                            require(r, !lambda::step_cbv(back) && !lambda::step_cbn(back), "readback is not a normal form");
                        }});
    }
    return jobs;
}

} // namespace

std::vector<trs::Term> small_calls(const trs::Signature& sig, std::size_t depth, std::size_t cap) {
    auto data = enumerate_constructor_terms(sig, depth);
    std::stable_sort(data.begin(), data.end(),
                     [](const trs::Term& a, const trs::Term& b) { return a.length() < b.length(); });
    std::vector<trs::Term> out;
    for (const auto& f : sig.functions) {
        if (f.arity == 0) {
            if (cap > 0) out.push_back(trs::Term::function(f.name));
            continue;
        }
        if (data.empty()) continue;
        // Index tuples by increasing index sum, so smaller arguments come first.
        std::size_t made = 0;
        std::vector<std::size_t> idx(f.arity);
        auto fill = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
            if (made == cap) return;
            if (pos + 1 == f.arity) {
                if (left >= data.size()) return;
                idx[pos] = left;
                std::vector<trs::Term> args;
                for (auto k : idx) args.push_back(data[k]);
                out.push_back(trs::Term::function(f.name, std::move(args)));
                ++made;
                return;
            }
            for (std::size_t k = 0; k <= left && k < data.size(); ++k) {
                idx[pos] = k;
                self(self, pos + 1, left - k);
            }
        };
        for (std::size_t sum = 0; sum <= f.arity * (data.size() - 1) && made < cap; ++sum) fill(fill, 0, sum);
    }
    return out;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"cbv-sim", "cbn-sim",  "trs2lam", "graph-sim", "size-bound",
                                                "fixpoint", "pat-oracle", "subterm", "invariants"};
    return names;
}

bool is_suite(const std::string& name) {
    const auto& n = suite_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

std::vector<VerifyReport> run_jobs(const std::vector<Job>& jobs, Execution execution) {
    std::vector<VerifyReport> out(jobs.size());
    auto one = [&](std::size_t i) {
        VerifyReport& r = out[i];
        r.suite = jobs[i].suite;
        r.instance = jobs[i].instance;
        try {
            jobs[i].run(r);
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = e.what();
        }
    };
    if (execution == Execution::Serial) {
        for (std::size_t i = 0; i < jobs.size(); ++i) one(i);
    } else {
        const auto n = static_cast<std::int64_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t i = 0; i < n; ++i) one(static_cast<std::size_t>(i));
    }
    return out;
}

std::vector<VerifyReport> run_suite(const std::string& name, const Corpus& corpus, const SuiteConfig& cfg) {
    std::vector<Job> jobs;
    if (name == "cbv-sim") jobs = cbv_jobs(corpus, cfg);
    else if (name == "cbn-sim") jobs = cbn_jobs(corpus, cfg);
    else if (name == "trs2lam") jobs = trs2lam_jobs(corpus, cfg);
    else if (name == "graph-sim") jobs = graph_jobs(corpus, cfg);
    else if (name == "size-bound") jobs = size_jobs(corpus, cfg);
    else if (name == "fixpoint") jobs = fixpoint_jobs(cfg);
    else if (name == "pat-oracle") jobs = pat_jobs(corpus, cfg);
    else if (name == "subterm") jobs = subterm_jobs(corpus, cfg);
    else if (name == "invariants") jobs = invariant_jobs(cfg);
    else throw Error("unknown suite: " + name);
    return run_jobs(jobs, cfg.execution);
}

bool all_passed(const std::vector<VerifyReport>& reports) { return first_failure(reports) == nullptr; }

const VerifyReport* first_failure(const std::vector<VerifyReport>& reports) {
    for (const auto& r : reports)
        if (!r.pass) return &r;
    return nullptr;
}

std::string to_json(const std::vector<VerifyReport>& reports) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : reports)
        out.push_back({{"suite", r.suite},
                       {"instance", r.instance},
                       {"n", r.n},
                       {"m", r.m},
                       {"size", r.size},
                       {"k", r.k},
                       {"pass", r.pass},
                       {"detail", r.detail}});
    return out.dump(2);
}

std::string to_text(const std::vector<VerifyReport>& reports) {
    std::ostringstream os;
    std::size_t failed = 0;
    for (const auto& r : reports) {
        os << (r.pass ? "PASS " : "FAIL ") << r.suite << ' ' << r.instance << " n=" << r.n << " m=" << r.m
           << " size=" << r.size;
        if (r.k > 0) os << " k=" << r.k;
        if (!r.pass) {
            ++failed;
            os << " : " << r.detail;
        }
        os << '\n';
    }
    os << reports.size() - failed << '/' << reports.size() << " instances passed\n";
    return os.str();
}

} // namespace rosetta::verify
