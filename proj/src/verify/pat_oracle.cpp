#include "rosetta/verify/pat_oracle.hpp"

#include "rosetta/lambda/eval.hpp"
#include "rosetta/lambda/syntax.hpp"
#include "rosetta/trs/syntax.hpp"

namespace rosetta::verify {

namespace {

using lambda::Term;

bool bind(const trs::Term& p, const trs::Term& t, std::vector<trs::Term>& out) {
    if (p.is_var()) {
        out.push_back(t);
        return true;
    }
    if (t.is_var() || p.name() != t.name() || p.arity() != t.arity()) return false;
    for (std::size_t i = 0; i < p.arity(); ++i)
        if (!bind(p.arg(i), t.arg(i), out)) return false;
    return true;
}

std::vector<std::string> names(const char* prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

// λQ0..Q(k-1).λT0..T(n-1). Ti Q0..Q(k-1)
Term selector(std::size_t i, std::size_t vars, std::size_t rows) {
    auto qs = names("Q", vars), ts = names("T", rows);
    std::vector<Term> qv;
    for (const auto& q : qs) qv.push_back(Term::var(q));
    return Term::lams(qs, Term::lams(ts, Term::apps(Term::var(ts[i]), qv)));
}

Term selected(std::size_t i, std::size_t rows, const std::vector<Term>& encoded) {
    auto ts = names("T", rows);
    return Term::lams(ts, Term::apps(Term::var(ts[i]), encoded));
}

std::size_t var_count(const compile::PatternRow& row) {
    std::size_t n = 0;
    for (const auto& p : row) n += trs::vars(p).size();
    return n;
}

} // namespace

std::vector<trs::Term> enumerate_constructor_terms(const trs::Signature& sig, std::size_t depth) {
    std::vector<trs::Term> level;
    for (const auto& c : sig.constructors)
        if (c.arity == 0) level.push_back(trs::Term::constructor(c.name));
    for (std::size_t d = 0; d < depth && !level.empty(); ++d) {
        std::vector<trs::Term> next;
        for (const auto& c : sig.constructors) {
            if (c.arity == 0) {
                next.push_back(trs::Term::constructor(c.name));
                continue;
            }
            std::vector<std::size_t> idx(c.arity, 0);
            while (true) {
                std::vector<trs::Term> args;
                for (auto k : idx) args.push_back(level[k]);
                next.push_back(trs::Term::constructor(c.name, std::move(args)));
                std::size_t p = 0;
                while (p < idx.size() && ++idx[p] == level.size()) idx[p++] = 0;
                if (p == idx.size()) break;
            }
        }
        level = std::move(next);
    }
    return level;
}

std::optional<Selection> select_row(const std::vector<compile::PatternRow>& rows,
                                    const std::vector<trs::Term>& subjects) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
        Selection s{r, {}};
        bool ok = rows[r].size() == subjects.size();
        for (std::size_t c = 0; c < subjects.size() && ok; ++c) ok = bind(rows[r][c], subjects[c], s.bound);
        if (ok) return s;
    }
    return std::nullopt;
}

PatAgreement check_pattern_match(const compile::ScottContext& ctx, const std::vector<compile::PatternRow>& rows,
                                 std::size_t width, const std::vector<trs::Term>& subjects) {
    const Term pat = compile::compile_pattern_match(ctx, rows, width);
    std::vector<Term> values;
    for (std::size_t i = 0; i < rows.size(); ++i) values.push_back(selector(i, var_count(rows[i]), rows.size()));
    std::vector<Term> encoded;
    for (const auto& s : subjects) encoded.push_back(ctx.encode(s));

    PatAgreement out;
    const std::size_t choices = subjects.size() + 1; // the last choice is bottom
    std::vector<std::size_t> idx(width, 0);
    while (true) {
        std::vector<Term> args;
        std::vector<trs::Term> tuple;
        bool has_bottom = false;
        for (auto k : idx) {
            if (k == subjects.size()) {
                has_bottom = true;
                args.push_back(ctx.bottom());
            } else {
                args.push_back(encoded[k]);
                tuple.push_back(subjects[k]);
            }
        }
        Term expected = ctx.bottom();
        if (!has_bottom) {
            if (auto sel = select_row(rows, tuple)) {
                std::vector<Term> enc;
                for (const auto& b : sel->bound) enc.push_back(ctx.encode(b));
                expected = selected(sel->row, rows.size(), enc);
            }
        }
        for (const auto& v : values) args.push_back(v);
        auto run = lambda::normalize(Term::apps(pat, args), lambda::Strategy::CBV, 1'000'000);
        ++out.tuples;
        if (has_bottom) ++out.bottom_tuples;
        if (run.status != lambda::Status::NormalForm || !lambda::alpha_equivalent(run.result, expected)) {
            if (out.mismatches++ == 0) {
                std::string desc;
                for (std::size_t c = 0; c < idx.size(); ++c)
                    desc += (c ? ", " : "") + (idx[c] == subjects.size() ? std::string("bottom") : trs::to_string(subjects[idx[c]]));
                out.first_mismatch = "(" + desc + ") gave " + lambda::to_string(run.result);
            }
        }
        std::size_t p = 0;
        while (p < idx.size() && ++idx[p] == choices) idx[p++] = 0;
        if (p == idx.size()) break;
    }
    return out;
}

} // namespace rosetta::verify
