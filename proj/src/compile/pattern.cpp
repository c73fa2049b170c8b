#include "rosetta/compile/pattern.hpp"

#include "rosetta/error.hpp"

namespace rosetta::compile {

namespace {

using lambda::Term;

std::vector<std::string> names(char prefix, std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + 1));
    return out;
}

std::vector<Term> vars(std::span<const std::string> ns) {
    std::vector<Term> out;
    out.reserve(ns.size());
    for (const auto& n : ns) out.push_back(Term::var(n));
    return out;
}

std::size_t constructor_count(const trs::Term& p) {
    if (p.is_var()) return 0;
    std::size_t n = 1;
    for (const auto& a : p.args()) n += constructor_count(a);
    return n;
}

std::size_t variable_count(const trs::Term& p) {
    if (p.is_var()) return 1;
    std::size_t n = 0;
    for (const auto& a : p.args()) n += variable_count(a);
    return n;
}

std::size_t variable_count(std::span<const trs::Term> ps) {
    std::size_t n = 0;
    for (const auto& p : ps) n += variable_count(p);
    return n;
}

void check_pattern(const ScottContext& ctx, const trs::Term& p) {
    if (p.is_var()) return;
    if (p.is_function()) throw Error("function symbol " + p.name() + " in a pattern");
    const std::size_t i = ctx.signature().constructor_index(p.name());
    if (i == trs::Signature::npos || ctx.arity(i) != p.arity()) throw Error("unknown constructor " + p.name());
    for (const auto& a : p.args()) check_pattern(ctx, a);
}

// λV.λA1..At.λB1..Bk.λC1..Cu. V A1..At (c_j B1..Bk) C1..Cu
Term repack(const ScottContext& ctx, std::size_t j, std::size_t before, std::size_t after) {
    auto a = names('A', before), b = names('B', ctx.arity(j)), c = names('C', after);
    std::vector<Term> args = vars(a);
    args.push_back(Term::apps(ctx.curried(j), vars(b)));
    for (auto& v : vars(c)) args.push_back(std::move(v));
    Term body = Term::apps(Term::var("V"), args);
    return Term::abs("V", Term::lams(a, Term::lams(b, Term::lams(c, body))));
}

Term build(const ScottContext& ctx, const std::vector<PatternRow>& rows, std::size_t width, const Term& failure) {
    const auto xs = names('X', width);
    if (rows.empty()) return Term::lams(xs, failure);

    std::size_t total = 0;
    for (const auto& row : rows)
        for (const auto& p : row) total += constructor_count(p);

    if (total == 0) {
        // Single all-variable row: check each subject against bottom, then
        // hand all of them to the row's value.
        Term k = Term::apps(Term::var("R"), vars(xs));
        for (std::size_t l = width; l-- > 0;) {
            std::vector<Term> alts;
            for (std::size_t j = 0; j < ctx.g(); ++j)
                alts.push_back(Term::lams(names('U', ctx.arity(j)), Term::abs("D", k)));
            alts.push_back(Term::abs("D", failure));
            alts.push_back(identity());
            k = Term::apps(Term::var(xs[l]), alts);
        }
        return Term::lams(xs, Term::abs("R", k));
    }

    std::size_t col = width;
    for (std::size_t c = 0; c < width && col == width; ++c)
        for (const auto& row : rows)
            if (!row[c].is_var()) {
                col = c;
                break;
            }

    const auto rs = names('R', rows.size());
    std::vector<std::string> others;
    for (std::size_t c = 0; c < width; ++c)
        if (c != col) others.push_back(xs[c]);

    std::vector<Term> dispatch;
    for (std::size_t j = 0; j < ctx.g(); ++j) {
        const std::size_t k = ctx.arity(j);
        const auto zs = names('Z', k);
        std::vector<PatternRow> next;
        std::vector<Term> values;
        for (std::size_t p = 0; p < rows.size(); ++p) {
            const auto& row = rows[p];
            const trs::Term& s = row[col];
            PatternRow widened(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(col));
            Term wrapper;
            if (s.is_var()) {
                for (std::size_t q = 0; q < k; ++q) widened.push_back(trs::Term::var("_"));
                const std::size_t before = variable_count(std::span(row).first(col));
                const std::size_t after = variable_count(std::span(row).subspan(col + 1));
                wrapper = repack(ctx, j, before, after);
            } else if (s.name() == ctx.signature().constructors[j].name) {
                for (const auto& a : s.args()) widened.push_back(a);
                wrapper = identity();
            } else {
                continue;
            }
            widened.insert(widened.end(), row.begin() + static_cast<std::ptrdiff_t>(col) + 1, row.end());
            next.push_back(std::move(widened));
            values.push_back(Term::app(wrapper, Term::var(rs[p])));
        }
        std::vector<Term> args;
        for (std::size_t c = 0; c < col; ++c) args.push_back(Term::var(xs[c]));
        for (auto& z : vars(zs)) args.push_back(std::move(z));
        for (std::size_t c = col + 1; c < width; ++c) args.push_back(Term::var(xs[c]));
        for (auto& v : values) args.push_back(std::move(v));
        Term body = Term::apps(build(ctx, next, width - 1 + k, failure), args);
        dispatch.push_back(Term::lams(zs, Term::lams(others, Term::lams(rs, body))));
    }
    dispatch.push_back(Term::lams(others, Term::lams(rs, failure)));
    for (auto& v : vars(others)) dispatch.push_back(std::move(v));
    for (auto& v : vars(rs)) dispatch.push_back(std::move(v));
    return Term::lams(xs, Term::lams(rs, Term::apps(Term::var(xs[col]), dispatch)));
}

} // namespace

Term identity() { return Term::abs("D", Term::var("D")); }

Term compile_pattern_match(const ScottContext& ctx, const std::vector<PatternRow>& rows, std::size_t width,
                           const Term& failure) {
    for (const auto& row : rows) {
        if (row.size() != width) throw Error("pattern rows must all have the same length");
        for (const auto& p : row) check_pattern(ctx, p);
    }
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = a + 1; b < rows.size(); ++b) {
            bool overlap = true;
            for (std::size_t c = 0; c < width && overlap; ++c) overlap = trs::unifiable(rows[a][c], rows[b][c]);
            if (overlap)
                throw OverlapError("rows " + std::to_string(a + 1) + " and " + std::to_string(b + 1) + " overlap");
        }
    return build(ctx, rows, width, failure);
}

std::vector<Term> fixpoint_family(std::size_t n) {
    const auto xs = names('X', n), ys = names('Y', n);
    std::vector<Term> self = vars(xs);
    for (auto& y : vars(ys)) self.push_back(std::move(y));
    std::vector<Term> ms;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Term> unfolded;
        for (std::size_t l = 0; l < n; ++l) {
            std::vector<Term> args = self;
            args.push_back(Term::var("Z"));
            unfolded.push_back(Term::abs("Z", Term::apps(Term::var(xs[l]), args)));
        }
        ms.push_back(Term::lams(xs, Term::lams(ys, Term::apps(Term::var(ys[j]), unfolded))));
    }
    std::vector<Term> hs;
    for (std::size_t i = 0; i < n; ++i) hs.push_back(Term::apps(ms[i], ms));
    return hs;
}

} // namespace rosetta::compile
