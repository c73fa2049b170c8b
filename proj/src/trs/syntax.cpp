#include "rosetta/trs/syntax.hpp"

#include "rosetta/error.hpp"

#include <cctype>
#include <optional>
#include <ostream>
#include <sstream>

namespace rosetta::trs {

namespace {

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::string_view strip_comment(std::string_view line) {
    auto hash = line.find('#');
    return hash == std::string_view::npos ? line : line.substr(0, hash);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Cursor over one line, reporting columns relative to the original line.
class Cursor {
public:
    Cursor(std::string_view text, std::size_t line, std::size_t column0)
        : text_(text), line_(line), column0_(column0) {}

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }
    bool accept(std::string_view lit) {
        skip_space();
        if (text_.substr(pos_, lit.size()) != lit) return false;
        pos_ += lit.size();
        return true;
    }
    void expect(std::string_view lit) {
        if (!accept(lit)) fail("expected '" + std::string(lit) + "'");
    }
    std::string ident() {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
        if (start == pos_) fail("expected a symbol or variable");
        return std::string(text_.substr(start, pos_ - start));
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what, line_, column0_ + pos_ + 1);
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_;
    std::size_t column0_;
};

Term parse_term_at(Cursor& c, const Signature& sig) {
    std::string name = c.ident();
    const Symbol* con = sig.find_constructor(name);
    const Symbol* fun = con ? nullptr : sig.find_function(name);
    std::vector<Term> args;
    bool parens = false;
    if (c.accept("(")) {
        parens = true;
        if (!c.accept(")")) {
            do {
                args.push_back(parse_term_at(c, sig));
            } while (c.accept(","));
            c.expect(")");
        }
    }
    if (!con && !fun) {
        if (parens) c.fail("undeclared symbol " + name);
        return Term::var(std::move(name));
    }
    const Symbol* s = con ? con : fun;
    if (args.size() != s->arity)
        c.fail(name + " expects " + std::to_string(s->arity) + " arguments, got " +
               std::to_string(args.size()));
    return Term::node(std::move(name), fun != nullptr, std::move(args));
}

void parse_decls(std::string_view body, std::size_t line, std::size_t col0, std::vector<Symbol>& out) {
    Cursor c(body, line, col0);
    while (!c.at_end()) {
        std::string name = c.ident();
        c.expect("/");
        std::string digits = c.ident();
        for (char ch : digits)
            if (!std::isdigit(static_cast<unsigned char>(ch))) c.fail("arity must be a number");
        out.push_back({std::move(name), static_cast<std::size_t>(std::stoul(digits))});
    }
}

Rule parse_rule(std::string_view text, std::size_t line, std::size_t col0, const Signature& sig) {
    Cursor c(text, line, col0);
    Term lhs = parse_term_at(c, sig);
    if (lhs.is_var() || !lhs.is_function()) c.fail("left-hand side must start with a function symbol");
    c.expect("->");
    Term rhs = parse_term_at(c, sig);
    if (!c.at_end()) c.fail("trailing input after rule");
    return Rule{lhs.name(), lhs.args(), rhs};
}

void print(std::ostream& os, const Term& t) {
    os << t.name();
    if (t.is_var() || t.arity() == 0) return;
    os << '(';
    for (std::size_t i = 0; i < t.arity(); ++i) {
        if (i) os << ',';
        print(os, t.arg(i));
    }
    os << ')';
}

} // namespace

RewriteSystem parse_system(std::string_view source) {
    RewriteSystem sys;
    enum class Section { None, Rules } section = Section::None;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= source.size()) {
        std::size_t end = source.find('\n', start);
        if (end == std::string_view::npos) end = source.size();
        std::string_view raw = source.substr(start, end - start);
        start = end + 1;
        ++line_no;

        std::string_view line = strip_comment(raw);
        std::string_view content = trim(line);
        if (content.empty()) continue;
        const std::size_t col0 = static_cast<std::size_t>(content.data() - raw.data());

        auto header = [&](std::string_view key) -> std::optional<std::string_view> {
            if (content.substr(0, key.size()) != key) return std::nullopt;
            return content.substr(key.size());
        };
        if (auto rest = header("constructors:")) {
            parse_decls(*rest, line_no, col0 + 13, sys.signature.constructors);
            section = Section::None;
        } else if (auto rest2 = header("functions:")) {
            parse_decls(*rest2, line_no, col0 + 10, sys.signature.functions);
            section = Section::None;
        } else if (auto rest3 = header("rules:")) {
            section = Section::Rules;
            if (!trim(*rest3).empty()) sys.rules.push_back(parse_rule(*rest3, line_no, col0 + 6, sys.signature));
        } else if (section == Section::Rules) {
            sys.rules.push_back(parse_rule(content, line_no, col0, sys.signature));
        } else {
            throw ParseError("expected 'constructors:', 'functions:' or 'rules:'", line_no, col0 + 1);
        }
        if (end == source.size()) break;
    }
    return sys;
}

Term parse_term(std::string_view source, const Signature& sig) {
    Cursor c(source, 1, 0);
    Term t = parse_term_at(c, sig);
    if (!c.at_end()) c.fail("trailing input after term");
    return t;
}

std::string to_string(const Term& t) {
    std::ostringstream os;
    print(os, t);
    return os.str();
}

std::string to_string(const Rule& r) {
    return to_string(r.lhs()) + " -> " + to_string(r.rhs);
}

std::string to_string(const RewriteSystem& sys) {
    std::ostringstream os;
    os << "constructors:";
    for (const auto& s : sys.signature.constructors) os << ' ' << s.name << '/' << s.arity;
    os << "\nfunctions:";
    for (const auto& s : sys.signature.functions) os << ' ' << s.name << '/' << s.arity;
    os << "\nrules:\n";
    for (const auto& r : sys.rules) os << to_string(r) << '\n';
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Term& t) {
    print(os, t);
    return os;
}

} // namespace rosetta::trs
