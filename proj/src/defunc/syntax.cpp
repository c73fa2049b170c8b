#include "rosetta/defunc/syntax.hpp"

#include "rosetta/error.hpp"
#include "rosetta/lambda/syntax.hpp"

#include <cctype>
#include <sstream>

namespace rosetta::defunc {

namespace {

void print(std::ostream& os, const trs::Term& t, const Registry& reg) {
    if (t.is_var()) {
        os << t.name();
        return;
    }
    if (const auto* c = reg.find(t.name())) {
        os << c->symbol << '{' << c->binder << '.' << lambda::to_string(c->body) << '}';
        if (t.arity() == 0) return;
    } else {
        os << t.name();
    }
    os << '(';
    for (std::size_t i = 0; i < t.arity(); ++i) {
        if (i) os << ',';
        print(os, t.arg(i), reg);
    }
    os << ')';
}

class Parser {
public:
    Parser(std::string_view src, Registry& reg) : src_(src), reg_(reg) {}

    trs::Term parse_all() {
        trs::Term t = term();
        skip();
        if (pos_ != src_.size()) fail("trailing input");
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, 1, pos_ + 1); }

    void skip() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    std::string ident() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' || src_[pos_] == '\''))
            ++pos_;
        if (start == pos_) fail("expected a term");
        return std::string(src_.substr(start, pos_ - start));
    }

    std::vector<trs::Term> args() {
        std::vector<trs::Term> out;
        if (!accept('(')) return out;
        if (accept(')')) return out;
        do {
            out.push_back(term());
        } while (accept(','));
        expect(')');
        return out;
    }

    trs::Term term() {
        const std::string name = ident();
        if (name == kApp || name == kCapp) {
            auto a = args();
            if (a.size() != 2) fail(name + " takes two arguments");
            return trs::Term::node(name, name == kApp, std::move(a));
        }
        if (accept('{')) {
            if (!constructor_index(name)) fail("closure constructors are written C<k>{x.body}");
            const std::size_t close = src_.find('}', pos_);
            if (close == std::string_view::npos) fail("unterminated '{'");
            std::string_view inside = src_.substr(pos_, close - pos_);
            const std::size_t dot = inside.find('.');
            if (dot == std::string_view::npos) fail("expected 'x.body' inside braces");
            std::string binder(inside.substr(0, dot));
            while (!binder.empty() && std::isspace(static_cast<unsigned char>(binder.back()))) binder.pop_back();
            while (!binder.empty() && std::isspace(static_cast<unsigned char>(binder.front()))) binder.erase(0, 1);
            lambda::Term body;
            try {
                body = lambda::parse(inside.substr(dot + 1));
            } catch (const ParseError& e) {
                fail(std::string("in constructor body: ") + e.what());
            }
            pos_ = close + 1;
            const auto& c = reg_.intern(binder, body);
            auto a = args();
            if (a.size() != c.arity())
                fail(c.symbol + " expects " + std::to_string(c.arity()) + " arguments");
            return trs::Term::constructor(c.symbol, std::move(a));
        }
        return trs::Term::var(name);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Registry& reg_;
};

} // namespace

std::string to_string(const trs::Term& t, const Registry& reg) {
    std::ostringstream os;
    print(os, t, reg);
    return os.str();
}

trs::Term parse_term(std::string_view source, Registry& reg) { return Parser(source, reg).parse_all(); }

} // namespace rosetta::defunc
