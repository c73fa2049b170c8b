#include "rosetta/lambda/syntax.hpp"

#include "rosetta/error.hpp"

#include <cctype>
#include <ostream>
#include <sstream>
#include <vector>

namespace rosetta::lambda {

namespace {

enum class Tok { Ident, Lambda, Dot, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_space();
        const std::size_t line = line_, col = col_;
        if (pos_ >= src_.size()) return {Tok::End, "", line, col};
        const char c = src_[pos_];
        if (c == '\\') {
            advance();
            return {Tok::Lambda, "\\", line, col};
        }
        // UTF-8 encoding of U+03BB.
        if (static_cast<unsigned char>(c) == 0xCE && pos_ + 1 < src_.size() &&
            static_cast<unsigned char>(src_[pos_ + 1]) == 0xBB) {
            pos_ += 2;
            ++col_;
            return {Tok::Lambda, "\\", line, col};
        }
        if (c == '.') { advance(); return {Tok::Dot, ".", line, col}; }
        if (c == '(') { advance(); return {Tok::LParen, "(", line, col}; }
        if (c == ')') { advance(); return {Tok::RParen, ")", line, col}; }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string text;
            while (pos_ < src_.size()) {
                const char d = src_[pos_];
                if (!std::isalnum(static_cast<unsigned char>(d)) && d != '_' && d != '\'') break;
                text.push_back(d);
                advance();
            }
            return {Tok::Ident, std::move(text), line, col};
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) { tok_ = lex_.next(); }

    Term parse_all() {
        Term t = parse_term();
        if (tok_.kind != Tok::End) fail("trailing input '" + tok_.text + "'");
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what, tok_.line, tok_.column);
    }

    void expect(Tok kind, const char* what) {
        if (tok_.kind != kind) fail(std::string("expected ") + what);
        tok_ = lex_.next();
    }

    bool at_atom_start() const {
        return tok_.kind == Tok::Ident || tok_.kind == Tok::Lambda || tok_.kind == Tok::LParen;
    }

    Term parse_term() {
        if (!at_atom_start()) fail("expected a term");
        Term head = parse_atom();
        while (at_atom_start()) head = Term::app(std::move(head), parse_atom());
        return head;
    }

    Term parse_atom() {
        switch (tok_.kind) {
        case Tok::Ident: {
            Term v = Term::var(tok_.text);
            tok_ = lex_.next();
            return v;
        }
        case Tok::Lambda: {
            tok_ = lex_.next();
            if (tok_.kind != Tok::Ident) fail("expected a binder after lambda");
            std::string binder = tok_.text;
            tok_ = lex_.next();
            expect(Tok::Dot, "'.'");
            return Term::abs(std::move(binder), parse_term());
        }
        case Tok::LParen: {
            tok_ = lex_.next();
            Term t = parse_term();
            expect(Tok::RParen, "')'");
            return t;
        }
        default:
            fail("expected a term");
        }
    }

    Lexer lex_;
    Token tok_;
};

void print(std::ostream& os, const Term& m) {
    switch (m.kind()) {
    case Kind::Var:
        os << m.name();
        return;
    case Kind::Abs:
        os << '\\' << m.name() << '.';
        print(os, m.body());
        return;
    case Kind::App: {
        // Collect the spine so that long applications print without nesting.
        std::vector<const Term*> args;
        const Term* head = &m;
        while (head->is_app()) {
            args.push_back(&head->arg());
            head = &head->fun();
        }
        if (head->is_abs()) {
            os << '(';
            print(os, *head);
            os << ')';
        } else {
            print(os, *head);
        }
        for (auto it = args.rbegin(); it != args.rend(); ++it) {
            os << ' ';
            if ((*it)->is_var()) {
                print(os, **it);
            } else {
                os << '(';
                print(os, **it);
                os << ')';
            }
        }
        return;
    }
    }
}

} // namespace

Term parse(std::string_view source) {
    Parser p(source);
    return p.parse_all();
}

std::string to_string(const Term& m) {
    std::ostringstream os;
    print(os, m);
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Term& m) {
    print(os, m);
    return os;
}

} // namespace rosetta::lambda
