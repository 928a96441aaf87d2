/*
 * Hand-written lexer and recursive-descent parsers for the three text
 * formats (ontology, database, query) and their canonical printers.
 */
#include "omqe/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace omqe {

namespace {

enum class Tok { Name, LParen, RParen, Dot, Comma, Turnstile, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '-';
}

class Lexer {
public:
    explicit Lexer(std::string_view s) : src_(s) {}

    std::vector<Token> all() {
        std::vector<Token> out;
        for (;;) {
            out.push_back(next());
            if (out.back().kind == Tok::End) return out;
        }
    }

private:
    Token next() {
        skip_blank();
        Token t{Tok::End, "", line_, col_};
        if (pos_ >= src_.size()) return t;
        char c = src_[pos_];
        if (name_char(c)) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && name_char(src_[pos_])) advance();
            t.kind = Tok::Name;
            t.text = std::string(src_.substr(start, pos_ - start));
            return t;
        }
        switch (c) {
            case '(': t.kind = Tok::LParen; break;
            case ')': t.kind = Tok::RParen; break;
            case '.': t.kind = Tok::Dot; break;
            case ',': t.kind = Tok::Comma; break;
            case ':':
                if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
                    advance();
                    t.kind = Tok::Turnstile;
                    t.text = ":-";
                    advance();
                    return t;
                }
                [[fallthrough]];
            default:
                throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
        }
        t.text = std::string(1, c);
        advance();
        return t;
    }

    void skip_blank() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

const char* tok_name(Tok k) {
    switch (k) {
        case Tok::Name: return "name";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Dot: return "'.'";
        case Tok::Comma: return "','";
        case Tok::Turnstile: return "':-'";
        case Tok::End: return "end of input";
    }
    return "?";
}

bool is_keyword(const std::string& s) {
    return s == "sub" || s == "subr" || s == "and" || s == "exists" || s == "top" || s == "func" ||
           s == "inv";
}

class Cursor {
public:
    explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

    const Token& peek(std::size_t k = 0) const {
        std::size_t i = std::min(pos_ + k, toks_.size() - 1);
        return toks_[i];
    }
    const Token& take() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool at(Tok k) const { return peek().kind == k; }
    bool at_word(const char* w) const { return peek().kind == Tok::Name && peek().text == w; }

    const Token& expect(Tok k) {
        if (!at(k)) fail(std::string("expected ") + tok_name(k) + ", found " + describe(peek()));
        return take();
    }
    void expect_word(const char* w) {
        if (!at_word(w)) fail(std::string("expected '") + w + "', found " + describe(peek()));
        take();
    }
    std::string expect_name() {
        if (!at(Tok::Name) || is_keyword(peek().text))
            fail("expected a name, found " + describe(peek()));
        return take().text;
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(peek().line, peek().col, msg); }

    static std::string describe(const Token& t) {
        if (t.kind == Tok::Name) return "'" + t.text + "'";
        return tok_name(t.kind);
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

// ----------------------------------------------------------------- ontology

RoleId parse_role(Cursor& cur) {
    if (cur.at_word("inv")) {
        cur.take();
        cur.expect(Tok::LParen);
        std::string n = cur.expect_name();
        cur.expect(Tok::RParen);
        return make_role(role_name_id(n), true);
    }
    return make_role(role_name_id(cur.expect_name()), false);
}

ConceptPtr parse_conj(Cursor& cur);

ConceptPtr parse_primary(Cursor& cur) {
    if (cur.at_word("top")) {
        cur.take();
        return Concept::top();
    }
    if (cur.at_word("exists")) {
        cur.take();
        RoleId r = parse_role(cur);
        cur.expect(Tok::Dot);
        return Concept::exists(r, parse_primary(cur));
    }
    if (cur.at(Tok::LParen)) {
        cur.take();
        ConceptPtr c = parse_conj(cur);
        cur.expect(Tok::RParen);
        return c;
    }
    return Concept::atomic(concept_id(cur.expect_name()));
}

ConceptPtr parse_conj(Cursor& cur) {
    ConceptPtr c = parse_primary(cur);
    while (cur.at_word("and")) {
        cur.take();
        c = Concept::conj(c, parse_primary(cur));
    }
    return c;
}

// Splits the token stream into lines so that one axiom per line can be checked.
std::vector<std::vector<Token>> by_line(const std::vector<Token>& toks) {
    std::vector<std::vector<Token>> lines;
    int current = -1;
    for (const auto& t : toks) {
        if (t.kind == Tok::End) break;
        if (t.line != current) {
            lines.emplace_back();
            current = t.line;
        }
        lines.back().push_back(t);
    }
    return lines;
}

}  // namespace

Ontology parse_ontology(std::string_view text) {
    Ontology o;
    for (auto& line : by_line(Lexer(text).all())) {
        Token end{Tok::End, "", line.back().line, line.back().col + static_cast<int>(line.back().text.size())};
        line.push_back(end);
        Cursor cur(line);
        if (cur.at_word("func") && cur.peek(1).kind == Tok::LParen) {
            cur.take();
            cur.expect(Tok::LParen);
            RoleId r = parse_role(cur);
            cur.expect(Tok::RParen);
            o.add_func(r);
        } else {
            bool role_axiom = false;
            for (const auto& t : line)
                if (t.kind == Tok::Name && t.text == "subr") role_axiom = true;
            if (role_axiom) {
                RoleId r = parse_role(cur);
                cur.expect_word("subr");
                RoleId s = parse_role(cur);
                o.ris.push_back({r, s});
            } else {
                ConceptPtr lhs = parse_conj(cur);
                if (cur.at(Tok::Name) && cur.peek().text != "sub")
                    cur.fail("unknown keyword '" + cur.peek().text + "'");
                cur.expect_word("sub");
                ConceptPtr rhs = parse_conj(cur);
                o.cis.push_back({lhs, rhs});
            }
        }
        if (!cur.at(Tok::End)) cur.fail("trailing input " + Cursor::describe(cur.peek()));
    }
    return o;
}

Database parse_database(std::string_view text) {
    Database d;
    Cursor cur(Lexer(text).all());
    while (!cur.at(Tok::End)) {
        std::string pred = cur.at_word("top") ? cur.take().text : cur.expect_name();
        cur.expect(Tok::LParen);
        std::string a = cur.expect_name();
        std::string b;
        bool binary = false;
        if (cur.at(Tok::Comma)) {
            cur.take();
            b = cur.expect_name();
            binary = true;
        }
        cur.expect(Tok::RParen);
        cur.expect(Tok::Dot);
        Id ca = constant_id(a);
        if (is_null_name(a)) d.mark_null(ca);
        if (binary) {
            if (pred == "top") throw ParseError(0, 0, "top is a concept, not a role");
            Id cb = constant_id(b);
            if (is_null_name(b)) d.mark_null(cb);
            d.add_binary(role_name_id(pred), ca, cb);
        } else {
            d.add_unary(pred == "top" ? kTop : concept_id(pred), ca);
        }
    }
    return d;
}

CQ parse_query(std::string_view text) {
    Cursor cur(Lexer(text).all());
    CQ q;
    q.head = cur.expect_name();
    cur.expect(Tok::LParen);
    std::vector<Token> head_vars;
    if (!cur.at(Tok::RParen)) {
        head_vars.push_back(cur.peek());
        cur.expect_name();
        while (cur.at(Tok::Comma)) {
            cur.take();
            head_vars.push_back(cur.peek());
            cur.expect_name();
        }
    }
    cur.expect(Tok::RParen);
    cur.expect(Tok::Turnstile);

    struct RawAtom {
        std::string pred;
        std::vector<std::string> args;
    };
    std::vector<RawAtom> raw;
    for (;;) {
        RawAtom a;
        a.pred = cur.at_word("top") ? cur.take().text : cur.expect_name();
        cur.expect(Tok::LParen);
        a.args.push_back(cur.expect_name());
        if (cur.at(Tok::Comma)) {
            cur.take();
            a.args.push_back(cur.expect_name());
        }
        cur.expect(Tok::RParen);
        raw.push_back(std::move(a));
        if (cur.at(Tok::Comma)) {
            cur.take();
            continue;
        }
        break;
    }
    cur.expect(Tok::Dot);
    if (!cur.at(Tok::End)) cur.fail("trailing input " + Cursor::describe(cur.peek()));

    for (const auto& a : raw)
        for (const auto& v : a.args) q.var(v);
    for (const auto& a : raw) {
        Atom at{};
        at.binary = a.args.size() == 2;
        at.x = q.var(a.args[0]);
        at.y = at.binary ? q.var(a.args[1]) : at.x;
        if (at.binary && a.pred == "top") throw ParseError(0, 0, "top is a concept, not a role");
        at.pred = at.binary ? role_name_id(a.pred) : (a.pred == "top" ? kTop : concept_id(a.pred));
        if (std::find(q.atoms.begin(), q.atoms.end(), at) == q.atoms.end()) q.atoms.push_back(at);
    }
    std::size_t nbody = q.var_names.size();
    for (const auto& t : head_vars) {
        Var v = q.var(t.text);
        if (v >= nbody) throw ParseError(t.line, t.col, "answer variable '" + t.text + "' does not occur in the body");
        if (q.is_answer(v)) throw ParseError(t.line, t.col, "answer variable '" + t.text + "' repeated");
        q.answers.push_back(v);
    }
    return q;
}

// ----------------------------------------------------------------- printing

std::string print_concept(const Concept& c) {
    switch (c.kind) {
        case Concept::Kind::Top: return "top";
        case Concept::Kind::Name: return concept_str(c.name);
        case Concept::Kind::Conj: return "(" + print_concept(*c.left) + " and " + print_concept(*c.right) + ")";
        case Concept::Kind::Exists: return "(exists " + role_str(c.role) + " . " + print_concept(*c.left) + ")";
    }
    return "";
}

std::string print_ontology(const Ontology& o) {
    std::ostringstream out;
    for (const auto& ci : o.cis) out << print_concept(*ci.lhs) << " sub " << print_concept(*ci.rhs) << '\n';
    for (const auto& ri : o.ris) out << role_str(ri.sub) << " subr " << role_str(ri.sup) << '\n';
    for (RoleId r : o.funcs) out << "func(" << role_str(r) << ")\n";
    return out.str();
}

std::string print_database(const Database& d) {
    std::ostringstream out;
    for (const auto& f : d.unary()) out << concept_str(f.pred) << '(' << constant_str(f.c) << ").\n";
    for (const auto& f : d.binary())
        out << role_name_str(f.role) << '(' << constant_str(f.a) << ',' << constant_str(f.b) << ").\n";
    return out.str();
}

std::string print_query(const CQ& q) {
    std::ostringstream out;
    out << q.head << '(';
    for (std::size_t i = 0; i < q.answers.size(); ++i) out << (i ? "," : "") << q.var_names[q.answers[i]];
    out << ") :- ";
    for (std::size_t i = 0; i < q.atoms.size(); ++i) {
        const Atom& a = q.atoms[i];
        if (i) out << ", ";
        if (a.binary) out << role_name_str(a.pred) << '(' << q.var_names[a.x] << ',' << q.var_names[a.y] << ')';
        else out << concept_str(a.pred) << '(' << q.var_names[a.x] << ')';
    }
    out << ".\n";
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace omqe
