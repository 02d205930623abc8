#include "fomc/frontend.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fomc {

FormulaPtr Formula::forall(std::string var, std::string domain, FormulaPtr body, Position pos) {
    auto f = std::make_shared<Formula>();
    f->kind = Kind::Forall;
    f->var = std::move(var);
    f->domain = std::move(domain);
    f->left = std::move(body);
    f->pos = pos;
    return f;
}

FormulaPtr Formula::exists(std::string var, std::string domain, FormulaPtr body, Position pos) {
    auto f = std::make_shared<Formula>();
    f->kind = Kind::Exists;
    f->var = std::move(var);
    f->domain = std::move(domain);
    f->left = std::move(body);
    f->pos = pos;
    return f;
}

FormulaPtr Formula::binary(Kind kind, FormulaPtr l, FormulaPtr r, Position pos) {
    auto f = std::make_shared<Formula>();
    f->kind = kind;
    f->left = std::move(l);
    f->right = std::move(r);
    f->pos = pos;
    return f;
}

FormulaPtr Formula::negation(FormulaPtr body, Position pos) {
    auto f = std::make_shared<Formula>();
    f->kind = Kind::Not;
    f->left = std::move(body);
    f->pos = pos;
    return f;
}

FormulaPtr Formula::make_atom(fomc::Atom atom, Position pos) {
    auto f = std::make_shared<Formula>();
    f->kind = Kind::Atom;
    f->atom = std::move(atom);
    f->pos = pos;
    return f;
}

bool same_formula(const FormulaPtr& a, const FormulaPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Formula::Kind::Forall:
        case Formula::Kind::Exists:
            return a->var == b->var && a->domain == b->domain && same_formula(a->left, b->left);
        case Formula::Kind::Not:
            return same_formula(a->left, b->left);
        case Formula::Kind::Atom:
            return a->atom == b->atom;
        default:
            return same_formula(a->left, b->left) && same_formula(a->right, b->right);
    }
}

FormulaPtr InstanceAst::conjunction() const {
    FormulaPtr out;
    for (const auto& f : formulas)
        out = out ? Formula::binary(Formula::Kind::And, out, f, f->pos) : f;
    return out;
}

Sentence InstanceAst::vocabulary() const {
    Sentence s;
    for (const auto& d : domains) s.add_domain({d.name, std::nullopt});
    for (const auto& p : predicates) s.add_predicate({p.name, p.domains});
    for (const auto& c : constants) s.constants[c.name] = c.domain;
    return s;
}

Weights InstanceAst::weights() const {
    Weights w;
    for (const auto& p : predicates)
        if (p.weight) w[p.name] = *p.weight;
    return w;
}

DomainSizes InstanceAst::sizes() const {
    DomainSizes out;
    for (const auto& d : domains)
        if (d.size) out[d.name] = *d.size;
    return out;
}

namespace {

enum class Tok : std::uint8_t {
    Ident,
    Int,
    LParen,
    RParen,
    Comma,
    Dot,
    And,
    Or,
    Not,
    Implies,
    Iff,
    Eq,
    Neq,
    Newline,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    Position pos;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < text.size()) {
        char c = text[i];
        Position pos{line, col};
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        if (c == '\n') {
            out.push_back({Tok::Newline, "\n", pos});
            advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        auto starts = [&](std::string_view s) { return text.substr(i, s.size()) == s; };
        if (is_ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && is_ident_char(text[j])) ++j;
            out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), pos});
            advance(j - i);
            continue;
        }
        bool negative_int = c == '-' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1]));
        if (std::isdigit(static_cast<unsigned char>(c)) || negative_int) {
            std::size_t j = i + 1;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            out.push_back({Tok::Int, std::string(text.substr(i, j - i)), pos});
            advance(j - i);
            continue;
        }
        if (starts("<->")) {
            out.push_back({Tok::Iff, "<->", pos});
            advance(3);
        } else if (starts("->")) {
            out.push_back({Tok::Implies, "->", pos});
            advance(2);
        } else if (starts("!=")) {
            out.push_back({Tok::Neq, "!=", pos});
            advance(2);
        } else {
            Tok k;
            switch (c) {
                case '(': k = Tok::LParen; break;
                case ')': k = Tok::RParen; break;
                case ',': k = Tok::Comma; break;
                case '.': k = Tok::Dot; break;
                case '&': k = Tok::And; break;
                case '|': k = Tok::Or; break;
                case '!': k = Tok::Not; break;
                case '=': k = Tok::Eq; break;
                default:
                    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
            }
            out.push_back({k, std::string(1, c), pos});
            advance(1);
        }
    }
    out.push_back({Tok::End, "", {line, col}});

    // A newline continues the current formula inside parentheses, after an
    // operator, or before a line that starts with a binary operator.
    auto binary_op = [](Tok k) { return k == Tok::And || k == Tok::Or || k == Tok::Implies || k == Tok::Iff; };
    std::vector<Token> filtered;
    int depth = 0;
    for (std::size_t k = 0; k < out.size(); ++k) {
        const auto& t = out[k];
        if (t.kind == Tok::LParen) ++depth;
        if (t.kind == Tok::RParen) --depth;
        if (t.kind != Tok::Newline) {
            filtered.push_back(t);
            continue;
        }
        bool keep = depth <= 0;
        if (keep && !filtered.empty()) {
            const auto& prev = filtered.back();
            if (binary_op(prev.kind) || prev.kind == Tok::Not || prev.kind == Tok::Dot ||
                prev.kind == Tok::Comma || prev.kind == Tok::Eq || prev.kind == Tok::Neq)
                keep = false;
        }
        if (keep) {
            std::size_t n = k + 1;
            while (n < out.size() && out[n].kind == Tok::Newline) ++n;
            if (binary_op(out[n].kind)) keep = false;
        }
        if (keep && (filtered.empty() || filtered.back().kind != Tok::Newline)) filtered.push_back(t);
    }
    return filtered;
}

bool is_upper(const std::string& s) { return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])); }
bool is_lower(const std::string& s) { return !s.empty() && (std::islower(static_cast<unsigned char>(s[0])) || s[0] == '_'); }

const std::set<std::string> kKeywords = {"A", "E", "in", "domain", "predicate", "constant"};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    InstanceAst parse() {
        InstanceAst ast;
        while (true) {
            skip_newlines();
            if (peek().kind == Tok::End) break;
            const Token& t = peek();
            if (t.kind == Tok::Ident && t.text == "domain") {
                parse_domain(ast);
            } else if (t.kind == Tok::Ident && t.text == "predicate") {
                parse_predicate(ast);
            } else if (t.kind == Tok::Ident && t.text == "constant") {
                parse_constant(ast);
            } else {
                ast.formulas.push_back(parse_formula());
            }
            end_statement();
        }
        return ast;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    const Token& next() {
        const Token& t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        next();
        return true;
    }
    [[noreturn]] void fail(const std::string& msg, const Token& t) const {
        throw ParseError(msg, t.pos.line, t.pos.column);
    }
    const Token& expect(Tok k, const char* what) {
        if (peek().kind != k) fail(std::string("expected ") + what + ", found '" + describe(peek()) + "'", peek());
        return next();
    }
    static std::string describe(const Token& t) {
        if (t.kind == Tok::End) return "end of input";
        if (t.kind == Tok::Newline) return "end of line";
        return t.text;
    }
    void skip_newlines() {
        while (peek().kind == Tok::Newline) next();
    }
    void end_statement() {
        if (peek().kind == Tok::End) return;
        expect(Tok::Newline, "end of line");
    }
    std::string upper_ident(const char* what) {
        const Token& t = expect(Tok::Ident, what);
        if (!is_upper(t.text) || kKeywords.count(t.text)) fail(std::string(what) + " must be a capitalised name", t);
        return t.text;
    }
    std::string lower_ident(const char* what) {
        const Token& t = expect(Tok::Ident, what);
        if (!is_lower(t.text) || kKeywords.count(t.text)) fail(std::string(what) + " must be a lowercase name", t);
        return t.text;
    }

    std::int64_t integer(const Token& t) {
        try {
            return std::stoll(t.text);
        } catch (const std::exception&) {
            fail("integer '" + t.text + "' is out of range", t);
        }
    }

    void parse_domain(InstanceAst& ast) {
        Position pos = next().pos;
        DomainDecl d;
        d.pos = pos;
        d.name = upper_ident("domain name");
        if (peek().kind == Tok::Int) {
            const Token& t = next();
            if (t.text[0] == '-') fail("domain size must be non-negative", t);
            d.size = static_cast<std::uint64_t>(integer(t));
        }
        ast.domains.push_back(std::move(d));
    }

    void parse_predicate(InstanceAst& ast) {
        PredicateDecl p;
        p.pos = next().pos;
        p.name = upper_ident("predicate name");
        if (accept(Tok::LParen)) {
            if (!accept(Tok::RParen)) {
                do {
                    p.domains.push_back(upper_ident("domain name"));
                } while (accept(Tok::Comma));
                expect(Tok::RParen, "')'");
            }
        }
        if (peek().kind == Tok::Int) {
            Weight w;
            w.positive = integer(next());
            w.negative = integer(expect(Tok::Int, "negative weight"));
            p.weight = w;
        }
        ast.predicates.push_back(std::move(p));
    }

    void parse_constant(InstanceAst& ast) {
        ConstantDecl c;
        c.pos = next().pos;
        c.name = lower_ident("constant name");
        const Token& in = expect(Tok::Ident, "'in'");
        if (in.text != "in") fail("expected 'in'", in);
        c.domain = upper_ident("domain name");
        ast.constants.push_back(std::move(c));
    }

    FormulaPtr parse_formula() { return parse_iff(); }

    FormulaPtr parse_iff() {
        auto l = parse_implies();
        while (peek().kind == Tok::Iff) {
            Position p = next().pos;
            l = Formula::binary(Formula::Kind::Iff, l, parse_implies(), p);
        }
        return l;
    }

    FormulaPtr parse_implies() {
        auto l = parse_or();
        if (peek().kind == Tok::Implies) {
            Position p = next().pos;
            return Formula::binary(Formula::Kind::Implies, l, parse_implies(), p);
        }
        return l;
    }

    FormulaPtr parse_or() {
        auto l = parse_and();
        while (peek().kind == Tok::Or) {
            Position p = next().pos;
            l = Formula::binary(Formula::Kind::Or, l, parse_and(), p);
        }
        return l;
    }

    FormulaPtr parse_and() {
        auto l = parse_unary();
        while (peek().kind == Tok::And) {
            Position p = next().pos;
            l = Formula::binary(Formula::Kind::And, l, parse_unary(), p);
        }
        return l;
    }

    FormulaPtr parse_unary() {
        const Token& t = peek();
        if (t.kind == Tok::Not) {
            Position p = next().pos;
            return Formula::negation(parse_unary(), p);
        }
        if (t.kind == Tok::Ident && (t.text == "A" || t.text == "E") && peek(1).kind == Tok::Ident) {
            return parse_quantifier();
        }
        if (t.kind == Tok::LParen) {
            next();
            auto f = parse_formula();
            expect(Tok::RParen, "')'");
            return f;
        }
        return parse_atom();
    }

    FormulaPtr parse_quantifier() {
        const Token& q = next();
        bool universal = q.text == "A";
        std::vector<std::pair<std::string, Position>> vars;
        do {
            Position p = peek().pos;
            vars.emplace_back(lower_ident("variable"), p);
        } while (accept(Tok::Comma));
        const Token& in = expect(Tok::Ident, "'in'");
        if (in.text != "in") fail("expected 'in'", in);
        std::string domain = upper_ident("domain name");
        expect(Tok::Dot, "'.'");
        auto body = parse_formula();
        for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
            body = universal ? Formula::forall(it->first, domain, body, q.pos)
                             : Formula::exists(it->first, domain, body, q.pos);
        }
        return body;
    }

    Term parse_term() {
        const Token& t = expect(Tok::Ident, "term");
        if (!is_lower(t.text) || kKeywords.count(t.text)) fail("terms must be lowercase names", t);
        return Term::variable(t.text, "");
    }

    FormulaPtr parse_atom() {
        const Token& t = peek();
        if (t.kind != Tok::Ident) fail("expected a formula, found '" + describe(t) + "'", t);
        if (is_upper(t.text)) {
            next();
            std::vector<Term> args;
            if (accept(Tok::LParen)) {
                if (!accept(Tok::RParen)) {
                    do {
                        args.push_back(parse_term());
                    } while (accept(Tok::Comma));
                    expect(Tok::RParen, "')'");
                }
            }
            return Formula::make_atom(Atom::pred(t.text, std::move(args)), t.pos);
        }
        Position p = t.pos;
        Term l = parse_term();
        bool neq = false;
        if (peek().kind == Tok::Neq) {
            neq = true;
            next();
        } else {
            expect(Tok::Eq, "'=' or '!='");
        }
        Term r = parse_term();
        auto atom = Formula::make_atom(Atom::equality(std::move(l), std::move(r)), p);
        return neq ? Formula::negation(atom, p) : atom;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

// Resolves names against declarations and fills in term sorts.
class Resolver {
public:
    explicit Resolver(const InstanceAst& ast) {
        auto dup = [](const std::string& kind, const std::string& name, Position p) {
            throw ParseError("duplicate " + kind + " declaration '" + name + "'", p.line, p.column);
        };
        for (const auto& d : ast.domains)
            if (!domains_.insert(d.name).second) dup("domain", d.name, d.pos);
        for (const auto& p : ast.predicates) {
            if (predicates_.count(p.name)) dup("predicate", p.name, p.pos);
            for (const auto& d : p.domains)
                if (!domains_.count(d))
                    throw ParseError("undeclared domain '" + d + "'", p.pos.line, p.pos.column);
            predicates_[p.name] = p.domains;
        }
        for (const auto& c : ast.constants) {
            if (constants_.count(c.name)) dup("constant", c.name, c.pos);
            if (!domains_.count(c.domain))
                throw ParseError("undeclared domain '" + c.domain + "'", c.pos.line, c.pos.column);
            constants_[c.name] = c.domain;
        }
    }

    FormulaPtr resolve(const FormulaPtr& f) {
        switch (f->kind) {
            case Formula::Kind::Forall:
            case Formula::Kind::Exists: {
                if (!domains_.count(f->domain))
                    throw ParseError("undeclared domain '" + f->domain + "'", f->pos.line, f->pos.column);
                if (constants_.count(f->var))
                    throw ParseError("variable '" + f->var + "' shadows a constant", f->pos.line, f->pos.column);
                scope_.emplace_back(f->var, f->domain);
                auto body = resolve(f->left);
                scope_.pop_back();
                return f->kind == Formula::Kind::Forall ? Formula::forall(f->var, f->domain, body, f->pos)
                                                        : Formula::exists(f->var, f->domain, body, f->pos);
            }
            case Formula::Kind::Not:
                return Formula::negation(resolve(f->left), f->pos);
            case Formula::Kind::Atom:
                return Formula::make_atom(resolve_atom(f->atom, f->pos), f->pos);
            default:
                return Formula::binary(f->kind, resolve(f->left), resolve(f->right), f->pos);
        }
    }

private:
    Term resolve_term(const Term& t, Position p) const {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
            if (it->first == t.name) return Term::variable(t.name, it->second);
        if (auto c = constants_.find(t.name); c != constants_.end()) return Term::constant(t.name, c->second);
        throw ParseError("unbound variable '" + t.name + "'", p.line, p.column);
    }

    Atom resolve_atom(const Atom& a, Position p) const {
        std::vector<Term> args;
        for (const auto& t : a.args) args.push_back(resolve_term(t, p));
        if (a.is_equality()) {
            if (args[0].domain != args[1].domain)
                throw ParseError("equality between different sorts '" + args[0].domain + "' and '" +
                                     args[1].domain + "'",
                                 p.line, p.column);
            return Atom::equality(args[0], args[1]);
        }
        auto it = predicates_.find(a.predicate);
        if (it == predicates_.end())
            throw ParseError("undeclared predicate '" + a.predicate + "'", p.line, p.column);
        if (it->second.size() != args.size())
            throw ParseError("predicate '" + a.predicate + "' expects " + std::to_string(it->second.size()) +
                                 " arguments, got " + std::to_string(args.size()),
                             p.line, p.column);
        for (std::size_t i = 0; i < args.size(); ++i)
            if (args[i].domain != it->second[i])
                throw ParseError("argument " + std::to_string(i + 1) + " of '" + a.predicate + "' must be in '" +
                                     it->second[i] + "', not '" + args[i].domain + "'",
                                 p.line, p.column);
        return Atom::pred(a.predicate, std::move(args));
    }

    std::set<std::string> domains_;
    std::map<std::string, std::vector<std::string>> predicates_;
    std::map<std::string, std::string> constants_;
    std::vector<std::pair<std::string, std::string>> scope_;
};

void print_rec(std::ostream& os, const FormulaPtr& f);

bool is_atomic(const FormulaPtr& f) {
    return f->kind == Formula::Kind::Atom && !f->atom.is_equality();
}

void print_operand(std::ostream& os, const FormulaPtr& f) {
    if (is_atomic(f)) {
        print_rec(os, f);
    } else {
        os << "(";
        print_rec(os, f);
        os << ")";
    }
}

void print_rec(std::ostream& os, const FormulaPtr& f) {
    using K = Formula::Kind;
    switch (f->kind) {
        case K::Forall:
        case K::Exists:
            os << (f->kind == K::Forall ? "A " : "E ") << f->var << " in " << f->domain << ". ";
            print_rec(os, f->left);
            return;
        case K::Not:
            os << "!";
            print_operand(os, f->left);
            return;
        case K::Atom: {
            const auto& a = f->atom;
            if (a.is_equality()) {
                os << a.args[0].name << " = " << a.args[1].name;
                return;
            }
            os << a.predicate;
            if (!a.args.empty()) {
                os << "(";
                for (std::size_t i = 0; i < a.args.size(); ++i) os << (i ? ", " : "") << a.args[i].name;
                os << ")";
            }
            return;
        }
        default: {
            const char* op = f->kind == K::And ? " & " : f->kind == K::Or ? " | " : f->kind == K::Implies ? " -> " : " <-> ";
            print_operand(os, f->left);
            os << op;
            print_operand(os, f->right);
        }
    }
}

}  // namespace

InstanceAst parse_instance(std::string_view text) {
    Parser parser(lex(text));
    InstanceAst ast = parser.parse();
    Resolver resolver(ast);
    for (auto& f : ast.formulas) f = resolver.resolve(f);
    return ast;
}

InstanceAst parse_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

std::string print_formula(const FormulaPtr& formula) {
    std::ostringstream os;
    print_rec(os, formula);
    return os.str();
}

std::string print_instance(const InstanceAst& instance) {
    std::ostringstream os;
    for (const auto& d : instance.domains) {
        os << "domain " << d.name;
        if (d.size) os << " " << *d.size;
        os << "\n";
    }
    for (const auto& p : instance.predicates) {
        os << "predicate " << p.name << "(";
        for (std::size_t i = 0; i < p.domains.size(); ++i) os << (i ? ", " : "") << p.domains[i];
        os << ")";
        if (p.weight) os << " " << p.weight->positive << " " << p.weight->negative;
        os << "\n";
    }
    for (const auto& c : instance.constants) os << "constant " << c.name << " in " << c.domain << "\n";
    for (const auto& f : instance.formulas) os << print_formula(f) << "\n";
    return os.str();
}

}  // namespace fomc
