#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "shr/dsl.hpp"
#include "shr/gcm.hpp"

namespace shr {

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
    Ident,
    Int,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    Slash,
    Hash,
    Bang,
    EqEq,
    NotEq,
    Le,
    Ge,
    Lt,
    Gt,
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t value = 0; // Int payload
    SourceSpan span;
};

const std::set<std::string>& keywords() {
    static const std::set<std::string> set = {
        "labels", "graph",    "node",   "edge",  "production", "for",   "new",
        "on",     "rhs",      "rule",   "when",  "if",         "then",  "target",
        "scenario", "inject", "apply",  "assert", "isomorphic", "count", "exists",
        "and",    "or",       "not",
    };
    return set;
}

bool is_keyword(const std::string& s) { return keywords().count(s) > 0; }

class Lexer {
public:
    Lexer(const std::string& text, std::vector<Diagnostic>& diags)
        : text_(text), diags_(diags) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_trivia();
            Token t = next_token();
            bool end = t.kind == Tok::End;
            out.push_back(std::move(t));
            if (end) break;
        }
        return out;
    }

private:
    SourceSpan here() const { return SourceSpan{line_, column_, pos_}; }

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (pos_ >= text_.size()) return;
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    Token next_token() {
        while (true) {
            Token t;
            t.span = here();
            if (pos_ >= text_.size()) {
                t.kind = Tok::End;
                return t;
            }
            char c = text_[pos_];
        auto two = [&](Tok kind, const char* text) {
            t.kind = kind;
            t.text = text;
            advance();
            advance();
            return t;
        };
        auto one = [&](Tok kind) {
            t.kind = kind;
            t.text = std::string(1, c);
            advance();
            return t;
        };

            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                while (pos_ < text_.size()) {
                    char d = text_[pos_];
                    if (std::isalnum(static_cast<unsigned char>(d)) || d == '_') {
                        t.text.push_back(d);
                        advance();
                    } else {
                        break;
                    }
                }
                t.kind = Tok::Ident;
                return t;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                unsigned long long value = 0;
                bool overflow = false;
                while (pos_ < text_.size() &&
                       std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    value = value * 10 + static_cast<unsigned long long>(text_[pos_] - '0');
                    if (value > 1000000000ull) overflow = true;
                    t.text.push_back(text_[pos_]);
                    advance();
                }
                if (overflow) {
                    report(t.span, "SYNTAX", "integer literal too large");
                    value = 0;
                }
                t.kind = Tok::Int;
                t.value = static_cast<std::size_t>(value);
                return t;
            }
            switch (c) {
            case '{': return one(Tok::LBrace);
            case '}': return one(Tok::RBrace);
            case '(': return one(Tok::LParen);
            case ')': return one(Tok::RParen);
            case ',': return one(Tok::Comma);
            case ';': return one(Tok::Semi);
            case ':': return one(Tok::Colon);
            case '/': return one(Tok::Slash);
            case '#': return one(Tok::Hash);
            case '=':
                if (peek(1) == '=') return two(Tok::EqEq, "==");
                break;
            case '!':
                if (peek(1) == '=') return two(Tok::NotEq, "!=");
                return one(Tok::Bang);
            case '<':
                if (peek(1) == '=') return two(Tok::Le, "<=");
                return one(Tok::Lt);
            case '>':
                if (peek(1) == '=') return two(Tok::Ge, ">=");
                return one(Tok::Gt);
            default: break;
            }
            report(t.span, "SYNTAX", "unexpected character '" + std::string(1, c) + "'");
            advance();
            skip_trivia();
        }
    }

    void report(SourceSpan span, const char* code, std::string message) {
        Diagnostic d;
        d.code = code;
        d.message = std::move(message);
        d.span = span;
        diags_.push_back(std::move(d));
    }

    const std::string& text_;
    std::vector<Diagnostic>& diags_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

// ---------------------------------------------------------------------------
// Raw syntax trees (names and numbers; resolution happens afterwards)

struct RawName {
    std::string text;
    SourceSpan span;
};

struct RawLabelDecl {
    std::string name;
    std::size_t arity = 0;
    SourceSpan span;
};

struct RawEdge {
    std::string name; // empty = unnamed
    std::string label;
    std::vector<RawName> tentacles;
    SourceSpan span;
};

struct RawGraph {
    std::vector<RawName> nodes;
    std::vector<RawEdge> edges;
    SourceSpan span;
};

struct RawCondition {
    std::size_t index = 0;
    bool output = false;
    std::string action;
    std::vector<RawName> args;
    SourceSpan span;
};

struct RawProduction {
    std::string name;
    std::string label;
    std::vector<RawName> formals;
    std::vector<RawName> fresh;
    std::vector<RawCondition> conditions;
    std::vector<RawName> rhs_nodes;
    std::vector<RawEdge> rhs_edges;
    SourceSpan span;
};

struct RawOpArg {
    bool fresh = false;
    std::size_t tentacle = 0;
    SourceSpan span;
};

struct RawRule {
    std::string event;
    GuardPtr guard;
    std::string op;
    std::string target;
    std::vector<RawOpArg> args;
    SourceSpan span;
    std::vector<std::pair<std::string, SourceSpan>> guard_labels;
};

struct RawAssertCount {
    std::string label;
    Cmp cmp = Cmp::Eq;
    std::size_t value = 0;
    SourceSpan span;
};

struct RawScenarioStep {
    enum class Kind { Inject, Apply, AssertCount, AssertIso } kind = Kind::Inject;
    std::string event;
    std::size_t index = 0;
    RawAssertCount count;
    RawGraph iso;
    SourceSpan span;
};

struct RawSpec {
    std::vector<RawLabelDecl> labels;
    std::optional<RawGraph> graph;
    std::vector<RawProduction> productions;
    std::vector<RawRule> rules;
    std::optional<std::vector<RawScenarioStep>> scenario;
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    Parser(std::vector<Token> tokens, std::vector<Diagnostic>& diags)
        : tokens_(std::move(tokens)), diags_(diags) {}

    RawSpec run() {
        RawSpec spec;
        bool saw_labels = false;
        while (!at(Tok::End)) {
            if (at_word("labels")) {
                SourceSpan span = peek().span;
                bump();
                auto labels = parse_labels();
                if (saw_labels) {
                    // merging is harmless; flag repetition anyway
                    report(span, "DUPLICATE_SECTION", "labels block appears more than once");
                }
                saw_labels = true;
                spec.labels.insert(spec.labels.end(), labels.begin(), labels.end());
            } else if (at_word("graph")) {
                SourceSpan span = peek().span;
                bump();
                RawGraph g = parse_graph_block(span);
                if (spec.graph) {
                    report(span, "DUPLICATE_SECTION", "graph block appears more than once");
                } else {
                    spec.graph = std::move(g);
                }
            } else if (at_word("production")) {
                spec.productions.push_back(parse_production());
            } else if (at_word("rule")) {
                spec.rules.push_back(parse_rule());
            } else if (at_word("scenario")) {
                SourceSpan span = peek().span;
                bump();
                auto steps = parse_scenario();
                if (spec.scenario) {
                    report(span, "DUPLICATE_SECTION", "scenario block appears more than once");
                } else {
                    spec.scenario = std::move(steps);
                }
            } else {
                report(peek().span, "SYNTAX",
                       "expected a section (labels, graph, production, rule, scenario)");
                bump();
            }
        }
        return spec;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }

    bool at(Tok kind) const { return peek().kind == kind; }

    bool at_word(const char* word) const {
        return peek().kind == Tok::Ident && peek().text == word;
    }

    void bump() {
        if (pos_ + 1 < tokens_.size()) ++pos_;
    }

    bool accept(Tok kind) {
        if (!at(kind)) return false;
        bump();
        return true;
    }

    bool accept_word(const char* word) {
        if (!at_word(word)) return false;
        bump();
        return true;
    }

    bool expect(Tok kind, const char* what) {
        if (accept(kind)) return true;
        report(peek().span, "SYNTAX",
               std::string("expected ") + what + ", got '" + describe(peek()) + "'");
        return false;
    }

    bool expect_word(const char* word) {
        if (accept_word(word)) return true;
        report(peek().span, "SYNTAX",
               std::string("expected '") + word + "', got '" + describe(peek()) + "'");
        return false;
    }

    std::optional<RawName> expect_ident(const char* what) {
        if (at(Tok::Ident) && !is_keyword(peek().text)) {
            RawName name{peek().text, peek().span};
            bump();
            return name;
        }
        if (at(Tok::Ident)) {
            report(peek().span, "SYNTAX",
                   std::string("expected ") + what + ", got keyword '" + peek().text + "'");
        } else {
            report(peek().span, "SYNTAX",
                   std::string("expected ") + what + ", got '" + describe(peek()) + "'");
        }
        return std::nullopt;
    }

    std::optional<std::size_t> expect_int(const char* what) {
        if (at(Tok::Int)) {
            std::size_t v = peek().value;
            bump();
            return v;
        }
        report(peek().span, "SYNTAX",
               std::string("expected ") + what + ", got '" + describe(peek()) + "'");
        return std::nullopt;
    }

    static std::string describe(const Token& t) {
        if (t.kind == Tok::End) return "end of input";
        return t.text.empty() ? "?" : t.text;
    }

    void report(SourceSpan span, const char* code, std::string message) {
        Diagnostic d;
        d.code = code;
        d.message = std::move(message);
        d.span = span;
        diags_.push_back(std::move(d));
    }

    // Skips ahead to just past the next ';' (or stops before '}' / end).
    void recover_statement() {
        while (!at(Tok::End) && !at(Tok::RBrace)) {
            if (accept(Tok::Semi)) return;
            bump();
        }
    }

    std::vector<RawLabelDecl> parse_labels() {
        std::vector<RawLabelDecl> out;
        if (!expect(Tok::LBrace, "'{'")) return out;
        while (!at(Tok::RBrace) && !at(Tok::End)) {
            RawLabelDecl decl;
            decl.span = peek().span;
            auto name = expect_ident("a label name");
            if (!name) {
                recover_statement();
                continue;
            }
            decl.name = name->text;
            if (!expect(Tok::Slash, "'/'")) {
                recover_statement();
                continue;
            }
            auto arity = expect_int("an arity");
            if (!arity) {
                recover_statement();
                continue;
            }
            decl.arity = *arity;
            expect(Tok::Semi, "';'");
            out.push_back(std::move(decl));
        }
        expect(Tok::RBrace, "'}'");
        return out;
    }

    // ident list "a, b, c" (at least one name)
    std::vector<RawName> parse_name_list(const char* what) {
        std::vector<RawName> out;
        do {
            auto name = expect_ident(what);
            if (!name) break;
            out.push_back(std::move(*name));
        } while (accept(Tok::Comma));
        return out;
    }

    // "label(a, b)" or "Name: label(a, b)"; names_allowed controls the
    // optional "Name:" prefix.
    std::optional<RawEdge> parse_edge_decl(bool names_allowed) {
        RawEdge edge;
        edge.span = peek().span;
        auto first = expect_ident("an edge label");
        if (!first) return std::nullopt;
        if (names_allowed && accept(Tok::Colon)) {
            edge.name = first->text;
            auto label = expect_ident("an edge label");
            if (!label) return std::nullopt;
            edge.label = label->text;
        } else {
            edge.label = first->text;
        }
        if (!expect(Tok::LParen, "'('")) return std::nullopt;
        if (!at(Tok::RParen)) {
            do {
                auto t = expect_ident("a node name");
                if (!t) return std::nullopt;
                edge.tentacles.push_back(std::move(*t));
            } while (accept(Tok::Comma));
        }
        if (!expect(Tok::RParen, "')'")) return std::nullopt;
        return edge;
    }

    RawGraph parse_graph_block(SourceSpan span) {
        RawGraph g;
        g.span = span;
        if (!expect(Tok::LBrace, "'{'")) return g;
        while (!at(Tok::RBrace) && !at(Tok::End)) {
            if (accept_word("node")) {
                auto names = parse_name_list("a node name");
                g.nodes.insert(g.nodes.end(), names.begin(), names.end());
                if (!expect(Tok::Semi, "';'")) recover_statement();
            } else if (accept_word("edge")) {
                auto edge = parse_edge_decl(true);
                if (edge) {
                    g.edges.push_back(std::move(*edge));
                    if (!expect(Tok::Semi, "';'")) recover_statement();
                } else {
                    recover_statement();
                }
            } else {
                report(peek().span, "SYNTAX", "expected 'node' or 'edge'");
                recover_statement();
            }
        }
        expect(Tok::RBrace, "'}'");
        return g;
    }

    RawProduction parse_production() {
        RawProduction p;
        p.span = peek().span;
        bump(); // 'production'
        if (auto name = expect_ident("a production name")) p.name = name->text;
        expect_word("for");
        if (auto label = expect_ident("an edge label")) p.label = label->text;
        if (expect(Tok::LParen, "'('")) {
            if (!at(Tok::RParen)) p.formals = parse_name_list("a formal name");
            expect(Tok::RParen, "')'");
        }
        if (!expect(Tok::LBrace, "'{'")) return p;
        bool saw_rhs = false;
        while (!at(Tok::RBrace) && !at(Tok::End)) {
            if (accept_word("new")) {
                auto names = parse_name_list("a fresh node name");
                p.fresh.insert(p.fresh.end(), names.begin(), names.end());
                if (!expect(Tok::Semi, "';'")) recover_statement();
            } else if (at_word("on")) {
                RawCondition cond;
                cond.span = peek().span;
                bump();
                auto index = expect_int("a tentacle index");
                if (!index) {
                    recover_statement();
                    continue;
                }
                cond.index = *index;
                if (!expect(Tok::Colon, "':'")) {
                    recover_statement();
                    continue;
                }
                auto action = expect_ident("an action name");
                if (!action) {
                    recover_statement();
                    continue;
                }
                cond.action = action->text;
                cond.output = accept(Tok::Bang);
                if (!expect(Tok::LParen, "'('")) {
                    recover_statement();
                    continue;
                }
                if (!at(Tok::RParen)) {
                    do {
                        auto arg = expect_ident("a node name");
                        if (!arg) break;
                        cond.args.push_back(std::move(*arg));
                    } while (accept(Tok::Comma));
                }
                expect(Tok::RParen, "')'");
                expect(Tok::Semi, "';'");
                p.conditions.push_back(std::move(cond));
            } else if (at_word("rhs")) {
                SourceSpan span = peek().span;
                bump();
                if (saw_rhs) report(span, "DUPLICATE_RHS", "production has two rhs blocks");
                saw_rhs = true;
                if (!expect(Tok::LBrace, "'{'")) continue;
                while (!at(Tok::RBrace) && !at(Tok::End)) {
                    if (accept_word("node")) {
                        auto names = parse_name_list("a node name");
                        p.rhs_nodes.insert(p.rhs_nodes.end(), names.begin(), names.end());
                        if (!expect(Tok::Semi, "';'")) recover_statement();
                    } else if (accept_word("edge")) {
                        auto edge = parse_edge_decl(false);
                        if (edge) {
                            p.rhs_edges.push_back(std::move(*edge));
                            if (!expect(Tok::Semi, "';'")) recover_statement();
                        } else {
                            recover_statement();
                        }
                    } else {
                        report(peek().span, "SYNTAX", "expected 'node' or 'edge'");
                        recover_statement();
                    }
                }
                expect(Tok::RBrace, "'}'");
            } else {
                report(peek().span, "SYNTAX", "expected 'new', 'on' or 'rhs'");
                recover_statement();
            }
        }
        expect(Tok::RBrace, "'}'");
        return p;
    }

    std::optional<Cmp> parse_cmp() {
        switch (peek().kind) {
        case Tok::EqEq: bump(); return Cmp::Eq;
        case Tok::NotEq: bump(); return Cmp::Ne;
        case Tok::Le: bump(); return Cmp::Le;
        case Tok::Ge: bump(); return Cmp::Ge;
        case Tok::Lt: bump(); return Cmp::Lt;
        case Tok::Gt: bump(); return Cmp::Gt;
        default:
            report(peek().span, "SYNTAX", "expected a comparison operator");
            return std::nullopt;
        }
    }

    GuardPtr parse_guard(RawRule& rule) { return parse_guard_or(rule); }

    GuardPtr parse_guard_or(RawRule& rule) {
        GuardPtr lhs = parse_guard_and(rule);
        while (accept_word("or")) {
            GuardPtr rhs = parse_guard_and(rule);
            if (!lhs || !rhs) return nullptr;
            lhs = guard_or(std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    GuardPtr parse_guard_and(RawRule& rule) {
        GuardPtr lhs = parse_guard_not(rule);
        while (accept_word("and")) {
            GuardPtr rhs = parse_guard_not(rule);
            if (!lhs || !rhs) return nullptr;
            lhs = guard_and(std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    GuardPtr parse_guard_not(RawRule& rule) {
        if (accept_word("not")) {
            GuardPtr inner = parse_guard_not(rule);
            return inner ? guard_not(std::move(inner)) : nullptr;
        }
        return parse_guard_primary(rule);
    }

    GuardPtr parse_guard_primary(RawRule& rule) {
        if (accept(Tok::LParen)) {
            GuardPtr inner = parse_guard(rule);
            expect(Tok::RParen, "')'");
            return inner;
        }
        if (accept_word("count")) {
            if (!expect(Tok::LParen, "'('")) return nullptr;
            auto label = expect_ident("a label name");
            if (!label) return nullptr;
            rule.guard_labels.emplace_back(label->text, label->span);
            if (!expect(Tok::RParen, "')'")) return nullptr;
            auto cmp = parse_cmp();
            if (!cmp) return nullptr;
            auto value = expect_int("an integer");
            if (!value) return nullptr;
            return guard_count(label->text, *cmp, *value);
        }
        if (accept_word("exists")) {
            if (!expect(Tok::LParen, "'('")) return nullptr;
            auto label = expect_ident("a label name");
            if (!label) return nullptr;
            rule.guard_labels.emplace_back(label->text, label->span);
            if (!expect(Tok::Comma, "','")) return nullptr;
            auto tentacle = expect_int("a tentacle index");
            if (!tentacle) return nullptr;
            if (!expect(Tok::Comma, "','")) return nullptr;
            auto display = expect_ident("a node name");
            if (!display) return nullptr;
            if (!expect(Tok::RParen, "')'")) return nullptr;
            return guard_exists(label->text, *tentacle, display->text);
        }
        report(peek().span, "SYNTAX", "expected 'count', 'exists', 'not' or '('");
        return nullptr;
    }

    RawRule parse_rule() {
        RawRule rule;
        rule.span = peek().span;
        bump(); // 'rule'
        if (!expect(Tok::LBrace, "'{'")) return rule;
        if (expect_word("when")) {
            if (auto event = expect_ident("an event name")) rule.event = event->text;
            if (accept_word("if")) rule.guard = parse_guard(rule);
            if (expect_word("then")) {
                if (auto op = expect_ident("an operation name")) rule.op = op->text;
                if (expect(Tok::LParen, "'('")) {
                    expect_word("target");
                    if (auto t = expect_ident("an edge name or label")) {
                        rule.target = t->text;
                        if (accept(Tok::Hash)) {
                            if (auto ordinal = expect_int("an ordinal")) {
                                rule.target += "#" + std::to_string(*ordinal);
                            }
                        }
                    }
                    if (accept(Tok::Semi)) {
                        do {
                            RawOpArg arg;
                            arg.span = peek().span;
                            if (accept_word("new")) {
                                arg.fresh = true;
                            } else if (at(Tok::Ident) && peek().text.size() >= 2 &&
                                       peek().text[0] == 't' &&
                                       std::isdigit(
                                           static_cast<unsigned char>(peek().text[1]))) {
                                arg.tentacle = 0;
                                bool numeric = true;
                                for (std::size_t i = 1; i < peek().text.size(); ++i) {
                                    char c = peek().text[i];
                                    if (!std::isdigit(static_cast<unsigned char>(c))) {
                                        numeric = false;
                                        break;
                                    }
                                    arg.tentacle = arg.tentacle * 10 +
                                                   static_cast<std::size_t>(c - '0');
                                }
                                if (!numeric) {
                                    report(peek().span, "SYNTAX",
                                           "expected 'new' or a tentacle reference like t0");
                                }
                                bump();
                            } else {
                                report(peek().span, "SYNTAX",
                                       "expected 'new' or a tentacle reference like t0");
                                break;
                            }
                            rule.args.push_back(arg);
                        } while (accept(Tok::Comma));
                    }
                    expect(Tok::RParen, "')'");
                }
                expect(Tok::Semi, "';'");
            }
        }
        while (!at(Tok::RBrace) && !at(Tok::End)) {
            report(peek().span, "SYNTAX", "a rule block holds a single when-clause");
            recover_statement();
        }
        expect(Tok::RBrace, "'}'");
        return rule;
    }

    std::vector<RawScenarioStep> parse_scenario() {
        std::vector<RawScenarioStep> out;
        if (!expect(Tok::LBrace, "'{'")) return out;
        while (!at(Tok::RBrace) && !at(Tok::End)) {
            RawScenarioStep step;
            step.span = peek().span;
            if (accept_word("inject")) {
                step.kind = RawScenarioStep::Kind::Inject;
                if (auto event = expect_ident("an event name")) step.event = event->text;
                expect(Tok::Semi, "';'");
            } else if (accept_word("apply")) {
                step.kind = RawScenarioStep::Kind::Apply;
                if (auto index = expect_int("a transition index")) step.index = *index;
                expect(Tok::Semi, "';'");
            } else if (accept_word("assert")) {
                if (accept_word("count")) {
                    step.kind = RawScenarioStep::Kind::AssertCount;
                    step.count.span = step.span;
                    if (!expect(Tok::LParen, "'('")) {
                        recover_statement();
                        continue;
                    }
                    if (auto label = expect_ident("a label name")) {
                        step.count.label = label->text;
                    }
                    expect(Tok::RParen, "')'");
                    if (auto cmp = parse_cmp()) step.count.cmp = *cmp;
                    if (auto value = expect_int("an integer")) step.count.value = *value;
                    expect(Tok::Semi, "';'");
                } else if (accept_word("isomorphic")) {
                    step.kind = RawScenarioStep::Kind::AssertIso;
                    SourceSpan span = peek().span;
                    if (expect_word("graph")) {
                        step.iso = parse_graph_block(span);
                    }
                    expect(Tok::Semi, "';'");
                } else {
                    report(peek().span, "SYNTAX", "expected 'count' or 'isomorphic'");
                    recover_statement();
                    continue;
                }
            } else {
                report(peek().span, "SYNTAX", "expected 'inject', 'apply' or 'assert'");
                recover_statement();
                continue;
            }
            out.push_back(std::move(step));
        }
        expect(Tok::RBrace, "'}'");
        return out;
    }

    std::vector<Token> tokens_;
    std::vector<Diagnostic>& diags_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Resolution: raw trees to a SpecFile

class Resolver {
public:
    Resolver(RawSpec raw, std::vector<Diagnostic>& diags)
        : raw_(std::move(raw)), diags_(diags) {}

    SpecFile run() {
        SpecFile spec;
        resolve_labels(spec);
        if (raw_.graph) {
            spec.graph = build_graph(*raw_.graph, &spec.edge_names);
        }
        resolve_productions(spec);
        resolve_rules(spec);
        check_action_arities(spec);
        resolve_scenario(spec);
        return spec;
    }

private:
    void report(SourceSpan span, const char* code, std::string message) {
        Diagnostic d;
        d.code = code;
        d.message = std::move(message);
        d.span = span;
        diags_.push_back(std::move(d));
    }

    void resolve_labels(SpecFile& spec) {
        for (const auto& decl : raw_.labels) {
            auto it = label_arity_.find(decl.name);
            if (it != label_arity_.end()) {
                if (it->second != decl.arity) {
                    report(decl.span, "LABEL_ARITY_CLASH",
                           "label '" + decl.name + "' declared with arity " +
                               std::to_string(decl.arity) + " and " +
                               std::to_string(it->second));
                }
                continue;
            }
            label_arity_.emplace(decl.name, decl.arity);
            spec.labels.push_back(Label{decl.name, decl.arity});
        }
    }

    std::optional<Label> lookup_label(const std::string& name, SourceSpan span) {
        auto it = label_arity_.find(name);
        if (it == label_arity_.end()) {
            report(span, "UNDECLARED_LABEL", "label '" + name + "' is not declared");
            return std::nullopt;
        }
        return Label{name, it->second};
    }

    Hypergraph build_graph(const RawGraph& raw, std::map<EdgeId, std::string>* edge_names) {
        Hypergraph graph;
        std::map<std::string, NodeId> nodes;
        for (const auto& decl : raw.nodes) {
            if (nodes.count(decl.text)) {
                report(decl.span, "DUPLICATE_NODE",
                       "node '" + decl.text + "' declared twice");
                continue;
            }
            nodes.emplace(decl.text, graph.add_node(decl.text));
        }
        std::set<std::string> edge_name_set;
        for (const auto& decl : raw.edges) {
            auto label = lookup_label(decl.label, decl.span);
            if (!label) continue;
            if (decl.tentacles.size() != label->arity) {
                report(decl.span, "EDGE_ARITY_MISMATCH",
                       "edge '" + decl.label + "' expects " + std::to_string(label->arity) +
                           " tentacles, got " + std::to_string(decl.tentacles.size()));
                continue;
            }
            std::vector<NodeId> tentacles;
            bool ok = true;
            for (const auto& t : decl.tentacles) {
                auto it = nodes.find(t.text);
                if (it == nodes.end()) {
                    report(t.span, "UNKNOWN_NODE", "node '" + t.text + "' is not declared");
                    ok = false;
                    break;
                }
                tentacles.push_back(it->second);
            }
            if (!ok) continue;
            if (!decl.name.empty() && edge_names != nullptr) {
                if (!edge_name_set.insert(decl.name).second) {
                    report(decl.span, "DUPLICATE_EDGE_NAME",
                           "edge name '" + decl.name + "' used twice");
                }
            }
            EdgeId id = graph.add_edge(*label, std::move(tentacles));
            if (!decl.name.empty() && edge_names != nullptr) {
                edge_names->emplace(id, decl.name);
            }
        }
        return graph;
    }

    void resolve_productions(SpecFile& spec) {
        std::set<std::string> names;
        for (const auto& raw : raw_.productions) {
            Production p;
            p.name = raw.name;
            if (auto label = lookup_label(raw.label, raw.span)) {
                p.lhs_label = *label;
            } else {
                p.lhs_label = Label{raw.label, raw.formals.size()};
            }
            for (const auto& f : raw.formals) p.lhs_formals.push_back(f.text);
            for (const auto& f : raw.fresh) p.fresh_names.push_back(f.text);
            for (const auto& cond : raw.conditions) {
                Condition c;
                c.polarity = cond.output ? Polarity::Output : Polarity::Input;
                c.action = ActionSig{cond.action, cond.args.size()};
                for (const auto& a : cond.args) c.comm.push_back(a.text);
                if (!p.conditions.emplace(cond.index, std::move(c)).second) {
                    report(cond.span, "DUPLICATE_CONDITION",
                           "production '" + p.name + "' puts two conditions on tentacle " +
                               std::to_string(cond.index));
                }
            }
            for (const auto& n : raw.rhs_nodes) p.rhs.bare_nodes.push_back(n.text);
            for (const auto& e : raw.rhs_edges) {
                SchemaEdge se;
                if (auto label = lookup_label(e.label, e.span)) {
                    se.label = *label;
                } else {
                    se.label = Label{e.label, e.tentacles.size()};
                }
                for (const auto& t : e.tentacles) se.tentacles.push_back(t.text);
                p.rhs.edges.push_back(std::move(se));
            }

            for (Diagnostic d : validate(p)) {
                if (!d.has_location()) d.span = raw.span;
                diags_.push_back(std::move(d));
            }
            if (!names.insert(p.name).second) {
                report(raw.span, "DUPLICATE_PRODUCTION",
                       "production '" + p.name + "' defined twice");
            }
            spec.productions.push_back(std::move(p));
        }
    }

    void resolve_rules(SpecFile& spec) {
        for (const auto& raw : raw_.rules) {
            PolicyRule rule;
            rule.event = raw.event;
            rule.guard = raw.guard;
            for (const auto& [label, span] : raw.guard_labels) {
                lookup_label(label, span);
            }

            bool known_op = true;
            if (raw.op == "go") {
                rule.op = GcmOp::Go;
            } else if (raw.op == "start") {
                rule.op = GcmOp::Start;
            } else if (raw.op == "rep_share") {
                rule.op = GcmOp::RepShare;
            } else if (raw.op == "rep_fresh") {
                rule.op = GcmOp::RepFresh;
            } else if (raw.op == "copy") {
                rule.op = GcmOp::Copy;
            } else if (raw.op == "kill") {
                rule.op = GcmOp::Kill;
            } else {
                report(raw.span, "UNKNOWN_OP",
                       "unknown adaptation operation '" + raw.op + "'");
                known_op = false;
            }

            rule.target = raw.target;
            auto hash = raw.target.find('#');
            if (hash != std::string::npos) {
                lookup_label(raw.target.substr(0, hash), raw.span);
            } else if (!raw.target.empty()) {
                bool found = false;
                for (const auto& [id, name] : spec.edge_names) {
                    if (name == raw.target) {
                        found = true;
                        break;
                    }
                }
                if (!found) {
                    report(raw.span, "TARGET_UNKNOWN",
                           "target '" + raw.target + "' names no edge of the graph");
                }
            }

            for (const auto& arg : raw.args) {
                OpArg a;
                if (arg.fresh) {
                    a.kind = OpArg::Kind::Fresh;
                } else {
                    a.kind = OpArg::Kind::Tentacle;
                    a.tentacle = arg.tentacle;
                    if (arg.tentacle >= gcm::manager_label.arity) {
                        report(arg.span, "OP_ARG_RANGE",
                               "manager edges have no tentacle " +
                                   std::to_string(arg.tentacle));
                    }
                }
                rule.args.push_back(a);
            }
            if (known_op) {
                ActionSig action = op_action(rule.op);
                if (rule.args.size() != action.comm_arity) {
                    report(raw.span, "OP_ARGS_ARITY",
                           "operation '" + raw.op + "' communicates " +
                               std::to_string(action.comm_arity) + " nodes, got " +
                               std::to_string(rule.args.size()));
                }
                used_ops_.insert(rule.op);
            }
            spec.rules.push_back(std::move(rule));
        }
    }

    // One communication arity per action name across the whole file,
    // including the built-in productions any referenced operation drags in.
    void check_action_arities(SpecFile& spec) {
        std::map<std::string, std::size_t> arity;
        auto merge_condition = [&](const std::string& owner, const ActionSig& action,
                                   SourceSpan span) {
            auto [it, inserted] = arity.emplace(action.name, action.comm_arity);
            if (!inserted && it->second != action.comm_arity) {
                report(span, "ACTION_ARITY_CLASH",
                       owner + " uses action '" + action.name + "' with arity " +
                           std::to_string(action.comm_arity) + ", elsewhere " +
                           std::to_string(it->second));
            }
        };
        auto merge_label = [&](const std::string& owner, const Label& label,
                               SourceSpan span) {
            auto it = label_arity_.find(label.name);
            if (it != label_arity_.end() && it->second != label.arity) {
                report(span, "LABEL_ARITY_CLASH",
                       owner + " uses label '" + label.name + "' with arity " +
                           std::to_string(label.arity) + ", declared " +
                           std::to_string(it->second));
            }
        };

        for (std::size_t i = 0; i < spec.productions.size(); ++i) {
            const Production& p = spec.productions[i];
            SourceSpan span = i < raw_.productions.size() ? raw_.productions[i].span
                                                          : SourceSpan{};
            for (const auto& [index, cond] : p.conditions) {
                merge_condition("production '" + p.name + "'", cond.action, span);
            }
        }
        for (GcmOp op : used_ops_) {
            const std::string owner = std::string("operation '") + to_string(op) + "'";
            SourceSpan span;
            for (std::size_t i = 0; i < spec.rules.size(); ++i) {
                if (spec.rules[i].op == op && i < raw_.rules.size()) {
                    span = raw_.rules[i].span;
                    break;
                }
            }
            merge_condition(owner, op_action(op), span);
            for (const Production& p : op_receivers(op)) {
                merge_label(owner, p.lhs_label, span);
                for (const auto& e : p.rhs.edges) merge_label(owner, e.label, span);
            }
            merge_label(owner, gcm::manager_label, span);
        }
    }

    void resolve_scenario(SpecFile& spec) {
        if (!raw_.scenario) return;
        Scenario scenario;
        for (const auto& raw : *raw_.scenario) {
            switch (raw.kind) {
            case RawScenarioStep::Kind::Inject:
                scenario.steps.push_back(Inject{raw.event});
                break;
            case RawScenarioStep::Kind::Apply:
                scenario.steps.push_back(ApplyStep{raw.index});
                break;
            case RawScenarioStep::Kind::AssertCount: {
                lookup_label(raw.count.label, raw.count.span);
                scenario.steps.push_back(
                    AssertCount{raw.count.label, raw.count.cmp, raw.count.value});
                break;
            }
            case RawScenarioStep::Kind::AssertIso: {
                AssertIso iso;
                iso.expected = build_graph(raw.iso, nullptr);
                scenario.steps.push_back(std::move(iso));
                break;
            }
            }
        }
        spec.scenario = std::move(scenario);
    }

    RawSpec raw_;
    std::vector<Diagnostic>& diags_;
    std::map<std::string, std::size_t> label_arity_;
    std::set<GcmOp> used_ops_;
};

} // namespace

bool ParseResult::ok() const { return diagnostics.empty(); }

ParseResult parse(const std::string& text) {
    ParseResult result;
    Lexer lexer(text, result.diagnostics);
    Parser parser(lexer.run(), result.diagnostics);
    RawSpec raw = parser.run();
    Resolver resolver(std::move(raw), result.diagnostics);
    result.spec = resolver.run();
    return result;
}

} // namespace shr
