#include "langlogic/lan_format.hpp"

#include <cctype>
#include <optional>
#include <sstream>
#include <variant>
#include <vector>

namespace langlogic {

namespace {

struct SourceChar {
    char c;
    std::size_t line;
    std::size_t col;
};

using Chars = std::vector<SourceChar>;

enum class Tok {
    Ident,
    String,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Slash,
    Comma,
    Turnstile,
    Colon,
    Subtype,
    Arrow,
    Provided,
    Conj,
    Dot,
    Bar,
    Defines,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t col;
    bool space_before;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> tokenize(const Chars& chars, std::size_t end_line, std::size_t end_col)
{
    std::vector<Token> out;
    std::size_t i = 0;
    bool space = true;
    auto starts_with = [&](std::string_view s) {
        if (i + s.size() > chars.size()) {
            return false;
        }
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (chars[i + k].c != s[k]) {
                return false;
            }
        }
        return true;
    };
    while (i < chars.size()) {
        const auto& ch = chars[i];
        if (std::isspace(static_cast<unsigned char>(ch.c))) {
            space = true;
            ++i;
            continue;
        }
        Token tok{Tok::End, {}, ch.line, ch.col, space};
        space = false;
        if (ident_start(ch.c)) {
            while (i < chars.size() && ident_char(chars[i].c)) {
                tok.text += chars[i++].c;
            }
            tok.kind = Tok::Ident;
        } else if (ch.c == '"') {
            ++i;
            bool closed = false;
            while (i < chars.size()) {
                char c = chars[i].c;
                if (c == '\\' && i + 1 < chars.size()) {
                    tok.text += chars[i + 1].c;
                    i += 2;
                    continue;
                }
                ++i;
                if (c == '"') {
                    closed = true;
                    break;
                }
                tok.text += c;
            }
            if (!closed) {
                throw ParseError("unterminated string literal", ch.line, ch.col);
            }
            tok.kind = Tok::String;
        } else {
            static const std::pair<std::string_view, Tok> symbols[] = {
                {"::=", Tok::Defines}, {"-->", Tok::Arrow}, {"<==", Tok::Provided}, {"|-", Tok::Turnstile},
                {"<:", Tok::Subtype},  {"/\\", Tok::Conj},  {"(", Tok::LParen},     {")", Tok::RParen},
                {"[", Tok::LBracket},  {"]", Tok::RBracket}, {"/", Tok::Slash},     {",", Tok::Comma},
                {":", Tok::Colon},     {".", Tok::Dot},     {"|", Tok::Bar},
            };
            bool matched = false;
            for (const auto& [text, kind] : symbols) {
                if (starts_with(text)) {
                    tok.kind = kind;
                    tok.text = std::string(text);
                    i += text.size();
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                throw ParseError(std::string("unexpected character '") + ch.c + "'", ch.line, ch.col);
            }
        }
        out.push_back(std::move(tok));
    }
    out.push_back(Token{Tok::End, "", end_line, end_col, true});
    return out;
}

std::string describe(const Token& t)
{
    if (t.kind == Tok::End) {
        return "end of input";
    }
    if (t.kind == Tok::String) {
        return "string \"" + t.text + "\"";
    }
    return "'" + t.text + "'";
}

class TermParser {
public:
    TermParser(std::vector<Token> tokens, const std::set<std::string>& metavars)
        : toks_(std::move(tokens)), metavars_(metavars)
    {
    }

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at(Tok k) const { return peek().kind == k; }
    Token take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    Token expect(Tok k, std::string_view what)
    {
        if (!at(k)) {
            fail("expected " + std::string(what) + ", found " + describe(peek()));
        }
        return take();
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().col); }

    static bool term_start(const Token& t)
    {
        return t.kind == Tok::Ident || t.kind == Tok::String || t.kind == Tok::LParen || t.kind == Tok::LBracket;
    }

    Term identifier_term(const std::string& name) const
    {
        if (resolve_spelling(metavars_, name) || has_metavar_suffix(name)) {
            return Term::metavar(name);
        }
        return Term::app(name);
    }

    Term term()
    {
        Term t = primary();
        // Postfix substitution binds only when `[` directly follows the term.
        while (at(Tok::LBracket) && !peek().space_before && peek(1).kind != Tok::RBracket) {
            take();
            Term replacement = term();
            expect(Tok::Slash, "'/' in substitution");
            auto var = expect(Tok::Ident, "substitution variable");
            expect(Tok::RBracket, "']' closing substitution");
            t = Term::subst(std::move(t), std::move(replacement), var.text);
        }
        return t;
    }

    Term primary()
    {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Ident: {
            auto name = take().text;
            return identifier_term(name);
        }
        case Tok::String:
            return Term::str(take().text);
        case Tok::LBracket:
            take();
            expect(Tok::RBracket, "']' (the hole is written [])");
            return Term::hole();
        case Tok::LParen: {
            take();
            auto head = expect(Tok::Ident, "constructor name or bound variable after '('");
            if (at(Tok::RParen)) {
                take();
                if (term_start(peek()) && !peek().space_before) {
                    return Term::binder(head.text, term());
                }
                return Term::app(head.text);
            }
            std::vector<Term> args;
            while (!at(Tok::RParen)) {
                if (!term_start(peek())) {
                    fail("expected a term or ')', found " + describe(peek()));
                }
                args.push_back(term());
            }
            take();
            return Term::app(head.text, std::move(args));
        }
        default:
            fail("expected a term, found " + describe(t));
        }
    }

    Config config_rest(Term subject)
    {
        Config c{std::move(subject), {}};
        while (at(Tok::Comma)) {
            take();
            c.state.push_back(term());
        }
        return c;
    }

    Formula formula()
    {
        // `pn t1 ... tn` without parentheses.
        if (at(Tok::Ident) && term_start(peek(1)) && peek(1).space_before) {
            auto pred = take();
            std::vector<Term> args;
            while (term_start(peek())) {
                args.push_back(term());
            }
            return finish_prefix(pred.text, std::move(args), pred);
        }
        Token first = peek();
        Term t0 = term();
        if (at(Tok::Turnstile)) {
            take();
            Term subject = term();
            expect(Tok::Colon, "':' in typing formula");
            Term type = term();
            return make_typing(std::move(t0), std::move(subject), std::move(type));
        }
        if (at(Tok::Subtype)) {
            take();
            return make_subtype(std::move(t0), term());
        }
        if (at(Tok::Comma) || at(Tok::Arrow)) {
            Config source = config_rest(std::move(t0));
            expect(Tok::Arrow, "'-->' in reduction formula");
            Config target = config_rest(term());
            return make_step(source, target);
        }
        const auto* app = t0.as<ConApp>();
        if (!app || app->args.empty()) {
            throw ParseError("expected a formula, found the bare term " + to_string(t0), first.line, first.col);
        }
        return finish_prefix(app->constructor, app->args, first);
    }

    Formula finish_prefix(const std::string& pred, std::vector<Term> args, const Token& at_tok)
    {
        if (args.empty()) {
            throw ParseError("predicate " + pred + " needs at least one argument", at_tok.line, at_tok.col);
        }
        if (pred == kStepPredicate) {
            if (args.size() != 2) {
                throw ParseError("step needs exactly two arguments", at_tok.line, at_tok.col);
            }
            return make_step(Config{args[0], {}}, Config{args[1], {}});
        }
        return Formula{pred, std::move(args)};
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const std::set<std::string>& metavars_;
};

Chars chars_of(std::string_view text)
{
    Chars out;
    std::size_t line = 1;
    std::size_t col = 1;
    for (char c : text) {
        out.push_back({c, line, col});
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return out;
}

struct LogicalLine {
    Chars chars;
    std::size_t line;
};

std::string text_of(const Chars& chars)
{
    std::string s;
    for (const auto& c : chars) {
        s += c.c;
    }
    return s;
}

std::string trim(std::string s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Splits into logical lines: strips `//` comments outside strings, joins `\` continuations.
std::vector<LogicalLine> logical_lines(std::string_view source)
{
    std::vector<LogicalLine> out;
    Chars all = chars_of(source);
    LogicalLine current{{}, 1};
    bool in_string = false;
    bool in_comment = false;
    for (std::size_t i = 0; i < all.size(); ++i) {
        const auto& ch = all[i];
        if (ch.c == '\n') {
            in_comment = false;
            in_string = false;
            // A trailing backslash (ignoring trailing blanks) continues the line.
            std::size_t k = current.chars.size();
            while (k > 0 && (current.chars[k - 1].c == ' ' || current.chars[k - 1].c == '\t' ||
                             current.chars[k - 1].c == '\r')) {
                --k;
            }
            if (k > 0 && current.chars[k - 1].c == '\\') {
                current.chars.resize(k - 1);
                current.chars.push_back({' ', ch.line, ch.col});
                continue;
            }
            out.push_back(std::move(current));
            current = LogicalLine{{}, ch.line + 1};
            continue;
        }
        if (in_comment) {
            continue;
        }
        if (!in_string && ch.c == '/' && i + 1 < all.size() && all[i + 1].c == '/') {
            in_comment = true;
            continue;
        }
        if (ch.c == '"' && !(i > 0 && all[i - 1].c == '\\')) {
            in_string = !in_string;
        }
        current.chars.push_back(ch);
    }
    out.push_back(std::move(current));
    return out;
}

std::optional<std::string> rule_header(const std::string& trimmed)
{
    if (trimmed.size() < 3 || trimmed.front() != '[' || trimmed.back() != ']') {
        return std::nullopt;
    }
    std::string name = trimmed.substr(1, trimmed.size() - 2);
    for (char c : name) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '\'')) {
            return std::nullopt;
        }
    }
    return name;
}

struct GrammarItem {
    LogicalLine line;
};
struct RuleItem {
    std::string name;
    Chars body;
    std::size_t line;
};
struct DirectiveItem {
    LogicalLine line;
};
using Item = std::variant<GrammarItem, RuleItem, DirectiveItem>;

std::pair<std::size_t, std::size_t> end_position(const Chars& c, std::size_t fallback_line)
{
    if (c.empty()) {
        return {fallback_line, 1};
    }
    return {c.back().line, c.back().col + 1};
}

}  // namespace

LanguageDef parse_language_unchecked(std::string_view source)
{
    auto lines = logical_lines(source);
    std::vector<Item> items;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto& ll = lines[i];
        std::string trimmed = trim(text_of(ll.chars));
        if (trimmed.empty()) {
            continue;
        }
        if (trimmed.front() == '%') {
            items.emplace_back(DirectiveItem{std::move(ll)});
            continue;
        }
        if (auto name = rule_header(trimmed)) {
            RuleItem rule{*name, {}, ll.line};
            bool terminated = false;
            for (++i; i < lines.size(); ++i) {
                std::string t = trim(text_of(lines[i].chars));
                if (t.empty()) {
                    continue;
                }
                if (!rule.body.empty()) {
                    rule.body.push_back({' ', lines[i].line, 0});
                }
                rule.body.insert(rule.body.end(), lines[i].chars.begin(), lines[i].chars.end());
                if (t.back() == '.') {
                    terminated = true;
                    break;
                }
            }
            if (!terminated) {
                throw ParseError("rule [" + *name + "] is not terminated by '.'", ll.line, 1);
            }
            items.emplace_back(std::move(rule));
            continue;
        }
        items.emplace_back(GrammarItem{std::move(ll)});
    }

    // Metavariables are declared by grammar headers and may be used before their rule.
    std::set<std::string> metavars;
    for (const auto& item : items) {
        if (const auto* g = std::get_if<GrammarItem>(&item)) {
            auto [l, c] = end_position(g->line.chars, g->line.line);
            auto toks = tokenize(g->line.chars, l, c);
            if (toks.size() >= 3 && toks[0].kind == Tok::Ident && toks[1].kind == Tok::Ident &&
                toks[2].kind == Tok::Defines) {
                metavars.insert(toks[1].text);
            }
        }
    }

    LanguageDef lang;
    for (auto& item : items) {
        if (auto* g = std::get_if<GrammarItem>(&item)) {
            auto [l, c] = end_position(g->line.chars, g->line.line);
            TermParser p(tokenize(g->line.chars, l, c), metavars);
            GrammarRule rule;
            rule.category = p.expect(Tok::Ident, "category name").text;
            rule.metavar = p.expect(Tok::Ident, "metavariable after category name").text;
            p.expect(Tok::Defines, "'::='");
            rule.productions.push_back(p.term());
            while (p.at(Tok::Bar)) {
                p.take();
                rule.productions.push_back(p.term());
            }
            if (!p.at(Tok::End)) {
                p.fail("expected '|' or end of grammar rule, found " + describe(p.peek()));
            }
            lang.grammar.push_back(std::move(rule));
        } else if (auto* r = std::get_if<RuleItem>(&item)) {
            auto [l, c] = end_position(r->body, r->line);
            TermParser p(tokenize(r->body, l, c), metavars);
            InferenceRule rule;
            rule.name = r->name;
            rule.conclusion = p.formula();
            if (p.at(Tok::Provided)) {
                p.take();
                rule.premises.push_back(p.formula());
                while (p.at(Tok::Conj)) {
                    p.take();
                    rule.premises.push_back(p.formula());
                }
            }
            p.expect(Tok::Dot, "'.' ending rule [" + r->name + "]");
            if (!p.at(Tok::End)) {
                p.fail("unexpected " + describe(p.peek()) + " after end of rule [" + r->name + "]");
            }
            lang.rules.push_back(std::move(rule));
        } else {
            auto& d = std::get<DirectiveItem>(item);
            std::string text = trim(text_of(d.line.chars));
            std::istringstream is(text);
            std::string word;
            is >> word;
            if (word != "%ineffectual") {
                throw ParseError("unknown directive " + word, d.line.line, 1);
            }
            for (auto& ch : text) {
                if (ch == ',') {
                    ch = ' ';
                }
            }
            std::istringstream names(text.substr(word.size()));
            while (names >> word) {
                lang.ineffectual.insert(word);
            }
        }
    }
    if (lang.grammar.empty()) {
        throw ParseError("language definition has no grammar rules", 1, 1);
    }
    return lang;
}

LanguageDef parse_language(std::string_view source)
{
    auto lang = parse_language_unchecked(source);
    auto report = validate_language(lang);
    if (!report.ok()) {
        throw ValidationError(std::move(report));
    }
    return lang;
}

std::string render_language(const LanguageDef& lang)
{
    auto mvs = declared_metavars(lang);
    auto is_mv = [&](std::string_view s) { return resolve_spelling(mvs, s).has_value() || has_metavar_suffix(s); };
    std::ostringstream os;
    for (const auto& g : lang.grammar) {
        os << g.category << ' ' << g.metavar << " ::=";
        for (std::size_t i = 0; i < g.productions.size(); ++i) {
            os << (i == 0 ? " " : " | ") << to_string(g.productions[i], is_mv);
        }
        os << '\n';
    }
    if (!lang.ineffectual.empty()) {
        os << "\n%ineffectual";
        for (const auto& n : lang.ineffectual) {
            os << ' ' << n;
        }
        os << '\n';
    }
    for (const auto& r : lang.rules) {
        os << "\n[" << r.name << "]\n" << to_string(r.conclusion, is_mv);
        for (std::size_t i = 0; i < r.premises.size(); ++i) {
            os << (i == 0 ? " <== " : " /\\ ") << to_string(r.premises[i], is_mv);
        }
        os << ".\n";
    }
    return os.str();
}

Term parse_term(std::string_view text, const std::set<std::string>& metavars)
{
    Chars chars = chars_of(text);
    auto [l, c] = end_position(chars, 1);
    TermParser p(tokenize(chars, l, c), metavars);
    Term t = p.term();
    if (!p.at(Tok::End)) {
        p.fail("unexpected " + describe(p.peek()) + " after term");
    }
    return t;
}

Formula parse_formula(std::string_view text, const std::set<std::string>& metavars)
{
    Chars chars = chars_of(text);
    auto [l, c] = end_position(chars, 1);
    TermParser p(tokenize(chars, l, c), metavars);
    Formula f = p.formula();
    if (!p.at(Tok::End)) {
        p.fail("unexpected " + describe(p.peek()) + " after formula");
    }
    return f;
}

}  // namespace langlogic
