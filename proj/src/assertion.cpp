#include "langlogic/assertion.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace langlogic {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

class AssertionParser {
public:
    explicit AssertionParser(std::string_view text) : text_(text) {}

    Assertion parse_all()
    {
        Assertion a = conjunction();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return a;
    }

    Atom parse_single_atom()
    {
        skip_ws();
        Atom a = atom(word());
        skip_ws();
        if (pos_ != text_.size()) {
            fail("unexpected trailing input");
        }
        return a;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw AssertionParseError(msg, pos_ + 1); }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(std::string_view s)
    {
        skip_ws();
        if (text_.substr(pos_, s.size()) == s) {
            pos_ += s.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view s)
    {
        if (!accept(s)) {
            fail("expected '" + std::string(s) + "'");
        }
    }

    static bool word_char(char c)
    {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '-';
    }

    std::string word()
    {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && word_char(text_[pos_])) {
            ++pos_;
        }
        if (start == pos_) {
            fail(pos_ < text_.size() ? "unexpected '" + std::string(1, text_[pos_]) + "'" : "unexpected end of input");
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    std::string identifier()
    {
        std::string w = word();
        if (!(std::isalpha(static_cast<unsigned char>(w.front())) || w.front() == '_') ||
            w.find('-') != std::string::npos) {
            fail("'" + w + "' is not an identifier");
        }
        return w;
    }

    std::string rule_name()
    {
        if (accept("[")) {
            std::string w = word();
            expect("]");
            return w;
        }
        return word();
    }

    unsigned number()
    {
        std::string w = word();
        if (!std::all_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            fail("'" + w + "' is not a position number");
        }
        return static_cast<unsigned>(std::stoul(w));
    }

    PositionSet positions()
    {
        PositionSet s;
        expect("{");
        if (accept("}")) {
            return s;
        }
        do {
            s.insert(number());
        } while (accept(","));
        expect("}");
        return s;
    }

    Atom atom(const std::string& kind)
    {
        expect("(");
        Atom a = [&]() -> Atom {
            if (kind == "ctx") {
                auto mv = identifier();
                expect(",");
                auto c = identifier();
                expect(",");
                return atom::Ctx{mv, c, positions()};
            }
            if (kind == "ctx-compliant") {
                return atom::CtxCompliant{rule_name()};
            }
            if (kind == "error-handler") {
                auto c = identifier();
                expect(",");
                return atom::ErrorHandler{c, number()};
            }
            if (kind == "effectful") {
                return atom::Effectful{number()};
            }
            if (kind == "no-dupli-ef") {
                return atom::NoDupliEf{rule_name()};
            }
            if (kind == "contravariant") {
                auto c = identifier();
                expect(",");
                return atom::Contravariant{c, positions()};
            }
            if (kind == "contra-resp") {
                auto r = rule_name();
                expect(",");
                return atom::ContraResp{r, identifier()};
            }
            fail("unknown assertion '" + kind + "'");
        }();
        expect(")");
        return a;
    }

    Assertion unary()
    {
        if (accept("~")) {
            return Assertion::negate(unary());
        }
        if (accept("(")) {
            Assertion a = conjunction();
            expect(")");
            return a;
        }
        std::string w = word();
        if (w == "true") {
            return Assertion::truth();
        }
        return Assertion::of(atom(w));
    }

    Assertion conjunction()
    {
        Assertion a = unary();
        while (accept("/\\")) {
            a = Assertion::conj(std::move(a), unary());
        }
        return a;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

void collect(const Assertion& a, AtomSet& out)
{
    std::visit(overloaded{
                   [](const Assertion::True&) {},
                   [&](const Assertion::AtomNode& n) { out.insert({true, n.atom}); },
                   [&](const Assertion::Not& n) {
                       const auto* inner = std::get_if<Assertion::AtomNode>(&n.inner->node());
                       if (!inner) {
                           throw NotFlat("negation of a non-atomic assertion: " + to_string(*n.inner));
                       }
                       out.insert({false, inner->atom});
                   },
                   [&](const Assertion::And& n) {
                       collect(*n.left, out);
                       collect(*n.right, out);
                   },
               },
               a.node());
}

void flatten_conjuncts(const Assertion& a, std::vector<const Assertion*>& out)
{
    if (const auto* n = std::get_if<Assertion::And>(&a.node())) {
        flatten_conjuncts(*n->left, out);
        flatten_conjuncts(*n->right, out);
    } else {
        out.push_back(&a);
    }
}

nlohmann::ordered_json positions_json(const PositionSet& s)
{
    auto j = nlohmann::ordered_json::array();
    for (auto p : s) {
        j.push_back(p);
    }
    return j;
}

PositionSet positions_from_json(const nlohmann::ordered_json& j)
{
    PositionSet s;
    for (const auto& p : j) {
        s.insert(p.get<unsigned>());
    }
    return s;
}

}  // namespace

Assertion Assertion::negate(Assertion inner)
{
    return Assertion(Not{std::make_shared<const Assertion>(std::move(inner))});
}

Assertion Assertion::conj(Assertion left, Assertion right)
{
    return Assertion(
        And{std::make_shared<const Assertion>(std::move(left)), std::make_shared<const Assertion>(std::move(right))});
}

AssertionParseError::AssertionParseError(const std::string& message, std::size_t column)
    : std::runtime_error("column " + std::to_string(column) + ": " + message), column_(column)
{
}

Assertion parse_assertion(std::string_view text) { return AssertionParser(text).parse_all(); }

Atom parse_atom(std::string_view text) { return AssertionParser(text).parse_single_atom(); }

std::string to_string(const PositionSet& s)
{
    std::string out = "{";
    bool first = true;
    for (auto p : s) {
        if (!first) {
            out += ",";
        }
        out += std::to_string(p);
        first = false;
    }
    return out + "}";
}

std::string_view atom_kind(const Atom& a)
{
    return std::visit(overloaded{
                          [](const atom::Ctx&) { return std::string_view("ctx"); },
                          [](const atom::CtxCompliant&) { return std::string_view("ctx-compliant"); },
                          [](const atom::ErrorHandler&) { return std::string_view("error-handler"); },
                          [](const atom::Effectful&) { return std::string_view("effectful"); },
                          [](const atom::NoDupliEf&) { return std::string_view("no-dupli-ef"); },
                          [](const atom::Contravariant&) { return std::string_view("contravariant"); },
                          [](const atom::ContraResp&) { return std::string_view("contra-resp"); },
                      },
                      a);
}

std::string to_string(const Atom& a)
{
    return std::visit(
        overloaded{
            [](const atom::Ctx& x) { return "ctx(" + x.metavar + ", " + x.constructor + ", " + to_string(x.positions) + ")"; },
            [](const atom::CtxCompliant& x) { return "ctx-compliant([" + x.rule + "])"; },
            [](const atom::ErrorHandler& x) {
                return "error-handler(" + x.constructor + ", " + std::to_string(x.position) + ")";
            },
            [](const atom::Effectful& x) { return "effectful(" + std::to_string(x.state_position) + ")"; },
            [](const atom::NoDupliEf& x) { return "no-dupli-ef([" + x.rule + "])"; },
            [](const atom::Contravariant& x) {
                return "contravariant(" + x.constructor + ", " + to_string(x.positions) + ")";
            },
            [](const atom::ContraResp& x) { return "contra-resp([" + x.rule + "], " + x.constructor + ")"; },
        },
        a);
}

std::string to_string(const SignedAtom& a) { return (a.positive ? "" : "~") + to_string(a.atom); }

std::string to_string(const Assertion& a)
{
    return std::visit(overloaded{
                          [](const Assertion::True&) { return std::string("true"); },
                          [](const Assertion::AtomNode& n) { return to_string(n.atom); },
                          [](const Assertion::Not& n) {
                              if (std::holds_alternative<Assertion::AtomNode>(n.inner->node()) ||
                                  std::holds_alternative<Assertion::True>(n.inner->node())) {
                                  return "~" + to_string(*n.inner);
                              }
                              return "~(" + to_string(*n.inner) + ")";
                          },
                          [](const Assertion::And& n) {
                              std::string right = to_string(*n.right);
                              if (std::holds_alternative<Assertion::And>(n.right->node())) {
                                  right = "(" + right + ")";
                              }
                              return to_string(*n.left) + " /\\ " + right;
                          },
                      },
                      a.node());
}

AtomSet atoms_of(const Assertion& a)
{
    AtomSet out;
    collect(a, out);
    return out;
}

bool is_flat(const Assertion& a)
{
    try {
        (void)atoms_of(a);
        return true;
    } catch (const NotFlat&) {
        return false;
    }
}

bool entails(const Assertion& p, const Assertion& q)
{
    auto ps = atoms_of(p);
    auto qs = atoms_of(q);
    return std::includes(ps.begin(), ps.end(), qs.begin(), qs.end());
}

bool same_atoms(const Assertion& p, const Assertion& q) { return atoms_of(p) == atoms_of(q); }

bool contains_atom(const AtomSet& set, const Atom& atom) { return set.count(SignedAtom{true, atom}) > 0; }

Assertion conjoin(const Assertion& p, const Atom& atom)
{
    if (contains_atom(atoms_of(p), atom)) {
        return p;
    }
    if (std::holds_alternative<Assertion::True>(p.node())) {
        return Assertion::of(atom);
    }
    return Assertion::conj(p, Assertion::of(atom));
}

Assertion from_atoms(const AtomSet& atoms)
{
    Assertion out;
    bool first = true;
    for (const auto& a : atoms) {
        Assertion piece = a.positive ? Assertion::of(a.atom) : Assertion::negate(Assertion::of(a.atom));
        out = first ? piece : Assertion::conj(std::move(out), std::move(piece));
        first = false;
    }
    return out;
}

nlohmann::ordered_json atom_to_json(const Atom& a)
{
    nlohmann::ordered_json j;
    j["kind"] = std::string(atom_kind(a));
    std::visit(overloaded{
                   [&](const atom::Ctx& x) {
                       j["metavar"] = x.metavar;
                       j["constructor"] = x.constructor;
                       j["positions"] = positions_json(x.positions);
                   },
                   [&](const atom::CtxCompliant& x) { j["rule"] = x.rule; },
                   [&](const atom::ErrorHandler& x) {
                       j["constructor"] = x.constructor;
                       j["position"] = x.position;
                   },
                   [&](const atom::Effectful& x) { j["position"] = x.state_position; },
                   [&](const atom::NoDupliEf& x) { j["rule"] = x.rule; },
                   [&](const atom::Contravariant& x) {
                       j["constructor"] = x.constructor;
                       j["positions"] = positions_json(x.positions);
                   },
                   [&](const atom::ContraResp& x) {
                       j["rule"] = x.rule;
                       j["constructor"] = x.constructor;
                   },
               },
               a);
    return j;
}

Atom atom_from_json(const nlohmann::ordered_json& j)
{
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "ctx") {
        return atom::Ctx{j.at("metavar").get<std::string>(), j.at("constructor").get<std::string>(),
                         positions_from_json(j.at("positions"))};
    }
    if (kind == "ctx-compliant") {
        return atom::CtxCompliant{j.at("rule").get<std::string>()};
    }
    if (kind == "error-handler") {
        return atom::ErrorHandler{j.at("constructor").get<std::string>(), j.at("position").get<unsigned>()};
    }
    if (kind == "effectful") {
        return atom::Effectful{j.at("position").get<unsigned>()};
    }
    if (kind == "no-dupli-ef") {
        return atom::NoDupliEf{j.at("rule").get<std::string>()};
    }
    if (kind == "contravariant") {
        return atom::Contravariant{j.at("constructor").get<std::string>(), positions_from_json(j.at("positions"))};
    }
    if (kind == "contra-resp") {
        return atom::ContraResp{j.at("rule").get<std::string>(), j.at("constructor").get<std::string>()};
    }
    throw std::invalid_argument("unknown atom kind in JSON: " + kind);
}

nlohmann::ordered_json assertion_to_json(const Assertion& a)
{
    return std::visit(overloaded{
                          [](const Assertion::True&) { return nlohmann::ordered_json{{"kind", "true"}}; },
                          [](const Assertion::AtomNode& n) { return atom_to_json(n.atom); },
                          [](const Assertion::Not& n) {
                              nlohmann::ordered_json j;
                              j["kind"] = "not";
                              j["inner"] = assertion_to_json(*n.inner);
                              return j;
                          },
                          [&a](const Assertion::And&) {
                              std::vector<const Assertion*> parts;
                              flatten_conjuncts(a, parts);
                              nlohmann::ordered_json j;
                              j["kind"] = "and";
                              j["conjuncts"] = nlohmann::ordered_json::array();
                              for (const auto* p : parts) {
                                  j["conjuncts"].push_back(assertion_to_json(*p));
                              }
                              return j;
                          },
                      },
                      a.node());
}

Assertion assertion_from_json(const nlohmann::ordered_json& j)
{
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "true") {
        return Assertion::truth();
    }
    if (kind == "not") {
        return Assertion::negate(assertion_from_json(j.at("inner")));
    }
    if (kind == "and") {
        const auto& parts = j.at("conjuncts");
        if (parts.empty()) {
            return Assertion::truth();
        }
        Assertion out = assertion_from_json(parts.front());
        for (std::size_t i = 1; i < parts.size(); ++i) {
            out = Assertion::conj(std::move(out), assertion_from_json(parts[i]));
        }
        return out;
    }
    return Assertion::of(atom_from_json(j));
}

std::string_view to_string(SubjectKind k)
{
    switch (k) {
    case SubjectKind::Language:
        return "language";
    case SubjectKind::Grammar:
        return "grammar";
    case SubjectKind::InfSystem:
        return "inference-system";
    case SubjectKind::GrammarRule:
        return "grammar-rule";
    case SubjectKind::InfRule:
        break;
    }
    return "inference-rule";
}

SubjectKind subject_kind_from_string(std::string_view s)
{
    for (auto k : {SubjectKind::Language, SubjectKind::Grammar, SubjectKind::InfSystem, SubjectKind::GrammarRule,
                   SubjectKind::InfRule}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw std::invalid_argument("unknown subject kind: " + std::string(s));
}

}  // namespace langlogic
