#pragma once

// Assertions about language definitions: seven atom kinds closed under
// conjunction, negation and true; syntactic entailment over flat assertions.

#include <compare>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

namespace langlogic {

using PositionSet = std::set<unsigned>;

namespace atom {

struct Ctx {
    std::string metavar;
    std::string constructor;
    PositionSet positions;
    auto operator<=>(const Ctx&) const = default;
};

struct CtxCompliant {
    std::string rule;
    auto operator<=>(const CtxCompliant&) const = default;
};

struct ErrorHandler {
    std::string constructor;
    unsigned position = 0;
    auto operator<=>(const ErrorHandler&) const = default;
};

/// Index into the state components of reduction formulae (1-based, subject excluded).
struct Effectful {
    unsigned state_position = 0;
    auto operator<=>(const Effectful&) const = default;
};

struct NoDupliEf {
    std::string rule;
    auto operator<=>(const NoDupliEf&) const = default;
};

struct Contravariant {
    std::string constructor;
    PositionSet positions;
    auto operator<=>(const Contravariant&) const = default;
};

struct ContraResp {
    std::string rule;
    std::string constructor;
    auto operator<=>(const ContraResp&) const = default;
};

}  // namespace atom

/// Variant order is the canonical listing order (kind, then fields).
using Atom = std::variant<atom::Ctx, atom::CtxCompliant, atom::ErrorHandler, atom::Effectful, atom::NoDupliEf,
                          atom::Contravariant, atom::ContraResp>;

struct SignedAtom {
    bool positive = true;
    Atom atom;
    auto operator<=>(const SignedAtom&) const = default;
};

using AtomSet = std::set<SignedAtom>;

class Assertion {
public:
    struct True {};
    struct AtomNode {
        Atom atom;
    };
    struct Not {
        std::shared_ptr<const Assertion> inner;
    };
    struct And {
        std::shared_ptr<const Assertion> left;
        std::shared_ptr<const Assertion> right;
    };
    using Node = std::variant<True, AtomNode, Not, And>;

    Assertion() : node_(True{}) {}
    static Assertion truth() { return Assertion(); }
    static Assertion of(Atom a) { return Assertion(AtomNode{std::move(a)}); }
    static Assertion negate(Assertion inner);
    static Assertion conj(Assertion left, Assertion right);

    const Node& node() const { return node_; }

private:
    explicit Assertion(Node n) : node_(std::move(n)) {}
    Node node_;
};

class NotFlat : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class AssertionParseError : public std::runtime_error {
public:
    AssertionParseError(const std::string& message, std::size_t column);
    std::size_t column() const { return column_; }

private:
    std::size_t column_;
};

Assertion parse_assertion(std::string_view text);
Atom parse_atom(std::string_view text);

std::string to_string(const Atom& a);
std::string to_string(const SignedAtom& a);
std::string to_string(const Assertion& a);
std::string to_string(const PositionSet& s);

std::string_view atom_kind(const Atom& a);

/// Signed atoms of a flat assertion; throws NotFlat when negation wraps a non-atom.
AtomSet atoms_of(const Assertion& a);

bool is_flat(const Assertion& a);

/// atoms_of(q) ⊆ atoms_of(p).
bool entails(const Assertion& p, const Assertion& q);

bool same_atoms(const Assertion& p, const Assertion& q);

/// Adds `atom` unless already present (positively).
Assertion conjoin(const Assertion& p, const Atom& atom);

/// Rebuilds a flat assertion from a set, in set order.
Assertion from_atoms(const AtomSet& atoms);

bool contains_atom(const AtomSet& set, const Atom& atom);

nlohmann::ordered_json atom_to_json(const Atom& a);
Atom atom_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json assertion_to_json(const Assertion& a);
Assertion assertion_from_json(const nlohmann::ordered_json& j);

enum class SubjectKind { Language, Grammar, InfSystem, GrammarRule, InfRule };

std::string_view to_string(SubjectKind k);
SubjectKind subject_kind_from_string(std::string_view s);

/// The component a statement talks about. `ref` names a grammar rule by category,
/// an inference rule by name, or a grammar / inference system by its comma-separated order.
struct Subject {
    SubjectKind kind = SubjectKind::Language;
    std::string ref;
    bool operator==(const Subject&) const = default;
};

/// {pre} subject {post}
struct Statement {
    Assertion pre;
    Subject subject;
    Assertion post;
};

}  // namespace langlogic
