#pragma once

// Grammar derivation (X =>*_G t), metavariable resolution and inductive positions.

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "langlogic/language.hpp"

namespace langlogic {

class UnresolvedMetaVar : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Query-ready view of a grammar. Holds its own copy of the rules.
class CategoryIndex {
public:
    explicit CategoryIndex(std::vector<GrammarRule> grammar);
    explicit CategoryIndex(const LanguageDef& lang) : CategoryIndex(lang.grammar) {}

    const GrammarRule* by_metavar(std::string_view mv) const;
    const GrammarRule* by_category(std::string_view category) const;
    const std::set<std::string>& metavars() const { return metavars_; }
    const std::vector<GrammarRule>& rules() const { return grammar_; }

    std::optional<std::string> try_resolve(std::string_view occ) const { return resolve_spelling(metavars_, occ); }
    MetaVarResolver resolver() const;

    /// Metavariables of the reserved categories, when the grammar declares them.
    std::optional<std::string> eval_ctx_metavar() const;
    std::optional<std::string> err_ctx_metavar() const;
    std::optional<std::string> value_metavar() const;
    std::optional<std::string> error_metavar() const;

private:
    std::optional<std::string> metavar_of_any(std::initializer_list<std::string_view> names) const;

    std::vector<GrammarRule> grammar_;
    std::map<std::string, std::size_t, std::less<>> by_metavar_;
    std::map<std::string, std::size_t, std::less<>> by_category_;
    std::set<std::string> metavars_;
};

/// Throws UnresolvedMetaVar when no declared metavariable matches.
std::string resolve_metavar(const CategoryIndex& idx, std::string_view occ);

/// mv =>*_G t: `t` is derivable from metavariable `mv` by rewriting metavariables with
/// their productions. Binder productions match binder terms on their bodies.
bool derives(const CategoryIndex& idx, std::string_view mv, const Term& t);

bool derivable_from_any(const CategoryIndex& idx, const std::set<std::string>& mvs, const Term& t);

/// Union of `getArgs(g.metavar)` over every production of `g` whose top constructor is `c`.
std::set<unsigned> inductive_positions(const CategoryIndex& idx, const GrammarRule& g, std::string_view c);

}  // namespace langlogic
