#pragma once

// Language definitions: a grammar plus an inference system plus directives.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "langlogic/term.hpp"

namespace langlogic {

struct GrammarRule {
    std::string category;
    std::string metavar;
    std::vector<Term> productions;
    bool operator==(const GrammarRule&) const = default;
};

struct InferenceRule {
    std::string name;
    std::vector<Formula> premises;
    Formula conclusion;
    bool operator==(const InferenceRule&) const = default;
};

struct LanguageDef {
    std::vector<GrammarRule> grammar;
    std::vector<InferenceRule> rules;
    std::set<std::string> ineffectual;
    bool operator==(const LanguageDef&) const = default;
};

enum class RuleKind { Typing, Subtyping, Reduction, Other };

std::string_view to_string(RuleKind k);

/// Classification by the conclusion's predicate only.
RuleKind classify_rule(const InferenceRule& r);

/// Strips trailing digits and primes from `occ` and returns the longest declared
/// prefix reachable that way (the whole spelling counts as a candidate).
std::optional<std::string> resolve_spelling(const std::set<std::string>& declared, std::string_view occ);

/// True iff `name` ends in a digit or a prime.
bool has_metavar_suffix(std::string_view name);

std::set<std::string> declared_metavars(const LanguageDef& lang);

struct Finding {
    std::string kind;
    std::string message;
    bool operator==(const Finding&) const = default;
};

struct ValidationReport {
    std::vector<Finding> findings;
    bool ok() const { return findings.empty(); }
};

ValidationReport validate_language(const LanguageDef& lang);

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& bare_message() const { return bare_; }

private:
    std::string bare_;
    std::size_t line_;
    std::size_t column_;
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(ValidationReport report);
    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

/// Reduction-rule views used throughout the proof rules.
const Term* reduction_source_subject(const InferenceRule& r);

/// All user constructor names in the language, in order of first appearance
/// (grammar productions first, then rules).
std::vector<std::string> constructors_in(const LanguageDef& lang);

const GrammarRule* find_grammar_rule(const LanguageDef& lang, std::string_view category);
const InferenceRule* find_rule(const LanguageDef& lang, std::string_view name);

}  // namespace langlogic
