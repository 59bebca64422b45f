#pragma once

// Forward reasoning over a whole language definition: saturate the assertion set with the
// base rules, then project the goal. Also an independent checker for emitted trees.

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "langlogic/assertion.hpp"
#include "langlogic/language.hpp"
#include "langlogic/proof_rules.hpp"

namespace langlogic {

/// Structural rule names used in trees, besides the base-rule names.
namespace rules {
inline constexpr std::string_view kLang = "lang";
inline constexpr std::string_view kGrammar = "grammar";
inline constexpr std::string_view kInf = "inf";
inline constexpr std::string_view kPermG = "perm-g";
inline constexpr std::string_view kPermR = "perm-r";
inline constexpr std::string_view kNeutral = "X-neutral";
inline constexpr std::string_view kIterate = "iterate";
inline constexpr std::string_view kConsequence = "consequence";
}  // namespace rules

struct ProofNode {
    std::string rule;
    Statement statement;
    std::vector<std::string> side_conditions;
    std::vector<ProofNode> children;
};

struct NearestMiss {
    std::string at;
    std::string reason;
    bool operator==(const NearestMiss&) const = default;
};

struct FailureReport {
    std::vector<SignedAtom> missing;
    std::vector<NearestMiss> nearest_misses;
};

struct ProverConfig {
    /// Defaults to the number of inference rules + 1.
    std::optional<unsigned> max_passes;
    std::optional<std::set<std::string>> ineffectual;
};

struct TraceEntry {
    /// 0 for the grammar phase, then 1-based inference passes.
    unsigned pass = 0;
    Subject subject;
    RuleOutcome outcome;
};

struct Saturation {
    Assertion final;
    AtomSet atoms;
    std::vector<TraceEntry> trace;
    /// {pre} G {Q} and {Q} I {final}, each rooted at a permutation node.
    ProofNode grammar_branch;
    ProofNode inference_branch;
    unsigned productive_passes = 0;
};

/// Stable: subtyping rules first.
std::vector<InferenceRule> order_rules(const std::vector<InferenceRule>& rules);

/// Comma-joined component names, as used in grammar / inference-system subject refs.
std::string grammar_ref(const std::vector<GrammarRule>& grammar);
std::string rules_ref(const std::vector<InferenceRule>& rules);

Saturation saturate(const LanguageDef& lang, const Assertion& pre, const ProverConfig& cfg = {});

using ProofResult = std::variant<ProofNode, FailureReport>;

ProofResult prove(const LanguageDef& lang, const Assertion& pre, const Assertion& goal, const ProverConfig& cfg = {});

/// Why `tree` is not a valid derivation about `lang`, or nullopt when it is.
std::optional<std::string> derivation_error(const LanguageDef& lang, const ProofNode& tree,
                                            const std::optional<std::set<std::string>>& ineffectual = {});

bool check_derivation(const LanguageDef& lang, const ProofNode& tree,
                      const std::optional<std::set<std::string>>& ineffectual = {});

std::string render_tree(const ProofNode& tree);
std::string render_failure(const FailureReport& report);

}  // namespace langlogic
