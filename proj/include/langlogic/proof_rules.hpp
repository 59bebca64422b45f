#pragma once

// The seven base proof rules for single grammar and inference rules. Each check either
// derives one atom (with the premise instances it discharged) or says why it does not apply.

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "langlogic/assertion.hpp"
#include "langlogic/grammar.hpp"
#include "langlogic/language.hpp"

namespace langlogic {

enum class BaseRule { Inductive, CtxCompliant, ErrorHandler, Effectful, EffectualArgs, Contravariant, ContraRespecting };

std::string_view to_string(BaseRule r);
std::optional<BaseRule> base_rule_from_string(std::string_view s);

struct Justification {
    BaseRule rule;
    std::vector<std::string> discharged;
};

struct Derived {
    Atom atom;
    Justification justification;
};

enum class MissKind {
    MissingPrecondition,
    PremiseFails,
    NoErrorArgument,
    /// The rule's conclusion does not have the form the proof rule analyzes.
    Shape,
};

struct NotApplicable {
    MissKind kind;
    std::string detail;
};

using RuleOutcome = std::variant<Derived, NotApplicable>;

/// Everything the base rules consult besides the precondition.
class RuleContext {
public:
    explicit RuleContext(const LanguageDef& lang, std::optional<std::set<std::string>> ineffectual_override = {});

    const LanguageDef& lang() const { return *lang_; }
    const CategoryIndex& index() const { return idx_; }
    const std::set<std::string>& ineffectual() const { return ineffectual_; }

    std::string show(const Term& t) const;
    std::string show(const Formula& f) const;

private:
    const LanguageDef* lang_;
    CategoryIndex idx_;
    std::set<std::string> ineffectual_;
};

RuleOutcome try_inductive(const RuleContext& cx, const GrammarRule& g, std::string_view c);
RuleOutcome try_ctx_compliant(const RuleContext& cx, const AtomSet& p, const InferenceRule& r);
RuleOutcome try_error_handler(const RuleContext& cx, const AtomSet& p, const InferenceRule& r);
RuleOutcome try_effectful(const RuleContext& cx, const InferenceRule& r);
RuleOutcome try_effectual_args(const RuleContext& cx, const AtomSet& p, const InferenceRule& r);
RuleOutcome try_contravariant(const RuleContext& cx, const InferenceRule& r);
RuleOutcome try_contra_respecting(const RuleContext& cx, const AtomSet& p, const InferenceRule& r, std::string_view c);

/// Constructors `c` with some Contravariant(c, I), I nonempty, in `p` (sorted).
std::vector<std::string> contravariant_constructors(const AtomSet& p);

/// Applies an inference-rule base rule other than contra-respecting.
RuleOutcome apply_base_rule(const RuleContext& cx, BaseRule b, const AtomSet& p, const InferenceRule& r);

}  // namespace langlogic
