#include "langlogic/proof_rules.hpp"

#include <algorithm>
#include <array>

namespace langlogic {

namespace {

constexpr std::array<std::pair<BaseRule, std::string_view>, 7> kNames{{
    {BaseRule::Inductive, "inductive"},
    {BaseRule::CtxCompliant, "ctx-compliant"},
    {BaseRule::ErrorHandler, "error-handler"},
    {BaseRule::Effectful, "effectful"},
    {BaseRule::EffectualArgs, "effectual-args"},
    {BaseRule::Contravariant, "contravariant"},
    {BaseRule::ContraRespecting, "contra-respecting"},
}};

NotApplicable miss(MissKind k, std::string detail) { return NotApplicable{k, std::move(detail)}; }

Derived derived(Atom a, BaseRule r, std::vector<std::string> discharged)
{
    return Derived{std::move(a), Justification{r, std::move(discharged)}};
}

// (op t1 .. tn) as the source subject of a reduction rule, or a Shape miss.
std::variant<const ConApp*, NotApplicable> reduction_source(const InferenceRule& r)
{
    if (classify_rule(r) != RuleKind::Reduction) {
        return miss(MissKind::Shape, "[" + r.name + "] is not a reduction rule");
    }
    const Term* subject = reduction_source_subject(r);
    const ConApp* app = subject ? subject->as<ConApp>() : nullptr;
    if (!app) {
        return miss(MissKind::Shape, "the source of [" + r.name + "] is not a constructor application");
    }
    return app;
}

const Atom* find_ctx(const AtomSet& p, const std::string& mv, const std::string& op)
{
    for (const auto& a : p) {
        if (!a.positive) {
            continue;
        }
        if (const auto* c = std::get_if<atom::Ctx>(&a.atom); c && c->metavar == mv && c->constructor == op) {
            return &a.atom;
        }
    }
    return nullptr;
}

// The metavariable among {value, error} that derives t, error first.
std::optional<std::string> value_or_error_deriving(const CategoryIndex& idx, const Term& t, bool errors_only)
{
    if (auto er = idx.error_metavar(); er && derives(idx, *er, t)) {
        return er;
    }
    if (errors_only) {
        return std::nullopt;
    }
    if (auto v = idx.value_metavar(); v && derives(idx, *v, t)) {
        return v;
    }
    return std::nullopt;
}

}  // namespace

std::string_view to_string(BaseRule r)
{
    for (const auto& [k, name] : kNames) {
        if (k == r) {
            return name;
        }
    }
    return "?";
}

std::optional<BaseRule> base_rule_from_string(std::string_view s)
{
    for (const auto& [k, name] : kNames) {
        if (name == s) {
            return k;
        }
    }
    return std::nullopt;
}

RuleContext::RuleContext(const LanguageDef& lang, std::optional<std::set<std::string>> ineffectual_override)
    : lang_(&lang), idx_(lang), ineffectual_(ineffectual_override ? *ineffectual_override : lang.ineffectual)
{
}

std::string RuleContext::show(const Term& t) const
{
    return to_string(t, [this](std::string_view s) { return idx_.try_resolve(s).has_value() || has_metavar_suffix(s); });
}

std::string RuleContext::show(const Formula& f) const
{
    return to_string(f, [this](std::string_view s) { return idx_.try_resolve(s).has_value() || has_metavar_suffix(s); });
}

RuleOutcome try_inductive(const RuleContext& cx, const GrammarRule& g, std::string_view c)
{
    std::vector<std::string> discharged;
    auto resolve = cx.index().resolver();
    for (const auto& p : g.productions) {
        if (top_constructor(p) == c) {
            discharged.push_back(cx.show(p) + ".getArgs(" + g.metavar + ") = " +
                                 to_string(get_args_positions(p, g.metavar, resolve)));
        }
    }
    if (discharged.empty()) {
        discharged.push_back("no production of " + g.category + " has constructor " + std::string(c));
    }
    auto positions = inductive_positions(cx.index(), g, c);
    discharged.push_back("I' = " + to_string(positions));
    return derived(atom::Ctx{g.metavar, std::string(c), positions}, BaseRule::Inductive, std::move(discharged));
}

RuleOutcome try_ctx_compliant(const RuleContext& cx, const AtomSet& p, const InferenceRule& r)
{
    auto src = reduction_source(r);
    if (auto* m = std::get_if<NotApplicable>(&src)) {
        return *m;
    }
    const ConApp& op = *std::get<const ConApp*>(src);
    const auto& idx = cx.index();
    auto e = idx.eval_ctx_metavar();
    if (!e) {
        return miss(MissKind::MissingPrecondition, "the grammar declares no evaluation-context category");
    }
    const Atom* ctx = find_ctx(p, *e, op.constructor);
    if (!ctx) {
        return miss(MissKind::MissingPrecondition, "no ctx(" + *e + ", " + op.constructor + ", I) in P");
    }
    const auto& positions = std::get<atom::Ctx>(*ctx).positions;
    std::vector<std::string> discharged{to_string(*ctx) + " ∈ P"};
    for (unsigned i = 1; i <= op.args.size(); ++i) {
        const Term& ti = op.args[i - 1];
        auto by = value_or_error_deriving(idx, ti, false);
        if (!by) {
            continue;
        }
        std::string premise = *by + " ⇒*_G " + cx.show(ti);
        if (!positions.count(i)) {
            return miss(MissKind::PremiseFails,
                        premise + " but " + std::to_string(i) + " ∉ " + to_string(positions));
        }
        discharged.push_back(premise + " implies " + std::to_string(i) + " ∈ " + to_string(positions));
    }
    if (discharged.size() == 1) {
        discharged.push_back("no argument of " + op.constructor + " must be a value or an error");
    }
    return derived(atom::CtxCompliant{r.name}, BaseRule::CtxCompliant, std::move(discharged));
}

RuleOutcome try_error_handler(const RuleContext& cx, const AtomSet& p, const InferenceRule& r)
{
    auto src = reduction_source(r);
    if (auto* m = std::get_if<NotApplicable>(&src)) {
        return *m;
    }
    const ConApp& op = *std::get<const ConApp*>(src);
    const auto& idx = cx.index();

    std::vector<unsigned> error_positions;
    for (unsigned i = 1; i <= op.args.size(); ++i) {
        if (value_or_error_deriving(idx, op.args[i - 1], true)) {
            error_positions.push_back(i);
        }
    }
    if (error_positions.empty()) {
        return miss(MissKind::NoErrorArgument, "no argument of " + op.constructor + " in [" + r.name +
                                                   "] is derivable from the error category");
    }
    const Atom compliant = atom::CtxCompliant{r.name};
    if (!contains_atom(p, compliant)) {
        return miss(MissKind::MissingPrecondition, to_string(compliant) + " ∉ P");
    }
    auto f = idx.err_ctx_metavar();
    if (!f) {
        return miss(MissKind::MissingPrecondition, "the grammar declares no error-context category");
    }
    const Atom* ctx = find_ctx(p, *f, op.constructor);
    if (!ctx) {
        return miss(MissKind::MissingPrecondition, "no ctx(" + *f + ", " + op.constructor + ", I) in P");
    }
    const auto& positions = std::get<atom::Ctx>(*ctx).positions;
    const std::string er = *idx.error_metavar();
    for (unsigned i : error_positions) {
        if (!positions.count(i)) {
            return derived(atom::ErrorHandler{op.constructor, i}, BaseRule::ErrorHandler,
                           {to_string(compliant) + " ∈ P", to_string(*ctx) + " ∈ P",
                            er + " ⇒*_G " + cx.show(op.args[i - 1]),
                            std::to_string(i) + " ∉ " + to_string(positions)});
        }
    }
    unsigned i = error_positions.front();
    return miss(MissKind::PremiseFails, er + " ⇒*_G " + cx.show(op.args[i - 1]) + " but " + std::to_string(i) +
                                            " ∈ " + to_string(positions) + ": the error context " + *f +
                                            " covers it");
}

RuleOutcome try_effectful(const RuleContext& cx, const InferenceRule& r)
{
    if (classify_rule(r) != RuleKind::Reduction) {
        return miss(MissKind::Shape, "[" + r.name + "] is not a reduction rule");
    }
    auto step = as_step(r.conclusion);
    if (!step) {
        return miss(MissKind::Shape, "[" + r.name + "] is not a well-formed step");
    }
    const auto& before = step->source.state;
    const auto& after = step->target.state;
    if (before.empty()) {
        return miss(MissKind::PremiseFails, "[" + r.name + "] carries no state");
    }
    for (std::size_t i = 0; i < std::min(before.size(), after.size()); ++i) {
        if (!term_equal(before[i], after[i])) {
            return derived(atom::Effectful{static_cast<unsigned>(i + 1)}, BaseRule::Effectful,
                           {cx.show(before[i]) + " ≠ " + cx.show(after[i])});
        }
    }
    return miss(MissKind::PremiseFails, "every state component of [" + r.name + "] is preserved");
}

RuleOutcome try_effectual_args(const RuleContext& cx, const AtomSet& p, const InferenceRule& r)
{
    auto src = reduction_source(r);
    if (auto* m = std::get_if<NotApplicable>(&src)) {
        return *m;
    }
    const ConApp& op = *std::get<const ConApp*>(src);
    const Atom* effect = nullptr;
    for (const auto& a : p) {
        if (a.positive && std::holds_alternative<atom::Effectful>(a.atom)) {
            effect = &a.atom;
            break;
        }
    }
    if (!effect) {
        return miss(MissKind::MissingPrecondition, "no effectful(i) in P");
    }
    const auto step = as_step(r.conclusion);
    const Term& target = step->target.subject;
    const auto& idx = cx.index();
    std::vector<std::string> discharged{to_string(*effect) + " ∈ P"};
    for (const auto& t : op.args) {
        std::optional<std::string> harmless;
        for (const auto& x : cx.ineffectual()) {
            if (derives(idx, x, t)) {
                harmless = x;
                break;
            }
        }
        if (harmless) {
            discharged.push_back(*harmless + " ⇒*_G " + cx.show(t) + " with " + *harmless + " ∈ ineffectual");
            continue;
        }
        if (count_occurrences(target, t) >= 2) {
            return miss(MissKind::PremiseFails,
                        cx.show(target) + " is of the form C[" + cx.show(t) + ", " + cx.show(t) + ", ...]");
        }
        if (contains_subst_involving(target, t)) {
            return miss(MissKind::PremiseFails,
                        cx.show(target) + " is of the form C[t''[" + cx.show(t) + "/x]]");
        }
        discharged.push_back(cx.show(target) + " neither duplicates " + cx.show(t) + " nor substitutes it");
    }
    return derived(atom::NoDupliEf{r.name}, BaseRule::EffectualArgs, std::move(discharged));
}

RuleOutcome try_contravariant(const RuleContext& cx, const InferenceRule& r)
{
    if (classify_rule(r) != RuleKind::Subtyping || r.conclusion.args.size() != 2) {
        return miss(MissKind::Shape, "[" + r.name + "] is not a subtyping rule");
    }
    const auto* lhs = r.conclusion.args[0].as<ConApp>();
    const auto* rhs = r.conclusion.args[1].as<ConApp>();
    if (!lhs || !rhs || lhs->constructor != rhs->constructor || lhs->args.size() != rhs->args.size()) {
        return miss(MissKind::Shape, "the conclusion of [" + r.name + "] does not relate two " +
                                         "applications of the same constructor");
    }
    PositionSet flipped;
    std::vector<std::string> discharged;
    for (unsigned i = 1; i <= lhs->args.size(); ++i) {
        const Formula flip = make_subtype(rhs->args[i - 1], lhs->args[i - 1]);
        for (const auto& f : r.premises) {
            if (f == flip) {
                flipped.insert(i);
                discharged.push_back("premise " + cx.show(f) + " flips position " + std::to_string(i));
                break;
            }
        }
    }
    if (discharged.empty()) {
        discharged.push_back("no premise flips an argument of " + lhs->constructor);
    }
    return derived(atom::Contravariant{lhs->constructor, flipped}, BaseRule::Contravariant, std::move(discharged));
}

RuleOutcome try_contra_respecting(const RuleContext& cx, const AtomSet& p, const InferenceRule& r, std::string_view c)
{
    if (classify_rule(r) != RuleKind::Typing) {
        return miss(MissKind::Shape, "[" + r.name + "] is not a typing rule");
    }
    PositionSet contra;
    std::vector<std::string> discharged;
    for (const auto& a : p) {
        const auto* cv = std::get_if<atom::Contravariant>(&a.atom);
        if (a.positive && cv && cv->constructor == c && !cv->positions.empty()) {
            contra.insert(cv->positions.begin(), cv->positions.end());
            discharged.push_back(to_string(a.atom) + " ∈ P");
        }
    }
    if (contra.empty()) {
        return miss(MissKind::MissingPrecondition, "no contravariant(" + std::string(c) + ", I) with I nonempty in P");
    }
    bool any = false;
    for (const auto& f : r.premises) {
        if (f.predicate != kTypingPredicate || f.args.size() != 3) {
            continue;
        }
        const auto* type = f.args[2].as<ConApp>();
        if (!type || type->constructor != c) {
            continue;
        }
        any = true;
        for (unsigned i : contra) {
            if (i > type->args.size()) {
                continue;
            }
            const Term& ti = type->args[i - 1];
            for (const auto& g : r.premises) {
                if (g.predicate == kSubtypePredicate && g.args.size() == 2 && g.args[0] == ti) {
                    return miss(MissKind::PremiseFails, "∃ premise " + cx.show(g) + " with " + cx.show(ti) +
                                                            " at contravariant position " + std::to_string(i) +
                                                            " of " + cx.show(f));
                }
            }
            discharged.push_back("no premise " + cx.show(ti) + " <: t' for " + cx.show(f));
        }
    }
    if (!any) {
        discharged.push_back("no premise of [" + r.name + "] types a term with " + std::string(c));
    }
    return derived(atom::ContraResp{r.name, std::string(c)}, BaseRule::ContraRespecting, std::move(discharged));
}

std::vector<std::string> contravariant_constructors(const AtomSet& p)
{
    std::set<std::string> out;
    for (const auto& a : p) {
        const auto* cv = std::get_if<atom::Contravariant>(&a.atom);
        if (a.positive && cv && !cv->positions.empty()) {
            out.insert(cv->constructor);
        }
    }
    return {out.begin(), out.end()};
}

RuleOutcome apply_base_rule(const RuleContext& cx, BaseRule b, const AtomSet& p, const InferenceRule& r)
{
    switch (b) {
    case BaseRule::CtxCompliant:
        return try_ctx_compliant(cx, p, r);
    case BaseRule::ErrorHandler:
        return try_error_handler(cx, p, r);
    case BaseRule::Effectful:
        return try_effectful(cx, r);
    case BaseRule::EffectualArgs:
        return try_effectual_args(cx, p, r);
    case BaseRule::Contravariant:
        return try_contravariant(cx, r);
    case BaseRule::Inductive:
    case BaseRule::ContraRespecting:
        break;
    }
    return miss(MissKind::Shape, std::string(to_string(b)) + " needs an explicit subject");
}

}  // namespace langlogic
