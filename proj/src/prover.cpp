#include "langlogic/prover.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace langlogic {

namespace {

constexpr std::array<BaseRule, 5> kPerRuleOrder{BaseRule::CtxCompliant, BaseRule::ErrorHandler, BaseRule::Effectful,
                                                BaseRule::EffectualArgs, BaseRule::Contravariant};

const std::vector<std::string> kConsequenceConditions{"P ⇒ P'", "Q' ⇒ Q"};

std::string join(const std::vector<std::string>& parts)
{
    std::string out;
    for (const auto& p : parts) {
        out += (out.empty() ? "" : ",") + p;
    }
    return out;
}

std::vector<std::string> split_ref(const std::string& ref)
{
    std::vector<std::string> out;
    if (ref.empty()) {
        return out;
    }
    std::string cur;
    for (char ch : ref) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string permutation_condition(const Subject& child) { return "permutation: " + child.ref; }

ProofNode neutral(const Assertion& p, const Subject& s)
{
    return ProofNode{std::string(rules::kNeutral), Statement{p, s, p}, {}, {}};
}

// Right-nested (iterate) over consecutive steps on one subject; (X-neutral) when empty.
ProofNode chain(std::vector<ProofNode> steps, const Assertion& start, const Subject& s)
{
    if (steps.empty()) {
        return neutral(start, s);
    }
    ProofNode acc = std::move(steps.back());
    for (std::size_t i = steps.size() - 1; i-- > 0;) {
        Statement st{steps[i].statement.pre, s, acc.statement.post};
        acc = ProofNode{std::string(rules::kIterate), std::move(st), {}, {std::move(steps[i]), std::move(acc)}};
    }
    return acc;
}

std::string at_rule(const std::string& name, BaseRule b)
{
    return "[" + name + "] (" + std::string(to_string(b)) + ")";
}

}  // namespace

std::vector<InferenceRule> order_rules(const std::vector<InferenceRule>& rules)
{
    std::vector<InferenceRule> out = rules;
    std::stable_partition(out.begin(), out.end(),
                          [](const InferenceRule& r) { return classify_rule(r) == RuleKind::Subtyping; });
    return out;
}

std::string grammar_ref(const std::vector<GrammarRule>& grammar)
{
    std::vector<std::string> names;
    for (const auto& g : grammar) {
        names.push_back(g.category);
    }
    return join(names);
}

std::string rules_ref(const std::vector<InferenceRule>& rules)
{
    std::vector<std::string> names;
    for (const auto& r : rules) {
        names.push_back(r.name);
    }
    return join(names);
}

Saturation saturate(const LanguageDef& lang, const Assertion& pre, const ProverConfig& cfg)
{
    RuleContext cx(lang, cfg.ineffectual);
    Saturation out;
    Assertion p = pre;
    AtomSet atoms = atoms_of(pre);

    auto record = [&](std::vector<ProofNode>& steps, const Subject& s, unsigned pass, RuleOutcome o) {
        if (const auto* d = std::get_if<Derived>(&o); d && !contains_atom(atoms, d->atom)) {
            Assertion next = conjoin(p, d->atom);
            steps.push_back(ProofNode{std::string(to_string(d->justification.rule)), Statement{p, s, next},
                                      d->justification.discharged, {}});
            p = std::move(next);
            atoms.insert(SignedAtom{true, d->atom});
        }
        out.trace.push_back(TraceEntry{pass, s, std::move(o)});
    };

    // Grammar phase.
    const Assertion g_pre = p;
    const auto all_constructors = constructors_in(lang);
    const auto eval_mv = cx.index().eval_ctx_metavar();
    const auto err_mv = cx.index().err_ctx_metavar();
    std::vector<ProofNode> per_grammar_rule;
    for (const auto& g : lang.grammar) {
        std::vector<std::string> cs;
        auto add = [&cs](const std::string& c) {
            if (std::find(cs.begin(), cs.end(), c) == cs.end()) {
                cs.push_back(c);
            }
        };
        for (const auto& prod : g.productions) {
            if (auto c = top_constructor(prod)) {
                add(*c);
            }
        }
        if (g.metavar == eval_mv || g.metavar == err_mv) {
            for (const auto& c : all_constructors) {
                add(c);
            }
        }
        const Subject s{SubjectKind::GrammarRule, g.category};
        const Assertion start = p;
        std::vector<ProofNode> steps;
        for (const auto& c : cs) {
            record(steps, s, 0, try_inductive(cx, g, c));
        }
        per_grammar_rule.push_back(chain(std::move(steps), start, s));
    }
    const Subject grammar{SubjectKind::Grammar, grammar_ref(lang.grammar)};
    ProofNode grammar_node{std::string(rules::kGrammar), Statement{g_pre, grammar, p}, {}, std::move(per_grammar_rule)};
    out.grammar_branch = ProofNode{std::string(rules::kPermG), Statement{g_pre, grammar, p},
                                   {permutation_condition(grammar)}, {std::move(grammar_node)}};

    // Inference phase.
    const auto ordered = order_rules(lang.rules);
    const Subject inf_orig{SubjectKind::InfSystem, rules_ref(lang.rules)};
    const Subject inf_ordered{SubjectKind::InfSystem, rules_ref(ordered)};
    const Assertion i_pre = p;
    const unsigned max_passes = std::max(1u, cfg.max_passes.value_or(static_cast<unsigned>(lang.rules.size()) + 1));
    std::vector<ProofNode> passes;
    for (unsigned k = 1; k <= max_passes; ++k) {
        const Assertion start = p;
        const std::size_t before = atoms.size();
        std::vector<ProofNode> children;
        for (const auto& r : ordered) {
            const Subject s{SubjectKind::InfRule, r.name};
            const Assertion rule_start = p;
            std::vector<ProofNode> steps;
            for (BaseRule b : kPerRuleOrder) {
                record(steps, s, k, apply_base_rule(cx, b, atoms, r));
            }
            if (classify_rule(r) == RuleKind::Typing) {
                for (const auto& c : contravariant_constructors(atoms)) {
                    record(steps, s, k, try_contra_respecting(cx, atoms, r, c));
                }
            }
            children.push_back(chain(std::move(steps), rule_start, s));
        }
        if (atoms.size() == before) {
            break;
        }
        passes.push_back(
            ProofNode{std::string(rules::kInf), Statement{start, inf_ordered, p}, {}, std::move(children)});
    }
    out.productive_passes = static_cast<unsigned>(passes.size());
    ProofNode core = chain(std::move(passes), i_pre, inf_ordered);
    out.inference_branch = ProofNode{std::string(rules::kPermR), Statement{i_pre, inf_orig, p},
                                     {permutation_condition(inf_ordered)}, {std::move(core)}};

    out.final = std::move(p);
    out.atoms = std::move(atoms);
    return out;
}

namespace {

void explain_missing(const RuleContext& cx, const AtomSet& atoms, const SignedAtom& goal,
                     std::vector<NearestMiss>& out)
{
    const auto& lang = cx.lang();
    if (!goal.positive) {
        out.push_back({"goal", "negated atoms are never derived; " + to_string(goal) + " is not in the precondition"});
        return;
    }
    auto report = [&](const std::string& at, const RuleOutcome& o) {
        if (const auto* m = std::get_if<NotApplicable>(&o)) {
            out.push_back({at, m->detail});
        } else if (const auto* d = std::get_if<Derived>(&o); d && !(d->atom == goal.atom)) {
            out.push_back({at, "derives " + to_string(d->atom) + " instead"});
        }
    };
    auto named_rule = [&](const std::string& name) -> const InferenceRule* {
        const auto* r = find_rule(lang, name);
        if (!r) {
            out.push_back({"[" + name + "]", "no inference rule named [" + name + "]"});
        }
        return r;
    };
    auto source_constructor = [](const InferenceRule& r) -> std::optional<std::string> {
        const Term* s = reduction_source_subject(r);
        return s ? top_constructor(*s) : std::nullopt;
    };

    std::visit(
        [&](const auto& a) {
            using A = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<A, atom::Ctx>) {
                const auto* g = cx.index().by_metavar(a.metavar);
                if (!g) {
                    out.push_back({"grammar", "no grammar rule has metavariable " + a.metavar});
                    return;
                }
                report(g->category + " (inductive)", try_inductive(cx, *g, a.constructor));
            } else if constexpr (std::is_same_v<A, atom::CtxCompliant>) {
                if (const auto* r = named_rule(a.rule)) {
                    report(at_rule(r->name, BaseRule::CtxCompliant), try_ctx_compliant(cx, atoms, *r));
                }
            } else if constexpr (std::is_same_v<A, atom::ErrorHandler>) {
                bool any = false;
                for (const auto& r : lang.rules) {
                    if (source_constructor(r) == a.constructor) {
                        any = true;
                        report(at_rule(r.name, BaseRule::ErrorHandler), try_error_handler(cx, atoms, r));
                    }
                }
                if (!any) {
                    out.push_back({"inference system", "no reduction rule for " + a.constructor});
                }
            } else if constexpr (std::is_same_v<A, atom::Effectful>) {
                for (const auto& r : lang.rules) {
                    if (classify_rule(r) == RuleKind::Reduction) {
                        report(at_rule(r.name, BaseRule::Effectful), try_effectful(cx, r));
                    }
                }
            } else if constexpr (std::is_same_v<A, atom::NoDupliEf>) {
                if (const auto* r = named_rule(a.rule)) {
                    report(at_rule(r->name, BaseRule::EffectualArgs), try_effectual_args(cx, atoms, *r));
                }
            } else if constexpr (std::is_same_v<A, atom::Contravariant>) {
                bool any = false;
                for (const auto& r : lang.rules) {
                    if (classify_rule(r) == RuleKind::Subtyping && !r.conclusion.args.empty() &&
                        top_constructor(r.conclusion.args[0]) == a.constructor) {
                        any = true;
                        report(at_rule(r.name, BaseRule::Contravariant), try_contravariant(cx, r));
                    }
                }
                if (!any) {
                    out.push_back({"inference system", "no subtyping rule for " + a.constructor});
                }
            } else if constexpr (std::is_same_v<A, atom::ContraResp>) {
                if (const auto* r = named_rule(a.rule)) {
                    report(at_rule(r->name, BaseRule::ContraRespecting),
                           try_contra_respecting(cx, atoms, *r, a.constructor));
                }
            }
        },
        goal.atom);
}

}  // namespace

ProofResult prove(const LanguageDef& lang, const Assertion& pre, const Assertion& goal, const ProverConfig& cfg)
{
    const Subject language{SubjectKind::Language, ""};
    const Subject grammar{SubjectKind::Grammar, grammar_ref(lang.grammar)};
    const Subject inf{SubjectKind::InfSystem, rules_ref(lang.rules)};
    auto root = [&](ProofNode lang_node) {
        return ProofNode{std::string(rules::kConsequence), Statement{pre, language, goal}, kConsequenceConditions,
                         {std::move(lang_node)}};
    };

    if (entails(pre, goal)) {
        return root(ProofNode{std::string(rules::kLang), Statement{pre, language, pre}, {},
                              {neutral(pre, grammar), neutral(pre, inf)}});
    }

    Saturation sat = saturate(lang, pre, cfg);
    if (entails(sat.final, goal)) {
        return root(ProofNode{std::string(rules::kLang), Statement{pre, language, sat.final}, {},
                              {std::move(sat.grammar_branch), std::move(sat.inference_branch)}});
    }

    FailureReport report;
    RuleContext cx(lang, cfg.ineffectual);
    for (const auto& a : atoms_of(goal)) {
        if (!sat.atoms.count(a)) {
            report.missing.push_back(a);
            explain_missing(cx, sat.atoms, a, report.nearest_misses);
        }
    }
    return report;
}

namespace {

class Checker {
public:
    Checker(const LanguageDef& lang, const std::optional<std::set<std::string>>& ineffectual)
        : lang_(lang), cx_(lang, ineffectual)
    {
    }

    std::optional<std::string> check(const ProofNode& n, const std::string& path)
    {
        const std::string here = path + "/" + n.rule;
        AtomSet pre;
        AtomSet post;
        try {
            pre = atoms_of(n.statement.pre);
            post = atoms_of(n.statement.post);
        } catch (const NotFlat& e) {
            return here + ": " + e.what();
        }
        const Subject& s = n.statement.subject;
        const auto& kids = n.children;

        auto fail = [&](const std::string& why) { return std::optional<std::string>(here + ": " + why); };
        auto expect_conditions = [&](const std::vector<std::string>& expected) -> std::optional<std::string> {
            if (n.side_conditions != expected) {
                return fail("side conditions do not match");
            }
            return std::nullopt;
        };
        auto pre_of = [](const ProofNode& k) { return atoms_of(k.statement.pre); };
        auto post_of = [](const ProofNode& k) { return atoms_of(k.statement.post); };
        auto recurse = [&]() -> std::optional<std::string> {
            for (std::size_t i = 0; i < kids.size(); ++i) {
                if (auto e = check(kids[i], here + "[" + std::to_string(i) + "]")) {
                    return e;
                }
            }
            return std::nullopt;
        };

        if (auto b = base_rule_from_string(n.rule)) {
            if (!kids.empty()) {
                return fail("base rule with premises");
            }
            return check_base(*b, n, pre, post, here);
        }

        if (n.rule == rules::kNeutral) {
            if (!kids.empty()) {
                return fail("(X-neutral) has no premises");
            }
            if (pre != post) {
                return fail("(X-neutral) must propagate its precondition");
            }
            return expect_conditions({});
        }

        if (n.rule == rules::kConsequence) {
            if (kids.size() != 1 || !(kids[0].statement.subject == s)) {
                return fail("(consequence) needs one premise about the same component");
            }
            try {
                if (!includes(pre, pre_of(kids[0]))) {
                    return fail("P does not entail P'");
                }
                if (!includes(post_of(kids[0]), post)) {
                    return fail("Q' does not entail Q");
                }
            } catch (const NotFlat& e) {
                return fail(e.what());
            }
            if (auto e = expect_conditions(kConsequenceConditions)) {
                return e;
            }
            return recurse();
        }

        if (n.rule == rules::kIterate) {
            if (kids.size() != 2 || !(kids[0].statement.subject == s) || !(kids[1].statement.subject == s)) {
                return fail("(iterate) needs two premises about the same component");
            }
            if (auto e = chained(pre, post, kids, here)) {
                return e;
            }
            if (auto e = expect_conditions({})) {
                return e;
            }
            return recurse();
        }

        if (n.rule == rules::kLang) {
            if (s.kind != SubjectKind::Language || kids.size() != 2) {
                return fail("(lang) concludes about the language from two premises");
            }
            const Subject g{SubjectKind::Grammar, grammar_ref(lang_.grammar)};
            const Subject i{SubjectKind::InfSystem, rules_ref(lang_.rules)};
            if (!(kids[0].statement.subject == g) || !(kids[1].statement.subject == i)) {
                return fail("(lang) premises must be the grammar and the inference system");
            }
            if (auto e = chained(pre, post, kids, here)) {
                return e;
            }
            if (auto e = expect_conditions({})) {
                return e;
            }
            return recurse();
        }

        if (n.rule == rules::kPermG || n.rule == rules::kPermR) {
            const SubjectKind kind = n.rule == rules::kPermG ? SubjectKind::Grammar : SubjectKind::InfSystem;
            if (s.kind != kind || kids.size() != 1 || kids[0].statement.subject.kind != kind) {
                return fail("permutation rule applied to the wrong component");
            }
            auto mine = split_ref(s.ref);
            auto theirs = split_ref(kids[0].statement.subject.ref);
            std::sort(mine.begin(), mine.end());
            std::sort(theirs.begin(), theirs.end());
            if (mine != theirs) {
                return fail("premise order is not a permutation");
            }
            if (pre != pre_of(kids[0]) || post != post_of(kids[0])) {
                return fail("a permutation must keep pre- and postcondition");
            }
            if (auto e = expect_conditions({permutation_condition(kids[0].statement.subject)})) {
                return e;
            }
            return recurse();
        }

        if (n.rule == rules::kGrammar || n.rule == rules::kInf) {
            const bool is_grammar = n.rule == rules::kGrammar;
            if (s.kind != (is_grammar ? SubjectKind::Grammar : SubjectKind::InfSystem)) {
                return fail("applied to the wrong component");
            }
            const auto names = split_ref(s.ref);
            if (kids.size() != names.size() || names.empty()) {
                return fail("one premise per rule required");
            }
            const SubjectKind part = is_grammar ? SubjectKind::GrammarRule : SubjectKind::InfRule;
            std::set<std::string> seen;
            for (std::size_t i = 0; i < names.size(); ++i) {
                const bool exists = is_grammar ? find_grammar_rule(lang_, names[i]) != nullptr
                                               : find_rule(lang_, names[i]) != nullptr;
                if (!exists || !seen.insert(names[i]).second) {
                    return fail("unknown or repeated component " + names[i]);
                }
                if (!(kids[i].statement.subject == Subject{part, names[i]})) {
                    return fail("premise " + std::to_string(i + 1) + " is not about " + names[i]);
                }
            }
            if (auto e = chained(pre, post, kids, here)) {
                return e;
            }
            if (auto e = expect_conditions({})) {
                return e;
            }
            return recurse();
        }

        return fail("unknown proof rule");
    }

private:
    static bool includes(const AtomSet& big, const AtomSet& small)
    {
        return std::includes(big.begin(), big.end(), small.begin(), small.end());
    }

    // P0 = pre(k1), post(ki) = pre(ki+1), post(kn) = Pn.
    static std::optional<std::string> chained(const AtomSet& pre, const AtomSet& post,
                                              const std::vector<ProofNode>& kids, const std::string& here)
    {
        try {
            AtomSet cur = pre;
            for (std::size_t i = 0; i < kids.size(); ++i) {
                if (atoms_of(kids[i].statement.pre) != cur) {
                    return here + ": precondition of premise " + std::to_string(i + 1) + " does not chain";
                }
                cur = atoms_of(kids[i].statement.post);
            }
            if (cur != post) {
                return here + ": postcondition does not match the last premise";
            }
        } catch (const NotFlat& e) {
            return here + ": " + e.what();
        }
        return std::nullopt;
    }

    std::optional<std::string> check_base(BaseRule b, const ProofNode& n, const AtomSet& pre, const AtomSet& post,
                                          const std::string& here)
    {
        const Subject& s = n.statement.subject;
        if (!includes(post, pre) || post.size() != pre.size() + 1) {
            return here + ": a base rule adds exactly one atom";
        }
        SignedAtom added;
        for (const auto& a : post) {
            if (!pre.count(a)) {
                added = a;
            }
        }
        if (!added.positive) {
            return here + ": base rules never derive negated atoms";
        }

        RuleOutcome o = NotApplicable{MissKind::Shape, ""};
        if (b == BaseRule::Inductive) {
            const auto* g = s.kind == SubjectKind::GrammarRule ? find_grammar_rule(lang_, s.ref) : nullptr;
            const auto* ctx = std::get_if<atom::Ctx>(&added.atom);
            if (!g || !ctx) {
                return here + ": (inductive) must derive a ctx atom from a grammar rule";
            }
            o = try_inductive(cx_, *g, ctx->constructor);
        } else {
            const auto* r = s.kind == SubjectKind::InfRule ? find_rule(lang_, s.ref) : nullptr;
            if (!r) {
                return here + ": subject is not an inference rule of the language";
            }
            if (b == BaseRule::ContraRespecting) {
                const auto* cr = std::get_if<atom::ContraResp>(&added.atom);
                if (!cr) {
                    return here + ": (contra-respecting) must derive a contra-resp atom";
                }
                o = try_contra_respecting(cx_, pre, *r, cr->constructor);
            } else {
                o = apply_base_rule(cx_, b, pre, *r);
            }
        }
        const auto* d = std::get_if<Derived>(&o);
        if (!d) {
            return here + ": rule does not apply: " + std::get<NotApplicable>(o).detail;
        }
        if (!(d->atom == added.atom)) {
            return here + ": rule derives " + to_string(d->atom) + ", not " + to_string(added.atom);
        }
        if (d->justification.discharged != n.side_conditions) {
            return here + ": side conditions do not match";
        }
        return std::nullopt;
    }

    const LanguageDef& lang_;
    RuleContext cx_;
};

std::string subject_text(const Subject& s)
{
    switch (s.kind) {
    case SubjectKind::Language:
        return "ℒ";
    case SubjectKind::Grammar:
        return "G";
    case SubjectKind::InfSystem:
        return "I (" + s.ref + ")";
    case SubjectKind::GrammarRule:
        return s.ref + " ::= ...";
    case SubjectKind::InfRule:
        break;
    }
    return "[" + s.ref + "]";
}

void render(std::ostringstream& os, const ProofNode& n, int depth)
{
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    os << pad << "(" << n.rule << ") " << subject_text(n.statement.subject);
    if (depth == 0) {
        os << "  {" << to_string(n.statement.pre) << "} ⊢ {" << to_string(n.statement.post) << "}";
    }
    if (base_rule_from_string(n.rule)) {
        auto pre = atoms_of(n.statement.pre);
        for (const auto& a : atoms_of(n.statement.post)) {
            if (!pre.count(a)) {
                os << "  + " << to_string(a);
            }
        }
    }
    os << "\n";
    for (const auto& c : n.side_conditions) {
        os << pad << "    - " << c << "\n";
    }
    for (const auto& k : n.children) {
        render(os, k, depth + 1);
    }
}

}  // namespace

std::optional<std::string> derivation_error(const LanguageDef& lang, const ProofNode& tree,
                                            const std::optional<std::set<std::string>>& ineffectual)
{
    Checker c(lang, ineffectual);
    try {
        return c.check(tree, "");
    } catch (const std::exception& e) {
        return std::string(e.what());
    }
}

bool check_derivation(const LanguageDef& lang, const ProofNode& tree,
                      const std::optional<std::set<std::string>>& ineffectual)
{
    return !derivation_error(lang, tree, ineffectual).has_value();
}

std::string render_tree(const ProofNode& tree)
{
    std::ostringstream os;
    render(os, tree, 0);
    return os.str();
}

std::string render_failure(const FailureReport& report)
{
    std::ostringstream os;
    os << "no proof found\nmissing:\n";
    for (const auto& a : report.missing) {
        os << "  " << to_string(a) << "\n";
    }
    os << "nearest misses:\n";
    for (const auto& m : report.nearest_misses) {
        os << "  " << m.at << ": " << m.reason << "\n";
    }
    return os.str();
}

}  // namespace langlogic
