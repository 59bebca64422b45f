#include "langlogic/language.hpp"

#include <algorithm>
#include <map>

namespace langlogic {

namespace {

bool is_suffix_char(char c) { return (c >= '0' && c <= '9') || c == '\''; }

void collect_metavar_occurrences(const Term& t, std::vector<std::string>& out)
{
    if (const auto* m = t.as<MetaVarOcc>()) {
        out.push_back(m->name);
    } else if (const auto* a = t.as<ConApp>()) {
        for (const auto& arg : a->args) {
            collect_metavar_occurrences(arg, out);
        }
    } else if (const auto* b = t.as<Binder>()) {
        collect_metavar_occurrences(*b->body, out);
    } else if (const auto* s = t.as<Subst>()) {
        collect_metavar_occurrences(*s->body, out);
        collect_metavar_occurrences(*s->replacement, out);
    }
}

template <typename Fn>
void for_each_term(const LanguageDef& lang, Fn&& fn)
{
    for (const auto& g : lang.grammar) {
        for (const auto& p : g.productions) {
            fn(p);
        }
    }
    for (const auto& r : lang.rules) {
        for (const auto& f : r.premises) {
            for (const auto& a : f.args) {
                fn(a);
            }
        }
        for (const auto& a : r.conclusion.args) {
            fn(a);
        }
    }
}

}  // namespace

std::string_view to_string(RuleKind k)
{
    switch (k) {
    case RuleKind::Typing:
        return "typing";
    case RuleKind::Subtyping:
        return "subtyping";
    case RuleKind::Reduction:
        return "reduction";
    case RuleKind::Other:
        break;
    }
    return "other";
}

RuleKind classify_rule(const InferenceRule& r)
{
    const auto& p = r.conclusion.predicate;
    if (p == kTypingPredicate) {
        return RuleKind::Typing;
    }
    if (p == kSubtypePredicate) {
        return RuleKind::Subtyping;
    }
    if (p == kStepPredicate) {
        return RuleKind::Reduction;
    }
    return RuleKind::Other;
}

bool has_metavar_suffix(std::string_view name) { return !name.empty() && is_suffix_char(name.back()); }

std::optional<std::string> resolve_spelling(const std::set<std::string>& declared, std::string_view occ)
{
    std::string_view candidate = occ;
    while (!candidate.empty()) {
        if (declared.count(std::string(candidate))) {
            return std::string(candidate);
        }
        if (!is_suffix_char(candidate.back())) {
            break;
        }
        candidate.remove_suffix(1);
    }
    return std::nullopt;
}

std::set<std::string> declared_metavars(const LanguageDef& lang)
{
    std::set<std::string> out;
    for (const auto& g : lang.grammar) {
        out.insert(g.metavar);
    }
    return out;
}

std::vector<std::string> constructors_in(const LanguageDef& lang)
{
    std::vector<std::string> order;
    std::set<std::string> seen;
    for_each_term(lang, [&](const Term& t) {
        for_each_conapp(t, [&](const ConApp& a) {
            if (seen.insert(a.constructor).second) {
                order.push_back(a.constructor);
            }
        });
    });
    return order;
}

const GrammarRule* find_grammar_rule(const LanguageDef& lang, std::string_view category)
{
    for (const auto& g : lang.grammar) {
        if (g.category == category) {
            return &g;
        }
    }
    return nullptr;
}

const InferenceRule* find_rule(const LanguageDef& lang, std::string_view name)
{
    for (const auto& r : lang.rules) {
        if (r.name == name) {
            return &r;
        }
    }
    return nullptr;
}

const Term* reduction_source_subject(const InferenceRule& r)
{
    if (classify_rule(r) != RuleKind::Reduction || r.conclusion.args.size() != 2) {
        return nullptr;
    }
    const auto* src = r.conclusion.args[0].as<ConApp>();
    if (!src || src->constructor != kConfigConstructor || src->args.empty()) {
        return nullptr;
    }
    return &src->args.front();
}

ValidationReport validate_language(const LanguageDef& lang)
{
    ValidationReport report;
    auto add = [&](std::string kind, std::string message) {
        report.findings.push_back({std::move(kind), std::move(message)});
    };

    std::set<std::string> metavars;
    std::set<std::string> categories;
    for (const auto& g : lang.grammar) {
        if (!metavars.insert(g.metavar).second) {
            add("duplicate metavariable", "metavariable " + g.metavar + " is declared by more than one grammar rule");
        }
        if (!categories.insert(g.category).second) {
            add("duplicate category", "category " + g.category + " is declared more than once");
        }
        if (g.productions.empty()) {
            add("empty grammar rule", "category " + g.category + " has no productions");
        }
    }

    std::set<std::string> rule_names;
    for (const auto& r : lang.rules) {
        if (!rule_names.insert(r.name).second) {
            add("duplicate rule name", "inference rule [" + r.name + "] is defined more than once");
        }
    }

    std::map<std::string, std::size_t> arity;
    std::set<std::string> reported_arity;
    for_each_term(lang, [&](const Term& t) {
        for_each_conapp(t, [&](const ConApp& a) {
            auto [it, inserted] = arity.emplace(a.constructor, a.args.size());
            if (!inserted && it->second != a.args.size() && reported_arity.insert(a.constructor).second) {
                add("arity mismatch", "arity mismatch for " + a.constructor + ": used with " +
                                          std::to_string(it->second) + " and " + std::to_string(a.args.size()) +
                                          " arguments");
            }
        });
    });

    std::optional<std::size_t> state_arity;
    std::string state_arity_rule;
    for (const auto& r : lang.rules) {
        auto check_formula = [&](const Formula& f) {
            if (f.predicate != kStepPredicate) {
                return;
            }
            auto step = as_step(f);
            if (!step) {
                add("malformed step", "rule [" + r.name + "] has a malformed reduction formula");
                return;
            }
            for (const Config* c : {&step->source, &step->target}) {
                if (!state_arity) {
                    state_arity = c->state.size();
                    state_arity_rule = r.name;
                } else if (*state_arity != c->state.size()) {
                    add("state arity mismatch", "rule [" + r.name + "] uses " + std::to_string(c->state.size()) +
                                                    " state components, but [" + state_arity_rule + "] uses " +
                                                    std::to_string(*state_arity));
                }
            }
        };
        for (const auto& f : r.premises) {
            check_formula(f);
        }
        check_formula(r.conclusion);
    }

    std::vector<std::string> occurrences;
    for_each_term(lang, [&](const Term& t) { collect_metavar_occurrences(t, occurrences); });
    std::set<std::string> reported_mv;
    for (const auto& occ : occurrences) {
        if (!resolve_spelling(metavars, occ) && reported_mv.insert(occ).second) {
            add("unknown metavariable", "metavariable occurrence " + occ + " does not resolve to a declared metavariable");
        }
    }

    for (const auto& name : lang.ineffectual) {
        if (!metavars.count(name)) {
            add("unknown metavariable", "%ineffectual names undeclared metavariable " + name);
        }
    }
    return report;
}

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      bare_(message),
      line_(line),
      column_(column)
{
}

namespace {
std::string summarize(const ValidationReport& r)
{
    std::string s = "invalid language definition";
    for (const auto& f : r.findings) {
        s += "\n  " + f.kind + ": " + f.message;
    }
    return s;
}
}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error(summarize(report)), report_(std::move(report))
{
}

}  // namespace langlogic
