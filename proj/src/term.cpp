#include "langlogic/term.hpp"

#include <sstream>

namespace langlogic {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const ConApp* as_config(const Term& t)
{
    const auto* app = t.as<ConApp>();
    if (app && app->constructor == kConfigConstructor && !app->args.empty()) {
        return app;
    }
    return nullptr;
}

Config config_of(const ConApp& packed)
{
    Config c{packed.args.front(), {}};
    c.state.assign(packed.args.begin() + 1, packed.args.end());
    return c;
}

void quote_string(std::ostream& os, const std::string& s)
{
    os << '"';
    for (char ch : s) {
        if (ch == '"' || ch == '\\') {
            os << '\\';
        }
        os << ch;
    }
    os << '"';
}

void write_term(std::ostream& os, const Term& t, const std::function<bool(std::string_view)>& is_mv)
{
    std::visit(overloaded{
                   [&](const MetaVarOcc& m) { os << m.name; },
                   [&](const ConApp& a) {
                       if (a.args.empty()) {
                           if (is_mv && is_mv(a.constructor)) {
                               os << '(' << a.constructor << ')';
                           } else {
                               os << a.constructor;
                           }
                           return;
                       }
                       os << '(' << a.constructor;
                       for (const auto& arg : a.args) {
                           os << ' ';
                           write_term(os, arg, is_mv);
                       }
                       os << ')';
                   },
                   [&](const Binder& b) {
                       os << '(' << b.bound_var << ')';
                       write_term(os, *b.body, is_mv);
                   },
                   [&](const Subst& s) {
                       write_term(os, *s.body, is_mv);
                       os << '[';
                       write_term(os, *s.replacement, is_mv);
                       os << '/' << s.var << ']';
                   },
                   [&](const Hole&) { os << "[]"; },
                   [&](const StrLit& s) { quote_string(os, s.value); },
               },
               t.node());
}

void write_config(std::ostream& os, const Config& c, const std::function<bool(std::string_view)>& is_mv)
{
    write_term(os, c.subject, is_mv);
    for (const auto& s : c.state) {
        os << " , ";
        write_term(os, s, is_mv);
    }
}

}  // namespace

Term make_config_term(const Config& c)
{
    std::vector<Term> args;
    args.reserve(c.state.size() + 1);
    args.push_back(c.subject);
    args.insert(args.end(), c.state.begin(), c.state.end());
    return Term::app(std::string(kConfigConstructor), std::move(args));
}

Formula make_step(const Config& source, const Config& target)
{
    return Formula{std::string(kStepPredicate), {make_config_term(source), make_config_term(target)}};
}

Formula make_typing(Term env, Term subject, Term type)
{
    return Formula{std::string(kTypingPredicate), {std::move(env), std::move(subject), std::move(type)}};
}

Formula make_subtype(Term lhs, Term rhs)
{
    return Formula{std::string(kSubtypePredicate), {std::move(lhs), std::move(rhs)}};
}

std::optional<Step> as_step(const Formula& f)
{
    if (f.predicate != kStepPredicate || f.args.size() != 2) {
        return std::nullopt;
    }
    const auto* src = as_config(f.args[0]);
    const auto* tgt = as_config(f.args[1]);
    if (!src || !tgt) {
        return std::nullopt;
    }
    return Step{config_of(*src), config_of(*tgt)};
}

bool term_equal(const Term& a, const Term& b) { return a == b; }

std::size_t count_occurrences(const Term& haystack, const Term& needle)
{
    std::size_t n = haystack == needle ? 1 : 0;
    std::visit(overloaded{
                   [&](const ConApp& a) {
                       for (const auto& arg : a.args) {
                           n += count_occurrences(arg, needle);
                       }
                   },
                   [&](const Binder& b) { n += count_occurrences(*b.body, needle); },
                   [&](const Subst& s) {
                       n += count_occurrences(*s.body, needle);
                       n += count_occurrences(*s.replacement, needle);
                   },
                   [](const auto&) {},
               },
               haystack.node());
    return n;
}

bool contains_subst_involving(const Term& haystack, const Term& needle)
{
    return std::visit(overloaded{
                          [&](const ConApp& a) {
                              for (const auto& arg : a.args) {
                                  if (contains_subst_involving(arg, needle)) {
                                      return true;
                                  }
                              }
                              return false;
                          },
                          [&](const Binder& b) { return contains_subst_involving(*b.body, needle); },
                          [&](const Subst& s) {
                              return count_occurrences(*s.replacement, needle) > 0 ||
                                     contains_subst_involving(*s.body, needle) ||
                                     contains_subst_involving(*s.replacement, needle);
                          },
                          [](const auto&) { return false; },
                      },
                      haystack.node());
}

std::optional<std::string> top_constructor(const Term& t)
{
    if (const auto* a = t.as<ConApp>()) {
        return a->constructor;
    }
    return std::nullopt;
}

std::set<unsigned> get_args_positions(const Term& t, std::string_view mv, const MetaVarResolver& resolve)
{
    const auto* app = t.as<ConApp>();
    if (!app) {
        throw NotAConApp("get_args_positions: term " + to_string(t) + " is not a constructor application");
    }
    std::set<unsigned> positions;
    for (std::size_t i = 0; i < app->args.size(); ++i) {
        const auto* occ = app->args[i].as<MetaVarOcc>();
        if (!occ) {
            continue;
        }
        auto resolved = resolve(occ->name);
        if (resolved && *resolved == mv) {
            positions.insert(static_cast<unsigned>(i + 1));
        }
    }
    return positions;
}

void for_each_conapp(const Term& t, const std::function<void(const ConApp&)>& fn)
{
    std::visit(overloaded{
                   [&](const ConApp& a) {
                       if (a.constructor != kConfigConstructor) {
                           fn(a);
                       }
                       for (const auto& arg : a.args) {
                           for_each_conapp(arg, fn);
                       }
                   },
                   [&](const Binder& b) { for_each_conapp(*b.body, fn); },
                   [&](const Subst& s) {
                       for_each_conapp(*s.body, fn);
                       for_each_conapp(*s.replacement, fn);
                   },
                   [](const auto&) {},
               },
               t.node());
}

std::string to_string(const Term& t, const std::function<bool(std::string_view)>& is_metavar_spelling)
{
    std::ostringstream os;
    write_term(os, t, is_metavar_spelling);
    return os.str();
}

std::string to_string(const Formula& f, const std::function<bool(std::string_view)>& is_mv)
{
    std::ostringstream os;
    if (auto step = as_step(f)) {
        write_config(os, step->source, is_mv);
        os << " --> ";
        write_config(os, step->target, is_mv);
    } else if (f.predicate == kTypingPredicate && f.args.size() == 3) {
        write_term(os, f.args[0], is_mv);
        os << " |- ";
        write_term(os, f.args[1], is_mv);
        os << " : ";
        write_term(os, f.args[2], is_mv);
    } else if (f.predicate == kSubtypePredicate && f.args.size() == 2) {
        write_term(os, f.args[0], is_mv);
        os << " <: ";
        write_term(os, f.args[1], is_mv);
    } else {
        os << '(' << f.predicate;
        for (const auto& a : f.args) {
            os << ' ';
            write_term(os, a, is_mv);
        }
        os << ')';
    }
    return os.str();
}

}  // namespace langlogic
