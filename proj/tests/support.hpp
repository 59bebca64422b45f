#pragma once

// Test-side oracles and generators. Nothing here calls into the code under test
// except for constructing values.

#include <algorithm>
#include <deque>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "langlogic/assertion.hpp"
#include "langlogic/language.hpp"
#include "langlogic/term.hpp"

namespace support {

using namespace langlogic;

inline std::string corpus_path(const std::string& name) { return std::string(LANGLOGIC_CORPUS_DIR) + "/" + name; }

inline std::string read_corpus(const std::string& name)
{
    std::ifstream in(corpus_path(name));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// Position walks

/// Every subterm position of `t`, in pre-order.
inline void all_positions(const Term& t, std::vector<const Term*>& out)
{
    out.push_back(&t);
    if (const auto* a = t.as<ConApp>()) {
        for (const auto& x : a->args) {
            all_positions(x, out);
        }
    } else if (const auto* b = t.as<Binder>()) {
        all_positions(*b->body, out);
    } else if (const auto* s = t.as<Subst>()) {
        all_positions(*s->body, out);
        all_positions(*s->replacement, out);
    }
}

inline std::size_t oracle_count(const Term& haystack, const Term& needle)
{
    std::vector<const Term*> ps;
    all_positions(haystack, ps);
    return static_cast<std::size_t>(std::count_if(ps.begin(), ps.end(), [&](const Term* p) { return *p == needle; }));
}

inline bool oracle_contains_subst(const Term& haystack, const Term& needle)
{
    std::vector<const Term*> ps;
    all_positions(haystack, ps);
    for (const Term* p : ps) {
        if (const auto* s = p->as<Subst>(); s && oracle_count(*s->replacement, needle) > 0) {
            return true;
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Breadth-first derivation oracle
//
// Sentential forms start at a metavariable and rewrite one metavariable leaf by one
// production at a time. Forms whose non-metavariable skeleton does not embed in the
// query are dropped: rewriting never changes existing skeleton nodes. The remaining
// state space is finite, so the search is complete.

class BfsOracle {
public:
    explicit BfsOracle(const std::vector<GrammarRule>& grammar)
    {
        for (const auto& g : grammar) {
            rules_[g.metavar] = g.productions;
        }
    }

    std::optional<std::string> canonical(const std::string& spelling) const
    {
        std::string s = spelling;
        while (!s.empty()) {
            if (rules_.count(s)) {
                return s;
            }
            char last = s.back();
            if (!(std::isdigit(static_cast<unsigned char>(last)) || last == '\'')) {
                break;
            }
            s.pop_back();
        }
        return std::nullopt;
    }

    bool derives(const std::string& mv, const Term& query) const
    {
        std::deque<Term> frontier{Term::metavar(mv)};
        std::set<std::string> seen{key(frontier.front())};
        while (!frontier.empty()) {
            Term form = std::move(frontier.front());
            frontier.pop_front();
            if (matches(form, query, false)) {
                return true;
            }
            for (auto& next : rewrites(form)) {
                if (matches(next, query, true) && seen.insert(key(next)).second) {
                    frontier.push_back(std::move(next));
                }
            }
        }
        return false;
    }

private:
    // Canonical spelling of forms so that `e1` and `e` leaves coincide.
    std::string key(const Term& t) const { return to_string(t); }

    Term normalize(const Term& t) const
    {
        if (const auto* m = t.as<MetaVarOcc>()) {
            auto c = canonical(m->name);
            return Term::metavar(c ? *c : m->name);
        }
        if (const auto* a = t.as<ConApp>()) {
            std::vector<Term> args;
            for (const auto& x : a->args) {
                args.push_back(normalize(x));
            }
            return Term::app(a->constructor, std::move(args));
        }
        if (const auto* b = t.as<Binder>()) {
            return Term::binder(b->bound_var, normalize(*b->body));
        }
        if (const auto* s = t.as<Subst>()) {
            return Term::subst(normalize(*s->body), normalize(*s->replacement), s->var);
        }
        return t;
    }

    // All forms obtained by rewriting exactly one metavariable leaf.
    std::vector<Term> rewrites(const Term& t) const
    {
        std::vector<Term> out;
        if (const auto* m = t.as<MetaVarOcc>()) {
            auto it = rules_.find(m->name);
            if (it != rules_.end()) {
                for (const auto& p : it->second) {
                    out.push_back(normalize(p));
                }
            }
            return out;
        }
        if (const auto* a = t.as<ConApp>()) {
            for (std::size_t i = 0; i < a->args.size(); ++i) {
                for (auto& r : rewrites(a->args[i])) {
                    auto args = a->args;
                    args[i] = std::move(r);
                    out.push_back(Term::app(a->constructor, std::move(args)));
                }
            }
            return out;
        }
        if (const auto* b = t.as<Binder>()) {
            for (auto& r : rewrites(*b->body)) {
                out.push_back(Term::binder(b->bound_var, std::move(r)));
            }
        }
        return out;
    }

    // With `partial`, metavariable leaves of the form are wildcards (skeleton embedding);
    // otherwise they only match query occurrences of the same metavariable.
    bool matches(const Term& form, const Term& q, bool partial) const
    {
        if (const auto* m = form.as<MetaVarOcc>()) {
            if (partial) {
                return true;
            }
            const auto* qm = q.as<MetaVarOcc>();
            return qm && canonical(qm->name) == m->name;
        }
        if (const auto* a = form.as<ConApp>()) {
            const auto* qa = q.as<ConApp>();
            if (!qa || qa->constructor != a->constructor || qa->args.size() != a->args.size()) {
                return false;
            }
            for (std::size_t i = 0; i < a->args.size(); ++i) {
                if (!matches(a->args[i], qa->args[i], partial)) {
                    return false;
                }
            }
            return true;
        }
        if (const auto* b = form.as<Binder>()) {
            const auto* qb = q.as<Binder>();
            return qb && matches(*b->body, *qb->body, partial);
        }
        return form == q;
    }

    std::map<std::string, std::vector<Term>> rules_;
};

// ---------------------------------------------------------------------------
// Random grammars and queries

struct GrammarGen {
    std::mt19937& rng;

    static inline const std::vector<std::pair<std::string, int>> kConstructors{
        {"k0", 0}, {"k1", 0}, {"f", 1}, {"g", 2}, {"h", 2}, {"lam", 1}};

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

    Term random_term(const std::vector<std::string>& mvs, int depth, bool suffixes)
    {
        int roll = pick(10);
        if (depth <= 0 || roll < 3) {
            if (roll == 0 && depth > 0) {
                return Term::hole();
            }
            if (roll == 1) {
                return Term::app(kConstructors[static_cast<std::size_t>(pick(2))].first);
            }
            std::string mv = mvs[static_cast<std::size_t>(pick(static_cast<int>(mvs.size())))];
            if (suffixes && pick(2) == 0) {
                mv += std::to_string(pick(3) + 1);
            }
            return Term::metavar(mv);
        }
        const auto& [c, arity] = kConstructors[static_cast<std::size_t>(pick(static_cast<int>(kConstructors.size())))];
        std::vector<Term> args;
        if (c == "lam") {
            args.push_back(Term::binder("x", random_term(mvs, depth - 1, suffixes)));
        } else {
            for (int i = 0; i < arity; ++i) {
                args.push_back(random_term(mvs, depth - 1, suffixes));
            }
        }
        return Term::app(c, std::move(args));
    }

    std::vector<GrammarRule> random_grammar()
    {
        static const std::vector<std::string> pool{"a", "b", "c", "d", "q"};
        const int n = 1 + pick(5);
        std::vector<std::string> mvs(pool.begin(), pool.begin() + n);
        std::vector<GrammarRule> g;
        for (int i = 0; i < n; ++i) {
            GrammarRule r{"Cat" + std::to_string(i), mvs[static_cast<std::size_t>(i)], {}};
            const int k = 1 + pick(6);
            for (int j = 0; j < k; ++j) {
                r.productions.push_back(random_term(mvs, 2, false));
            }
            g.push_back(std::move(r));
        }
        return g;
    }

    /// Unfolds a metavariable a few random steps; yields queries that often do derive.
    Term unfold(const std::vector<GrammarRule>& g, const Term& t, int budget)
    {
        if (const auto* m = t.as<MetaVarOcc>()) {
            if (budget <= 0 || pick(4) == 0) {
                return Term::metavar(m->name + (pick(2) ? std::to_string(pick(3) + 1) : ""));
            }
            for (const auto& r : g) {
                if (r.metavar == m->name) {
                    return unfold(g, r.productions[static_cast<std::size_t>(pick(static_cast<int>(r.productions.size())))],
                                  budget - 1);
                }
            }
            return t;
        }
        if (const auto* a = t.as<ConApp>()) {
            std::vector<Term> args;
            for (const auto& x : a->args) {
                args.push_back(unfold(g, x, budget - 1));
            }
            return Term::app(a->constructor, std::move(args));
        }
        if (const auto* b = t.as<Binder>()) {
            return Term::binder(b->bound_var, unfold(g, *b->body, budget - 1));
        }
        return t;
    }
};

inline int term_depth(const Term& t)
{
    int d = 0;
    if (const auto* a = t.as<ConApp>()) {
        for (const auto& x : a->args) {
            d = std::max(d, term_depth(x));
        }
        return d + 1;
    }
    if (const auto* b = t.as<Binder>()) {
        return term_depth(*b->body) + 1;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Random flat assertions, generated together with the atoms they were built from

struct GeneratedAssertion {
    Assertion assertion;
    std::set<std::string> atoms;  // signed atoms, spelled by the test
};

struct AssertionGen {
    std::mt19937& rng;

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

    PositionSet positions()
    {
        PositionSet s;
        for (unsigned i = 1; i <= 3; ++i) {
            if (pick(2)) {
                s.insert(i);
            }
        }
        return s;
    }

    static std::string spell(const PositionSet& s)
    {
        std::string out = "{";
        for (auto i : s) {
            out += (out.size() > 1 ? "," : "") + std::to_string(i);
        }
        return out + "}";
    }

    std::pair<Atom, std::string> atom()
    {
        static const std::vector<std::string> mvs{"E", "F"};
        static const std::vector<std::string> cs{"app", "try"};
        static const std::vector<std::string> rns{"BETA", "ERR"};
        const auto& mv = mvs[static_cast<std::size_t>(pick(2))];
        const auto& c = cs[static_cast<std::size_t>(pick(2))];
        const auto& rn = rns[static_cast<std::size_t>(pick(2))];
        switch (pick(7)) {
        case 0: {
            auto p = positions();
            return {atom::Ctx{mv, c, p}, "ctx/" + mv + "/" + c + "/" + spell(p)};
        }
        case 1:
            return {atom::CtxCompliant{rn}, "cc/" + rn};
        case 2: {
            unsigned i = static_cast<unsigned>(pick(2) + 1);
            return {atom::ErrorHandler{c, i}, "eh/" + c + "/" + std::to_string(i)};
        }
        case 3: {
            unsigned i = static_cast<unsigned>(pick(2) + 1);
            return {atom::Effectful{i}, "eff/" + std::to_string(i)};
        }
        case 4:
            return {atom::NoDupliEf{rn}, "nd/" + rn};
        case 5: {
            auto p = positions();
            return {atom::Contravariant{c, p}, "cv/" + c + "/" + spell(p)};
        }
        default:
            return {atom::ContraResp{rn, c}, "cr/" + rn + "/" + c};
        }
    }

    /// Random association of the given pieces, with `true` sprinkled in.
    Assertion assemble(std::vector<Assertion> pieces)
    {
        if (pieces.empty()) {
            return Assertion::truth();
        }
        while (pieces.size() > 1) {
            std::size_t i = static_cast<std::size_t>(pick(static_cast<int>(pieces.size()) - 1));
            Assertion joined = Assertion::conj(pieces[i], pieces[i + 1]);
            pieces.erase(pieces.begin() + static_cast<long>(i), pieces.begin() + static_cast<long>(i) + 2);
            pieces.insert(pieces.begin() + static_cast<long>(i), std::move(joined));
        }
        return pieces.front();
    }

    GeneratedAssertion flat(int max_atoms = 6)
    {
        GeneratedAssertion g;
        std::vector<Assertion> pieces;
        const int n = pick(max_atoms + 1);
        for (int i = 0; i < n; ++i) {
            auto [a, s] = atom();
            if (pick(10) == 0) {
                pieces.push_back(Assertion::negate(Assertion::of(a)));
                g.atoms.insert("-" + s);
            } else {
                pieces.push_back(Assertion::of(a));
                g.atoms.insert("+" + s);
            }
            if (pick(8) == 0) {
                pieces.push_back(Assertion::truth());
            }
        }
        std::shuffle(pieces.begin(), pieces.end(), rng);
        g.assertion = assemble(std::move(pieces));
        return g;
    }
};

inline bool subset(const std::set<std::string>& small, const std::set<std::string>& big)
{
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

/// Every binary association of `atoms` (Catalan many), for small inputs.
inline std::vector<Assertion> all_associations(const std::vector<Assertion>& atoms, std::size_t lo, std::size_t hi)
{
    if (hi - lo == 1) {
        return {atoms[lo]};
    }
    std::vector<Assertion> out;
    for (std::size_t mid = lo + 1; mid < hi; ++mid) {
        for (const auto& l : all_associations(atoms, lo, mid)) {
            for (const auto& r : all_associations(atoms, mid, hi)) {
                out.push_back(Assertion::conj(l, r));
            }
        }
    }
    return out;
}

}  // namespace support
