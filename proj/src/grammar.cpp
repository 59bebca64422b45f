#include "langlogic/grammar.hpp"

#include <utility>

namespace langlogic {

CategoryIndex::CategoryIndex(std::vector<GrammarRule> grammar) : grammar_(std::move(grammar))
{
    for (std::size_t i = 0; i < grammar_.size(); ++i) {
        by_metavar_.emplace(grammar_[i].metavar, i);
        by_category_.emplace(grammar_[i].category, i);
        metavars_.insert(grammar_[i].metavar);
    }
}

const GrammarRule* CategoryIndex::by_metavar(std::string_view mv) const
{
    auto it = by_metavar_.find(mv);
    return it == by_metavar_.end() ? nullptr : &grammar_[it->second];
}

const GrammarRule* CategoryIndex::by_category(std::string_view category) const
{
    auto it = by_category_.find(category);
    return it == by_category_.end() ? nullptr : &grammar_[it->second];
}

MetaVarResolver CategoryIndex::resolver() const
{
    return [this](std::string_view occ) { return try_resolve(occ); };
}

std::optional<std::string> CategoryIndex::metavar_of_any(std::initializer_list<std::string_view> names) const
{
    for (auto n : names) {
        if (const auto* g = by_category(n)) {
            return g->metavar;
        }
    }
    return std::nullopt;
}

std::optional<std::string> CategoryIndex::eval_ctx_metavar() const { return metavar_of_any({"EvalCtx", "Context"}); }
std::optional<std::string> CategoryIndex::err_ctx_metavar() const { return metavar_of_any({"ErrCtx", "ErrorCtx"}); }
std::optional<std::string> CategoryIndex::value_metavar() const { return metavar_of_any({"Value"}); }
std::optional<std::string> CategoryIndex::error_metavar() const { return metavar_of_any({"Error"}); }

std::string resolve_metavar(const CategoryIndex& idx, std::string_view occ)
{
    if (auto mv = idx.try_resolve(occ)) {
        return *mv;
    }
    throw UnresolvedMetaVar("metavariable occurrence " + std::string(occ) + " does not resolve");
}

namespace {

// Top-down matcher. Recursion on constructor arguments strictly shrinks the term, so
// the only cycles are chains of metavariable productions on the same subterm; those
// are cut by the in-progress set (least fixpoint: a cycle contributes no derivation).
class Deriver {
public:
    explicit Deriver(const CategoryIndex& idx) : idx_(idx) {}

    bool derives(const std::string& mv, const Term& t)
    {
        Key key{mv, &t};
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }
        if (in_progress_.count(key)) {
            cut_ = true;
            return false;
        }
        in_progress_.insert(key);
        bool saved_cut = std::exchange(cut_, false);

        bool result = false;
        if (const auto* occ = t.as<MetaVarOcc>()) {
            auto resolved = idx_.try_resolve(occ->name);
            result = resolved && *resolved == mv;
        }
        if (!result) {
            if (const auto* g = idx_.by_metavar(mv)) {
                for (const auto& p : g->productions) {
                    if (matches(p, t)) {
                        result = true;
                        break;
                    }
                }
            }
        }

        in_progress_.erase(key);
        // A negative answer reached through a cut may be revised once the cycle closes.
        if (result || !cut_) {
            memo_.emplace(key, result);
        }
        cut_ = cut_ || saved_cut;
        return result;
    }

private:
    using Key = std::pair<std::string, const Term*>;

    bool matches(const Term& production, const Term& t)
    {
        if (const auto* occ = production.as<MetaVarOcc>()) {
            auto y = idx_.try_resolve(occ->name);
            return y && derives(*y, t);
        }
        if (const auto* pa = production.as<ConApp>()) {
            const auto* ta = t.as<ConApp>();
            if (!ta || ta->constructor != pa->constructor || ta->args.size() != pa->args.size()) {
                return false;
            }
            for (std::size_t i = 0; i < pa->args.size(); ++i) {
                if (!matches(pa->args[i], ta->args[i])) {
                    return false;
                }
            }
            return true;
        }
        if (const auto* pb = production.as<Binder>()) {
            const auto* tb = t.as<Binder>();
            return tb && matches(*pb->body, *tb->body);
        }
        if (const auto* ps = production.as<Subst>()) {
            const auto* ts = t.as<Subst>();
            return ts && ps->var == ts->var && matches(*ps->body, *ts->body) &&
                   matches(*ps->replacement, *ts->replacement);
        }
        return production == t;
    }

    const CategoryIndex& idx_;
    std::map<Key, bool> memo_;
    std::set<Key> in_progress_;
    bool cut_ = false;
};

}  // namespace

bool derives(const CategoryIndex& idx, std::string_view mv, const Term& t)
{
    Deriver d(idx);
    return d.derives(std::string(mv), t);
}

bool derivable_from_any(const CategoryIndex& idx, const std::set<std::string>& mvs, const Term& t)
{
    Deriver d(idx);
    for (const auto& mv : mvs) {
        if (d.derives(mv, t)) {
            return true;
        }
    }
    return false;
}

std::set<unsigned> inductive_positions(const CategoryIndex& idx, const GrammarRule& g, std::string_view c)
{
    std::set<unsigned> out;
    auto resolve = idx.resolver();
    for (const auto& p : g.productions) {
        if (top_constructor(p) == c) {
            auto pos = get_args_positions(p, g.metavar, resolve);
            out.insert(pos.begin(), pos.end());
        }
    }
    return out;
}

}  // namespace langlogic
