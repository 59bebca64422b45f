#include "doctest.h"
#include "langlogic/grammar.hpp"
#include "langlogic/lan_format.hpp"
#include "support.hpp"

using namespace langlogic;

namespace {

LanguageDef corpus(const char* name) { return parse_language(support::read_corpus(name)); }

}  // namespace

TEST_CASE("metavariable resolution")
{
    CategoryIndex idx(parse_language("Expression e ::= x\nType T ::= bool\nEnv Gamma ::= empty\n"));
    CHECK(resolve_metavar(idx, "e2") == "e");
    CHECK(resolve_metavar(idx, "T1'") == "T");
    CHECK(resolve_metavar(idx, "Gamma") == "Gamma");
    CHECK_THROWS_AS(resolve_metavar(idx, "Gm"), UnresolvedMetaVar);
}

TEST_CASE("longest declared prefix wins")
{
    CHECK(resolve_spelling({"e", "er"}, "er1") == "er");
    CHECK(resolve_spelling({"e", "er"}, "e1") == "e");
    CHECK_FALSE(resolve_spelling({"e"}, "ex").has_value());
}

TEST_CASE("derivations used by the worked examples")
{
    auto lang = corpus("lambda-div-print-faulty.lan");
    CategoryIndex idx(lang);
    const auto& mvs = idx.metavars();
    CHECK(derives(idx, "v", parse_term("(abs T (x)e)", mvs)));
    CHECK(derives(idx, "v", parse_term("(abs T (x)e1)", mvs)));
    CHECK(derives(idx, "er", parse_term("error", mvs)));
    CHECK(derives(idx, "v", parse_term("v", mvs)));
    CHECK(derives(idx, "v", parse_term("f1", mvs)));
    CHECK(derives(idx, "v", parse_term("fzero", mvs)));
    CHECK_FALSE(derives(idx, "v", parse_term("e2", mvs)));
    CHECK_FALSE(derives(idx, "er", parse_term("v", mvs)));
    CHECK(derives(idx, "e", parse_term("(app (abs T (x)e) (div f1 e))", mvs)));
}

TEST_CASE("derivable_from_any")
{
    auto lang = corpus("lambda-div-print-faulty.lan");
    CategoryIndex idx(lang);
    const auto& mvs = idx.metavars();
    CHECK(derivable_from_any(idx, {"v", "er"}, parse_term("v", mvs)));
    CHECK_FALSE(derivable_from_any(idx, {}, parse_term("v", mvs)));
    CHECK_FALSE(derivable_from_any(idx, {"v", "er"}, parse_term("e2", mvs)));
}

TEST_CASE("inductive positions")
{
    auto fixed2 = corpus("lambda-div-print-fixed2.lan");
    CategoryIndex i2(fixed2);
    CHECK(inductive_positions(i2, *i2.by_category("EvalCtx"), "app") == std::set<unsigned>{1, 2});
    CHECK(inductive_positions(i2, *i2.by_category("ErrorCtx"), "try") == std::set<unsigned>{1});
    CHECK(inductive_positions(i2, *i2.by_category("Type"), "arrow") == std::set<unsigned>{1, 2});
    CHECK(inductive_positions(i2, *i2.by_category("Value"), "abs").empty());

    auto fixed3 = corpus("lambda-div-print-fixed3.lan");
    CategoryIndex i3(fixed3);
    CHECK(inductive_positions(i3, *i3.by_category("ErrorCtx"), "try").empty());
}

TEST_CASE("inductive positions ignore production order")
{
    std::mt19937 rng(3);
    support::GrammarGen gen{rng};
    for (int i = 0; i < 100; ++i) {
        auto g = gen.random_grammar();
        CategoryIndex idx(g);
        auto shuffled = g;
        std::shuffle(shuffled[0].productions.begin(), shuffled[0].productions.end(), rng);
        CategoryIndex idx2(shuffled);
        for (const auto& [c, arity] : support::GrammarGen::kConstructors) {
            auto ps = inductive_positions(idx, g[0], c);
            CHECK(ps == inductive_positions(idx2, shuffled[0], c));
            for (unsigned p : ps) {
                CHECK(p <= static_cast<unsigned>(std::max(arity, 1)));
            }
        }
    }
}

TEST_CASE("derives is reflexive on metavariables")
{
    std::mt19937 rng(5);
    support::GrammarGen gen{rng};
    for (int i = 0; i < 100; ++i) {
        auto g = gen.random_grammar();
        CategoryIndex idx(g);
        for (const auto& r : g) {
            CHECK(derives(idx, r.metavar, Term::metavar(r.metavar)));
            CHECK(derives(idx, r.metavar, Term::metavar(r.metavar + "7")));
        }
    }
}

TEST_CASE("cyclic category inclusions terminate")
{
    CategoryIndex idx(parse_language("A a ::= b | k\nB b ::= a | (f b)\n"));
    const auto& mvs = idx.metavars();
    CHECK(derives(idx, "a", parse_term("(f (f k))", mvs)));
    CHECK(derives(idx, "b", parse_term("a1", mvs)));
    CHECK_FALSE(derives(idx, "a", parse_term("(g k)", mvs)));
}

TEST_CASE("derives agrees with breadth-first enumeration")
{
    std::mt19937 rng(2024);
    support::GrammarGen gen{rng};
    int positives = 0;
    for (int i = 0; i < 60; ++i) {
        auto g = gen.random_grammar();
        CategoryIndex idx(g);
        support::BfsOracle oracle(g);
        for (int q = 0; q < 20; ++q) {
            std::vector<std::string> mvs;
            for (const auto& r : g) {
                mvs.push_back(r.metavar);
            }
            const auto& mv = mvs[static_cast<std::size_t>(gen.pick(static_cast<int>(mvs.size())))];
            Term query = q % 2 ? gen.random_term(mvs, 4, true) : gen.unfold(g, Term::metavar(mv), 4);
            if (support::term_depth(query) > 4) {
                continue;
            }
            bool expected = oracle.derives(mv, query);
            positives += expected;
            CAPTURE(to_string(query));
            CHECK(derives(idx, mv, query) == expected);
        }
    }
    CHECK(positives > 100);
}
