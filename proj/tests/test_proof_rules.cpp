#include "doctest.h"
#include "langlogic/lan_format.hpp"
#include "langlogic/proof_rules.hpp"
#include "support.hpp"

using namespace langlogic;

namespace {

LanguageDef corpus(const char* name) { return parse_language(support::read_corpus(name)); }

AtomSet atoms(const char* text) { return atoms_of(parse_assertion(text)); }

const Derived* derived(const RuleOutcome& o) { return std::get_if<Derived>(&o); }

const NotApplicable* missed(const RuleOutcome& o)
{
    const auto* m = std::get_if<NotApplicable>(&o);
    REQUIRE(m);
    return m;
}

const InferenceRule& rule(const LanguageDef& lang, const char* name)
{
    const auto* r = find_rule(lang, name);
    REQUIRE(r);
    return *r;
}

}  // namespace

TEST_CASE("base rule names round trip")
{
    for (auto b : {BaseRule::Inductive, BaseRule::CtxCompliant, BaseRule::ErrorHandler, BaseRule::Effectful,
                   BaseRule::EffectualArgs, BaseRule::Contravariant, BaseRule::ContraRespecting}) {
        CHECK(base_rule_from_string(to_string(b)) == b);
    }
    CHECK_FALSE(base_rule_from_string("lang").has_value());
}

TEST_CASE("inductive")
{
    auto lang = corpus("lambda-div-print-fixed2.lan");
    RuleContext cx(lang);
    auto run = [&](const char* cat, const char* c) {
        const auto* g = find_grammar_rule(lang, cat);
        REQUIRE(g);
        auto o = try_inductive(cx, *g, c);
        REQUIRE(derived(o));
        CHECK(derived(o)->justification.rule == BaseRule::Inductive);
        return derived(o)->atom;
    };
    CHECK(run("EvalCtx", "app") == Atom{atom::Ctx{"E", "app", {1, 2}}});
    CHECK(run("ErrorCtx", "try") == Atom{atom::Ctx{"F", "try", {1}}});
    CHECK(run("Type", "arrow") == Atom{atom::Ctx{"T", "arrow", {1, 2}}});
    CHECK(run("EvalCtx", "print") == Atom{atom::Ctx{"E", "print", {}}});
}

TEST_CASE("ctx-compliant")
{
    auto faulty = corpus("lambda-div-print-faulty.lan");
    RuleContext cf(faulty);
    auto p = atoms("ctx(E, app, {1})");
    auto o = try_ctx_compliant(cf, p, rule(faulty, "CBN-BETA"));
    REQUIRE(derived(o));
    CHECK(derived(o)->atom == Atom{atom::CtxCompliant{"CBN-BETA"}});

    auto none = try_ctx_compliant(cf, {}, rule(faulty, "CBN-BETA"));
    REQUIRE(missed(none));
    CHECK(missed(none)->kind == MissKind::MissingPrecondition);

    auto fixed1 = corpus("lambda-div-print-fixed1.lan");
    RuleContext c1(fixed1);
    auto beta = try_ctx_compliant(c1, p, rule(fixed1, "BETA"));
    REQUIRE(missed(beta));
    CHECK(missed(beta)->kind == MissKind::PremiseFails);
    CHECK(missed(beta)->detail == "v ⇒*_G v but 2 ∉ {1}");

    auto fixed2 = corpus("lambda-div-print-fixed2.lan");
    RuleContext c2(fixed2);
    CHECK(derived(try_ctx_compliant(c2, atoms("ctx(E, app, {1,2})"), rule(fixed2, "BETA"))));
    CHECK(derived(try_ctx_compliant(c2, atoms("ctx(E, try, {1})"), rule(fixed2, "ERR"))));
    CHECK(missed(try_ctx_compliant(c2, {}, rule(fixed2, "T-APP-BAD")))->kind == MissKind::Shape);
}

TEST_CASE("error-handler")
{
    auto fixed2 = corpus("lambda-div-print-fixed2.lan");
    RuleContext c2(fixed2);
    auto p2 = atoms("ctx-compliant([ERR]) /\\ ctx(F, try, {1})");
    auto o2 = try_error_handler(c2, p2, rule(fixed2, "ERR"));
    REQUIRE(missed(o2));
    CHECK(missed(o2)->kind == MissKind::PremiseFails);
    CHECK(missed(o2)->detail == "er ⇒*_G error but 1 ∈ {1}: the error context F covers it");

    auto fixed3 = corpus("lambda-div-print-fixed3.lan");
    RuleContext c3(fixed3);
    auto p3 = atoms("ctx-compliant([ERR]) /\\ ctx(F, try, {})");
    auto o3 = try_error_handler(c3, p3, rule(fixed3, "ERR"));
    REQUIRE(derived(o3));
    CHECK(derived(o3)->atom == Atom{atom::ErrorHandler{"try", 1}});

    auto no_compliant = try_error_handler(c3, atoms("ctx(F, try, {})"), rule(fixed3, "ERR"));
    CHECK(missed(no_compliant)->kind == MissKind::MissingPrecondition);
    CHECK(missed(try_error_handler(c3, p3, rule(fixed3, "TRY")))->kind == MissKind::NoErrorArgument);
}

TEST_CASE("effectful")
{
    auto lang = corpus("lambda-div-print-faulty.lan");
    RuleContext cx(lang);
    auto o = try_effectful(cx, rule(lang, "PRINT"));
    REQUIRE(derived(o));
    CHECK(derived(o)->atom == Atom{atom::Effectful{1}});
    CHECK(missed(try_effectful(cx, rule(lang, "SEQ")))->kind == MissKind::PremiseFails);
    CHECK(missed(try_effectful(cx, rule(lang, "T-INT")))->kind == MissKind::Shape);

    auto stlc = corpus("stlc.lan");
    RuleContext cs(stlc);
    CHECK(missed(try_effectful(cs, rule(stlc, "BETA")))->detail == "[BETA] carries no state");
}

TEST_CASE("effectual-args")
{
    auto faulty = corpus("lambda-div-print-faulty.lan");
    RuleContext cf(faulty);
    auto eff = atoms("effectful(1)");
    auto cbn = try_effectual_args(cf, eff, rule(faulty, "CBN-BETA"));
    REQUIRE(missed(cbn));
    CHECK(missed(cbn)->detail == "e1[e2/x] is of the form C[t''[e2/x]]");
    CHECK(missed(try_effectual_args(cf, {}, rule(faulty, "CBN-BETA")))->kind == MissKind::MissingPrecondition);

    auto fixed1 = corpus("lambda-div-print-fixed1.lan");
    RuleContext c1(fixed1);
    auto beta = try_effectual_args(c1, eff, rule(fixed1, "BETA"));
    REQUIRE(derived(beta));
    CHECK(derived(beta)->atom == Atom{atom::NoDupliEf{"BETA"}});

    // Without v being ineffectual the substitution is a problem again.
    RuleContext strict(fixed1, std::set<std::string>{});
    missed(try_effectual_args(strict, eff, rule(fixed1, "BETA")));

    auto dup = parse_language(
        "Expression e ::= unit | (dup e) | (pair e e)\nString s ::= empty\n\n"
        "[DUP]\n(dup e) , s --> (pair e e) , s.\n");
    RuleContext cd(dup);
    auto o = try_effectual_args(cd, eff, rule(dup, "DUP"));
    REQUIRE(missed(o));
    CHECK(missed(o)->detail == "(pair e e) is of the form C[e, e, ...]");

    auto once = parse_language(
        "Expression e ::= unit | (one e) | (pair e e)\nString s ::= empty\n\n"
        "[ONE]\n(one e) , s --> (pair e unit) , s.\n");
    RuleContext co(once);
    CHECK(derived(try_effectual_args(co, eff, rule(once, "ONE"))));
}

TEST_CASE("contravariant")
{
    auto lang = corpus("lambda-div-print-faulty.lan");
    RuleContext cx(lang);
    auto o = try_contravariant(cx, rule(lang, "S-ARROW"));
    REQUIRE(derived(o));
    CHECK(derived(o)->atom == Atom{atom::Contravariant{"arrow", {1}}});
    CHECK(missed(try_contravariant(cx, rule(lang, "S-INT-FLOAT")))->kind == MissKind::Shape);
    CHECK(derived(try_contravariant(cx, rule(lang, "S-INT")))->atom == Atom{atom::Contravariant{"Int", {}}});
    CHECK(missed(try_contravariant(cx, rule(lang, "CBN-BETA")))->kind == MissKind::Shape);

    auto pair = parse_language("Type T ::= top | (pair T T)\n\n[S-PAIR]\n(pair T1 T2) <: (pair T1' T2') <== T1 <: T1' /\\ T2 <: T2'.\n");
    RuleContext cp(pair);
    auto po = try_contravariant(cp, rule(pair, "S-PAIR"));
    REQUIRE(derived(po));
    CHECK(derived(po)->atom == Atom{atom::Contravariant{"pair", {}}});
}

TEST_CASE("contra-respecting")
{
    auto faulty = corpus("lambda-div-print-faulty.lan");
    RuleContext cf(faulty);
    auto p = atoms("contravariant(arrow, {1})");
    auto bad = try_contra_respecting(cf, p, rule(faulty, "T-APP-BAD"), "arrow");
    REQUIRE(missed(bad));
    CHECK(missed(bad)->kind == MissKind::PremiseFails);
    CHECK(missed(bad)->detail.starts_with("∃ premise T1 <: T3 with T1 at contravariant position 1 of "));

    auto fixed4 = corpus("lambda-div-print-fixed4.lan");
    RuleContext c4(fixed4);
    auto good = try_contra_respecting(c4, p, rule(fixed4, "T-APP"), "arrow");
    REQUIRE(derived(good));
    CHECK(derived(good)->atom == Atom{atom::ContraResp{"T-APP", "arrow"}});

    // Rules that never mention arrow respect it vacuously.
    auto vac = try_contra_respecting(c4, p, rule(fixed4, "T-INT"), "arrow");
    REQUIRE(derived(vac));
    CHECK(derived(vac)->atom == Atom{atom::ContraResp{"T-INT", "arrow"}});

    CHECK(missed(try_contra_respecting(c4, {}, rule(fixed4, "T-APP"), "arrow"))->kind ==
          MissKind::MissingPrecondition);
    missed(try_contra_respecting(c4, atoms("contravariant(arrow, {})"), rule(fixed4, "T-APP"), "arrow"));
    CHECK(missed(try_contra_respecting(c4, p, rule(fixed4, "BETA"), "arrow"))->kind == MissKind::Shape);
    CHECK(contravariant_constructors(atoms("contravariant(arrow, {1}) /\\ contravariant(pair, {})")) ==
          std::vector<std::string>{"arrow"});
}

namespace {

std::vector<BaseRule> inference_rules()
{
    return {BaseRule::CtxCompliant, BaseRule::ErrorHandler, BaseRule::Effectful, BaseRule::EffectualArgs,
            BaseRule::Contravariant};
}

}  // namespace

TEST_CASE("base rules are monotone and deterministic in the precondition")
{
    std::mt19937 rng(17);
    support::AssertionGen gen{rng};
    for (const char* file : {"lambda-div-print-faulty.lan", "lambda-div-print-fixed2.lan",
                             "lambda-div-print-fixed3.lan", "lambda-div-print-fixed4.lan", "stlc.lan"}) {
        auto lang = corpus(file);
        RuleContext cx(lang);
        // Seed with the atoms the rules consult so that derivations actually happen.
        AtomSet base = atoms(
            "ctx(E, app, {1,2}) /\\ ctx(E, try, {1}) /\\ ctx(F, try, {}) /\\ ctx(C, app, {1,2}) /\\ "
            "effectful(1) /\\ contravariant(arrow, {1})");
        for (const auto& r : lang.rules) {
            base.insert({true, atom::CtxCompliant{r.name}});
        }
        for (int i = 0; i < 20; ++i) {
            AtomSet small;
            for (const auto& a : base) {
                if (gen.pick(2)) {
                    small.insert(a);
                }
            }
            AtomSet big = small;
            for (const auto& a : atoms_of(gen.flat(4).assertion)) {
                big.insert(a);
            }
            for (const auto& a : base) {
                big.insert(a);
            }
            for (const auto& r : lang.rules) {
                for (auto b : inference_rules()) {
                    auto o1 = apply_base_rule(cx, b, small, r);
                    auto o2 = apply_base_rule(cx, b, small, r);
                    REQUIRE(o1.index() == o2.index());
                    if (const auto* d = derived(o1)) {
                        CHECK(d->atom == derived(o2)->atom);
                        CHECK(d->justification.discharged == derived(o2)->justification.discharged);
                        auto ob = apply_base_rule(cx, b, big, r);
                        REQUIRE(derived(ob));
                        CHECK(derived(ob)->atom == d->atom);
                    }
                }
                for (const auto& c : contravariant_constructors(small)) {
                    auto os = try_contra_respecting(cx, small, r, c);
                    if (const auto* d = derived(os)) {
                        auto ob = try_contra_respecting(cx, big, r, c);
                        REQUIRE(derived(ob));
                        CHECK(derived(ob)->atom == d->atom);
                    }
                }
            }
        }
    }
}
