#include "langlogic/derivation_json.hpp"

namespace langlogic {

nlohmann::ordered_json signed_atom_to_json(const SignedAtom& a)
{
    if (a.positive) {
        return atom_to_json(a.atom);
    }
    nlohmann::ordered_json j;
    j["kind"] = "not";
    j["inner"] = atom_to_json(a.atom);
    return j;
}

SignedAtom signed_atom_from_json(const nlohmann::ordered_json& j)
{
    if (j.at("kind") == "not") {
        return SignedAtom{false, atom_from_json(j.at("inner"))};
    }
    return SignedAtom{true, atom_from_json(j)};
}

nlohmann::ordered_json proof_to_json(const ProofNode& n)
{
    nlohmann::ordered_json j;
    j["rule"] = n.rule;
    j["pre"] = assertion_to_json(n.statement.pre);
    j["subject"] = {{"kind", std::string(to_string(n.statement.subject.kind))}, {"ref", n.statement.subject.ref}};
    j["post"] = assertion_to_json(n.statement.post);
    j["side_conditions"] = n.side_conditions;
    j["children"] = nlohmann::ordered_json::array();
    for (const auto& c : n.children) {
        j["children"].push_back(proof_to_json(c));
    }
    return j;
}

ProofNode proof_from_json(const nlohmann::ordered_json& j)
{
    ProofNode n;
    n.rule = j.at("rule").get<std::string>();
    n.statement.pre = assertion_from_json(j.at("pre"));
    n.statement.subject.kind = subject_kind_from_string(j.at("subject").at("kind").get<std::string>());
    n.statement.subject.ref = j.at("subject").at("ref").get<std::string>();
    n.statement.post = assertion_from_json(j.at("post"));
    n.side_conditions = j.at("side_conditions").get<std::vector<std::string>>();
    for (const auto& c : j.at("children")) {
        n.children.push_back(proof_from_json(c));
    }
    return n;
}

nlohmann::ordered_json failure_to_json(const FailureReport& f)
{
    nlohmann::ordered_json j;
    j["missing"] = nlohmann::ordered_json::array();
    for (const auto& a : f.missing) {
        j["missing"].push_back(signed_atom_to_json(a));
    }
    j["nearest_misses"] = nlohmann::ordered_json::array();
    for (const auto& m : f.nearest_misses) {
        j["nearest_misses"].push_back({{"at", m.at}, {"reason", m.reason}});
    }
    return j;
}

FailureReport failure_from_json(const nlohmann::ordered_json& j)
{
    FailureReport f;
    for (const auto& a : j.at("missing")) {
        f.missing.push_back(signed_atom_from_json(a));
    }
    for (const auto& m : j.at("nearest_misses")) {
        f.nearest_misses.push_back({m.at("at").get<std::string>(), m.at("reason").get<std::string>()});
    }
    return f;
}

}  // namespace langlogic
