#pragma once

// JSON encoding of derivation trees and failure reports.
//
//   node    = { "rule", "pre", "subject": {"kind", "ref"}, "post", "side_conditions", "children" }
//   failure = { "missing": [atom], "nearest_misses": [{"at", "reason"}] }

#include <json.hpp>

#include "langlogic/prover.hpp"

namespace langlogic {

nlohmann::ordered_json proof_to_json(const ProofNode& n);
ProofNode proof_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json failure_to_json(const FailureReport& f);
FailureReport failure_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json signed_atom_to_json(const SignedAtom& a);
SignedAtom signed_atom_from_json(const nlohmann::ordered_json& j);

}  // namespace langlogic
