#pragma once

// The `.lan` textual format for language definitions.
//
//   Type T ::= bool | (arrow T T)
//   %ineffectual v er
//   [BETA]
//   (app (abs T (x)e) v) , s --> e[v/x] , s <== (value v).
//
// Grammar rules occupy one logical line (a trailing `\` continues it). An inference
// rule is a `[NAME]` line followed by `conclusion <== p1 /\ p2 ... .` spanning any
// number of lines. `//` starts a comment.

#include <set>
#include <string>
#include <string_view>

#include "langlogic/language.hpp"

namespace langlogic {

/// Syntax only; the result may still carry validation findings.
LanguageDef parse_language_unchecked(std::string_view source);

/// Parses and validates; throws ParseError or ValidationError.
LanguageDef parse_language(std::string_view source);

std::string render_language(const LanguageDef& lang);

/// Parses a single term against a set of declared metavariables (used by tools and tests).
Term parse_term(std::string_view text, const std::set<std::string>& metavars);

/// Parses a single formula (no trailing `.`).
Formula parse_formula(std::string_view text, const std::set<std::string>& metavars);

}  // namespace langlogic
