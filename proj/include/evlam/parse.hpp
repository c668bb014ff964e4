#pragma once

#include <string>

#include "evlam/term.hpp"
#include "evlam/type.hpp"

namespace evlam {

// Text grammars (UTF-8, ASCII operators):
//
//   term     := '\' var '^' nat '.' term | appterm
//   appterm  := atomterm+                       (left-associative)
//   atomterm := var '^' nat | '(' term ')'
//   var      := identifier; names starting with '_' are reserved-class
//
//   type     := inter ('->' type)?              (arrow is right-associative)
//   inter    := prim ('&' prim)*
//   prim     := atom | evar prim | '(' type ')'
//   atom     := lowercase identifier (not an expansion-variable spelling)
//   evar     := 'e' | 'e' digits
//
//   env      := '()' | binding (',' binding)*   with binding := var '^' nat ':' type
//   typing   := '<'? env '|-' type '>'?
//
// Syntax errors carry line/column; well-formedness violations (degree
// clashes, unused binders) surface as ValidationError-class errors.

Term parse_term(const std::string& text);
RawType parse_raw_type(const std::string& text);
CanonicalType parse_type(const std::string& text);
TypeEnv parse_env(const std::string& text);

struct Typing {
  TypeEnv env;
  CanonicalType type;
};

Typing parse_typing(const std::string& text);

std::string to_string(const Typing& typing);

}  // namespace evlam
