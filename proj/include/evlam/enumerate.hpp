#pragma once

#include <string>
#include <vector>

#include "evlam/term.hpp"
#include "evlam/type.hpp"

namespace evlam {

// Exhaustive generation of good terms, duplicate-free modulo renaming of
// bound variables. Binder names are drawn from the reserved pool p0, p1, ...
//
// Occurrence degrees are capped by max_var_degree: without a cap the set is
// infinite even at fixed size (a binder away from the minimum-degree spine
// may sit at any degree).
struct TermEnumOptions {
  unsigned max_size = 5;
  unsigned degree = 0;
  bool closed = true;
  std::vector<VarName> alphabet;   // free-name pool; ignored when closed
  unsigned max_var_degree = 2;
};

std::vector<Term> enumerate_good_terms(const TermEnumOptions& opts);

// Canonical types over a fixed alphabet, by size. All returned values are
// distinct canonical forms.
struct TypeEnumOptions {
  std::vector<std::string> atoms = {"a", "b"};
  std::vector<std::string> evars = {"e"};
  unsigned max_size = 5;
  unsigned max_evar_depth = 4;  // nesting cap on expansion applications
  bool require_good = false;
  bool require_u = false;       // restricted grammar only
};

std::vector<CanonicalType> enumerate_types(const TypeEnumOptions& opts);

}  // namespace evlam
