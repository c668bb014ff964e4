#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "evlam/error.hpp"

namespace evlam {

// Variable names come in two disjoint classes. Ordinary names are the ones
// terms are normally written with; reserved names (spelled with a leading
// underscore) are kept for the machinery that assigns variables to types.
enum class VarClass { Ordinary, Reserved };

struct VarName {
  VarClass cls = VarClass::Ordinary;
  std::string base;

  // Infers the class from the spelling: a leading '_' marks a reserved name.
  static VarName of(std::string spelling);

  friend std::strong_ordering operator<=>(const VarName&,
                                          const VarName&) = default;
  friend bool operator==(const VarName&, const VarName&) = default;
};

// A variable occurrence: a name at a degree.
struct IndexedVar {
  VarName name;
  unsigned degree = 0;

  friend std::strong_ordering operator<=>(const IndexedVar&,
                                          const IndexedVar&) = default;
  friend bool operator==(const IndexedVar&, const IndexedVar&) = default;
};

std::string to_string(const IndexedVar& v);

// An immutable term of the degree-indexed lambda-I calculus.
//
// Invariants maintained by the constructors:
//   * every abstraction binds a variable that occurs free in its body;
//   * within one term each base name occurs at a single degree;
//   * bound names are pairwise distinct and distinct from free names
//     (clashes are resolved by renaming binders on construction).
class Term {
 public:
  enum class Kind { Var, App, Lam };

  static Term var(IndexedVar v);
  static Term var(const std::string& spelling, unsigned degree);
  // Throws NotJoinable when a shared free name has two degrees.
  static Term app(const Term& fn, const Term& arg);
  // Throws NotLambdaI when the binder does not occur free in the body.
  static Term lam(const IndexedVar& binder, const Term& body);

  Kind kind() const;
  const IndexedVar& var_info() const;  // Var
  const Term& fn() const;              // App
  const Term& arg() const;             // App
  const IndexedVar& binder() const;    // Lam
  const Term& body() const;            // Lam

  unsigned degree() const;
  bool good() const;
  unsigned size() const;  // node count
  const std::vector<IndexedVar>& free_vars() const;  // sorted, duplicate-free
  bool closed() const;
  bool has_free(const IndexedVar& v) const;

  const Term& child(unsigned selector) const;  // App: 0=fn,1=arg; Lam: 0=body

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

bool joinable(const Term& m, const Term& n);

// Simultaneous capture-avoiding substitution. Requires the targets to be
// pairwise joinable with the subject and with each other, and each replacement
// to share the degree of the variable it replaces.
Term substitute(const Term& m,
                const std::vector<std::pair<IndexedVar, Term>>& bindings);

bool alpha_eq(const Term& a, const Term& b);

// A renaming-invariant identity string: bound occurrences are replaced by
// binder indexes, free occurrences keep their names. Two terms are
// alpha-equal exactly when their keys coincide.
std::string alpha_key(const Term& t);

// Renames binders to the reserved pool p0, p1, ... in traversal order,
// skipping names that occur free. Idempotent on its own output.
Term alpha_normalize(const Term& t);

// Degree shifts. lift increments every occurrence (binders included);
// lower is its inverse and requires degree(t) > 0.
Term lift(const Term& t);
Term lower(const Term& t);
Term lower_n(const Term& t, unsigned n);

std::string to_string(const Term& t);

// All base names occurring in the term, free or bound.
std::set<std::string> all_base_names(const Term& t);

// A base name not present in `avoid`, formed from `hint` by appending a
// numeric suffix when needed.
std::string fresh_base(const std::string& hint,
                       const std::set<std::string>& avoid);

}  // namespace evlam
