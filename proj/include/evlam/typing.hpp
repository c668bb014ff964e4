#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evlam/reduction.hpp"
#include "evlam/subtype.hpp"
#include "evlam/term.hpp"
#include "evlam/type.hpp"

namespace evlam {

// System 1 types judgments over the unrestricted type language; System 2
// restricts types to the intersection/expansion closure of the arrow grammar
// and adds the subsumption rule.
enum class System { S1 = 1, S2 = 2 };

const char* to_string(System s);

struct Judgment {
  Term subject;
  TypeEnv env;
  System system = System::S2;
  CanonicalType result;

  // Throws GrammarViolation when a System-2 judgment mentions a type outside
  // the restricted grammar.
  static Judgment make(Term subject, TypeEnv env, System system,
                       CanonicalType result);

  friend bool operator==(const Judgment& a, const Judgment& b);
  friend bool operator!=(const Judgment& a, const Judgment& b) {
    return !(a == b);
  }
};

std::string to_string(const Judgment& j);

// Memoization key: bound names are canonicalized, free names kept.
std::string judgment_key(const Judgment& j);

enum class Rule { Ax, ArrI, ArrE, Inter, Exp, Sub };

const char* to_string(Rule r);

// An explicit proof tree. Exp nodes carry their expansion variable; Sub nodes
// carry full subtyping evidence so checking never searches.
struct Derivation {
  Rule rule = Rule::Ax;
  Judgment conclusion;
  std::vector<Derivation> premises;
  std::optional<EVarName> evar;                  // Exp
  std::optional<SubtypeDerivation> evidence;     // Sub

  static Derivation ax(const Judgment& conclusion);
  static Derivation arr_i(const Judgment& conclusion, Derivation premise);
  static Derivation arr_e(const Judgment& conclusion, Derivation fn,
                          Derivation arg);
  static Derivation inter(const Judgment& conclusion, Derivation left,
                          Derivation right);
  static Derivation exp(const Judgment& conclusion, const EVarName& e,
                        Derivation premise);
  static Derivation sub(const Judgment& conclusion,
                        SubtypeDerivation evidence, Derivation premise);
};

// Verifies every node against its rule schema and returns the root judgment.
// Throws RuleMismatchError naming the first failing node.
Judgment check_derivation(const Derivation& d);

struct PropertyReport {
  unsigned checks = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
  void require(bool cond, const std::string& what) {
    ++checks;
    if (!cond) failures.push_back(what);
  }
};

// Derived facts about a checked derivation's conclusion: good subject, good
// types, matching degrees, and no blocked redexes in the subject.
PropertyReport typable_properties(const Derivation& d);

}  // namespace evlam
