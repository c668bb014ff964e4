#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evlam/type.hpp"

namespace evlam {

// A subtyping claim. Both sides always belong to the same syntactic
// category: two types, two environments, or two typings.
struct SubtypeGoal {
  enum class Kind { Type, Env, Typing };

  Kind kind = Kind::Type;
  std::optional<CanonicalType> lt, rt;  // Type and Typing goals
  std::optional<TypeEnv> le, re;        // Env and Typing goals

  static SubtypeGoal types(const CanonicalType& l, const CanonicalType& r);
  static SubtypeGoal envs(const TypeEnv& l, const TypeEnv& r);
  static SubtypeGoal typings(const TypeEnv& le, const CanonicalType& lt,
                             const TypeEnv& re, const CanonicalType& rt);

  friend bool operator==(const SubtypeGoal& a, const SubtypeGoal& b);
};

std::string to_string(const SubtypeGoal& goal);

// Inference steps for subtyping evidence. InterElim carries the discarded
// meet explicitly so checking needs no search; ExpCong carries its expansion
// variable and applies modulo the distribution law.
enum class SubtypeRule {
  Ref,
  Trans,
  InterElim,
  InterMono,
  Arrow,
  ExpCong,
  EnvMono,
  TypingMono,
};

const char* to_string(SubtypeRule r);

struct SubtypeDerivation {
  SubtypeRule rule = SubtypeRule::Ref;
  SubtypeGoal goal;
  std::vector<SubtypeDerivation> premises;
  std::optional<CanonicalType> dropped;  // InterElim
  std::optional<EVarName> evar;          // ExpCong
};

// Validates every node of the evidence tree against its rule schema.
// Throws RuleMismatchError on the first failing node.
void check_subtype_evidence(const SubtypeDerivation& d);

enum class SubtypeVerdict { Derivable, NotDerivableWithinDepth };

struct SubtypeResult {
  SubtypeVerdict verdict = SubtypeVerdict::NotDerivableWithinDepth;
  std::optional<SubtypeDerivation> proof;

  bool derivable() const { return verdict == SubtypeVerdict::Derivable; }
};

// Shared memo table for the declarative search.
class SubtypeCache {
 public:
  struct Entry {
    std::optional<SubtypeDerivation> proof;
    unsigned failed_at = 0;
  };
  std::map<std::string, Entry> entries;
  std::map<std::string, std::vector<CanonicalType>> trans_candidates;
};

inline constexpr unsigned kDefaultSubtypeDepth = 14;

// Proof search over the subtyping rules, with transitivity restricted to a
// finite candidate set derived from the goal (subterms closed under meets of
// intersection parts and degree lowering).
SubtypeResult check_subtype_declarative(const SubtypeGoal& goal,
                                        unsigned depth, SubtypeCache& cache);

// Transitivity-free structural decision procedure. Must agree with the
// declarative search on small universes; validated differentially.
bool check_subtype_algorithmic(const SubtypeGoal& goal);

}  // namespace evlam
