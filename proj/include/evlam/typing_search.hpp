#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evlam/parse.hpp"
#include "evlam/typing.hpp"

namespace evlam {

// Bounds pinning the finite search space: every type occurring in a found
// derivation has canonical size <= type_size and expansion nesting <=
// evar_depth, and the proof tree has height <= depth. A NotDerivable verdict
// certifies nonexistence within exactly this space.
struct SearchBounds {
  unsigned type_size = 6;
  unsigned depth = 10;
  unsigned evar_depth = 3;
  std::uint64_t node_budget = 50'000'000;
  std::vector<std::string> extra_atoms;  // extends the goal-derived alphabet
  bool use_var_characterization = true;  // variable-judgment shortcut
};

enum class SearchVerdict { Derivable, NotDerivableWithinBounds, Unknown };

const char* to_string(SearchVerdict v);

struct SearchOutcome {
  SearchVerdict verdict = SearchVerdict::Unknown;
  std::optional<Derivation> proof;
  std::uint64_t nodes = 0;
};

class TypingSearcher {
 public:
  TypingSearcher(System system, SearchBounds bounds,
                 std::vector<std::string> atoms,
                 std::vector<std::string> evars);

  SearchOutcome check(const Judgment& goal);

  // All derivable result types for the subject under the given environment,
  // drawn from the searcher's type universe.
  std::vector<Derivation> enumerate_results(const Term& subject,
                                            const TypeEnv& env,
                                            std::size_t limit);

  const std::vector<CanonicalType>& universe();

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

// Collects the atom/evar alphabet of a judgment and builds a searcher for it.
TypingSearcher searcher_for(const Judgment& goal, const SearchBounds& bounds);

SearchOutcome check_judgment(const Judgment& goal, const SearchBounds& bounds);

std::optional<Derivation> search_typing(const Term& subject, System system,
                                        const Typing& goal,
                                        const SearchBounds& bounds);

// Goal-free bounded search over candidate environments and result types.
std::vector<Derivation> search_typings(const Term& subject, System system,
                                       const SearchBounds& bounds,
                                       std::size_t limit);

}  // namespace evlam
