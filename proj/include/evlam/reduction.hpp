#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "evlam/term.hpp"

namespace evlam {

// Address of a beta-redex. The path selects children from the root
// (application: 0 = function, 1 = argument; abstraction: 0 = body) and must
// land on an application whose function is an abstraction. The redex fires
// only when the argument degree matches the binder degree; mismatched sites
// are first-class data, not errors.
struct RedexSite {
  std::vector<unsigned> path;
  IndexedVar binder;
  unsigned argument_degree = 0;
  bool fires = false;
};

std::string to_string(const RedexSite& site);

// All redex positions in pre-order (outermost before inner, function side
// before argument side).
std::vector<RedexSite> redexes(const Term& t);

// Contracts the redex at `site`. Throws InvalidSite when the site does not
// address a matching redex and BlockedRedex when the degrees disagree.
Term step(const Term& t, const RedexSite& site);

bool is_normal(const Term& t);

struct ReductionTrace {
  Term start;
  std::vector<std::pair<RedexSite, Term>> steps;
  bool exhausted_fuel = false;
};

// Repeatedly contracts the leftmost-outermost firing redex.
ReductionTrace reduce_leftmost(const Term& t, unsigned fuel);

struct ReductEdge {
  Term before;
  RedexSite site;
  Term after;
};

// Breadth-first closure of one-step reducts, alpha-distinct, up to `fuel`
// levels. `complete` reports that the closure reached a fixed point, so the
// term set is the entire reduct set.
struct ReductSet {
  std::vector<Term> terms;
  std::vector<ReductEdge> edges;
  bool complete = false;

  bool contains(const Term& t) const;

 private:
  friend ReductSet all_reducts(const Term&, unsigned);
  std::unordered_map<std::string, std::size_t> index_;
};

ReductSet all_reducts(const Term& t, unsigned fuel);

enum class Reach { Yes, NoWithinFuel, Unknown };
const char* to_string(Reach r);

// Does m reduce to n in at most `fuel` steps? NoWithinFuel is definitive:
// it is reported only when the full reduct closure of m was computed.
Reach reduces_to(const Term& m, const Term& n, unsigned fuel);

// Bounded beta-equivalence via reduct-set intersection.
Reach beta_eq(const Term& m, const Term& n, unsigned fuel);

}  // namespace evlam
