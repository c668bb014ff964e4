#include "evlam/subtype.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <set>

namespace evlam {

SubtypeGoal SubtypeGoal::types(const CanonicalType& l, const CanonicalType& r) {
  SubtypeGoal g;
  g.kind = Kind::Type;
  g.lt = l;
  g.rt = r;
  return g;
}

SubtypeGoal SubtypeGoal::envs(const TypeEnv& l, const TypeEnv& r) {
  SubtypeGoal g;
  g.kind = Kind::Env;
  g.le = l;
  g.re = r;
  return g;
}

SubtypeGoal SubtypeGoal::typings(const TypeEnv& le, const CanonicalType& lt,
                                 const TypeEnv& re, const CanonicalType& rt) {
  SubtypeGoal g;
  g.kind = Kind::Typing;
  g.le = le;
  g.lt = lt;
  g.re = re;
  g.rt = rt;
  return g;
}

bool operator==(const SubtypeGoal& a, const SubtypeGoal& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case SubtypeGoal::Kind::Type:
      return *a.lt == *b.lt && *a.rt == *b.rt;
    case SubtypeGoal::Kind::Env:
      return *a.le == *b.le && *a.re == *b.re;
    case SubtypeGoal::Kind::Typing:
      return *a.lt == *b.lt && *a.rt == *b.rt && *a.le == *b.le &&
             *a.re == *b.re;
  }
  return false;
}

std::string to_string(const SubtypeGoal& goal) {
  switch (goal.kind) {
    case SubtypeGoal::Kind::Type:
      return to_string(*goal.lt) + " <= " + to_string(*goal.rt);
    case SubtypeGoal::Kind::Env: {
      std::string l = to_string(*goal.le);
      std::string r = to_string(*goal.re);
      if (l.empty()) l = "()";
      if (r.empty()) r = "()";
      return l + " <= " + r;
    }
    case SubtypeGoal::Kind::Typing:
      return to_string(Typing{*goal.le, *goal.lt}) + " <= " +
             to_string(Typing{*goal.re, *goal.rt});
  }
  return "";
}

const char* to_string(SubtypeRule r) {
  switch (r) {
    case SubtypeRule::Ref: return "ref";
    case SubtypeRule::Trans: return "trans";
    case SubtypeRule::InterElim: return "inter_elim";
    case SubtypeRule::InterMono: return "inter";
    case SubtypeRule::Arrow: return "arrow";
    case SubtypeRule::ExpCong: return "exp";
    case SubtypeRule::EnvMono: return "env_mono";
    case SubtypeRule::TypingMono: return "typing";
  }
  return "unknown";
}

namespace {

[[noreturn]] void evidence_fail(const std::vector<int>& path,
                                const std::string& reason) {
  throw RuleMismatchError(path, reason);
}

void check_evidence_node(const SubtypeDerivation& d, std::vector<int>& path) {
  const SubtypeGoal& g = d.goal;
  auto check_premise_count = [&](std::size_t n) {
    if (d.premises.size() != n) {
      evidence_fail(path, std::string(to_string(d.rule)) + " expects " +
                              std::to_string(n) + " premises");
    }
  };
  switch (d.rule) {
    case SubtypeRule::Ref: {
      check_premise_count(0);
      bool equal = false;
      switch (g.kind) {
        case SubtypeGoal::Kind::Type: equal = *g.lt == *g.rt; break;
        case SubtypeGoal::Kind::Env: equal = *g.le == *g.re; break;
        case SubtypeGoal::Kind::Typing:
          equal = *g.lt == *g.rt && *g.le == *g.re;
          break;
      }
      if (!equal) evidence_fail(path, "reflexivity needs equal sides");
      break;
    }
    case SubtypeRule::Trans: {
      check_premise_count(2);
      const SubtypeGoal& p0 = d.premises[0].goal;
      const SubtypeGoal& p1 = d.premises[1].goal;
      if (p0.kind != g.kind || p1.kind != g.kind) {
        evidence_fail(path, "transitivity premises change category");
      }
      SubtypeGoal left = g, right = g;
      // left: goal.lhs <= W, right: W <= goal.rhs
      switch (g.kind) {
        case SubtypeGoal::Kind::Type:
          if (!(*p0.lt == *g.lt) || !(*p1.rt == *g.rt) ||
              !(*p0.rt == *p1.lt)) {
            evidence_fail(path, "transitivity chain does not connect");
          }
          break;
        case SubtypeGoal::Kind::Env:
          if (!(*p0.le == *g.le) || !(*p1.re == *g.re) ||
              !(*p0.re == *p1.le)) {
            evidence_fail(path, "transitivity chain does not connect");
          }
          break;
        case SubtypeGoal::Kind::Typing:
          if (!(p0 == SubtypeGoal::typings(*g.le, *g.lt, *p0.re, *p0.rt)) ||
              !(p1 == SubtypeGoal::typings(*p0.re, *p0.rt, *g.re, *g.rt))) {
            evidence_fail(path, "transitivity chain does not connect");
          }
          break;
      }
      (void)left;
      (void)right;
      break;
    }
    case SubtypeRule::InterElim: {
      check_premise_count(0);
      if (g.kind != SubtypeGoal::Kind::Type || !d.dropped) {
        evidence_fail(path, "intersection elimination needs a dropped type");
      }
      const CanonicalType& dropped = *d.dropped;
      if (!(CanonicalType::meet(*g.rt, dropped) == *g.lt)) {
        evidence_fail(path,
                      "kept and dropped parts do not rebuild the left side");
      }
      if (!dropped.good()) {
        evidence_fail(path, "dropped part must be good");
      }
      if (g.rt->degree() != dropped.degree()) {
        evidence_fail(path, "kept and dropped degrees differ");
      }
      break;
    }
    case SubtypeRule::InterMono: {
      check_premise_count(2);
      if (g.kind != SubtypeGoal::Kind::Type) {
        evidence_fail(path, "intersection congruence is a type rule");
      }
      const SubtypeGoal& p0 = d.premises[0].goal;
      const SubtypeGoal& p1 = d.premises[1].goal;
      if (p0.kind != SubtypeGoal::Kind::Type ||
          p1.kind != SubtypeGoal::Kind::Type) {
        evidence_fail(path, "intersection congruence premises must be types");
      }
      if (!(CanonicalType::meet(*p0.lt, *p1.lt) == *g.lt) ||
          !(CanonicalType::meet(*p0.rt, *p1.rt) == *g.rt)) {
        evidence_fail(path, "premise meets do not rebuild the conclusion");
      }
      break;
    }
    case SubtypeRule::Arrow: {
      check_premise_count(2);
      if (g.kind != SubtypeGoal::Kind::Type ||
          g.lt->kind() != CanonicalType::Kind::Arrow ||
          g.rt->kind() != CanonicalType::Kind::Arrow) {
        evidence_fail(path, "arrow rule needs arrows on both sides");
      }
      const SubtypeGoal& p0 = d.premises[0].goal;
      const SubtypeGoal& p1 = d.premises[1].goal;
      bool ok = p0.kind == SubtypeGoal::Kind::Type &&
                p1.kind == SubtypeGoal::Kind::Type &&
                *p0.lt == g.rt->from() && *p0.rt == g.lt->from() &&
                *p1.lt == g.lt->to() && *p1.rt == g.rt->to();
      if (!ok) {
        evidence_fail(path, "arrow premises must flip the source and keep "
                            "the target");
      }
      break;
    }
    case SubtypeRule::ExpCong: {
      check_premise_count(1);
      if (g.kind != SubtypeGoal::Kind::Type || !d.evar) {
        evidence_fail(path, "expansion congruence needs its variable");
      }
      auto lb = undistribute_exp(*g.lt, *d.evar);
      auto rb = undistribute_exp(*g.rt, *d.evar);
      if (!lb || !rb) {
        evidence_fail(path, "sides are not expansions under the variable");
      }
      const SubtypeGoal& p0 = d.premises[0].goal;
      if (p0.kind != SubtypeGoal::Kind::Type || !(*p0.lt == *lb) ||
          !(*p0.rt == *rb)) {
        evidence_fail(path, "premise does not match the stripped bodies");
      }
      break;
    }
    case SubtypeRule::EnvMono: {
      check_premise_count(1);
      if (g.kind != SubtypeGoal::Kind::Env) {
        evidence_fail(path, "environment rule applied to a non-environment");
      }
      if (g.le->size() != g.re->size()) {
        evidence_fail(path, "environment domains differ");
      }
      const SubtypeGoal& p0 = d.premises[0].goal;
      if (p0.kind != SubtypeGoal::Kind::Type) {
        evidence_fail(path, "environment premise must relate types");
      }
      unsigned changed = 0;
      auto li = g.le->bindings().begin();
      auto ri = g.re->bindings().begin();
      for (; li != g.le->bindings().end(); ++li, ++ri) {
        if (li->first != ri->first || li->second.first != ri->second.first) {
          evidence_fail(path, "environment domains differ");
        }
        if (!(li->second.second == ri->second.second)) {
          ++changed;
          if (!(*p0.lt == li->second.second) ||
              !(*p0.rt == ri->second.second)) {
            evidence_fail(path, "premise does not match the changed binding");
          }
        }
      }
      if (changed != 1) {
        evidence_fail(path, "exactly one binding may change per step");
      }
      break;
    }
    case SubtypeRule::TypingMono: {
      check_premise_count(2);
      if (g.kind != SubtypeGoal::Kind::Typing) {
        evidence_fail(path, "typing rule applied to a non-typing");
      }
      const SubtypeGoal& p0 = d.premises[0].goal;
      const SubtypeGoal& p1 = d.premises[1].goal;
      bool ok = p0.kind == SubtypeGoal::Kind::Type && *p0.lt == *g.lt &&
                *p0.rt == *g.rt && p1.kind == SubtypeGoal::Kind::Env &&
                *p1.le == *g.re && *p1.re == *g.le;
      if (!ok) {
        evidence_fail(path, "typing premises must relate the result types "
                            "and the environments contravariantly");
      }
      break;
    }
  }
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    path.push_back(static_cast<int>(i));
    check_evidence_node(d.premises[i], path);
    path.pop_back();
  }
}

}  // namespace

void check_subtype_evidence(const SubtypeDerivation& d) {
  std::vector<int> path;
  check_evidence_node(d, path);
}

// ---------------------------------------------------------------------------
// Declarative search
// ---------------------------------------------------------------------------

namespace {

SubtypeDerivation mk_ref(const SubtypeGoal& g) {
  return SubtypeDerivation{SubtypeRule::Ref, g, {}, std::nullopt, std::nullopt};
}

SubtypeDerivation mk_node(SubtypeRule rule, const SubtypeGoal& g,
                          std::vector<SubtypeDerivation> premises) {
  return SubtypeDerivation{rule, g, std::move(premises), std::nullopt,
                           std::nullopt};
}

CanonicalType meet_of(const std::vector<CanonicalType>& parts) {
  assert(!parts.empty());
  if (parts.size() == 1) return parts.front();
  return CanonicalType::inter(parts);
}

// Candidate intermediates for transitivity: subterms of both sides, closed
// under meets of intersection-part subsets and one round of lowering.
std::vector<CanonicalType> trans_candidates_for(const CanonicalType& a,
                                                const CanonicalType& b) {
  std::set<CanonicalType> seen;
  std::vector<CanonicalType> work{a, b};
  auto push = [&](const CanonicalType& t) {
    if (seen.insert(t).second) work.push_back(t);
  };
  constexpr std::size_t kCap = 160;
  while (!work.empty() && seen.size() < kCap) {
    CanonicalType t = work.back();
    work.pop_back();
    if (!seen.count(t)) seen.insert(t);
    switch (t.kind()) {
      case CanonicalType::Kind::Atom:
        break;
      case CanonicalType::Kind::Exp:
        push(t.exp_body());
        break;
      case CanonicalType::Kind::Arrow:
        push(t.from());
        push(t.to());
        break;
      case CanonicalType::Kind::Inter: {
        const auto& parts = t.parts();
        for (const auto& p : parts) push(p);
        if (parts.size() <= 5) {
          for (std::size_t mask = 1; mask < (1u << parts.size()); ++mask) {
            std::vector<CanonicalType> sel;
            for (std::size_t i = 0; i < parts.size(); ++i) {
              if (mask & (1u << i)) sel.push_back(parts[i]);
            }
            push(meet_of(sel));
          }
        }
        break;
      }
    }
    if (t.degree() > 0 && t.kind() != CanonicalType::Kind::Arrow &&
        t.kind() != CanonicalType::Kind::Atom) {
      push(type_lower(t));
    }
  }
  return std::vector<CanonicalType>(seen.begin(), seen.end());
}

class DeclSearch {
 public:
  explicit DeclSearch(SubtypeCache& cache) : cache_(cache) {}

  SubtypeResult run(const SubtypeGoal& goal, unsigned depth) {
    auto proof = search(goal, depth);
    if (proof) return SubtypeResult{SubtypeVerdict::Derivable, proof};
    return SubtypeResult{SubtypeVerdict::NotDerivableWithinDepth,
                         std::nullopt};
  }

 private:
  std::optional<SubtypeDerivation> search(const SubtypeGoal& goal,
                                          unsigned depth) {
    std::string key = to_string(goal);
    auto it = cache_.entries.find(key);
    if (it != cache_.entries.end()) {
      if (it->second.proof) return it->second.proof;
      if (it->second.failed_at >= depth) return std::nullopt;
    }
    if (depth == 0) return std::nullopt;

    std::optional<SubtypeDerivation> proof;
    switch (goal.kind) {
      case SubtypeGoal::Kind::Type:
        proof = search_type(goal, depth);
        break;
      case SubtypeGoal::Kind::Env:
        proof = search_env(goal, depth);
        break;
      case SubtypeGoal::Kind::Typing:
        proof = search_typing(goal, depth);
        break;
    }

    auto& entry = cache_.entries[key];
    if (proof) {
      entry.proof = proof;
    } else {
      entry.failed_at = std::max(entry.failed_at, depth);
    }
    return proof;
  }

  std::optional<SubtypeDerivation> search_type(const SubtypeGoal& goal,
                                               unsigned depth) {
    const CanonicalType& l = *goal.lt;
    const CanonicalType& r = *goal.rt;

    if (l == r) return mk_ref(goal);

    // Direct elimination: the right side keeps a sub-meet of the left.
    if (l.kind() == CanonicalType::Kind::Inter) {
      auto lp = l.parts();
      auto rp = r.part_list();
      if (std::includes(lp.begin(), lp.end(), rp.begin(), rp.end(),
                        [](const CanonicalType& a, const CanonicalType& b) {
                          return (a <=> b) < 0;
                        })) {
        std::vector<CanonicalType> droppedParts;
        std::set_difference(
            lp.begin(), lp.end(), rp.begin(), rp.end(),
            std::back_inserter(droppedParts),
            [](const CanonicalType& a, const CanonicalType& b) {
              return (a <=> b) < 0;
            });
        if (!droppedParts.empty()) {
          CanonicalType dropped = meet_of(droppedParts);
          if (dropped.good() && dropped.degree() == r.degree()) {
            SubtypeDerivation node = mk_ref(goal);
            node.rule = SubtypeRule::InterElim;
            node.dropped = dropped;
            return node;
          }
        }
      }
    }

    // Arrow congruence.
    if (l.kind() == CanonicalType::Kind::Arrow &&
        r.kind() == CanonicalType::Kind::Arrow) {
      auto p0 = search(SubtypeGoal::types(r.from(), l.from()), depth - 1);
      if (p0) {
        auto p1 = search(SubtypeGoal::types(l.to(), r.to()), depth - 1);
        if (p1) {
          return mk_node(SubtypeRule::Arrow, goal, {*p0, *p1});
        }
      }
    }

    // Expansion congruence, modulo distribution over intersections.
    if (auto e = common_head_evar(l)) {
      auto lb = undistribute_exp(l, *e);
      auto rb = undistribute_exp(r, *e);
      if (lb && rb) {
        auto p = search(SubtypeGoal::types(*lb, *rb), depth - 1);
        if (p) {
          SubtypeDerivation node = mk_node(SubtypeRule::ExpCong, goal, {*p});
          node.evar = *e;
          return node;
        }
      }
    }

    // Intersection congruence: assign to every right part a cover group of
    // left parts; the groups jointly use every left part.
    {
      auto assignment = search_assignment(l, r, depth);
      if (assignment) return assignment;
    }

    // Transitivity through a bounded candidate set.
    {
      const auto& candidates = trans_candidates(goal);
      for (const auto& w : candidates) {
        if (w == l || w == r) continue;
        auto p0 = search(SubtypeGoal::types(l, w), depth - 1);
        if (!p0) continue;
        auto p1 = search(SubtypeGoal::types(w, r), depth - 1);
        if (!p1) continue;
        return mk_node(SubtypeRule::Trans, goal, {*p0, *p1});
      }
    }

    return std::nullopt;
  }

  // Proof that meet(group) <= target via selection of one group member.
  std::optional<SubtypeDerivation> search_group(
      const std::vector<CanonicalType>& group, const CanonicalType& target,
      unsigned depth) {
    CanonicalType lhs = meet_of(group);
    if (group.size() == 1) {
      return search(SubtypeGoal::types(group.front(), target), depth - 1);
    }
    for (std::size_t i = 0; i < group.size(); ++i) {
      const CanonicalType& kept = group[i];
      std::vector<CanonicalType> droppedParts;
      for (std::size_t j = 0; j < group.size(); ++j) {
        if (j != i) droppedParts.push_back(group[j]);
      }
      CanonicalType dropped = meet_of(droppedParts);
      if (!dropped.good() || dropped.degree() != kept.degree()) continue;
      auto inner = search(SubtypeGoal::types(kept, target), depth - 1);
      if (!inner) continue;
      SubtypeGoal elim_goal = SubtypeGoal::types(lhs, kept);
      SubtypeDerivation elim = mk_ref(elim_goal);
      elim.rule = SubtypeRule::InterElim;
      elim.dropped = dropped;
      if (kept == target) return elim;
      return mk_node(SubtypeRule::Trans, SubtypeGoal::types(lhs, target),
                     {elim, *inner});
    }
    return std::nullopt;
  }

  // Intersection congruence in normal form: prove every right part from a
  // group of left parts; a right part may be proved several times from
  // different groups (idempotence), and all groups together must use every
  // left part.
  std::optional<SubtypeDerivation> search_assignment(const CanonicalType& l,
                                                     const CanonicalType& r,
                                                     unsigned depth) {
    std::vector<CanonicalType> lp = l.part_list();
    std::vector<CanonicalType> rp = r.part_list();
    if (lp.size() == 1 && rp.size() == 1) return std::nullopt;
    if (lp.size() > 6) return std::nullopt;
    const unsigned full = (1u << lp.size()) - 1;

    std::vector<std::vector<std::pair<unsigned, SubtypeDerivation>>> viable(
        rp.size());
    unsigned covered_all = 0;
    for (std::size_t j = 0; j < rp.size(); ++j) {
      for (unsigned mask = 1; mask <= full; ++mask) {
        std::vector<CanonicalType> group;
        for (std::size_t i = 0; i < lp.size(); ++i) {
          if (mask & (1u << i)) group.push_back(lp[i]);
        }
        auto proof = search_group(group, rp[j], depth);
        if (proof) {
          viable[j].emplace_back(mask, *proof);
          covered_all |= mask;
        }
      }
      if (viable[j].empty()) return std::nullopt;
    }
    if (covered_all != full) return std::nullopt;

    // Greedy selection: one group per right part, then extra groups until
    // every left part is used.
    std::vector<SubtypeDerivation> proofs;
    unsigned covered = 0;
    for (std::size_t j = 0; j < rp.size(); ++j) {
      proofs.push_back(viable[j].front().second);
      covered |= viable[j].front().first;
    }
    for (std::size_t j = 0; j < rp.size() && covered != full; ++j) {
      for (const auto& [mask, proof] : viable[j]) {
        if ((mask & ~covered) != 0) {
          proofs.push_back(proof);
          covered |= mask;
          if (covered == full) break;
        }
      }
    }
    if (covered != full) return std::nullopt;

    if (proofs.size() == 1) {
      // A single group proved the single right part; it must use all of l.
      if (*proofs.front().goal.lt == l) return proofs.front();
      return std::nullopt;
    }
    SubtypeDerivation acc = proofs.back();
    for (std::size_t j = proofs.size() - 1; j-- > 0;) {
      const SubtypeGoal& lg = proofs[j].goal;
      CanonicalType lhs = CanonicalType::meet(*lg.lt, *acc.goal.lt);
      CanonicalType rhs = CanonicalType::meet(*lg.rt, *acc.goal.rt);
      acc = mk_node(SubtypeRule::InterMono, SubtypeGoal::types(lhs, rhs),
                    {proofs[j], acc});
    }
    if (!(*acc.goal.lt == l) || !(*acc.goal.rt == r)) return std::nullopt;
    return acc;
  }

  std::optional<SubtypeDerivation> search_env(const SubtypeGoal& goal,
                                              unsigned depth) {
    const TypeEnv& l = *goal.le;
    const TypeEnv& r = *goal.re;
    if (l == r) return mk_ref(goal);
    if (l.size() != r.size()) return std::nullopt;

    // Pointwise premises; compose one-binding steps through intermediates.
    std::vector<std::pair<IndexedVar, std::pair<CanonicalType, CanonicalType>>>
        diffs;
    auto li = l.bindings().begin();
    auto ri = r.bindings().begin();
    for (; li != l.bindings().end(); ++li, ++ri) {
      if (li->first != ri->first || li->second.first != ri->second.first) {
        return std::nullopt;
      }
      if (!(li->second.second == ri->second.second)) {
        diffs.push_back({IndexedVar{li->first, li->second.first},
                         {li->second.second, ri->second.second}});
      }
    }

    std::vector<SubtypeDerivation> typeProofs;
    for (const auto& [v, pair] : diffs) {
      auto p = search(SubtypeGoal::types(pair.first, pair.second), depth - 1);
      if (!p) return std::nullopt;
      typeProofs.push_back(*p);
    }

    // Walk from l to r, changing one binding per step.
    TypeEnv cur = l;
    std::vector<SubtypeDerivation> steps;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
      const auto& [v, pair] = diffs[i];
      TypeEnv next = cur.without(v).with(v, pair.second);
      SubtypeDerivation node = mk_node(
          SubtypeRule::EnvMono, SubtypeGoal::envs(cur, next), {typeProofs[i]});
      steps.push_back(node);
      cur = next;
    }
    SubtypeDerivation acc = steps.front();
    for (std::size_t i = 1; i < steps.size(); ++i) {
      acc = mk_node(SubtypeRule::Trans,
                    SubtypeGoal::envs(*acc.goal.le, *steps[i].goal.re),
                    {acc, steps[i]});
    }
    return acc;
  }

  std::optional<SubtypeDerivation> search_typing(const SubtypeGoal& goal,
                                                 unsigned depth) {
    auto pt = search(SubtypeGoal::types(*goal.lt, *goal.rt), depth - 1);
    if (!pt) return std::nullopt;
    auto pe = search(SubtypeGoal::envs(*goal.re, *goal.le), depth - 1);
    if (!pe) return std::nullopt;
    return mk_node(SubtypeRule::TypingMono, goal, {*pt, *pe});
  }

  std::optional<EVarName> common_head_evar(const CanonicalType& t) {
    if (t.kind() == CanonicalType::Kind::Exp) return t.evar();
    if (t.kind() == CanonicalType::Kind::Inter) {
      const auto& parts = t.parts();
      if (parts.front().kind() != CanonicalType::Kind::Exp) {
        return std::nullopt;
      }
      EVarName e = parts.front().evar();
      for (const auto& p : parts) {
        if (p.kind() != CanonicalType::Kind::Exp || !(p.evar() == e)) {
          return std::nullopt;
        }
      }
      return e;
    }
    return std::nullopt;
  }

  const std::vector<CanonicalType>& trans_candidates(const SubtypeGoal& goal) {
    std::string key = to_string(goal);
    auto it = cache_.trans_candidates.find(key);
    if (it != cache_.trans_candidates.end()) return it->second;
    auto cands = trans_candidates_for(*goal.lt, *goal.rt);
    return cache_.trans_candidates.emplace(std::move(key), std::move(cands))
        .first->second;
  }

  SubtypeCache& cache_;
};

}  // namespace

SubtypeResult check_subtype_declarative(const SubtypeGoal& goal,
                                        unsigned depth, SubtypeCache& cache) {
  DeclSearch search(cache);
  return search.run(goal, depth);
}

// ---------------------------------------------------------------------------
// Algorithmic decision procedure
// ---------------------------------------------------------------------------

namespace {

bool alg_type_le(const CanonicalType& l, const CanonicalType& r);

bool alg_atomic_le(const CanonicalType& u, const CanonicalType& q) {
  if (u == q) return true;
  if (u.kind() == CanonicalType::Kind::Exp &&
      q.kind() == CanonicalType::Kind::Exp && u.evar() == q.evar()) {
    return alg_type_le(u.exp_body(), q.exp_body());
  }
  if (u.kind() == CanonicalType::Kind::Arrow &&
      q.kind() == CanonicalType::Kind::Arrow) {
    return alg_type_le(q.from(), u.from()) && alg_type_le(u.to(), q.to());
  }
  return false;
}

// meet(group under mask) <= q via selecting one member and dropping the rest.
bool alg_group_le(const std::vector<CanonicalType>& parts, unsigned mask,
                  const CanonicalType& q) {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!(mask & (1u << i))) continue;
    if (!alg_atomic_le(parts[i], q)) continue;
    bool drops_ok = true;
    bool have_drop = false;
    unsigned drop_degree = 0;
    for (std::size_t j = 0; j < parts.size(); ++j) {
      if (j == i || !(mask & (1u << j))) continue;
      if (!parts[j].good()) {
        drops_ok = false;
        break;
      }
      if (!have_drop) {
        have_drop = true;
        drop_degree = parts[j].degree();
      } else if (parts[j].degree() != drop_degree) {
        drops_ok = false;
        break;
      }
    }
    if (drops_ok && have_drop && drop_degree != parts[i].degree()) {
      drops_ok = false;
    }
    if (drops_ok) return true;
  }
  return false;
}

bool alg_type_le(const CanonicalType& l, const CanonicalType& r) {
  if (l == r) return true;
  std::vector<CanonicalType> lp = l.part_list();
  std::vector<CanonicalType> rp = r.part_list();
  if (lp.size() > 16) return false;
  const unsigned full = (1u << lp.size()) - 1;

  // Every right part needs at least one proving group of left parts, and the
  // groups together must use every left part. A right part may be proved by
  // several groups (idempotence on the right), so coverage is the union of
  // all viable groups.
  unsigned covered = 0;
  for (std::size_t j = 0; j < rp.size(); ++j) {
    bool any = false;
    for (unsigned mask = 1; mask <= full; ++mask) {
      if (alg_group_le(lp, mask, rp[j])) {
        any = true;
        covered |= mask;
        if (covered == full && lp.size() == 1) break;
      }
    }
    if (!any) return false;
  }
  return covered == full;
}

bool alg_env_le(const TypeEnv& l, const TypeEnv& r) {
  if (l.size() != r.size()) return false;
  auto li = l.bindings().begin();
  auto ri = r.bindings().begin();
  for (; li != l.bindings().end(); ++li, ++ri) {
    if (li->first != ri->first || li->second.first != ri->second.first) {
      return false;
    }
    if (!alg_type_le(li->second.second, ri->second.second)) return false;
  }
  return true;
}

}  // namespace

bool check_subtype_algorithmic(const SubtypeGoal& goal) {
  switch (goal.kind) {
    case SubtypeGoal::Kind::Type:
      return alg_type_le(*goal.lt, *goal.rt);
    case SubtypeGoal::Kind::Env:
      return alg_env_le(*goal.le, *goal.re);
    case SubtypeGoal::Kind::Typing:
      return alg_type_le(*goal.lt, *goal.rt) && alg_env_le(*goal.re, *goal.le);
  }
  return false;
}

}  // namespace evlam
