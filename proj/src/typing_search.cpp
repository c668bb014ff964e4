#include "evlam/typing_search.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "evlam/enumerate.hpp"

namespace evlam {

const char* to_string(SearchVerdict v) {
  switch (v) {
    case SearchVerdict::Derivable: return "derivable";
    case SearchVerdict::NotDerivableWithinBounds:
      return "not-derivable-within-bounds";
    case SearchVerdict::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

void collect_alphabet(const CanonicalType& t, std::set<std::string>& atoms,
                      std::set<std::string>& evars) {
  switch (t.kind()) {
    case CanonicalType::Kind::Atom:
      atoms.insert(t.atom_name());
      return;
    case CanonicalType::Kind::Exp:
      evars.insert(t.evar().id);
      collect_alphabet(t.exp_body(), atoms, evars);
      return;
    case CanonicalType::Kind::Arrow:
      collect_alphabet(t.from(), atoms, evars);
      collect_alphabet(t.to(), atoms, evars);
      return;
    case CanonicalType::Kind::Inter:
      for (const auto& p : t.parts()) collect_alphabet(p, atoms, evars);
      return;
  }
}

// All ordered pairs of nonempty part subsets whose union is the whole list.
std::vector<std::pair<CanonicalType, CanonicalType>> cover_pairs(
    const CanonicalType& t) {
  std::vector<CanonicalType> parts = t.part_list();
  std::vector<std::pair<CanonicalType, CanonicalType>> out;
  if (parts.size() == 1) {
    out.emplace_back(t, t);
    return out;
  }
  if (parts.size() > 5) return out;  // outside the desk-scale regime
  const unsigned full = (1u << parts.size()) - 1;
  auto build = [&](unsigned mask) {
    std::vector<CanonicalType> sel;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (mask & (1u << i)) sel.push_back(parts[i]);
    }
    return sel.size() == 1 ? sel.front() : CanonicalType::inter(sel);
  };
  for (unsigned a = 1; a <= full; ++a) {
    unsigned rest = full & ~a;
    // b must contain every part missing from a; extras range over a.
    unsigned extras = a;
    for (unsigned sub = extras;; sub = (sub - 1) & extras) {
      unsigned b = rest | sub;
      if (b != 0) out.emplace_back(build(a), build(b));
      if (sub == 0) break;
    }
  }
  return out;
}

struct MemoEntry {
  std::optional<Derivation> proof;
  unsigned failed_at = 0;
};

}  // namespace

struct TypingSearcher::Impl {
  System system;
  SearchBounds bounds;
  std::vector<std::string> atoms;
  std::vector<std::string> evars;

  std::optional<std::vector<CanonicalType>> universe_cache;
  SubtypeCache subtype_cache;
  std::unordered_map<std::string, MemoEntry> memo;
  std::map<CanonicalType, std::vector<CanonicalType>> down_sets;
  std::map<CanonicalType, std::vector<CanonicalType>> up_sets;
  std::uint64_t nodes = 0;
  bool budget_exceeded = false;

  const std::vector<CanonicalType>& universe() {
    if (!universe_cache) {
      TypeEnumOptions opts;
      opts.atoms = atoms;
      opts.evars = evars;
      opts.max_size = bounds.type_size;
      opts.max_evar_depth = bounds.evar_depth;
      opts.require_good = true;
      opts.require_u = system == System::S2;
      universe_cache = enumerate_types(opts);
    }
    return *universe_cache;
  }

  bool subtype_le(const CanonicalType& a, const CanonicalType& b) {
    if (a == b) return true;
    return check_subtype_declarative(SubtypeGoal::types(a, b),
                                     kDefaultSubtypeDepth, subtype_cache)
        .derivable();
  }

  const std::vector<CanonicalType>& down_set(const CanonicalType& t) {
    auto it = down_sets.find(t);
    if (it != down_sets.end()) return it->second;
    std::vector<CanonicalType> out;
    for (const auto& c : universe()) {
      if (c.degree() != t.degree()) continue;
      if (subtype_le(c, t)) out.push_back(c);
    }
    return down_sets.emplace(t, std::move(out)).first->second;
  }

  const std::vector<CanonicalType>& up_set(const CanonicalType& t) {
    auto it = up_sets.find(t);
    if (it != up_sets.end()) return it->second;
    std::vector<CanonicalType> out;
    for (const auto& c : universe()) {
      if (c.degree() != t.degree()) continue;
      if (subtype_le(t, c)) out.push_back(c);
    }
    return up_sets.emplace(t, std::move(out)).first->second;
  }

  bool types_admissible(const Judgment& j) {
    if (!j.result.good() || j.result.size() > bounds.type_size) return false;
    if (j.result.degree() != j.subject.degree()) return false;
    if (j.system == System::S2 && !j.result.in_u()) return false;
    for (const auto& [name, entry] : j.env.bindings()) {
      const CanonicalType& w = entry.second;
      if (!w.good() || w.size() > bounds.type_size) return false;
      if (w.degree() != entry.first) return false;
      if (j.system == System::S2 && !w.in_u()) return false;
    }
    return true;
  }

  // Structural necessities: environments bind exactly the free variables and
  // subjects of derivable judgments are good.
  bool shape_admissible(const Judgment& j) {
    if (!j.subject.good()) return false;
    const auto& fv = j.subject.free_vars();
    if (fv.size() != j.env.size()) return false;
    for (const auto& v : fv) {
      if (!j.env.lookup(v)) return false;
    }
    return true;
  }

  std::optional<Derivation> search(const Judgment& j, unsigned depth) {
    if (budget_exceeded) return std::nullopt;
    if (++nodes > bounds.node_budget) {
      budget_exceeded = true;
      return std::nullopt;
    }
    if (!shape_admissible(j) || !types_admissible(j)) return std::nullopt;

    std::string key = judgment_key(j);
    auto it = memo.find(key);
    if (it != memo.end()) {
      if (it->second.proof) return it->second.proof;
      if (it->second.failed_at >= depth) return std::nullopt;
    }
    if (depth == 0) return std::nullopt;

    std::optional<Derivation> proof = dispatch(j, depth);

    if (budget_exceeded) return proof;  // do not cache partial failures
    auto& entry = memo[key];
    if (proof) {
      entry.proof = proof;
    } else {
      entry.failed_at = std::max(entry.failed_at, depth);
    }
    return proof;
  }

  std::optional<Derivation> dispatch(const Judgment& j, unsigned depth) {
    switch (j.subject.kind()) {
      case Term::Kind::Var: {
        if (bounds.use_var_characterization) return var_shortcut(j);
        if (auto p = try_ax(j)) return p;
        break;
      }
      case Term::Kind::Lam: {
        if (auto p = try_arr_i(j, depth)) return p;
        break;
      }
      case Term::Kind::App: {
        if (auto p = try_arr_e(j, depth)) return p;
        break;
      }
    }
    if (auto p = try_exp(j, depth)) return p;
    if (auto p = try_inter(j, depth)) return p;
    if (j.system == System::S2) {
      if (auto p = try_sub(j, depth)) return p;
    }
    return std::nullopt;
  }

  std::optional<Derivation> try_ax(const Judgment& j) {
    const IndexedVar& v = j.subject.var_info();
    auto bound = j.env.lookup(v);
    if (!bound || !(*bound == j.result)) return std::nullopt;
    if (j.system == System::S1) {
      if (j.result.degree() != v.degree) return std::nullopt;
    } else {
      if (v.degree != 0 || !j.result.in_t()) return std::nullopt;
    }
    return Derivation::ax(j);
  }

  // Variable judgments admit a closed characterization: in system 1 the
  // result must equal the bound type; in system 2 the bound type must be a
  // declarative subtype of the result. Validated differentially against the
  // rule-by-rule search.
  std::optional<Derivation> var_shortcut(const Judgment& j) {
    const IndexedVar& v = j.subject.var_info();
    auto bound = j.env.lookup(v);
    if (!bound) return std::nullopt;
    const CanonicalType& bound_type = *bound;
    if (j.system == System::S1) {
      if (!(bound_type == j.result)) return std::nullopt;
      return Derivation::ax(j);
    }
    auto refl = refl_var_derivation(v, bound_type);
    if (!refl) return std::nullopt;
    if (bound_type == j.result) return refl;
    SubtypeGoal goal = SubtypeGoal::typings(j.env, bound_type, j.env,
                                            j.result);
    auto evidence =
        check_subtype_declarative(goal, kDefaultSubtypeDepth, subtype_cache);
    if (!evidence.derivable()) return std::nullopt;
    return Derivation::sub(j, *evidence.proof, *refl);
  }

  // x^n : <(x^n : V) |-2 V> for good V of matching degree.
  std::optional<Derivation> refl_var_derivation(const IndexedVar& v,
                                                const CanonicalType& type) {
    if (!type.good() || type.degree() != v.degree) return std::nullopt;
    switch (type.kind()) {
      case CanonicalType::Kind::Atom:
      case CanonicalType::Kind::Arrow: {
        if (v.degree != 0 || !type.in_t()) return std::nullopt;
        Judgment j{Term::var(v), TypeEnv::empty().with(v, type), System::S2,
                   type};
        return Derivation::ax(j);
      }
      case CanonicalType::Kind::Exp: {
        if (v.degree == 0) return std::nullopt;
        IndexedVar lower_v{v.name, v.degree - 1};
        auto premise = refl_var_derivation(lower_v, type.exp_body());
        if (!premise) return std::nullopt;
        Judgment j{Term::var(v), TypeEnv::empty().with(v, type), System::S2,
                   type};
        return Derivation::exp(j, type.evar(), *premise);
      }
      case CanonicalType::Kind::Inter: {
        const auto& parts = type.parts();
        std::optional<Derivation> acc;
        CanonicalType acc_type = parts.front();
        for (std::size_t i = 0; i < parts.size(); ++i) {
          auto piece = refl_var_derivation(v, parts[i]);
          if (!piece) return std::nullopt;
          if (!acc) {
            acc = piece;
            acc_type = parts[i];
            continue;
          }
          acc_type = CanonicalType::meet(acc_type, parts[i]);
          Judgment j{Term::var(v), TypeEnv::empty().with(v, acc_type),
                     System::S2, acc_type};
          acc = Derivation::inter(j, *acc, *piece);
        }
        return acc;
      }
    }
    return std::nullopt;
  }

  std::optional<Derivation> try_arr_i(const Judgment& j, unsigned depth) {
    if (j.result.kind() != CanonicalType::Kind::Arrow) return std::nullopt;
    if (j.system == System::S2 && !j.result.to().in_t()) return std::nullopt;
    const IndexedVar& binder = j.subject.binder();
    TypeEnv inner = j.env.with(binder, j.result.from());
    Judgment premise{j.subject.body(), inner, j.system, j.result.to()};
    auto p = search(premise, depth - 1);
    if (!p) return std::nullopt;
    return Derivation::arr_i(j, *p);
  }

  // Pointwise environment splits for a two-premise rule whose premises bind
  // the given variable sets.
  std::vector<std::pair<TypeEnv, TypeEnv>> env_splits(
      const TypeEnv& env, const std::vector<IndexedVar>& left_vars,
      const std::vector<IndexedVar>& right_vars) {
    std::vector<std::pair<TypeEnv, TypeEnv>> acc{{TypeEnv::empty(),
                                                  TypeEnv::empty()}};
    std::set<IndexedVar> left(left_vars.begin(), left_vars.end());
    std::set<IndexedVar> right(right_vars.begin(), right_vars.end());
    for (const auto& [name, entry] : env.bindings()) {
      IndexedVar v{name, entry.first};
      bool in_l = left.count(v) > 0;
      bool in_r = right.count(v) > 0;
      std::vector<std::pair<TypeEnv, TypeEnv>> next;
      if (in_l && in_r) {
        for (const auto& [t1, t2] : cover_pairs(entry.second)) {
          for (const auto& [e1, e2] : acc) {
            next.emplace_back(e1.with(v, t1), e2.with(v, t2));
          }
        }
      } else if (in_l) {
        for (const auto& [e1, e2] : acc) {
          next.emplace_back(e1.with(v, entry.second), e2);
        }
      } else if (in_r) {
        for (const auto& [e1, e2] : acc) {
          next.emplace_back(e1, e2.with(v, entry.second));
        }
      } else {
        return {};  // binding outside both premises: no valid split
      }
      acc = std::move(next);
    }
    return acc;
  }

  std::optional<Derivation> try_arr_e(const Judgment& j, unsigned depth) {
    if (j.system == System::S2 && !j.result.in_t()) return std::nullopt;
    const Term& fn = j.subject.fn();
    const Term& arg = j.subject.arg();
    auto splits = env_splits(j.env, fn.free_vars(), arg.free_vars());
    if (splits.empty()) return std::nullopt;

    for (const auto& v : universe()) {
      if (v.degree() != arg.degree()) continue;
      if (v.degree() < j.result.degree()) continue;  // arrow must be good
      unsigned arrow_size = 1 + v.size() + j.result.size();
      if (arrow_size > bounds.type_size) continue;
      CanonicalType arrow = CanonicalType::arrow(v, j.result);
      if (!arrow.good()) continue;
      if (j.system == System::S2 && !arrow.in_u()) continue;
      for (const auto& [env_fn, env_arg] : splits) {
        Judgment pf{fn, env_fn, j.system, arrow};
        auto proof_fn = search(pf, depth - 1);
        if (!proof_fn) continue;
        Judgment pa{arg, env_arg, j.system, v};
        auto proof_arg = search(pa, depth - 1);
        if (!proof_arg) continue;
        return Derivation::arr_e(j, *proof_fn, *proof_arg);
      }
    }
    return std::nullopt;
  }

  std::optional<Derivation> try_inter(const Judgment& j, unsigned depth) {
    auto result_splits = cover_pairs(j.result);
    auto splits = env_splits(j.env, j.subject.free_vars(),
                             j.subject.free_vars());
    for (const auto& [u1, u2] : result_splits) {
      for (const auto& [e1, e2] : splits) {
        Judgment p1{j.subject, e1, j.system, u1};
        Judgment p2{j.subject, e2, j.system, u2};
        if (p1 == j || p2 == j) continue;  // a shorter derivation exists
        auto proof1 = search(p1, depth - 1);
        if (!proof1) continue;
        auto proof2 = search(p2, depth - 1);
        if (!proof2) continue;
        return Derivation::inter(j, *proof1, *proof2);
      }
    }
    return std::nullopt;
  }

  std::optional<Derivation> try_exp(const Judgment& j, unsigned depth) {
    if (j.subject.degree() == 0) return std::nullopt;
    for (const auto& id : evars) {
      EVarName e{id};
      auto body = undistribute_exp(j.result, e);
      if (!body) continue;
      TypeEnv inner;
      bool ok = true;
      for (const auto& [name, entry] : j.env.bindings()) {
        if (entry.first == 0) {
          ok = false;
          break;
        }
        auto stripped = undistribute_exp(entry.second, e);
        if (!stripped) {
          ok = false;
          break;
        }
        inner = inner.with(IndexedVar{name, entry.first - 1}, *stripped);
      }
      if (!ok) continue;
      Judgment premise{lower(j.subject), inner, j.system, *body};
      auto p = search(premise, depth - 1);
      if (!p) continue;
      return Derivation::exp(j, e, *p);
    }
    return std::nullopt;
  }

  std::optional<Derivation> try_sub(const Judgment& j, unsigned depth) {
    // Premise typing: result from the down-set, bindings from the up-sets.
    std::vector<std::pair<IndexedVar, std::vector<CanonicalType>>> binding_ups;
    for (const auto& [name, entry] : j.env.bindings()) {
      binding_ups.emplace_back(IndexedVar{name, entry.first},
                               up_set(entry.second));
      if (binding_ups.back().second.empty()) return std::nullopt;
    }

    std::vector<TypeEnv> env_candidates{TypeEnv::empty()};
    for (const auto& [v, ups] : binding_ups) {
      std::vector<TypeEnv> next;
      next.reserve(env_candidates.size() * ups.size());
      for (const auto& env : env_candidates) {
        for (const auto& t : ups) next.push_back(env.with(v, t));
      }
      env_candidates = std::move(next);
      if (env_candidates.size() > 20000) return std::nullopt;  // budget guard
    }

    for (const auto& u0 : down_set(j.result)) {
      for (const auto& env0 : env_candidates) {
        if (u0 == j.result && env0 == j.env) continue;
        Judgment premise{j.subject, env0, j.system, u0};
        auto p = search(premise, depth - 1);
        if (!p) continue;
        SubtypeGoal goal =
            SubtypeGoal::typings(env0, u0, j.env, j.result);
        auto evidence = check_subtype_declarative(goal, kDefaultSubtypeDepth,
                                                  subtype_cache);
        if (!evidence.derivable()) continue;
        return Derivation::sub(j, *evidence.proof, *p);
      }
    }
    return std::nullopt;
  }
};

TypingSearcher::TypingSearcher(System system, SearchBounds bounds,
                               std::vector<std::string> atoms,
                               std::vector<std::string> evars)
    : impl_(std::make_shared<Impl>()) {
  impl_->system = system;
  impl_->bounds = bounds;
  impl_->atoms = std::move(atoms);
  impl_->evars = std::move(evars);
  if (impl_->atoms.empty()) impl_->atoms = {"a"};
  if (impl_->evars.empty()) {
    impl_->evars = evar_mode() == EVarMode::Single
                       ? std::vector<std::string>{kCanonicalEVar}
                       : std::vector<std::string>{"e1", "e2"};
  }
}

SearchOutcome TypingSearcher::check(const Judgment& goal) {
  impl_->budget_exceeded = false;
  auto proof = impl_->search(goal, impl_->bounds.depth);
  SearchOutcome out;
  out.nodes = impl_->nodes;
  if (proof) {
    out.verdict = SearchVerdict::Derivable;
    out.proof = proof;
  } else if (impl_->budget_exceeded) {
    out.verdict = SearchVerdict::Unknown;
  } else {
    out.verdict = SearchVerdict::NotDerivableWithinBounds;
  }
  return out;
}

std::vector<Derivation> TypingSearcher::enumerate_results(const Term& subject,
                                                          const TypeEnv& env,
                                                          std::size_t limit) {
  std::vector<Derivation> out;
  for (const auto& u : impl_->universe()) {
    if (u.degree() != subject.degree()) continue;
    Judgment goal{subject, env, impl_->system, u};
    auto res = check(goal);
    if (res.verdict == SearchVerdict::Derivable) {
      out.push_back(*res.proof);
      if (out.size() >= limit) break;
    }
  }
  return out;
}

const std::vector<CanonicalType>& TypingSearcher::universe() {
  return impl_->universe();
}

TypingSearcher searcher_for(const Judgment& goal, const SearchBounds& bounds) {
  std::set<std::string> atoms(bounds.extra_atoms.begin(),
                              bounds.extra_atoms.end());
  std::set<std::string> evars;
  collect_alphabet(goal.result, atoms, evars);
  for (const auto& [name, entry] : goal.env.bindings()) {
    collect_alphabet(entry.second, atoms, evars);
  }
  if (evar_mode() == EVarMode::Single) evars.insert(kCanonicalEVar);
  return TypingSearcher(goal.system, bounds,
                        {atoms.begin(), atoms.end()},
                        {evars.begin(), evars.end()});
}

SearchOutcome check_judgment(const Judgment& goal, const SearchBounds& bounds) {
  return searcher_for(goal, bounds).check(goal);
}

std::optional<Derivation> search_typing(const Term& subject, System system,
                                        const Typing& goal,
                                        const SearchBounds& bounds) {
  Judgment j{subject, goal.env, system, goal.type};
  auto out = check_judgment(j, bounds);
  return out.proof;
}

std::vector<Derivation> search_typings(const Term& subject, System system,
                                       const SearchBounds& bounds,
                                       std::size_t limit) {
  std::vector<std::string> atoms =
      bounds.extra_atoms.empty() ? std::vector<std::string>{"a", "b"}
                                 : bounds.extra_atoms;
  std::vector<std::string> evars =
      evar_mode() == EVarMode::Single
          ? std::vector<std::string>{kCanonicalEVar}
          : std::vector<std::string>{"e1", "e2"};
  TypingSearcher searcher(system, bounds, atoms, evars);

  std::vector<Derivation> out;
  const auto& fv = subject.free_vars();
  if (fv.empty()) {
    return searcher.enumerate_results(subject, TypeEnv::empty(), limit);
  }

  // Candidate environments: per-variable degree-matched types from the
  // universe.
  std::vector<TypeEnv> envs{TypeEnv::empty()};
  for (const auto& v : fv) {
    std::vector<TypeEnv> next;
    for (const auto& t : searcher.universe()) {
      if (t.degree() != v.degree) continue;
      for (const auto& env : envs) next.push_back(env.with(v, t));
    }
    envs = std::move(next);
    if (envs.size() > 50000) break;  // keep the candidate space bounded
  }
  for (const auto& env : envs) {
    auto found = searcher.enumerate_results(subject, env, limit - out.size());
    for (auto& d : found) {
      out.push_back(std::move(d));
      if (out.size() >= limit) return out;
    }
  }
  return out;
}

}  // namespace evlam
