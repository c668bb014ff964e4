#include "evlam/enumerate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace evlam {

namespace {

// Exact-size generation. The scope carries every variable the term may use;
// free-name degree agreement is enforced by the joinability check on
// application construction.
void gen_terms(unsigned size, const std::vector<IndexedVar>& scope,
               unsigned depth, unsigned max_var_degree,
               const std::set<std::string>& taken_names,
               std::vector<Term>& out) {
  if (size == 0) return;
  if (size == 1) {
    for (const auto& v : scope) out.push_back(Term::var(v));
    return;
  }

  // Abstractions: body of size - 1 with one more variable in scope.
  {
    std::string binder_base = "q" + std::to_string(depth);
    while (taken_names.count(binder_base)) binder_base += "x";
    for (unsigned deg = 0; deg <= max_var_degree; ++deg) {
      IndexedVar binder{VarName::of(binder_base), deg};
      std::vector<IndexedVar> inner = scope;
      inner.push_back(binder);
      std::vector<Term> bodies;
      gen_terms(size - 1, inner, depth + 1, max_var_degree, taken_names,
                bodies);
      for (const auto& body : bodies) {
        if (body.has_free(binder)) out.push_back(Term::lam(binder, body));
      }
    }
  }

  // Applications: split the remaining size between the two children.
  for (unsigned fs = 1; fs + 1 < size; ++fs) {
    unsigned as = size - 1 - fs;
    std::vector<Term> fns, args;
    gen_terms(fs, scope, depth, max_var_degree, taken_names, fns);
    gen_terms(as, scope, depth, max_var_degree, taken_names, args);
    for (const auto& f : fns) {
      for (const auto& a : args) {
        if (f.degree() > a.degree()) continue;  // stay good
        if (!joinable(f, a)) continue;
        out.push_back(Term::app(f, a));
      }
    }
  }
}

}  // namespace

std::vector<Term> enumerate_good_terms(const TermEnumOptions& opts) {
  std::vector<IndexedVar> scope;
  std::set<std::string> taken;
  if (!opts.closed) {
    for (const auto& name : opts.alphabet) {
      taken.insert(name.base);
      for (unsigned d = 0; d <= opts.max_var_degree; ++d) {
        scope.push_back(IndexedVar{name, d});
      }
    }
  }

  std::map<std::string, Term> seen;  // alpha-normalized print -> term
  for (unsigned size = 1; size <= opts.max_size; ++size) {
    std::vector<Term> raw;
    gen_terms(size, scope, 0, opts.max_var_degree, taken, raw);
    for (const auto& t : raw) {
      if (t.degree() != opts.degree) continue;
      if (opts.closed && !t.closed()) continue;
      Term normal = alpha_normalize(t);
      std::string key = std::to_string(size) + "|" + to_string(normal);
      seen.emplace(std::move(key), normal);
    }
  }

  std::vector<Term> out;
  out.reserve(seen.size());
  for (auto& [key, t] : seen) out.push_back(t);
  std::stable_sort(out.begin(), out.end(), [](const Term& a, const Term& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return to_string(a) < to_string(b);
  });
  return out;
}

namespace {

unsigned evar_depth_of(const CanonicalType& t) {
  switch (t.kind()) {
    case CanonicalType::Kind::Atom:
      return 0;
    case CanonicalType::Kind::Exp:
      return 1 + evar_depth_of(t.exp_body());
    case CanonicalType::Kind::Arrow:
      return std::max(evar_depth_of(t.from()), evar_depth_of(t.to()));
    case CanonicalType::Kind::Inter: {
      unsigned d = 0;
      for (const auto& p : t.parts()) d = std::max(d, evar_depth_of(p));
      return d;
    }
  }
  return 0;
}

}  // namespace

std::vector<CanonicalType> enumerate_types(const TypeEnumOptions& opts) {
  // by_size[s] holds every canonical type of exactly s nodes; non_inter
  // mirrors it without intersections (intersection parts and expansion
  // bodies are never intersections in canonical form).
  std::vector<std::vector<CanonicalType>> by_size(opts.max_size + 1);
  std::vector<std::vector<CanonicalType>> non_inter(opts.max_size + 1);

  auto admit = [&](const CanonicalType& t) {
    if (opts.require_good && !t.good()) return false;
    if (opts.require_u && !t.in_u()) return false;
    return true;
  };

  for (unsigned s = 1; s <= opts.max_size; ++s) {
    std::vector<CanonicalType> here;

    if (s == 1) {
      for (const auto& a : opts.atoms) here.push_back(CanonicalType::atom(a));
    }

    // Expansion applications over smaller non-intersection types. Bodies that
    // are intersections would distribute back into intersections, which the
    // intersection clause below already produces.
    if (s >= 2) {
      for (const auto& e : opts.evars) {
        EVarName ev{e};
        for (const auto& body : non_inter[s - 1]) {
          if (evar_depth_of(body) + 1 > opts.max_evar_depth) continue;
          CanonicalType t = CanonicalType::exp(ev, body);
          if (t.size() == s) here.push_back(t);
        }
      }
    }

    // Arrows.
    if (s >= 3) {
      for (unsigned ls = 1; ls + 1 < s; ++ls) {
        unsigned rs = s - 1 - ls;
        for (const auto& l : by_size[ls]) {
          for (const auto& r : by_size[rs]) {
            here.push_back(CanonicalType::arrow(l, r));
          }
        }
      }
    }

    // Intersections: strictly ascending combinations of non-intersection
    // parts drawn from all smaller sizes.
    if (s >= 3) {
      std::vector<CanonicalType> pool;
      for (unsigned k = 1; k + 2 <= s; ++k) {
        for (const auto& t : non_inter[k]) pool.push_back(t);
      }
      std::sort(pool.begin(), pool.end(),
                [](const CanonicalType& a, const CanonicalType& b) {
                  return (a <=> b) < 0;
                });
      std::vector<CanonicalType> chosen;
      std::function<void(std::size_t, unsigned)> pick =
          [&](std::size_t from, unsigned used) {
            if (chosen.size() >= 2 && used + 1 == s) {
              here.push_back(CanonicalType::inter(chosen));
              return;
            }
            for (std::size_t i = from; i < pool.size(); ++i) {
              unsigned next = used + pool[i].size();
              if (next + 1 > s) continue;
              chosen.push_back(pool[i]);
              pick(i + 1, next);
              chosen.pop_back();
            }
          };
      pick(0, 0);
    }

    // Deduplicate and filter.
    std::sort(here.begin(), here.end(),
              [](const CanonicalType& a, const CanonicalType& b) {
                return (a <=> b) < 0;
              });
    here.erase(std::unique(here.begin(), here.end()), here.end());
    for (const auto& t : here) {
      if (t.size() != s) continue;
      if (!admit(t)) continue;
      by_size[s].push_back(t);
      if (t.kind() != CanonicalType::Kind::Inter) {
        non_inter[s].push_back(t);
      }
    }
  }

  std::vector<CanonicalType> out;
  for (unsigned s = 1; s <= opts.max_size; ++s) {
    for (const auto& t : by_size[s]) out.push_back(t);
  }
  return out;
}

}  // namespace evlam
