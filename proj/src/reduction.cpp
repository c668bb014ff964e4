#include "evlam/reduction.hpp"

#include <sstream>

namespace evlam {

std::string to_string(const RedexSite& site) {
  std::ostringstream os;
  if (site.path.empty()) {
    os << "root";
  } else {
    for (std::size_t i = 0; i < site.path.size(); ++i) {
      if (i) os << '.';
      os << site.path[i];
    }
  }
  os << (site.fires ? " (fires)" : " (blocked)");
  return os.str();
}

namespace {

void collect_redexes(const Term& t, std::vector<unsigned>& path,
                     std::vector<RedexSite>& out) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return;
    case Term::Kind::App: {
      if (t.fn().kind() == Term::Kind::Lam) {
        RedexSite site;
        site.path = path;
        site.binder = t.fn().binder();
        site.argument_degree = t.arg().degree();
        site.fires = site.argument_degree == site.binder.degree;
        out.push_back(std::move(site));
      }
      path.push_back(0);
      collect_redexes(t.fn(), path, out);
      path.back() = 1;
      collect_redexes(t.arg(), path, out);
      path.pop_back();
      return;
    }
    case Term::Kind::Lam:
      path.push_back(0);
      collect_redexes(t.body(), path, out);
      path.pop_back();
      return;
  }
}

Term rebuild_at(const Term& t, const std::vector<unsigned>& path,
                std::size_t i, const Term& replacement) {
  if (i == path.size()) return replacement;
  switch (t.kind()) {
    case Term::Kind::App:
      if (path[i] == 0) {
        return Term::app(rebuild_at(t.fn(), path, i + 1, replacement),
                         t.arg());
      }
      if (path[i] == 1) {
        return Term::app(t.fn(),
                         rebuild_at(t.arg(), path, i + 1, replacement));
      }
      break;
    case Term::Kind::Lam:
      if (path[i] == 0) {
        return Term::lam(t.binder(),
                         rebuild_at(t.body(), path, i + 1, replacement));
      }
      break;
    case Term::Kind::Var:
      break;
  }
  fail(ErrorCode::InvalidSite, "path leaves the term");
}

const Term& locate(const Term& t, const std::vector<unsigned>& path) {
  const Term* cur = &t;
  for (unsigned sel : path) cur = &cur->child(sel);
  return *cur;
}

}  // namespace

std::vector<RedexSite> redexes(const Term& t) {
  std::vector<RedexSite> out;
  std::vector<unsigned> path;
  collect_redexes(t, path, out);
  return out;
}

Term step(const Term& t, const RedexSite& site) {
  const Term& target = locate(t, site.path);
  if (target.kind() != Term::Kind::App ||
      target.fn().kind() != Term::Kind::Lam) {
    fail(ErrorCode::InvalidSite, "site does not address a redex");
  }
  const Term& lam = target.fn();
  if (lam.binder() != site.binder ||
      target.arg().degree() != site.argument_degree) {
    fail(ErrorCode::InvalidSite, "site does not match the redex shape");
  }
  if (!site.fires || target.arg().degree() != lam.binder().degree) {
    fail(ErrorCode::BlockedRedex,
         "argument degree " + std::to_string(target.arg().degree()) +
             " does not match binder " + to_string(lam.binder()));
  }
  Term contractum =
      substitute(lam.body(), {{lam.binder(), target.arg()}});
  return rebuild_at(t, site.path, 0, contractum);
}

bool is_normal(const Term& t) {
  for (const auto& site : redexes(t)) {
    if (site.fires) return false;
  }
  return true;
}

ReductionTrace reduce_leftmost(const Term& t, unsigned fuel) {
  ReductionTrace trace{t, {}, false};
  Term cur = t;
  for (unsigned i = 0; i < fuel; ++i) {
    const RedexSite* firing = nullptr;
    auto sites = redexes(cur);
    for (const auto& s : sites) {
      if (s.fires) {
        firing = &s;
        break;
      }
    }
    if (!firing) return trace;
    cur = step(cur, *firing);
    trace.steps.emplace_back(*firing, cur);
  }
  trace.exhausted_fuel = !is_normal(cur);
  return trace;
}

bool ReductSet::contains(const Term& t) const {
  return index_.count(alpha_key(t)) > 0;
}

ReductSet all_reducts(const Term& t, unsigned fuel) {
  ReductSet set;
  set.terms.push_back(t);
  set.index_.emplace(alpha_key(t), 0);

  std::vector<Term> frontier{t};
  for (unsigned level = 0; level < fuel && !frontier.empty(); ++level) {
    std::vector<Term> next;
    for (const auto& cur : frontier) {
      for (const auto& site : redexes(cur)) {
        if (!site.fires) continue;
        Term reduct = step(cur, site);
        set.edges.push_back(ReductEdge{cur, site, reduct});
        auto [it, inserted] =
            set.index_.emplace(alpha_key(reduct), set.terms.size());
        if (inserted) {
          set.terms.push_back(reduct);
          next.push_back(reduct);
        }
      }
    }
    frontier = std::move(next);
  }
  set.complete = frontier.empty();
  return set;
}

const char* to_string(Reach r) {
  switch (r) {
    case Reach::Yes: return "yes";
    case Reach::NoWithinFuel: return "no-within-fuel";
    case Reach::Unknown: return "unknown";
  }
  return "unknown";
}

Reach reduces_to(const Term& m, const Term& n, unsigned fuel) {
  if (alpha_eq(m, n)) return Reach::Yes;
  ReductSet set = all_reducts(m, fuel);
  if (set.contains(n)) return Reach::Yes;
  return set.complete ? Reach::NoWithinFuel : Reach::Unknown;
}

Reach beta_eq(const Term& m, const Term& n, unsigned fuel) {
  ReductSet a = all_reducts(m, fuel);
  if (a.contains(n)) return Reach::Yes;
  ReductSet b = all_reducts(n, fuel);
  for (const auto& t : b.terms) {
    if (a.contains(t)) return Reach::Yes;
  }
  return a.complete && b.complete ? Reach::NoWithinFuel : Reach::Unknown;
}

}  // namespace evlam
