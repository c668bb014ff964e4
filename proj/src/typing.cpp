#include "evlam/typing.hpp"

#include <sstream>

namespace evlam {

const char* to_string(System s) {
  return s == System::S1 ? "1" : "2";
}

Judgment Judgment::make(Term subject, TypeEnv env, System system,
                        CanonicalType result) {
  if (system == System::S2) {
    if (!result.in_u()) {
      fail(ErrorCode::GrammarViolation,
           "result type " + to_string(result) +
               " lies outside the restricted grammar");
    }
    for (const auto& [name, entry] : env.bindings()) {
      if (!entry.second.in_u()) {
        fail(ErrorCode::GrammarViolation,
             "environment type for '" + name.base +
                 "' lies outside the restricted grammar");
      }
    }
  }
  return Judgment{std::move(subject), std::move(env), system,
                  std::move(result)};
}

bool operator==(const Judgment& a, const Judgment& b) {
  return a.system == b.system && a.subject == b.subject && a.env == b.env &&
         a.result == b.result;
}

std::string to_string(const Judgment& j) {
  std::string env = to_string(j.env);
  if (env.empty()) env = "()";
  return to_string(j.subject) + " : <" + env + " |-" + to_string(j.system) +
         " " + to_string(j.result) + ">";
}

std::string judgment_key(const Judgment& j) {
  std::string env = to_string(j.env);
  return alpha_key(j.subject) + "|" + env + "|" + to_string(j.system) + "|" +
         to_string(j.result);
}

const char* to_string(Rule r) {
  switch (r) {
    case Rule::Ax: return "ax";
    case Rule::ArrI: return "arr_i";
    case Rule::ArrE: return "arr_e";
    case Rule::Inter: return "inter";
    case Rule::Exp: return "exp";
    case Rule::Sub: return "sub";
  }
  return "unknown";
}

Derivation Derivation::ax(const Judgment& conclusion) {
  return Derivation{Rule::Ax, conclusion, {}, std::nullopt, std::nullopt};
}

Derivation Derivation::arr_i(const Judgment& conclusion, Derivation premise) {
  return Derivation{Rule::ArrI, conclusion, {std::move(premise)},
                    std::nullopt, std::nullopt};
}

Derivation Derivation::arr_e(const Judgment& conclusion, Derivation fn,
                             Derivation arg) {
  return Derivation{Rule::ArrE, conclusion,
                    {std::move(fn), std::move(arg)}, std::nullopt,
                    std::nullopt};
}

Derivation Derivation::inter(const Judgment& conclusion, Derivation left,
                             Derivation right) {
  return Derivation{Rule::Inter, conclusion,
                    {std::move(left), std::move(right)}, std::nullopt,
                    std::nullopt};
}

Derivation Derivation::exp(const Judgment& conclusion, const EVarName& e,
                           Derivation premise) {
  return Derivation{Rule::Exp, conclusion, {std::move(premise)}, e,
                    std::nullopt};
}

Derivation Derivation::sub(const Judgment& conclusion,
                           SubtypeDerivation evidence, Derivation premise) {
  return Derivation{Rule::Sub, conclusion, {std::move(premise)},
                    std::nullopt, std::move(evidence)};
}

namespace {

[[noreturn]] void node_fail(const std::vector<int>& path,
                            const std::string& reason) {
  throw RuleMismatchError(path, reason);
}

void check_node(const Derivation& d, std::vector<int>& path) {
  const Judgment& c = d.conclusion;

  // Judgment-level sanity shared by every rule: the environment binds
  // exactly the free variables of the subject.
  {
    const auto& fv = c.subject.free_vars();
    if (fv.size() != c.env.size()) {
      node_fail(path, "environment does not bind exactly the free variables");
    }
    for (const auto& v : fv) {
      if (!c.env.lookup(v)) {
        node_fail(path, "environment misses " + to_string(v));
      }
    }
  }
  if (c.system == System::S2) {
    if (!c.result.in_u()) {
      node_fail(path, "result type outside the restricted grammar");
    }
    for (const auto& [name, entry] : c.env.bindings()) {
      if (!entry.second.in_u()) {
        node_fail(path, "environment type outside the restricted grammar");
      }
    }
  }

  auto premise_count = [&](std::size_t n) {
    if (d.premises.size() != n) {
      node_fail(path, std::string(to_string(d.rule)) + " expects " +
                          std::to_string(n) + " premises");
    }
  };
  auto same_system = [&](const Derivation& p) {
    if (p.conclusion.system != c.system) {
      node_fail(path, "premise changes the system");
    }
  };

  switch (d.rule) {
    case Rule::Ax: {
      premise_count(0);
      if (c.subject.kind() != Term::Kind::Var) {
        node_fail(path, "axiom subject must be a variable");
      }
      const IndexedVar& v = c.subject.var_info();
      if (c.env.size() != 1 || !c.env.lookup(v) ||
          !(*c.env.lookup(v) == c.result)) {
        node_fail(path, "axiom environment must be exactly the subject "
                        "bound to the result type");
      }
      if (!c.result.good()) {
        node_fail(path, "axiom type must be good");
      }
      if (c.system == System::S1) {
        if (c.result.degree() != v.degree) {
          node_fail(path, "axiom type degree must match the variable");
        }
      } else {
        if (v.degree != 0) {
          node_fail(path, "axiom variables have degree 0");
        }
        if (!c.result.in_t()) {
          node_fail(path, "axiom type must be in the arrow grammar");
        }
      }
      break;
    }
    case Rule::ArrI: {
      premise_count(1);
      same_system(d.premises[0]);
      const Judgment& p = d.premises[0].conclusion;
      if (c.subject.kind() != Term::Kind::Lam) {
        node_fail(path, "abstraction rule needs an abstraction subject");
      }
      if (c.result.kind() != CanonicalType::Kind::Arrow) {
        node_fail(path, "abstraction rule concludes an arrow");
      }
      const IndexedVar& binder = c.subject.binder();
      if (!(p.subject == c.subject.body())) {
        node_fail(path, "premise subject must be the abstraction body");
      }
      auto bound = p.env.lookup(binder);
      if (!bound || !(*bound == c.result.from())) {
        node_fail(path, "premise must bind the binder at the arrow source");
      }
      if (!(p.env.without(binder) == c.env)) {
        node_fail(path, "conclusion environment must drop only the binder");
      }
      if (!(p.result == c.result.to())) {
        node_fail(path, "premise result must be the arrow target");
      }
      if (c.system == System::S2 && !p.result.in_t()) {
        node_fail(path, "arrow target outside the arrow grammar");
      }
      break;
    }
    case Rule::ArrE: {
      premise_count(2);
      same_system(d.premises[0]);
      same_system(d.premises[1]);
      const Judgment& pf = d.premises[0].conclusion;
      const Judgment& pa = d.premises[1].conclusion;
      if (c.subject.kind() != Term::Kind::App) {
        node_fail(path, "application rule needs an application subject");
      }
      if (!(pf.subject == c.subject.fn()) ||
          !(pa.subject == c.subject.arg())) {
        node_fail(path, "premise subjects must be the application parts");
      }
      if (pf.result.kind() != CanonicalType::Kind::Arrow) {
        node_fail(path, "function premise must have an arrow type");
      }
      if (!(pf.result.from() == pa.result)) {
        node_fail(path, "argument type must match the arrow source");
      }
      if (!(pf.result.to() == c.result)) {
        node_fail(path, "conclusion type must be the arrow target");
      }
      if (!env_joinable(pf.env, pa.env)) {
        node_fail(path, "premise environments are not joinable");
      }
      if (!(env_meet(pf.env, pa.env) == c.env)) {
        node_fail(path, "conclusion environment must be the meet");
      }
      break;
    }
    case Rule::Inter: {
      premise_count(2);
      same_system(d.premises[0]);
      same_system(d.premises[1]);
      const Judgment& pl = d.premises[0].conclusion;
      const Judgment& pr = d.premises[1].conclusion;
      if (!(pl.subject == c.subject) || !(pr.subject == c.subject)) {
        node_fail(path, "intersection premises must share the subject");
      }
      if (!env_joinable(pl.env, pr.env)) {
        node_fail(path, "premise environments are not joinable");
      }
      if (!(env_meet(pl.env, pr.env) == c.env)) {
        node_fail(path, "conclusion environment must be the meet");
      }
      if (!(CanonicalType::meet(pl.result, pr.result) == c.result)) {
        node_fail(path, "conclusion type must be the meet of the premises");
      }
      break;
    }
    case Rule::Exp: {
      premise_count(1);
      same_system(d.premises[0]);
      if (!d.evar) {
        node_fail(path, "expansion rule needs its variable");
      }
      const Judgment& p = d.premises[0].conclusion;
      if (!(c.subject == lift(p.subject))) {
        node_fail(path, "subject must be the lift of the premise subject");
      }
      if (!(c.env == env_expand(*d.evar, p.env))) {
        node_fail(path, "environment must be the expanded premise "
                        "environment");
      }
      if (!(c.result == CanonicalType::exp(*d.evar, p.result))) {
        node_fail(path, "result must be the expansion of the premise result");
      }
      break;
    }
    case Rule::Sub: {
      premise_count(1);
      same_system(d.premises[0]);
      if (c.system != System::S2) {
        node_fail(path, "subsumption is only available in system 2");
      }
      if (!d.evidence) {
        node_fail(path, "subsumption needs subtyping evidence");
      }
      const Judgment& p = d.premises[0].conclusion;
      if (!(p.subject == c.subject)) {
        node_fail(path, "subsumption premise must share the subject");
      }
      const SubtypeGoal& g = d.evidence->goal;
      if (g.kind != SubtypeGoal::Kind::Typing || !(*g.le == p.env) ||
          !(*g.lt == p.result) || !(*g.re == c.env) ||
          !(*g.rt == c.result)) {
        node_fail(path, "evidence must relate premise and conclusion "
                        "typings");
      }
      try {
        check_subtype_evidence(*d.evidence);
      } catch (const Error& e) {
        node_fail(path, std::string("bad subtyping evidence: ") + e.what());
      }
      break;
    }
  }

  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    path.push_back(static_cast<int>(i));
    check_node(d.premises[i], path);
    path.pop_back();
  }
}

}  // namespace

Judgment check_derivation(const Derivation& d) {
  std::vector<int> path;
  check_node(d, path);
  return d.conclusion;
}

PropertyReport typable_properties(const Derivation& d) {
  PropertyReport report;
  Judgment j = check_derivation(d);
  report.require(j.subject.good(), "subject is good");
  report.require(j.result.good(), "result type is good");
  report.require(env_good(j.env), "environment is good");
  report.require(j.subject.degree() == j.result.degree(),
                 "subject degree equals type degree");
  for (const auto& site : redexes(j.subject)) {
    report.require(site.fires, "no blocked redex at " + to_string(site));
  }
  return report;
}

}  // namespace evlam
