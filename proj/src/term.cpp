#include "evlam/term.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

namespace evlam {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotJoinable: return "not-joinable";
    case ErrorCode::NotLambdaI: return "not-lambda-i";
    case ErrorCode::DegreeMismatch: return "degree-mismatch";
    case ErrorCode::DegreeUnderflow: return "degree-underflow";
    case ErrorCode::BlockedRedex: return "blocked-redex";
    case ErrorCode::InvalidSite: return "invalid-site";
    case ErrorCode::RuleMismatch: return "rule-mismatch";
    case ErrorCode::GrammarViolation: return "grammar-violation";
    case ErrorCode::ModeError: return "mode-error";
    case ErrorCode::SyntaxError: return "syntax-error";
    case ErrorCode::ValidationError: return "validation-error";
    case ErrorCode::NotClosed: return "not-closed";
  }
  return "unknown";
}

std::string RuleMismatchError::format(const std::vector<int>& path,
                                      const std::string& reason) {
  std::ostringstream os;
  os << "rule mismatch at ";
  if (path.empty()) {
    os << "root";
  } else {
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (i) os << '.';
      os << path[i];
    }
  }
  os << ": " << reason;
  return os.str();
}

VarName VarName::of(std::string spelling) {
  if (spelling.empty()) {
    fail(ErrorCode::ValidationError, "empty variable name");
  }
  VarClass cls = spelling[0] == '_' ? VarClass::Reserved : VarClass::Ordinary;
  return VarName{cls, std::move(spelling)};
}

std::string to_string(const IndexedVar& v) {
  return v.name.base + "^" + std::to_string(v.degree);
}

struct Term::Node {
  Kind kind;
  IndexedVar var;           // Var payload or Lam binder
  std::optional<Term> a;    // App fn / Lam body
  std::optional<Term> b;    // App arg
  unsigned degree = 0;
  bool good = false;
  unsigned size = 1;
  std::vector<IndexedVar> free_sorted;
};

namespace {

std::vector<IndexedVar> merge_free(const std::vector<IndexedVar>& x,
                                   const std::vector<IndexedVar>& y) {
  std::vector<IndexedVar> out;
  out.reserve(x.size() + y.size());
  std::set_union(x.begin(), x.end(), y.begin(), y.end(),
                 std::back_inserter(out));
  return out;
}

bool free_vars_joinable(const std::vector<IndexedVar>& x,
                        const std::vector<IndexedVar>& y,
                        std::string* clash) {
  auto i = x.begin();
  auto j = y.begin();
  while (i != x.end() && j != y.end()) {
    if (i->name < j->name) {
      ++i;
    } else if (j->name < i->name) {
      ++j;
    } else {
      if (i->degree != j->degree) {
        if (clash) *clash = i->name.base;
        return false;
      }
      ++i;
      ++j;
    }
  }
  return true;
}

void collect_bound_bases(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Var:
      break;
    case Term::Kind::App:
      collect_bound_bases(t.fn(), out);
      collect_bound_bases(t.arg(), out);
      break;
    case Term::Kind::Lam:
      out.insert(t.binder().name.base);
      collect_bound_bases(t.body(), out);
      break;
  }
}

// Replaces free occurrences of mapped variables. No capture checks: callers
// guarantee the replacements' free names cannot be captured.
Term replace_free(const Term& t, const std::map<IndexedVar, Term>& repl) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = repl.find(t.var_info());
      return it == repl.end() ? t : it->second;
    }
    case Term::Kind::App:
      return Term::app(replace_free(t.fn(), repl),
                       replace_free(t.arg(), repl));
    case Term::Kind::Lam: {
      // Binders never collide with the mapped variables here (all call sites
      // rename binders away from the targets first).
      return Term::lam(t.binder(), replace_free(t.body(), repl));
    }
  }
  return t;
}

// Renames every binder whose base name lies in `avoid`.
Term rename_binders_avoiding(const Term& t,
                             const std::set<std::string>& avoid) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return t;
    case Term::Kind::App: {
      Term f = rename_binders_avoiding(t.fn(), avoid);
      Term a = rename_binders_avoiding(t.arg(), avoid);
      if (f == t.fn() && a == t.arg()) return t;
      return Term::app(f, a);
    }
    case Term::Kind::Lam: {
      Term body = rename_binders_avoiding(t.body(), avoid);
      IndexedVar b = t.binder();
      if (avoid.count(b.name.base)) {
        std::set<std::string> taken = avoid;
        for (const auto& n : all_base_names(body)) taken.insert(n);
        IndexedVar fresh{VarName::of(fresh_base(b.name.base, taken)),
                         b.degree};
        body = replace_free(body, {{b, Term::var(fresh)}});
        b = fresh;
      } else if (body == t.body()) {
        return t;
      }
      return Term::lam(b, body);
    }
  }
  return t;
}

}  // namespace

std::string fresh_base(const std::string& hint,
                       const std::set<std::string>& avoid) {
  if (!avoid.count(hint)) return hint;
  for (unsigned i = 1;; ++i) {
    std::string candidate = hint + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

Term Term::var(IndexedVar v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->var = v;
  n->degree = v.degree;
  n->good = true;
  n->size = 1;
  n->free_sorted = {v};
  return Term(std::move(n));
}

Term Term::var(const std::string& spelling, unsigned degree) {
  return var(IndexedVar{VarName::of(spelling), degree});
}

Term Term::app(const Term& fn, const Term& arg) {
  std::string clash;
  if (!free_vars_joinable(fn.free_vars(), arg.free_vars(), &clash)) {
    fail(ErrorCode::NotJoinable,
         "application operands disagree on the degree of '" + clash + "'");
  }
  std::set<std::string> frees;
  for (const auto& v : fn.free_vars()) frees.insert(v.name.base);
  for (const auto& v : arg.free_vars()) frees.insert(v.name.base);

  Term f = rename_binders_avoiding(fn, frees);
  std::set<std::string> avoid_for_arg = frees;
  collect_bound_bases(f, avoid_for_arg);
  Term a = rename_binders_avoiding(arg, avoid_for_arg);

  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->degree = std::min(f.degree(), a.degree());
  n->good = f.good() && a.good() && f.degree() <= a.degree();
  n->size = 1 + f.size() + a.size();
  n->free_sorted = merge_free(f.free_vars(), a.free_vars());
  n->a = std::move(f);
  n->b = std::move(a);
  return Term(std::move(n));
}

Term Term::lam(const IndexedVar& binder, const Term& body) {
  if (!body.has_free(binder)) {
    fail(ErrorCode::NotLambdaI,
         "binder " + to_string(binder) + " does not occur free in the body");
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lam;
  n->var = binder;
  n->degree = body.degree();
  n->good = body.good();
  n->size = 1 + body.size();
  n->free_sorted = body.free_vars();
  auto it = std::lower_bound(n->free_sorted.begin(), n->free_sorted.end(),
                             binder);
  n->free_sorted.erase(it);
  n->a = body;
  return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }

const IndexedVar& Term::var_info() const {
  assert(node_->kind == Kind::Var);
  return node_->var;
}

const Term& Term::fn() const {
  assert(node_->kind == Kind::App);
  return *node_->a;
}

const Term& Term::arg() const {
  assert(node_->kind == Kind::App);
  return *node_->b;
}

const IndexedVar& Term::binder() const {
  assert(node_->kind == Kind::Lam);
  return node_->var;
}

const Term& Term::body() const {
  assert(node_->kind == Kind::Lam);
  return *node_->a;
}

const Term& Term::child(unsigned selector) const {
  if (node_->kind == Kind::App) {
    if (selector == 0) return fn();
    if (selector == 1) return arg();
  } else if (node_->kind == Kind::Lam && selector == 0) {
    return body();
  }
  fail(ErrorCode::InvalidSite, "bad child selector");
}

unsigned Term::degree() const { return node_->degree; }
bool Term::good() const { return node_->good; }
unsigned Term::size() const { return node_->size; }

const std::vector<IndexedVar>& Term::free_vars() const {
  return node_->free_sorted;
}

bool Term::closed() const { return node_->free_sorted.empty(); }

bool Term::has_free(const IndexedVar& v) const {
  const auto& fv = node_->free_sorted;
  return std::binary_search(fv.begin(), fv.end(), v);
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->kind != b.node_->kind || a.node_->size != b.node_->size ||
      a.node_->degree != b.node_->degree) {
    return false;
  }
  switch (a.node_->kind) {
    case Term::Kind::Var:
      return a.var_info() == b.var_info();
    case Term::Kind::App:
      return a.fn() == b.fn() && a.arg() == b.arg();
    case Term::Kind::Lam:
      return a.binder() == b.binder() && a.body() == b.body();
  }
  return false;
}

bool joinable(const Term& m, const Term& n) {
  return free_vars_joinable(m.free_vars(), n.free_vars(), nullptr);
}

Term substitute(const Term& m,
                const std::vector<std::pair<IndexedVar, Term>>& bindings) {
  if (bindings.empty()) return m;

  std::map<IndexedVar, Term> repl;
  std::set<std::string> replacement_frees;
  for (const auto& [v, n] : bindings) {
    if (!repl.emplace(v, n).second) {
      fail(ErrorCode::ValidationError,
           "duplicate substitution target " + to_string(v));
    }
    if (n.degree() != v.degree) {
      fail(ErrorCode::DegreeMismatch,
           "replacement for " + to_string(v) + " has degree " +
               std::to_string(n.degree()));
    }
    for (const auto& fv : n.free_vars()) {
      replacement_frees.insert(fv.name.base);
    }
  }

  for (std::size_t i = 0; i < bindings.size(); ++i) {
    if (!joinable(m, bindings[i].second)) {
      fail(ErrorCode::NotJoinable,
           "replacement for " + to_string(bindings[i].first) +
               " is not joinable with the subject");
    }
    for (std::size_t j = i + 1; j < bindings.size(); ++j) {
      if (!joinable(bindings[i].second, bindings[j].second)) {
        fail(ErrorCode::NotJoinable, "replacements are not joinable");
      }
    }
  }

  Term prepared = rename_binders_avoiding(m, replacement_frees);
  return replace_free(prepared, repl);
}

namespace {

void alpha_key_walk(const Term& t, std::vector<IndexedVar>& scope,
                    std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      const IndexedVar& v = t.var_info();
      for (std::size_t i = scope.size(); i-- > 0;) {
        if (scope[i] == v) {
          out += '@';
          out += std::to_string(scope.size() - 1 - i);
          return;
        }
      }
      out += '$';
      out += v.name.base;
      out += '^';
      out += std::to_string(v.degree);
      return;
    }
    case Term::Kind::App:
      out += '(';
      alpha_key_walk(t.fn(), scope, out);
      out += ' ';
      alpha_key_walk(t.arg(), scope, out);
      out += ')';
      return;
    case Term::Kind::Lam:
      out += 'L';
      out += std::to_string(t.binder().degree);
      out += '.';
      scope.push_back(t.binder());
      alpha_key_walk(t.body(), scope, out);
      scope.pop_back();
      return;
  }
}

bool alpha_eq_walk(const Term& a, const Term& b,
                   std::vector<std::pair<IndexedVar, IndexedVar>>& scope) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Var: {
      const IndexedVar& va = a.var_info();
      const IndexedVar& vb = b.var_info();
      for (std::size_t i = scope.size(); i-- > 0;) {
        bool la = scope[i].first == va;
        bool lb = scope[i].second == vb;
        if (la || lb) return la && lb;
      }
      return va == vb;
    }
    case Term::Kind::App:
      return alpha_eq_walk(a.fn(), b.fn(), scope) &&
             alpha_eq_walk(a.arg(), b.arg(), scope);
    case Term::Kind::Lam: {
      if (a.binder().degree != b.binder().degree) return false;
      scope.emplace_back(a.binder(), b.binder());
      bool ok = alpha_eq_walk(a.body(), b.body(), scope);
      scope.pop_back();
      return ok;
    }
  }
  return false;
}

}  // namespace

bool alpha_eq(const Term& a, const Term& b) {
  if (a.size() != b.size() || a.degree() != b.degree()) return false;
  std::vector<std::pair<IndexedVar, IndexedVar>> scope;
  return alpha_eq_walk(a, b, scope);
}

std::string alpha_key(const Term& t) {
  std::string out;
  std::vector<IndexedVar> scope;
  alpha_key_walk(t, scope, out);
  return out;
}

namespace {

Term alpha_normalize_walk(const Term& t, std::map<IndexedVar, IndexedVar>& map,
                          unsigned& next, const std::set<std::string>& frees) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = map.find(t.var_info());
      return it == map.end() ? t : Term::var(it->second);
    }
    case Term::Kind::App: {
      Term f = alpha_normalize_walk(t.fn(), map, next, frees);
      Term a = alpha_normalize_walk(t.arg(), map, next, frees);
      return Term::app(f, a);
    }
    case Term::Kind::Lam: {
      std::string name;
      do {
        name = "p" + std::to_string(next++);
      } while (frees.count(name));
      IndexedVar renamed{VarName::of(name), t.binder().degree};
      auto saved = map.find(t.binder());
      std::optional<IndexedVar> old;
      if (saved != map.end()) old = saved->second;
      map[t.binder()] = renamed;
      Term body = alpha_normalize_walk(t.body(), map, next, frees);
      if (old) {
        map[t.binder()] = *old;
      } else {
        map.erase(t.binder());
      }
      return Term::lam(renamed, body);
    }
  }
  return t;
}

}  // namespace

Term alpha_normalize(const Term& t) {
  std::set<std::string> frees;
  for (const auto& v : t.free_vars()) frees.insert(v.name.base);
  std::map<IndexedVar, IndexedVar> map;
  unsigned next = 0;
  return alpha_normalize_walk(t, map, next, frees);
}

namespace {

Term shift(const Term& t, int delta) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      IndexedVar v = t.var_info();
      v.degree = static_cast<unsigned>(static_cast<int>(v.degree) + delta);
      return Term::var(v);
    }
    case Term::Kind::App:
      return Term::app(shift(t.fn(), delta), shift(t.arg(), delta));
    case Term::Kind::Lam: {
      IndexedVar b = t.binder();
      b.degree = static_cast<unsigned>(static_cast<int>(b.degree) + delta);
      return Term::lam(b, shift(t.body(), delta));
    }
  }
  return t;
}

}  // namespace

Term lift(const Term& t) { return shift(t, +1); }

Term lower(const Term& t) {
  if (t.degree() == 0) {
    fail(ErrorCode::DegreeUnderflow, "cannot lower a term of degree 0");
  }
  return shift(t, -1);
}

Term lower_n(const Term& t, unsigned n) {
  if (t.degree() < n) {
    fail(ErrorCode::DegreeUnderflow,
         "cannot lower a term of degree " + std::to_string(t.degree()) +
             " by " + std::to_string(n));
  }
  Term out = t;
  for (unsigned i = 0; i < n; ++i) out = lower(out);
  return out;
}

namespace {

void print_term(const Term& t, std::string& out, bool fn_pos, bool arg_pos) {
  switch (t.kind()) {
    case Term::Kind::Var:
      out += to_string(t.var_info());
      return;
    case Term::Kind::Lam: {
      bool parens = fn_pos || arg_pos;
      if (parens) out += '(';
      out += '\\';
      out += to_string(t.binder());
      out += ". ";
      print_term(t.body(), out, false, false);
      if (parens) out += ')';
      return;
    }
    case Term::Kind::App: {
      bool parens = arg_pos;
      if (parens) out += '(';
      print_term(t.fn(), out, true, false);
      out += ' ';
      print_term(t.arg(), out, false, true);
      if (parens) out += ')';
      return;
    }
  }
}

}  // namespace

std::string to_string(const Term& t) {
  std::string out;
  print_term(t, out, false, false);
  return out;
}

std::set<std::string> all_base_names(const Term& t) {
  std::set<std::string> out;
  switch (t.kind()) {
    case Term::Kind::Var:
      out.insert(t.var_info().name.base);
      break;
    case Term::Kind::App: {
      out = all_base_names(t.fn());
      auto rhs = all_base_names(t.arg());
      out.insert(rhs.begin(), rhs.end());
      break;
    }
    case Term::Kind::Lam: {
      out = all_base_names(t.body());
      out.insert(t.binder().name.base);
      break;
    }
  }
  return out;
}

}  // namespace evlam
