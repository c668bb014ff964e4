#include "evlam/type.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

namespace evlam {

namespace {
EVarMode g_mode = EVarMode::Single;
}

EVarMode evar_mode() { return g_mode; }
void set_evar_mode(EVarMode mode) { g_mode = mode; }

EVarName EVarName::make(std::string id) {
  if (id.empty()) fail(ErrorCode::ValidationError, "empty expansion variable");
  if (g_mode == EVarMode::Single && id != kCanonicalEVar) {
    fail(ErrorCode::ModeError,
         "expansion variable '" + id +
             "' is not available in single-variable mode");
  }
  return EVarName{std::move(id)};
}

struct CanonicalType::Node {
  Kind kind;
  std::string atom;
  EVarName evar;
  std::vector<CanonicalType> kids;  // Arrow: {from,to}; Exp: {body}; Inter: parts
  unsigned degree = 0;
  bool good = false;
  bool in_t = false;
  bool in_u = false;
  unsigned size = 1;
  std::size_t hash = 0;
};

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

}  // namespace

CanonicalType CanonicalType::atom(const std::string& name) {
  if (name.empty()) fail(ErrorCode::ValidationError, "empty atom name");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->atom = name;
  n->degree = 0;
  n->good = true;
  n->in_t = true;
  n->in_u = true;
  n->size = 1;
  n->hash = hash_combine(0x41, std::hash<std::string>{}(name));
  return CanonicalType(std::move(n));
}

CanonicalType CanonicalType::arrow(const CanonicalType& from,
                                   const CanonicalType& to) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Arrow;
  n->kids = {from, to};
  n->degree = std::min(from.degree(), to.degree());
  n->good = from.good() && to.good() && from.degree() >= to.degree();
  n->in_t = from.in_u() && to.in_t();
  n->in_u = n->in_t;
  n->size = 1 + from.size() + to.size();
  n->hash = hash_combine(hash_combine(0x52, from.hash()), to.hash());
  return CanonicalType(std::move(n));
}

CanonicalType CanonicalType::exp(const EVarName& e, const CanonicalType& body) {
  if (g_mode == EVarMode::Single && e.id != kCanonicalEVar) {
    fail(ErrorCode::ModeError,
         "expansion variable '" + e.id +
             "' is not available in single-variable mode");
  }
  if (body.kind() == Kind::Inter) {
    // e(U1 & U2) is stored distributed: eU1 & eU2.
    std::vector<CanonicalType> parts;
    parts.reserve(body.parts().size());
    for (const auto& p : body.parts()) parts.push_back(exp(e, p));
    return inter(std::move(parts));
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Exp;
  n->evar = e;
  n->kids = {body};
  n->degree = body.degree() + 1;
  n->good = body.good();
  n->in_t = false;
  n->in_u = body.in_u();
  n->size = 1 + body.size();
  n->hash = hash_combine(hash_combine(0x45, std::hash<std::string>{}(e.id)),
                         body.hash());
  return CanonicalType(std::move(n));
}

CanonicalType CanonicalType::inter(std::vector<CanonicalType> parts) {
  if (parts.empty()) {
    fail(ErrorCode::ValidationError, "empty intersection");
  }
  std::vector<CanonicalType> flat;
  for (auto& p : parts) {
    if (p.kind() == Kind::Inter) {
      for (const auto& q : p.parts()) flat.push_back(q);
    } else {
      flat.push_back(std::move(p));
    }
  }
  std::sort(flat.begin(), flat.end(),
            [](const CanonicalType& a, const CanonicalType& b) {
              return (a <=> b) < 0;
            });
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.size() == 1) return flat.front();

  auto n = std::make_shared<Node>();
  n->kind = Kind::Inter;
  n->degree = flat.front().degree();
  n->good = true;
  n->in_u = true;
  n->size = 1;
  n->hash = 0x49;
  unsigned common = flat.front().degree();
  bool degrees_equal = true;
  for (const auto& p : flat) {
    n->degree = std::min(n->degree, p.degree());
    if (p.degree() != common) degrees_equal = false;
    if (!p.good()) n->good = false;
    if (!p.in_u()) n->in_u = false;
    n->size += p.size();
    n->hash = hash_combine(n->hash, p.hash());
  }
  n->good = n->good && degrees_equal;
  n->in_t = false;
  n->kids = std::move(flat);
  return CanonicalType(std::move(n));
}

CanonicalType CanonicalType::meet(const CanonicalType& a,
                                  const CanonicalType& b) {
  return inter({a, b});
}

CanonicalType::Kind CanonicalType::kind() const { return node_->kind; }

const std::string& CanonicalType::atom_name() const {
  assert(node_->kind == Kind::Atom);
  return node_->atom;
}

const EVarName& CanonicalType::evar() const {
  assert(node_->kind == Kind::Exp);
  return node_->evar;
}

const CanonicalType& CanonicalType::exp_body() const {
  assert(node_->kind == Kind::Exp);
  return node_->kids[0];
}

const CanonicalType& CanonicalType::from() const {
  assert(node_->kind == Kind::Arrow);
  return node_->kids[0];
}

const CanonicalType& CanonicalType::to() const {
  assert(node_->kind == Kind::Arrow);
  return node_->kids[1];
}

const std::vector<CanonicalType>& CanonicalType::parts() const {
  assert(node_->kind == Kind::Inter);
  return node_->kids;
}

std::vector<CanonicalType> CanonicalType::part_list() const {
  if (node_->kind == Kind::Inter) return node_->kids;
  return {*this};
}

unsigned CanonicalType::degree() const { return node_->degree; }
bool CanonicalType::good() const { return node_->good; }
bool CanonicalType::in_t() const { return node_->in_t; }
bool CanonicalType::in_u() const { return node_->in_u; }
unsigned CanonicalType::size() const { return node_->size; }
std::size_t CanonicalType::hash() const { return node_->hash; }

bool operator==(const CanonicalType& a, const CanonicalType& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->kind != b.node_->kind || a.node_->hash != b.node_->hash ||
      a.node_->size != b.node_->size) {
    return false;
  }
  switch (a.node_->kind) {
    case CanonicalType::Kind::Atom:
      return a.node_->atom == b.node_->atom;
    case CanonicalType::Kind::Exp:
      return a.node_->evar == b.node_->evar &&
             a.node_->kids[0] == b.node_->kids[0];
    case CanonicalType::Kind::Arrow:
      return a.node_->kids[0] == b.node_->kids[0] &&
             a.node_->kids[1] == b.node_->kids[1];
    case CanonicalType::Kind::Inter: {
      if (a.node_->kids.size() != b.node_->kids.size()) return false;
      for (std::size_t i = 0; i < a.node_->kids.size(); ++i) {
        if (!(a.node_->kids[i] == b.node_->kids[i])) return false;
      }
      return true;
    }
  }
  return false;
}

std::strong_ordering operator<=>(const CanonicalType& a,
                                 const CanonicalType& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = static_cast<int>(a.node_->kind) <=>
               static_cast<int>(b.node_->kind);
      c != 0) {
    return c;
  }
  switch (a.node_->kind) {
    case CanonicalType::Kind::Atom:
      return a.node_->atom <=> b.node_->atom;
    case CanonicalType::Kind::Exp:
      if (auto c = a.node_->evar <=> b.node_->evar; c != 0) return c;
      return a.node_->kids[0] <=> b.node_->kids[0];
    case CanonicalType::Kind::Arrow:
      if (auto c = a.node_->kids[0] <=> b.node_->kids[0]; c != 0) return c;
      return a.node_->kids[1] <=> b.node_->kids[1];
    case CanonicalType::Kind::Inter: {
      std::size_t n = std::min(a.node_->kids.size(), b.node_->kids.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (auto c = a.node_->kids[i] <=> b.node_->kids[i]; c != 0) return c;
      }
      return a.node_->kids.size() <=> b.node_->kids.size();
    }
  }
  return std::strong_ordering::equal;
}

unsigned type_degree(const CanonicalType& t) { return t.degree(); }
bool is_good_type(const CanonicalType& t) { return t.good(); }

GrammarClass grammar_class(const CanonicalType& t) {
  if (t.in_t()) return GrammarClass::InT;
  if (t.in_u()) return GrammarClass::InU;
  return GrammarClass::General;
}

const char* to_string(GrammarClass g) {
  switch (g) {
    case GrammarClass::InT: return "arrow-grammar";
    case GrammarClass::InU: return "restricted";
    case GrammarClass::General: return "general";
  }
  return "unknown";
}

CanonicalType type_lower(const CanonicalType& t) {
  if (t.degree() == 0) {
    fail(ErrorCode::DegreeUnderflow, "cannot lower a type of degree 0");
  }
  switch (t.kind()) {
    case CanonicalType::Kind::Exp:
      return t.exp_body();
    case CanonicalType::Kind::Inter: {
      std::vector<CanonicalType> parts;
      parts.reserve(t.parts().size());
      for (const auto& p : t.parts()) parts.push_back(type_lower(p));
      return CanonicalType::inter(std::move(parts));
    }
    case CanonicalType::Kind::Arrow:
      fail(ErrorCode::DegreeUnderflow,
           "lowering is undefined on an arrow type");
    case CanonicalType::Kind::Atom:
      fail(ErrorCode::DegreeUnderflow, "cannot lower an atom");
  }
  fail(ErrorCode::DegreeUnderflow, "unreachable");
}

CanonicalType type_lower_n(const CanonicalType& t, unsigned n) {
  if (t.degree() < n) {
    fail(ErrorCode::DegreeUnderflow,
         "cannot lower a type of degree " + std::to_string(t.degree()) +
             " by " + std::to_string(n));
  }
  CanonicalType out = t;
  for (unsigned i = 0; i < n; ++i) out = type_lower(out);
  return out;
}

std::optional<CanonicalType> undistribute_exp(const CanonicalType& t,
                                              const EVarName& e) {
  if (t.kind() == CanonicalType::Kind::Exp) {
    if (t.evar() == e) return t.exp_body();
    return std::nullopt;
  }
  if (t.kind() == CanonicalType::Kind::Inter) {
    std::vector<CanonicalType> bodies;
    bodies.reserve(t.parts().size());
    for (const auto& p : t.parts()) {
      if (p.kind() != CanonicalType::Kind::Exp || !(p.evar() == e)) {
        return std::nullopt;
      }
      bodies.push_back(p.exp_body());
    }
    return CanonicalType::inter(std::move(bodies));
  }
  return std::nullopt;
}

namespace {

void print_type(const CanonicalType& t, std::string& out) {
  switch (t.kind()) {
    case CanonicalType::Kind::Atom:
      out += t.atom_name();
      return;
    case CanonicalType::Kind::Exp: {
      out += t.evar().id;
      out += ' ';
      const CanonicalType& b = t.exp_body();
      if (b.kind() == CanonicalType::Kind::Arrow) {
        out += '(';
        print_type(b, out);
        out += ')';
      } else {
        print_type(b, out);
      }
      return;
    }
    case CanonicalType::Kind::Arrow: {
      const CanonicalType& l = t.from();
      if (l.kind() == CanonicalType::Kind::Arrow) {
        out += '(';
        print_type(l, out);
        out += ')';
      } else {
        print_type(l, out);
      }
      out += " -> ";
      print_type(t.to(), out);
      return;
    }
    case CanonicalType::Kind::Inter: {
      out += '(';
      bool first = true;
      for (const auto& p : t.parts()) {
        if (!first) out += " & ";
        first = false;
        print_type(p, out);
      }
      out += ')';
      return;
    }
  }
}

}  // namespace

std::string to_string(const CanonicalType& t) {
  std::string out;
  print_type(t, out);
  return out;
}

RawType RawType::mk_atom(std::string name) {
  RawType r;
  r.kind = CanonicalType::Kind::Atom;
  r.atom = std::move(name);
  return r;
}

RawType RawType::mk_arrow(RawType from, RawType to) {
  RawType r;
  r.kind = CanonicalType::Kind::Arrow;
  r.children = {std::move(from), std::move(to)};
  return r;
}

RawType RawType::mk_inter(std::vector<RawType> parts) {
  if (parts.size() < 2) {
    fail(ErrorCode::ValidationError, "an intersection needs two parts");
  }
  RawType r;
  r.kind = CanonicalType::Kind::Inter;
  r.children = std::move(parts);
  return r;
}

RawType RawType::mk_exp(EVarName e, RawType body) {
  RawType r;
  r.kind = CanonicalType::Kind::Exp;
  r.evar_name = std::move(e);
  r.children = {std::move(body)};
  return r;
}

CanonicalType canonicalize(const RawType& raw) {
  switch (raw.kind) {
    case CanonicalType::Kind::Atom:
      return CanonicalType::atom(raw.atom);
    case CanonicalType::Kind::Arrow:
      return CanonicalType::arrow(canonicalize(raw.children[0]),
                                  canonicalize(raw.children[1]));
    case CanonicalType::Kind::Exp:
      return CanonicalType::exp(raw.evar_name, canonicalize(raw.children[0]));
    case CanonicalType::Kind::Inter: {
      std::vector<CanonicalType> parts;
      parts.reserve(raw.children.size());
      for (const auto& c : raw.children) parts.push_back(canonicalize(c));
      return CanonicalType::inter(std::move(parts));
    }
  }
  fail(ErrorCode::ValidationError, "unreachable");
}

TypeEnv TypeEnv::of(
    const std::vector<std::pair<IndexedVar, CanonicalType>>& bindings) {
  TypeEnv env;
  for (const auto& [v, t] : bindings) env = env.with(v, t);
  return env;
}

TypeEnv TypeEnv::with(const IndexedVar& v, const CanonicalType& t) const {
  auto it = bindings_.find(v.name);
  if (it != bindings_.end()) {
    if (it->second.first != v.degree) {
      fail(ErrorCode::NotJoinable,
           "environment already binds '" + v.name.base +
               "' at a different degree");
    }
    fail(ErrorCode::ValidationError,
         "environment already binds " + evlam::to_string(v));
  }
  TypeEnv out = *this;
  out.bindings_.emplace(v.name, std::make_pair(v.degree, t));
  return out;
}

TypeEnv TypeEnv::without(const IndexedVar& v) const {
  TypeEnv out = *this;
  auto it = out.bindings_.find(v.name);
  if (it != out.bindings_.end() && it->second.first == v.degree) {
    out.bindings_.erase(it);
  }
  return out;
}

std::optional<CanonicalType> TypeEnv::lookup(const IndexedVar& v) const {
  auto it = bindings_.find(v.name);
  if (it == bindings_.end() || it->second.first != v.degree) {
    return std::nullopt;
  }
  return it->second.second;
}

std::optional<std::pair<unsigned, CanonicalType>> TypeEnv::lookup_base(
    const VarName& n) const {
  auto it = bindings_.find(n);
  if (it == bindings_.end()) return std::nullopt;
  return it->second;
}

std::vector<IndexedVar> TypeEnv::domain() const {
  std::vector<IndexedVar> out;
  out.reserve(bindings_.size());
  for (const auto& [name, entry] : bindings_) {
    out.push_back(IndexedVar{name, entry.first});
  }
  return out;
}

bool operator==(const TypeEnv& a, const TypeEnv& b) {
  return a.bindings_ == b.bindings_;
}

std::strong_ordering operator<=>(const TypeEnv& a, const TypeEnv& b) {
  auto i = a.bindings_.begin();
  auto j = b.bindings_.begin();
  for (; i != a.bindings_.end() && j != b.bindings_.end(); ++i, ++j) {
    if (auto c = i->first <=> j->first; c != 0) return c;
    if (auto c = i->second.first <=> j->second.first; c != 0) return c;
    if (auto c = i->second.second <=> j->second.second; c != 0) return c;
  }
  if (i != a.bindings_.end()) return std::strong_ordering::greater;
  if (j != b.bindings_.end()) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

bool env_joinable(const TypeEnv& a, const TypeEnv& b) {
  for (const auto& [name, entry] : a.bindings()) {
    auto other = b.lookup_base(name);
    if (other && other->first != entry.first) return false;
  }
  return true;
}

TypeEnv env_meet(const TypeEnv& a, const TypeEnv& b) {
  if (!env_joinable(a, b)) {
    fail(ErrorCode::NotJoinable, "environments disagree on a degree");
  }
  TypeEnv out = a;
  for (const auto& [name, entry] : b.bindings()) {
    auto mine = a.lookup_base(name);
    IndexedVar v{name, entry.first};
    if (mine) {
      out = out.without(v).with(
          v, CanonicalType::meet(mine->second, entry.second));
    } else {
      out = out.with(v, entry.second);
    }
  }
  return out;
}

TypeEnv env_expand(const EVarName& e, const TypeEnv& env) {
  TypeEnv out;
  for (const auto& [name, entry] : env.bindings()) {
    out = out.with(IndexedVar{name, entry.first + 1},
                   CanonicalType::exp(e, entry.second));
  }
  return out;
}

TypeEnv env_lower(const TypeEnv& env) {
  if (!env_degree_positive(env)) {
    fail(ErrorCode::DegreeUnderflow,
         "environment has a binding of degree 0");
  }
  TypeEnv out;
  for (const auto& [name, entry] : env.bindings()) {
    out = out.with(IndexedVar{name, entry.first - 1},
                   type_lower(entry.second));
  }
  return out;
}

std::pair<TypeEnv, CanonicalType> typing_lower(const TypeEnv& env,
                                               const CanonicalType& t) {
  if (t.degree() == 0) {
    fail(ErrorCode::DegreeUnderflow, "cannot lower a typing of degree 0");
  }
  return {env_lower(env), type_lower(t)};
}

bool env_good(const TypeEnv& env) {
  for (const auto& [name, entry] : env.bindings()) {
    if (!entry.second.good()) return false;
  }
  return true;
}

bool env_degree_positive(const TypeEnv& env) {
  for (const auto& [name, entry] : env.bindings()) {
    if (entry.first == 0 || entry.second.degree() == 0) return false;
  }
  return true;
}

std::string to_string(const TypeEnv& env) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [name, entry] : env.bindings()) {
    if (!first) os << ", ";
    first = false;
    os << name.base << '^' << entry.first << ": "
       << to_string(entry.second);
  }
  return os.str();
}

}  // namespace evlam
