#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evlam/error.hpp"
#include "evlam/term.hpp"

namespace evlam {

// Global expansion-variable discipline. In Single mode there is exactly one
// expansion variable, spelled "e"; Multi mode admits e, e1, e2, ...
enum class EVarMode { Single, Multi };

EVarMode evar_mode();
void set_evar_mode(EVarMode mode);

inline constexpr const char* kCanonicalEVar = "e";

struct ScopedEVarMode {
  explicit ScopedEVarMode(EVarMode mode) : saved_(evar_mode()) {
    set_evar_mode(mode);
  }
  ~ScopedEVarMode() { set_evar_mode(saved_); }
  ScopedEVarMode(const ScopedEVarMode&) = delete;
  ScopedEVarMode& operator=(const ScopedEVarMode&) = delete;

 private:
  EVarMode saved_;
};

struct EVarName {
  std::string id;

  // Checks the id against the current mode (Single admits only "e").
  static EVarName make(std::string id);

  friend std::strong_ordering operator<=>(const EVarName&,
                                          const EVarName&) = default;
  friend bool operator==(const EVarName&, const EVarName&) = default;
};

// A type in canonical form. Intersections are flattened, duplicate-free and
// sorted; an expansion applied to an intersection is distributed over its
// parts. Structural equality therefore decides equality in the quotient.
class CanonicalType {
 public:
  enum class Kind { Atom, Exp, Arrow, Inter };  // also the canonical order

  static CanonicalType atom(const std::string& name);
  static CanonicalType arrow(const CanonicalType& from, const CanonicalType& to);
  static CanonicalType exp(const EVarName& e, const CanonicalType& body);
  static CanonicalType inter(std::vector<CanonicalType> parts);
  static CanonicalType meet(const CanonicalType& a, const CanonicalType& b);

  Kind kind() const;
  const std::string& atom_name() const;        // Atom
  const EVarName& evar() const;                // Exp
  const CanonicalType& exp_body() const;       // Exp (never an Inter)
  const CanonicalType& from() const;           // Arrow
  const CanonicalType& to() const;             // Arrow
  const std::vector<CanonicalType>& parts() const;  // Inter (>= 2 parts)

  // The intersection parts, or {*this} for a non-intersection.
  std::vector<CanonicalType> part_list() const;

  unsigned degree() const;
  bool good() const;
  bool in_t() const;  // restricted arrow grammar
  bool in_u() const;  // intersections/expansions over the arrow grammar
  unsigned size() const;  // node count
  std::size_t hash() const;

  friend bool operator==(const CanonicalType& a, const CanonicalType& b);
  friend bool operator!=(const CanonicalType& a, const CanonicalType& b) {
    return !(a == b);
  }
  friend std::strong_ordering operator<=>(const CanonicalType& a,
                                          const CanonicalType& b);

 private:
  struct Node;
  explicit CanonicalType(std::shared_ptr<const Node> node)
      : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

unsigned type_degree(const CanonicalType& t);
bool is_good_type(const CanonicalType& t);

enum class GrammarClass { InT, InU, General };
GrammarClass grammar_class(const CanonicalType& t);
const char* to_string(GrammarClass g);

// Strips one expansion application (componentwise on intersections).
// Requires degree > 0; undefined on arrows of positive degree.
CanonicalType type_lower(const CanonicalType& t);
CanonicalType type_lower_n(const CanonicalType& t, unsigned n);

// When t equals an expansion of some body under `e` (directly or distributed
// across an intersection), returns that body.
std::optional<CanonicalType> undistribute_exp(const CanonicalType& t,
                                              const EVarName& e);

std::string to_string(const CanonicalType& t);

// A raw, unquotiented type syntax tree as produced by the parser.
struct RawType {
  CanonicalType::Kind kind = CanonicalType::Kind::Atom;
  std::string atom;
  EVarName evar_name;
  std::vector<RawType> children;  // Arrow: 2, Inter: >= 2, Exp: 1

  static RawType mk_atom(std::string name);
  static RawType mk_arrow(RawType from, RawType to);
  static RawType mk_inter(std::vector<RawType> parts);
  static RawType mk_exp(EVarName e, RawType body);
};

CanonicalType canonicalize(const RawType& raw);

// A finite type environment. At most one degree per base name.
class TypeEnv {
 public:
  TypeEnv() = default;

  static TypeEnv empty() { return TypeEnv(); }
  static TypeEnv of(
      const std::vector<std::pair<IndexedVar, CanonicalType>>& bindings);

  // Adds a binding; rejects a second degree for an existing base name and
  // duplicate variables.
  TypeEnv with(const IndexedVar& v, const CanonicalType& t) const;
  TypeEnv without(const IndexedVar& v) const;

  std::optional<CanonicalType> lookup(const IndexedVar& v) const;
  std::optional<std::pair<unsigned, CanonicalType>> lookup_base(
      const VarName& n) const;

  bool empty_env() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  std::vector<IndexedVar> domain() const;
  const std::map<VarName, std::pair<unsigned, CanonicalType>>& bindings()
      const {
    return bindings_;
  }

  friend bool operator==(const TypeEnv& a, const TypeEnv& b);
  friend bool operator!=(const TypeEnv& a, const TypeEnv& b) {
    return !(a == b);
  }
  friend std::strong_ordering operator<=>(const TypeEnv& a, const TypeEnv& b);

 private:
  std::map<VarName, std::pair<unsigned, CanonicalType>> bindings_;
};

bool env_joinable(const TypeEnv& a, const TypeEnv& b);
TypeEnv env_meet(const TypeEnv& a, const TypeEnv& b);
TypeEnv env_expand(const EVarName& e, const TypeEnv& env);
TypeEnv env_lower(const TypeEnv& env);
std::pair<TypeEnv, CanonicalType> typing_lower(const TypeEnv& env,
                                               const CanonicalType& t);
bool env_good(const TypeEnv& env);
bool env_degree_positive(const TypeEnv& env);

std::string to_string(const TypeEnv& env);

}  // namespace evlam
