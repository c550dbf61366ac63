#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "pinlog/lang/value.hpp"

namespace pinlog {

enum class Sort { Unit, Bool, Int, Loc };

const char* to_string(Sort s);
Sort sort_of(const Value& v);

// Scalar terms: ground values, sorted symbolic constants, and location
// offsets. Offsets normalize so that Offset(Offset(t, m), n) never occurs
// and Offset(Const(loc), n) folds to a ground location.
class Term {
 public:
  enum class Kind { Const, Sym, Offset };

  Term() : Term(constant(Value::unit())) {}

  static Term constant(Value v);
  static Term sym(std::string name, Sort sort);
  static Term offset(const Term& base, uint32_t n);

  Kind kind() const { return node_->kind; }
  Sort sort() const { return node_->sort; }
  const Value& value() const { return node_->value; }        // Const
  const std::string& name() const { return node_->name; }    // Sym (and Offset base name)
  uint32_t off() const { return node_->off; }                // Offset
  Term base() const;                                         // Offset

  bool is_const() const { return node_->kind == Kind::Const; }
  bool is_sym() const { return node_->kind == Kind::Sym; }
  bool is_offset() const { return node_->kind == Kind::Offset; }

  // Ground location value, when this is a Const of sort Loc.
  std::optional<Loc> as_loc() const;

  bool operator==(const Term& o) const;
  bool operator<(const Term& o) const;

  std::string to_string() const;

 private:
  struct Node {
    Kind kind;
    Sort sort;
    Value value;       // Const
    std::string name;  // Sym
    std::shared_ptr<const Node> base;  // Offset
    uint32_t off = 0;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Assignment of ground values to symbolic constants.
struct Valuation {
  std::map<std::string, Value> vals;

  const Value* lookup(const std::string& name) const {
    auto it = vals.find(name);
    return it == vals.end() ? nullptr : &it->second;
  }
  Valuation with(const std::string& name, Value v) const {
    Valuation r = *this;
    r.vals[name] = std::move(v);
    return r;
  }
};

// Resolves symbols through the valuation; returns nullopt if any symbol
// stays unbound.
std::optional<Value> resolve(const Term& t, const Valuation& val);

// Substitutes symbols by terms (used for spec instantiation).
Term subst(const Term& t, const std::map<std::string, Term>& sigma);

}  // namespace pinlog
