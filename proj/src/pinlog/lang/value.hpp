#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace pinlog {

// Location 0 is the distinguished null location; no heap ever maps it.
struct Loc {
  uint32_t index = 0;

  constexpr bool is_null() const { return index == 0; }
  constexpr auto operator<=>(const Loc&) const = default;
};

inline constexpr Loc kNull{0};

struct Expr;
struct Env;

// Runtime closure introduced by fixpoints. Closures never appear as
// literals, never live in heap cells, and are never enumerated.
struct Closure;

struct Value {
  enum class Kind { Unit, Bool, Int, Loc, Uninit, Closure };

  Kind kind = Kind::Unit;
  bool b = false;
  int64_t i = 0;
  Loc loc{};
  std::shared_ptr<const Closure> clos;

  static Value unit() { return Value{}; }
  static Value boolean(bool v) {
    Value r;
    r.kind = Kind::Bool;
    r.b = v;
    return r;
  }
  static Value integer(int64_t v) {
    Value r;
    r.kind = Kind::Int;
    r.i = v;
    return r;
  }
  static Value location(Loc l) {
    Value r;
    r.kind = Kind::Loc;
    r.loc = l;
    return r;
  }
  static Value uninit() {
    Value r;
    r.kind = Kind::Uninit;
    return r;
  }

  bool is_loc() const { return kind == Kind::Loc; }
  bool is_int() const { return kind == Kind::Int; }

  bool operator==(const Value& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
      case Kind::Unit:
      case Kind::Uninit: return true;
      case Kind::Bool: return b == o.b;
      case Kind::Int: return i == o.i;
      case Kind::Loc: return loc == o.loc;
      case Kind::Closure: return clos == o.clos;
    }
    return false;
  }
  bool operator<(const Value& o) const {
    if (kind != o.kind) return kind < o.kind;
    switch (kind) {
      case Kind::Unit:
      case Kind::Uninit: return false;
      case Kind::Bool: return b < o.b;
      case Kind::Int: return i < o.i;
      case Kind::Loc: return loc < o.loc;
      case Kind::Closure: return clos < o.clos;
    }
    return false;
  }
};

std::string to_string(const Value& v);

// Finite partial map from nonzero locations to values. Ordered so that
// enumeration, printing and counterexample minimization are canonical.
class Heap {
 public:
  using Cells = std::map<Loc, Value>;

  Heap() = default;
  explicit Heap(Cells cells) : cells_(std::move(cells)) {}

  bool contains(Loc l) const { return cells_.count(l) != 0; }
  const Value* lookup(Loc l) const {
    auto it = cells_.find(l);
    return it == cells_.end() ? nullptr : &it->second;
  }
  // Precondition for both: l is not null.
  void set(Loc l, Value v) { cells_[l] = std::move(v); }
  void erase(Loc l) { cells_.erase(l); }

  size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  const Cells& cells() const { return cells_; }

  bool disjoint(const Heap& o) const;
  // Union of disjoint heaps; callers check disjointness first.
  static Heap join(const Heap& a, const Heap& b);
  // Removes dom(o) from this heap; every removed location must be present.
  Heap minus(const Heap& o) const;
  // True iff every cell of this heap appears identically in o.
  bool subheap_of(const Heap& o) const;

  Loc lowest_free_base(uint32_t n) const;
  uint32_t max_loc() const { return cells_.empty() ? 0 : cells_.rbegin()->first.index; }

  bool operator==(const Heap& o) const { return cells_ == o.cells_; }
  bool operator<(const Heap& o) const { return cells_ < o.cells_; }

  std::string to_string() const;

 private:
  Cells cells_;
};

}  // namespace pinlog
