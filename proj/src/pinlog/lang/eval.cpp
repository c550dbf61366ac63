#include "pinlog/lang/eval.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pinlog {

std::string to_string(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Unit: return "unit";
    case Value::Kind::Bool: return v.b ? "true" : "false";
    case Value::Kind::Int: return std::to_string(v.i);
    case Value::Kind::Loc: return "(loc " + std::to_string(v.loc.index) + ")";
    case Value::Kind::Uninit: return "uninit";
    case Value::Kind::Closure: return "<closure>";
  }
  return "?";
}

bool Heap::disjoint(const Heap& o) const {
  const Heap& small = size() <= o.size() ? *this : o;
  const Heap& big = size() <= o.size() ? o : *this;
  for (const auto& [l, v] : small.cells_)
    if (big.contains(l)) return false;
  return true;
}

Heap Heap::join(const Heap& a, const Heap& b) {
  Heap r = a;
  for (const auto& [l, v] : b.cells_) {
    if (r.contains(l)) throw std::logic_error("Heap::join: overlapping domains");
    r.cells_.emplace(l, v);
  }
  return r;
}

Heap Heap::minus(const Heap& o) const {
  Heap r = *this;
  for (const auto& [l, v] : o.cells_) {
    if (!r.contains(l)) throw std::logic_error("Heap::minus: location not present");
    r.cells_.erase(l);
  }
  return r;
}

bool Heap::subheap_of(const Heap& o) const {
  for (const auto& [l, v] : cells_) {
    const Value* w = o.lookup(l);
    if (!w || !(*w == v)) return false;
  }
  return true;
}

Loc Heap::lowest_free_base(uint32_t n) const {
  for (uint32_t base = 1;; ++base) {
    bool free = true;
    for (uint32_t k = 0; k < n; ++k)
      if (contains(Loc{base + k})) {
        free = false;
        break;
      }
    if (free) return Loc{base};
  }
}

std::string Heap::to_string() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [l, v] : cells_) {
    if (!first) os << ", ";
    first = false;
    os << l.index << ":" << pinlog::to_string(v);
  }
  os << "}";
  return os.str();
}

const char* to_string(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "add";
    case ArithOp::Sub: return "sub";
    case ArithOp::Mul: return "mul";
    case ArithOp::Div: return "div";
    case ArithOp::Mod: return "mod";
    case ArithOp::Lt: return "lt";
    case ArithOp::Le: return "le";
  }
  return "?";
}

namespace {
ExprPtr mk(Expr e) { return std::make_shared<const Expr>(std::move(e)); }
}  // namespace

ExprPtr Expr::var(std::string n) {
  Expr e{Kind::Var};
  e.name = std::move(n);
  return mk(std::move(e));
}
ExprPtr Expr::lit_value(Value v) {
  Expr e{Kind::Lit};
  e.lit = std::move(v);
  return mk(std::move(e));
}
ExprPtr Expr::let(std::string x, Ptr e1, Ptr e2) {
  Expr e{Kind::Let};
  e.name = std::move(x);
  e.a = std::move(e1);
  e.b = std::move(e2);
  return mk(std::move(e));
}
ExprPtr Expr::if_(Ptr c0, Ptr t, Ptr f) {
  Expr e{Kind::If};
  e.a = std::move(c0);
  e.b = std::move(t);
  e.c = std::move(f);
  return mk(std::move(e));
}
ExprPtr Expr::fix(std::string f, std::string x, Ptr body) {
  Expr e{Kind::Fix};
  e.name = std::move(f);
  e.param = std::move(x);
  e.a = std::move(body);
  return mk(std::move(e));
}
ExprPtr Expr::lam(std::string x, Ptr body) { return fix("_", std::move(x), std::move(body)); }
ExprPtr Expr::app(Ptr f, Ptr arg) {
  Expr e{Kind::App};
  e.a = std::move(f);
  e.b = std::move(arg);
  return mk(std::move(e));
}
ExprPtr Expr::eq(Ptr e1, Ptr e2) {
  Expr e{Kind::EqTest};
  e.a = std::move(e1);
  e.b = std::move(e2);
  return mk(std::move(e));
}
ExprPtr Expr::arith(ArithOp op, Ptr e1, Ptr e2) {
  Expr e{Kind::Arith};
  e.op = op;
  e.a = std::move(e1);
  e.b = std::move(e2);
  return mk(std::move(e));
}
ExprPtr Expr::loc_offset(Ptr e0, uint32_t n) {
  Expr e{Kind::LocOffset};
  e.a = std::move(e0);
  e.offset = n;
  return mk(std::move(e));
}
ExprPtr Expr::alloc(Ptr n) {
  Expr e{Kind::Alloc};
  e.a = std::move(n);
  return mk(std::move(e));
}
ExprPtr Expr::free_(Ptr n, Ptr p) {
  Expr e{Kind::Free};
  e.a = std::move(n);
  e.b = std::move(p);
  return mk(std::move(e));
}
ExprPtr Expr::load(Ptr p) {
  Expr e{Kind::Load};
  e.a = std::move(p);
  return mk(std::move(e));
}
ExprPtr Expr::store(Ptr p, Ptr v) {
  Expr e{Kind::Store};
  e.a = std::move(p);
  e.b = std::move(v);
  return mk(std::move(e));
}
ExprPtr Expr::field_read(Ptr p, std::string f) {
  Expr e{Kind::FieldRead};
  e.a = std::move(p);
  e.name = std::move(f);
  return mk(std::move(e));
}
ExprPtr Expr::field_write(Ptr p, std::string f, Ptr v) {
  Expr e{Kind::FieldWrite};
  e.a = std::move(p);
  e.b = std::move(v);
  e.name = std::move(f);
  return mk(std::move(e));
}
ExprPtr Expr::field_addr(Ptr p, std::string f) {
  Expr e{Kind::FieldAddr};
  e.a = std::move(p);
  e.name = std::move(f);
  return mk(std::move(e));
}

namespace {
const std::map<std::string, uint32_t>& field_table() {
  static const std::map<std::string, uint32_t> table = {
      {"elem", 0}, {"next", 1}, {"key", 0}, {"log", 1},
      {"nxt", 2},  {"lft", 1},  {"rgt", 2}, {"level", 0},
  };
  return table;
}
}  // namespace

bool known_field(const std::string& f) { return field_table().count(f) != 0; }

uint32_t field_offset(const std::string& f) {
  auto it = field_table().find(f);
  if (it == field_table().end()) throw std::invalid_argument("unknown field: " + f);
  return it->second;
}

const std::vector<std::string>& known_fields() {
  static const std::vector<std::string> fields = [] {
    std::vector<std::string> fs;
    for (const auto& [f, off] : field_table()) fs.push_back(f);
    return fs;
  }();
  return fields;
}

const char* to_string(Fault::Kind k) {
  switch (k) {
    case Fault::Kind::FuelExhausted: return "fuel-exhausted";
    case Fault::Kind::MemFault: return "mem-fault";
    case Fault::Kind::TypeFault: return "type-fault";
    case Fault::Kind::UnboundVar: return "unbound-var";
    case Fault::Kind::Overflow: return "overflow";
  }
  return "?";
}

namespace {

struct Interp {
  const EvalOptions& opts;
  uint64_t fuel;
  std::vector<std::pair<Loc, uint32_t>> allocs;

  struct Stop {
    Fault fault;
  };

  [[noreturn]] void fail(Fault::Kind k, std::string detail) { throw Stop{Fault{k, std::move(detail)}}; }

  void tick() {
    if (fuel == 0) fail(Fault::Kind::FuelExhausted, "");
    --fuel;
  }

  Loc as_loc(const Value& v, const char* who) {
    if (!v.is_loc()) fail(Fault::Kind::TypeFault, std::string(who) + ": expected a location, got " + to_string(v));
    return v.loc;
  }
  int64_t as_int(const Value& v, const char* who) {
    if (!v.is_int()) fail(Fault::Kind::TypeFault, std::string(who) + ": expected an integer, got " + to_string(v));
    return v.i;
  }

  int64_t checked(int64_t x, const char* who) {
    if (x > opts.int_bound || x < -opts.int_bound) fail(Fault::Kind::Overflow, std::string(who) + ": integer bound exceeded");
    return x;
  }

  Value run(const ExprPtr& e, const Env& env, Heap& h) {
    tick();
    switch (e->kind) {
      case Expr::Kind::Var: {
        const Value* v = env.lookup(e->name);
        if (!v) fail(Fault::Kind::UnboundVar, e->name);
        return *v;
      }
      case Expr::Kind::Lit:
        if (e->lit.kind == Value::Kind::Uninit || e->lit.kind == Value::Kind::Closure)
          fail(Fault::Kind::TypeFault, "illegal literal");
        return e->lit;
      case Expr::Kind::Let: {
        Value v1 = run(e->a, env, h);
        return run(e->b, env.with(e->name, std::move(v1)), h);
      }
      case Expr::Kind::If: {
        Value c = run(e->a, env, h);
        if (c.kind != Value::Kind::Bool) fail(Fault::Kind::TypeFault, "if: condition not a boolean");
        return run(c.b ? e->b : e->c, env, h);
      }
      case Expr::Kind::Fix: {
        auto clos = std::make_shared<Closure>();
        clos->self = e->name;
        clos->param = e->param;
        clos->body = e->a;
        clos->captured = env.binds;
        Value v;
        v.kind = Value::Kind::Closure;
        v.clos = std::move(clos);
        return v;
      }
      case Expr::Kind::App: {
        // Argument subexpressions evaluate left to right.
        Value f = run(e->a, env, h);
        Value arg = run(e->b, env, h);
        if (f.kind != Value::Kind::Closure) fail(Fault::Kind::TypeFault, "app: callee is not a function");
        Env body_env{f.clos->captured};
        body_env.binds.emplace_back(f.clos->self, f);
        body_env.binds.emplace_back(f.clos->param, std::move(arg));
        return run(f.clos->body, body_env, h);
      }
      case Expr::Kind::EqTest: {
        Value v1 = run(e->a, env, h);
        Value v2 = run(e->b, env, h);
        if (v1.kind == Value::Kind::Closure || v2.kind == Value::Kind::Closure ||
            v1.kind == Value::Kind::Uninit || v2.kind == Value::Kind::Uninit)
          fail(Fault::Kind::TypeFault, "eq: values not comparable");
        if (v1.kind != v2.kind) fail(Fault::Kind::TypeFault, "eq: comparing values of different kinds");
        return Value::boolean(v1 == v2);
      }
      case Expr::Kind::Arith: {
        int64_t x = as_int(run(e->a, env, h), to_string(e->op));
        int64_t y = as_int(run(e->b, env, h), to_string(e->op));
        switch (e->op) {
          case ArithOp::Add: return Value::integer(checked(x + y, "add"));
          case ArithOp::Sub: return Value::integer(checked(x - y, "sub"));
          case ArithOp::Mul: return Value::integer(checked(x * y, "mul"));
          case ArithOp::Div:
            if (y == 0) fail(Fault::Kind::TypeFault, "div: division by zero");
            return Value::integer(x / y);
          case ArithOp::Mod:
            if (y == 0) fail(Fault::Kind::TypeFault, "mod: division by zero");
            return Value::integer(x % y);
          case ArithOp::Lt: return Value::boolean(x < y);
          case ArithOp::Le: return Value::boolean(x <= y);
        }
        fail(Fault::Kind::TypeFault, "arith");
      }
      case Expr::Kind::LocOffset: {
        Loc p = as_loc(run(e->a, env, h), "offset");
        uint64_t idx = uint64_t{p.index} + e->offset;
        if (idx > UINT32_MAX) fail(Fault::Kind::Overflow, "offset: location index wrapped");
        return Value::location(Loc{static_cast<uint32_t>(idx)});
      }
      case Expr::Kind::Alloc: {
        int64_t n = as_int(run(e->a, env, h), "alloc");
        if (n <= 0) fail(Fault::Kind::TypeFault, "alloc: size must be positive");
        Loc base = h.lowest_free_base(static_cast<uint32_t>(n));
        for (uint32_t k = 0; k < n; ++k) h.set(Loc{base.index + k}, Value::uninit());
        allocs.emplace_back(base, static_cast<uint32_t>(n));
        return Value::location(base);
      }
      case Expr::Kind::Free: {
        int64_t n = as_int(run(e->a, env, h), "free");
        Loc p = as_loc(run(e->b, env, h), "free");
        if (n <= 0) fail(Fault::Kind::TypeFault, "free: size must be positive");
        if (p.is_null()) fail(Fault::Kind::MemFault, "free: null");
        for (uint32_t k = 0; k < n; ++k)
          if (!h.contains(Loc{p.index + k}))
            fail(Fault::Kind::MemFault, "free: location " + std::to_string(p.index + k) + " not allocated");
        for (uint32_t k = 0; k < n; ++k) h.erase(Loc{p.index + k});
        return Value::unit();
      }
      case Expr::Kind::Load: {
        Loc p = as_loc(run(e->a, env, h), "load");
        if (p.is_null()) fail(Fault::Kind::MemFault, "load: null dereference");
        const Value* v = h.lookup(p);
        if (!v) fail(Fault::Kind::MemFault, "load: location " + std::to_string(p.index) + " not allocated");
        if (v->kind == Value::Kind::Uninit)
          fail(Fault::Kind::MemFault, "load: location " + std::to_string(p.index) + " is uninitialized");
        return *v;
      }
      case Expr::Kind::Store: {
        Loc p = as_loc(run(e->a, env, h), "store");
        Value v = run(e->b, env, h);
        if (p.is_null()) fail(Fault::Kind::MemFault, "store: null dereference");
        if (!h.contains(p)) fail(Fault::Kind::MemFault, "store: location " + std::to_string(p.index) + " not allocated");
        if (v.kind == Value::Kind::Closure || v.kind == Value::Kind::Uninit)
          fail(Fault::Kind::TypeFault, "store: value not storable");
        h.set(p, std::move(v));
        return Value::unit();
      }
      case Expr::Kind::FieldRead:
        return run(Expr::load(Expr::loc_offset(e->a, field_offset(e->name))), env, h);
      case Expr::Kind::FieldWrite:
        return run(Expr::store(Expr::loc_offset(e->a, field_offset(e->name)), e->b), env, h);
      case Expr::Kind::FieldAddr:
        return run(Expr::loc_offset(e->a, field_offset(e->name)), env, h);
    }
    fail(Fault::Kind::TypeFault, "unreachable expression kind");
  }
};

}  // namespace

EvalResult eval(const ExprPtr& e, const Env& env, const Heap& h, const EvalOptions& opts) {
  Interp interp{opts, opts.fuel, {}};
  Heap work = h;
  EvalResult res;
  try {
    Value v = interp.run(e, env, work);
    res.r = EvalOk{std::move(v), std::move(work)};
  } catch (const Interp::Stop& s) {
    res.r = s.fault;
  }
  res.allocs = std::move(interp.allocs);
  return res;
}

EvalResult eval(const ExprPtr& e, const Heap& h, const EvalOptions& opts) { return eval(e, Env{}, h, opts); }

namespace {

// Builds the bijection pairing the i-th allocation of one run with the
// i-th of the other; returns false when the logs cannot be paired.
bool alloc_renaming(const std::vector<std::pair<Loc, uint32_t>>& a,
                    const std::vector<std::pair<Loc, uint32_t>>& b,
                    std::map<uint32_t, uint32_t>& rename) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].second != b[i].second) return false;
    for (uint32_t k = 0; k < a[i].second; ++k) {
      uint32_t from = a[i].first.index + k;
      uint32_t to = b[i].first.index + k;
      auto [it, fresh] = rename.emplace(from, to);
      if (!fresh && it->second != to) return false;
    }
  }
  return true;
}

Value rename_value(const Value& v, const std::map<uint32_t, uint32_t>& rename) {
  if (v.kind != Value::Kind::Loc) return v;
  auto it = rename.find(v.loc.index);
  return it == rename.end() ? v : Value::location(Loc{it->second});
}

Heap rename_heap(const Heap& h, const std::map<uint32_t, uint32_t>& rename) {
  Heap out;
  for (const auto& [l, v] : h.cells()) {
    auto it = rename.find(l.index);
    Loc nl = it == rename.end() ? l : Loc{it->second};
    out.set(nl, rename_value(v, rename));
  }
  return out;
}

}  // namespace

FrameReport frame_run(const ExprPtr& e, const Heap& h, const Heap& frame, const EvalOptions& opts) {
  if (!h.disjoint(frame)) throw std::invalid_argument("frame_run: heap and frame overlap");
  FrameReport rep;
  EvalResult base = eval(e, h, opts);
  EvalResult framed = eval(e, Heap::join(h, frame), opts);
  rep.base_ok = base.ok();
  rep.framed_ok = framed.ok();
  if (!base.ok()) rep.base_fault = base.fault();
  if (!framed.ok()) rep.framed_fault = framed.fault();

  if (base.ok() != framed.ok()) {
    rep.detail = "runs diverge: one faults and the other succeeds";
    rep.local = false;
    return rep;
  }
  if (!base.ok()) {
    // Both fault; locality compares fault kinds only.
    rep.results_agree = base.fault().kind == framed.fault().kind;
    rep.local = rep.results_agree;
    rep.frame_intact = true;
    if (!rep.local) rep.detail = "runs fault differently";
    return rep;
  }

  std::map<uint32_t, uint32_t> rename;
  if (!alloc_renaming(base.allocs, framed.allocs, rename)) {
    rep.detail = "allocation logs do not pair up";
    rep.local = false;
    return rep;
  }
  rep.alloc_renamed = std::any_of(rename.begin(), rename.end(), [](const auto& kv) { return kv.first != kv.second; });

  const Heap& framed_final = framed.get().heap;
  rep.frame_intact = frame.subheap_of(framed_final);
  if (!rep.frame_intact) {
    rep.detail = "frame cells were modified or freed";
    rep.local = false;
    return rep;
  }
  Heap framed_minus = framed_final.minus(frame);
  Heap base_renamed = rename_heap(base.get().heap, rename);
  Value val_renamed = rename_value(base.get().value, rename);
  rep.results_agree = base_renamed == framed_minus && val_renamed == framed.get().value;
  rep.local = rep.results_agree;
  if (!rep.local) rep.detail = "result value or heap differs beyond allocation renaming";
  return rep;
}

}  // namespace pinlog
