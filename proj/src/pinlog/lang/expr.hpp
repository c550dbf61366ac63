#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pinlog/lang/value.hpp"

namespace pinlog {

enum class ArithOp { Add, Sub, Mul, Div, Mod, Lt, Le };

const char* to_string(ArithOp op);

// Abstract syntax of the imperative lambda-calculus. Field access forms
// are kept abstract and desugar through the global field-offset table at
// evaluation time.
struct Expr {
  enum class Kind {
    Var,
    Lit,
    Let,
    If,
    Fix,
    App,
    EqTest,
    Arith,
    LocOffset,
    Alloc,
    Free,
    Load,
    Store,
    FieldRead,
    FieldWrite,
    FieldAddr,
  };

  using Ptr = std::shared_ptr<const Expr>;

  Kind kind;
  std::string name;   // Var; Fix fixpoint name; Field* field name
  std::string param;  // Fix parameter
  Value lit;          // Lit
  ArithOp op = ArithOp::Add;
  uint32_t offset = 0;  // LocOffset step
  Ptr a, b, c;          // children, meaning depends on kind

  static Ptr var(std::string n);
  static Ptr lit_value(Value v);
  static Ptr let(std::string x, Ptr e1, Ptr e2);
  static Ptr if_(Ptr cond, Ptr then_e, Ptr else_e);
  static Ptr fix(std::string f, std::string x, Ptr body);
  static Ptr lam(std::string x, Ptr body);  // fix with unused self name
  static Ptr app(Ptr f, Ptr arg);
  static Ptr eq(Ptr e1, Ptr e2);
  static Ptr arith(ArithOp op, Ptr e1, Ptr e2);
  static Ptr loc_offset(Ptr e, uint32_t n);
  static Ptr alloc(Ptr n);
  static Ptr free_(Ptr n, Ptr p);
  static Ptr load(Ptr p);
  static Ptr store(Ptr p, Ptr v);
  static Ptr field_read(Ptr p, std::string f);
  static Ptr field_write(Ptr p, std::string f, Ptr v);
  static Ptr field_addr(Ptr p, std::string f);
};

using ExprPtr = Expr::Ptr;

// Global field-offset table shared by every container layout.
// list: elem 0, next 1; dict: key 0, log 1, nxt 2; tree: elem 0, lft 1,
// rgt 2; logger: level 0.
bool known_field(const std::string& f);
uint32_t field_offset(const std::string& f);
const std::vector<std::string>& known_fields();

struct Closure {
  std::string self;
  std::string param;
  ExprPtr body;
  // Captured environment; stored flat since environments are tiny.
  std::vector<std::pair<std::string, Value>> captured;
};

}  // namespace pinlog
