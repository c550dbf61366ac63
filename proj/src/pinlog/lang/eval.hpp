#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pinlog/lang/expr.hpp"
#include "pinlog/lang/value.hpp"

namespace pinlog {

struct Fault {
  enum class Kind { FuelExhausted, MemFault, TypeFault, UnboundVar, Overflow };
  Kind kind;
  std::string detail;
};

const char* to_string(Fault::Kind k);

struct Env {
  std::vector<std::pair<std::string, Value>> binds;

  const Value* lookup(const std::string& x) const {
    for (auto it = binds.rbegin(); it != binds.rend(); ++it)
      if (it->first == x) return &it->second;
    return nullptr;
  }
  Env with(std::string x, Value v) const {
    Env e = *this;
    e.binds.emplace_back(std::move(x), std::move(v));
    return e;
  }
};

struct EvalOk {
  Value value;
  Heap heap;
};

struct EvalResult {
  std::variant<EvalOk, Fault> r;
  // One entry per Alloc, in evaluation order; used to compute the
  // allocation-base renaming for frame comparisons.
  std::vector<std::pair<Loc, uint32_t>> allocs;

  bool ok() const { return std::holds_alternative<EvalOk>(r); }
  const EvalOk& get() const { return std::get<EvalOk>(r); }
  const Fault& fault() const { return std::get<Fault>(r); }
};

struct EvalOptions {
  uint64_t fuel = 10000;
  // Integer magnitude bound; arithmetic beyond it faults.
  int64_t int_bound = int64_t{1} << 31;
};

EvalResult eval(const ExprPtr& e, const Env& env, const Heap& h, const EvalOptions& opts);
EvalResult eval(const ExprPtr& e, const Heap& h, const EvalOptions& opts);

// Locality test harness: runs `e` on `h` and on `h ⊎ frame` and compares,
// modulo the allocation-base renaming induced by the two runs.
struct FrameReport {
  bool base_ok = false;
  bool framed_ok = false;
  bool frame_intact = false;       // frame cells unchanged in the framed run
  bool results_agree = false;      // values and final heaps agree mod renaming
  bool alloc_renamed = false;      // runs allocated at different bases
  bool local = false;              // overall verdict
  std::optional<Fault> base_fault;
  std::optional<Fault> framed_fault;
  std::string detail;
};

FrameReport frame_run(const ExprPtr& e, const Heap& h, const Heap& frame, const EvalOptions& opts);

}  // namespace pinlog
