#pragma once

// Fuel-bounded universal evaluation of program codes.
//
// Every executed instruction costs one step; running off either end of the
// program (including a jump outside it) executes an implicit HALT which also
// costs one step. UEVAL and TEVAL charge the callee's steps to the caller.
//
//   UEVAL r s t : r := phi_{reg s}(reg t), with the caller's remaining fuel
//   TEVAL r s t : with <x, b> = reg t, run phi_{reg s}(x) for at most b steps;
//                 r := <1, <value, steps>> if it halted, 0 otherwise
//
// TEVAL is what makes in-machine dovetailing possible. Running out of the
// caller's own fuel inside a callee is global exhaustion, so outcomes are
// monotone in fuel.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ctopo/nat.hpp"
#include "ctopo/program.hpp"

namespace ctopo {

using Fuel = std::uint64_t;

struct Outcome {
  bool halted = false;
  Nat value;
  std::uint64_t steps = 0;

  static Outcome Halted(Nat v, std::uint64_t k) { return {true, std::move(v), k}; }
  static Outcome OutOfFuel(std::uint64_t k) { return {false, Nat(0), k}; }

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// Program prepared for execution: registers renamed to dense slots and jump
/// offsets resolved to absolute targets (or "halt").
struct Executable {
  struct Op {
    Opcode op = Opcode::Halt;
    std::uint32_t a = 0, b = 0, c = 0;
    std::size_t target = 0;  // for jumps; == ops.size() means halt
    std::uint32_t konst = 0;
  };
  std::vector<Op> ops;
  std::vector<Nat> consts;
  std::uint32_t registers = 1;
};

inline Executable prepare(const Program& prog) {
  Executable exe;
  std::map<Nat, std::uint32_t> slots{{Nat(0), 0}};
  auto slot = [&](const Nat& r) {
    auto [it, fresh] = slots.try_emplace(r, static_cast<std::uint32_t>(slots.size()));
    return it->second;
  };
  const Nat size(prog.size());
  exe.ops.reserve(prog.size());
  for (std::size_t pc = 0; pc < prog.size(); ++pc) {
    const Instruction& ins = prog[pc];
    Executable::Op o;
    o.op = ins.op;
    switch (ins.op) {
      case Opcode::Halt: break;
      case Opcode::Jz:
      case Opcode::Jmp: {
        const Nat& off = ins.op == Opcode::Jz ? ins.arg[1] : ins.arg[0];
        if (ins.op == Opcode::Jz) o.a = slot(ins.arg[0]);
        Nat t = Nat(pc) + off;
        o.target = (t < 0 || t >= size) ? prog.size() : static_cast<std::size_t>(t);
        break;
      }
      case Opcode::Inc: o.a = slot(ins.arg[0]); break;
      case Opcode::Const:
        o.a = slot(ins.arg[0]);
        o.konst = static_cast<std::uint32_t>(exe.consts.size());
        exe.consts.push_back(ins.arg[1]);
        break;
      case Opcode::Copy:
      case Opcode::Unl:
      case Opcode::Unr:
        o.a = slot(ins.arg[0]);
        o.b = slot(ins.arg[1]);
        break;
      default:
        o.a = slot(ins.arg[0]);
        o.b = slot(ins.arg[1]);
        o.c = slot(ins.arg[2]);
    }
    exe.ops.push_back(o);
  }
  exe.registers = static_cast<std::uint32_t>(slots.size());
  return exe;
}

namespace detail {

class ExecutableCache {
 public:
  std::shared_ptr<const Executable> get(const Nat& code) {
    if (auto it = map_.find(code); it != map_.end()) return it->second;
    if (map_.size() > kMaxEntries) map_.clear();
    auto exe = std::make_shared<const Executable>(prepare(decode(code)));
    map_.emplace(code, exe);
    return exe;
  }

 private:
  static constexpr std::size_t kMaxEntries = 1 << 16;
  std::unordered_map<Nat, std::shared_ptr<const Executable>, NatHash> map_;
};

inline ExecutableCache& cache() {
  thread_local ExecutableCache c;
  return c;
}

}  // namespace detail

/// Runs phi_code(input) with the given step budget.
inline Outcome run(const Nat& code, const Nat& input, Fuel fuel) {
  struct Frame {
    std::shared_ptr<const Executable> exe;
    std::vector<Nat> regs;
    std::size_t pc = 0;
    std::uint64_t limit = 0;
    std::uint64_t start = 0;
    std::uint32_t ret = 0;
    bool timed = false;
  };
  auto& cache = detail::cache();
  std::vector<Frame> stack;
  std::uint64_t steps = 0;

  auto push = [&](const Nat& callee, Nat arg, std::uint64_t limit, std::uint32_t ret, bool timed) {
    Frame f;
    f.exe = cache.get(callee);
    f.regs.resize(f.exe->registers);
    f.regs[0] = std::move(arg);
    f.limit = limit;
    f.start = steps;
    f.ret = ret;
    f.timed = timed;
    stack.push_back(std::move(f));
  };
  push(code, input, fuel, 0, false);

  for (;;) {
    Frame& f = stack.back();
    if (steps >= f.limit) {
      std::size_t i = 0;
      while (stack[i].limit > steps) ++i;
      if (i == 0) return Outcome::OutOfFuel(steps);
      // stack[i] is a TEVAL callee whose own budget ran out.
      const std::uint32_t ret = stack[i].ret;
      stack.resize(i);
      Frame& p = stack.back();
      p.regs[ret] = 0;
      ++p.pc;
      continue;
    }
    ++steps;
    const auto& ops = f.exe->ops;
    if (f.pc >= ops.size() || ops[f.pc].op == Opcode::Halt) {
      Nat value = std::move(f.regs[0]);
      const std::uint64_t used = steps - f.start;
      const bool timed = f.timed;
      const std::uint32_t ret = f.ret;
      stack.pop_back();
      if (stack.empty()) return Outcome::Halted(std::move(value), steps);
      Frame& p = stack.back();
      p.regs[ret] = timed ? pair(1, pair(value, Nat(used))) : std::move(value);
      ++p.pc;
      continue;
    }
    const Executable::Op& o = ops[f.pc];
    auto& r = f.regs;
    switch (o.op) {
      case Opcode::Halt: break;  // handled above
      case Opcode::Jz:
        if (r[o.a] == 0) {
          f.pc = o.target;
          continue;
        }
        break;
      case Opcode::Jmp: f.pc = o.target; continue;
      case Opcode::Inc: ++r[o.a]; break;
      case Opcode::Const: r[o.a] = f.exe->consts[o.konst]; break;
      case Opcode::Copy: r[o.a] = r[o.b]; break;
      case Opcode::Add: r[o.a] = r[o.b] + r[o.c]; break;
      case Opcode::Monus: r[o.a] = monus(r[o.b], r[o.c]); break;
      case Opcode::Mul: r[o.a] = r[o.b] * r[o.c]; break;
      case Opcode::Pair: r[o.a] = pair(r[o.b], r[o.c]); break;
      case Opcode::Unl: r[o.a] = unpair_left(r[o.b]); break;
      case Opcode::Unr: r[o.a] = unpair_right(r[o.b]); break;
      case Opcode::Ueval: {
        Nat callee = r[o.b];
        Nat arg = r[o.c];
        push(callee, std::move(arg), f.limit, o.a, false);
        continue;
      }
      case Opcode::Teval: {
        Nat callee = r[o.b];
        auto [arg, budget] = unpair(r[o.c]);
        const std::uint64_t b = saturate_u64(budget);
        const std::uint64_t end = b > f.limit - steps ? f.limit : steps + b;
        push(callee, std::move(arg), end, o.a, true);
        continue;
      }
    }
    ++stack.back().pc;
  }
}

inline Outcome run(const Nat& code, const Nat& input, const Nat& fuel) {
  return run(code, input, saturate_u64(fuel));
}

struct HaltReport {
  bool halted = false;
  std::optional<std::uint64_t> steps;
};

/// Decides whether phi_p(n) halts within k steps.
inline HaltReport halts_within(const Nat& p, const Nat& n, Fuel k) {
  Outcome o = run(p, n, k);
  if (!o.halted) return {};
  return {true, o.steps};
}

/// Dovetailed enumeration of W_i = dom(phi_i): in round t (t = 1..rounds) the
/// inputs 0..t are each run with fuel t. Discovery order, no duplicates.
inline std::vector<Nat> w_enumerate(const Nat& i, std::uint64_t rounds) {
  std::vector<Nat> found;
  std::vector<bool> seen;
  for (std::uint64_t t = 1; t <= rounds; ++t) {
    seen.resize(t + 1, false);
    for (std::uint64_t n = 0; n <= t; ++n) {
      if (seen[n]) continue;
      if (run(i, Nat(n), t).halted) {
        seen[n] = true;
        found.emplace_back(n);
      }
    }
  }
  return found;
}

}  // namespace ctopo
