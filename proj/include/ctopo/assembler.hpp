#pragma once

// Label-resolving builder used to write the in-machine program library.
//
// Registers are allocated fresh per program (register 0 holds the input and
// the result). Macros only clobber the builder's private scratch registers.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ctopo/nat.hpp"
#include "ctopo/program.hpp"

namespace ctopo {

class Assembler {
 public:
  struct Reg {
    std::uint32_t id = 0;
  };
  struct Label {
    std::size_t id = 0;
  };

  /// A program with CONST values left open, filled from registers by quote().
  struct Template {
    Program program;
    std::map<std::size_t, std::size_t> holes;  // pc of a CONST -> hole index
  };

  static constexpr Reg in() { return Reg{0}; }
  static constexpr Reg out() { return Reg{0}; }

  Reg reg() { return Reg{next_reg_++}; }
  Reg reg(const Nat& value) {
    Reg r = reg();
    set(r, value);
    return r;
  }

  Label label() {
    labels_.push_back(kUnbound);
    return Label{labels_.size() - 1};
  }
  void bind(Label l) { labels_[l.id] = code_.size(); }
  Label here() {
    Label l = label();
    bind(l);
    return l;
  }

  // -- raw instructions -----------------------------------------------------
  void halt() { emit(Opcode::Halt, {}); }
  /// CONST r <hole>, to be filled when the finished program is used as a Template.
  void hole(Reg r, std::size_t index) {
    holes_[code_.size()] = index;
    set(r, 0);
  }
  void set(Reg r, const Nat& v) { emit(Opcode::Const, {Nat(r.id), v}); }
  void copy(Reg d, Reg s) { emit(Opcode::Copy, {Nat(d.id), Nat(s.id)}); }
  void inc(Reg r) { emit(Opcode::Inc, {Nat(r.id)}); }
  void add(Reg d, Reg a, Reg b) { emit3(Opcode::Add, d, a, b); }
  void monus(Reg d, Reg a, Reg b) { emit3(Opcode::Monus, d, a, b); }
  void mul(Reg d, Reg a, Reg b) { emit3(Opcode::Mul, d, a, b); }
  void pair(Reg d, Reg a, Reg b) { emit3(Opcode::Pair, d, a, b); }
  void unl(Reg d, Reg s) { emit(Opcode::Unl, {Nat(d.id), Nat(s.id)}); }
  void unr(Reg d, Reg s) { emit(Opcode::Unr, {Nat(d.id), Nat(s.id)}); }
  void ueval(Reg d, Reg code, Reg arg) { emit3(Opcode::Ueval, d, code, arg); }
  void teval(Reg d, Reg code, Reg arg) { emit3(Opcode::Teval, d, code, arg); }
  void jz(Reg r, Label l) { emit_jump(Opcode::Jz, r, l); }
  void jmp(Label l) { emit_jump(Opcode::Jmp, Reg{}, l); }

  // -- macros ---------------------------------------------------------------
  void diverge() { emit(Opcode::Jmp, {Nat(0)}); }
  void ret(Reg v) {
    if (v.id != 0) copy(out(), v);
    halt();
  }
  void ret_const(const Nat& v) {
    set(out(), v);
    halt();
  }
  void split(Reg left, Reg right, Reg src) {
    // Order matters when src aliases left or right.
    Reg t = scratch(0);
    copy(t, src);
    unl(left, t);
    unr(right, t);
  }
  void jnz(Reg r, Label l) {
    Label skip = label();
    jz(r, skip);
    jmp(l);
    bind(skip);
  }
  /// Jumps when a < b.
  void jlt(Reg a, Reg b, Label l) {
    monus(scratch(0), b, a);
    jnz(scratch(0), l);
  }
  /// Jumps when a <= b.
  void jle(Reg a, Reg b, Label l) {
    monus(scratch(0), a, b);
    jz(scratch(0), l);
  }
  void jeq(Reg a, Reg b, Label l) {
    monus(scratch(0), a, b);
    monus(scratch(1), b, a);
    add(scratch(0), scratch(0), scratch(1));
    jz(scratch(0), l);
  }
  void jeq_const(Reg a, const Nat& v, Label l) {
    set(scratch(2), v);
    jeq(a, scratch(2), l);
  }
  void dec(Reg r) {
    set(scratch(0), 1);
    monus(r, r, scratch(0));
  }
  void add_const(Reg d, Reg a, const Nat& v) {
    set(scratch(0), v);
    add(d, a, scratch(0));
  }
  void mul_const(Reg d, Reg a, const Nat& v) {
    set(scratch(0), v);
    mul(d, a, scratch(0));
  }
  void call(Reg d, const Nat& code, Reg arg) {
    set(scratch(3), code);
    ueval(d, scratch(3), arg);
  }
  void call(Reg d, const Nat& code, Reg a, Reg b) {
    pair(scratch(4), a, b);
    call(d, code, scratch(4));
  }
  /// d := TEVAL of phi_code(arg) with the given budget.
  void timed(Reg d, Reg code, Reg arg, Reg budget) {
    pair(scratch(4), arg, budget);
    teval(d, code, scratch(4));
  }
  void timed_const(Reg d, const Nat& code, Reg arg, Reg budget) {
    set(scratch(3), code);
    timed(d, scratch(3), arg, budget);
  }
  /// Extracts the value from a halted TEVAL result <1, <v, k>>.
  void timed_value(Reg d, Reg result) {
    unr(scratch(0), result);
    unl(d, scratch(0));
  }
  void timed_steps(Reg d, Reg result) {
    unr(scratch(0), result);
    unr(d, scratch(0));
  }

  /// d := code of the template program with holes filled from `fill`.
  /// Produces exactly the code that encode() would.
  void quote(Reg d, const Template& t, const std::vector<Reg>& fill);

  Program finish() {
    Program p;
    p.reserve(code_.size());
    for (std::size_t pc = 0; pc < code_.size(); ++pc) {
      Instruction ins = code_[pc].ins;
      if (code_[pc].label) {
        const std::size_t target = labels_.at(*code_[pc].label);
        if (target == kUnbound) throw std::logic_error("unbound label");
        const Nat off = Nat(target) - Nat(pc);
        ins.arg[offset_operand(ins.op)] = off;
      }
      p.push_back(ins);
    }
    return p;
  }

  Template finish_template() { return Template{finish(), holes_}; }

  std::size_t size() const { return code_.size(); }

 private:
  static constexpr std::size_t kUnbound = std::numeric_limits<std::size_t>::max();

  struct Pending {
    Instruction ins;
    std::optional<std::size_t> label;
  };

  Reg scratch(std::size_t i) {
    while (scratch_.size() <= i) scratch_.push_back(reg());
    return scratch_[i];
  }

  void emit(Opcode op, std::vector<Nat> args) {
    Pending p;
    p.ins.op = op;
    for (std::size_t i = 0; i < args.size(); ++i) p.ins.arg[i] = std::move(args[i]);
    code_.push_back(std::move(p));
  }
  void emit3(Opcode op, Reg d, Reg a, Reg b) { emit(op, {Nat(d.id), Nat(a.id), Nat(b.id)}); }
  void emit_jump(Opcode op, Reg r, Label l) {
    Pending p;
    p.ins.op = op;
    if (op == Opcode::Jz) p.ins.arg[0] = r.id;
    p.label = l.id;
    code_.push_back(std::move(p));
  }

  std::uint32_t next_reg_ = 1;
  std::vector<Reg> scratch_;
  std::vector<std::size_t> labels_;
  std::vector<Pending> code_;
  std::map<std::size_t, std::size_t> holes_;
};

/// Fills the holes of a template on the host side.
inline Program instantiate(const Assembler::Template& t, const std::vector<Nat>& fill) {
  Program p = t.program;
  for (const auto& [pc, idx] : t.holes) p[pc].arg[1] = fill.at(idx);
  return p;
}

/// On v >= 1: <L, 2^(L-1)> with L = bitlen(v), by galloping then halving the step.
inline const Nat& bit_length_program() {
  static const Nat code = [] {
    using Reg = Assembler::Reg;
    using Label = Assembler::Label;
    Assembler a;
    Reg v = a.reg(), len = a.reg(0), p = a.reg(1), s = a.reg(1), big = a.reg(2), t = a.reg();
    Reg stack = a.reg(0), depth = a.reg(0), top = a.reg();
    a.copy(v, Assembler::in());
    Label up = a.here();
    Label down = a.label();
    a.mul(t, p, big);
    a.jlt(v, t, down);
    a.copy(p, t);
    a.add(len, len, s);
    a.pair(top, s, big);
    a.pair(stack, top, stack);
    a.inc(depth);
    a.add(s, s, s);
    a.mul(big, big, big);
    a.jmp(up);
    a.bind(down);
    Label done = a.label();
    a.jz(depth, done);
    a.split(top, stack, stack);
    a.dec(depth);
    a.split(s, big, top);
    a.mul(t, p, big);
    a.jlt(v, t, down);
    a.copy(p, t);
    a.add(len, len, s);
    a.jmp(down);
    a.bind(done);
    a.inc(len);
    a.pair(Assembler::out(), len, p);
    a.halt();
    return encode(a.finish());
  }();
  return code;
}

/// On v: <e, 2^w> where e is the self-delimiting element of v and w its width.
inline const Nat& element_program() {
  static const Nat code = [] {
    using Reg = Assembler::Reg;
    Assembler a;
    Reg v = a.reg(), l = a.reg(), pl = a.reg(), k = a.reg(), pk = a.reg(), t = a.reg(),
        e = a.reg(), u = a.reg(), two = a.reg(2), bl = a.reg(bit_length_program());
    a.copy(v, Assembler::in());
    Assembler::Label nonzero = a.label();
    a.jnz(v, nonzero);
    a.pair(Assembler::out(), v, two);
    a.halt();
    a.bind(nonzero);
    a.ueval(t, bl, v);
    a.split(l, pl, t);  // pl = 2^(l-1)
    a.ueval(t, bl, l);
    a.split(k, pk, t);  // pk = 2^(k-1)
    // e = (2^k - 1) + (l - 2^(k-1)) 2^(k+1) + (v - 2^(l-1)) 2^(2k)
    a.add(e, pk, pk);
    a.dec(e);
    a.add(t, pk, pk);
    a.add(t, t, t);  // 2^(k+1)
    a.monus(u, l, pk);
    a.mul(u, u, t);
    a.add(e, e, u);
    a.mul(t, t, pk);  // 2^(2k)
    a.monus(u, v, pl);
    a.mul(u, u, t);
    a.add(e, e, u);
    a.mul(t, t, pl);  // 2^(2k + l - 1)
    a.pair(Assembler::out(), e, t);
    a.halt();
    return encode(a.finish());
  }();
  return code;
}

inline void Assembler::quote(Reg d, const Template& t, const std::vector<Reg>& fill) {
  // Split the template's number stream into constant runs and holes.
  struct Run {
    Nat bits;
    std::size_t width = 0;
  };
  std::vector<Run> runs(1);
  std::vector<std::size_t> hole_order;
  for (std::size_t pc = 0; pc < t.program.size(); ++pc) {
    auto elems = instruction_elements(t.program[pc]);
    auto it = t.holes.find(pc);
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (it != t.holes.end() && i == 2) {
        hole_order.push_back(it->second);
        runs.emplace_back();
        continue;
      }
      Element e = encode_element(elems[i]);
      runs.back().bits |= e.bits << runs.back().width;
      runs.back().width += e.width;
    }
  }
  Reg acc = reg(), shift = reg(), v = reg(), el = reg(), f = reg(), ep = reg(element_program());
  if (t.program.empty()) throw std::logic_error("quote of empty template");
  set(acc, runs[0].bits);
  set(shift, Nat(1) << runs[0].width);
  for (std::size_t h = 0; h < hole_order.size(); ++h) {
    ueval(v, ep, fill.at(hole_order[h]));
    split(el, f, v);
    mul(el, el, shift);
    add(acc, acc, el);
    mul(shift, shift, f);
    const Run& r = runs[h + 1];
    if (r.width == 0) continue;
    set(el, r.bits);
    mul(el, el, shift);
    add(acc, acc, el);
    mul_const(shift, shift, Nat(1) << r.width);
  }
  add(d, acc, shift);  // end marker
}

}  // namespace ctopo
