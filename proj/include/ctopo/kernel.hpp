#pragma once

// Kernel: the enumeration phi_0, phi_1, ... together with the program
// transformations every other module builds on (parameterization,
// composition, union and intersection of domains).

#include <vector>

#include "ctopo/assembler.hpp"
#include "ctopo/machine.hpp"
#include "ctopo/nat.hpp"
#include "ctopo/program.hpp"

namespace ctopo {

/// Code of the empty program: the identity function (one implicit HALT step).
inline const Nat kIdentityCode{0};
/// Code of [JMP 0]: diverges on every input.
inline const Nat kDivergeCode = encode(Program{Instruction{Opcode::Jmp, {}}});

inline Nat code_of(const Program& p) { return encode(p); }
inline Nat code_of_text(std::string_view text) { return encode(assemble(text)); }

namespace templates {

/// [CONST 1 a; PAIR 0 1 0; CONST 1 p; UEVAL 0 1 0; HALT]; holes 0 = p, 1 = a.
inline const Assembler::Template& smn() {
  static const Assembler::Template t = [] {
    Assembler a;
    Assembler::Reg r1 = a.reg();
    a.hole(r1, 1);
    a.pair(Assembler::in(), r1, Assembler::in());
    a.hole(r1, 0);
    a.ueval(Assembler::out(), r1, Assembler::in());
    a.halt();
    return a.finish_template();
  }();
  return t;
}

/// phi_i(phi_j(x)); holes 0 = i, 1 = j.
inline const Assembler::Template& compose() {
  static const Assembler::Template t = [] {
    Assembler a;
    Assembler::Reg r1 = a.reg();
    a.hole(r1, 1);
    a.ueval(Assembler::in(), r1, Assembler::in());
    a.hole(r1, 0);
    a.ueval(Assembler::out(), r1, Assembler::in());
    a.halt();
    return a.finish_template();
  }();
  return t;
}

/// Halts iff both phi_i(x) and phi_j(x) halt (run one after the other).
inline const Assembler::Template& w_intersect() {
  static const Assembler::Template t = [] {
    Assembler a;
    Assembler::Reg x = a.reg();
    Assembler::Reg c = a.reg();
    Assembler::Reg sink = a.reg();
    a.copy(x, Assembler::in());
    a.hole(c, 0);
    a.ueval(sink, c, x);
    a.hole(c, 1);
    a.ueval(sink, c, x);
    a.halt();
    return a.finish_template();
  }();
  return t;
}

/// Halts iff phi_i(x) or phi_j(x) halts: both are run with a doubling budget.
inline const Assembler::Template& w_union() {
  static const Assembler::Template t = [] {
    Assembler a;
    auto x = a.reg();
    auto ci = a.reg();
    auto cj = a.reg();
    auto budget = a.reg(1);
    auto res = a.reg();
    a.copy(x, Assembler::in());
    a.hole(ci, 0);
    a.hole(cj, 1);
    auto loop = a.here();
    auto done = a.label();
    a.timed(res, ci, x, budget);
    a.jnz(res, done);
    a.timed(res, cj, x, budget);
    a.jnz(res, done);
    a.add(budget, budget, budget);
    a.jmp(loop);
    a.bind(done);
    a.halt();
    return a.finish_template();
  }();
  return t;
}

}  // namespace templates

/// phi_{smn(p,a)}(x) = phi_p(<a, x>), five steps of overhead.
inline Nat smn(const Nat& p, const Nat& a) { return encode(instantiate(templates::smn(), {p, a})); }

/// phi_{compose(i,j)} = phi_i o phi_j.
inline Nat compose(const Nat& i, const Nat& j) {
  return encode(instantiate(templates::compose(), {i, j}));
}

/// dom = W_i u W_j.
inline Nat w_union(const Nat& i, const Nat& j) {
  return encode(instantiate(templates::w_union(), {i, j}));
}

/// dom = W_i n W_j.
inline Nat w_intersect(const Nat& i, const Nat& j) {
  return encode(instantiate(templates::w_intersect(), {i, j}));
}

/// Program that ignores its input and returns v.
inline Nat constant_code(const Nat& v) {
  Assembler a;
  a.ret_const(v);
  return encode(a.finish());
}

/// Template of constant_code, hole 0 = v.
inline const Assembler::Template& constant_template() {
  static const Assembler::Template t = [] {
    Assembler a;
    a.hole(Assembler::out(), 0);
    a.halt();
    return a.finish_template();
  }();
  return t;
}

/// Program halting exactly on the listed inputs (returns the input).
inline Nat finite_acceptor(const std::vector<Nat>& members) {
  Assembler a;
  auto yes = a.label();
  for (const auto& m : members) a.jeq_const(Assembler::in(), m, yes);
  a.diverge();
  a.bind(yes);
  a.halt();
  return encode(a.finish());
}

/// Builds a program by running `body` on a fresh assembler.
template <class Body>
Nat assemble_code(Body&& body) {
  Assembler a;
  body(a);
  return encode(a.finish());
}

/// In-machine builder: on input a, returns smn(p, a) for the fixed p.
inline Nat smn_builder(const Nat& p) {
  return assemble_code([&](Assembler& a) {
    auto pr = a.reg(p);
    a.quote(Assembler::out(), templates::smn(), {pr, Assembler::in()});
    a.halt();
  });
}

}  // namespace ctopo
