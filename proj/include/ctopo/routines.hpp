#pragma once

// Shared in-machine routines: halving, exact rational arithmetic on codes and
// the dovetailing loop skeleton used by every search program.
//
// Rationals are handled inside the machine as signed-difference triples
// <P, <N, D>> denoting (P - N) / D with D >= 1, so no operation needs a sign
// case split. Denominators are never reduced.

#include "ctopo/assembler.hpp"
#include "ctopo/kernel.hpp"
#include "ctopo/nat.hpp"

namespace ctopo::routines {

using Reg = Assembler::Reg;
using Label = Assembler::Label;

/// dst := 2^n (loop, n is left intact).
inline void pow2(Assembler& a, Reg dst, Reg n) {
  Reg i = a.reg();
  a.copy(i, n);
  a.set(dst, 1);
  Label loop = a.here();
  Label done = a.label();
  a.jz(i, done);
  a.add(dst, dst, dst);
  a.dec(i);
  a.jmp(loop);
  a.bind(done);
}

/// <z div 2, z mod 2>, O(log^2 z) steps.
inline const Nat& halve_code() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg z = a.reg(), one = a.reg(1), p = a.reg(1), p2 = a.reg(), bits = a.reg();
    Reg h = a.reg(), rem = a.reg(), half = a.reg(), pw = a.reg(), i = a.reg();
    a.copy(z, Assembler::in());
    Label general = a.label();
    a.jlt(one, z, general);
    a.set(h, 0);
    a.pair(Assembler::out(), h, z);
    a.halt();

    a.bind(general);
    Label grow = a.here();
    Label grown = a.label();
    a.add(p2, p, p);
    a.jlt(z, p2, grown);
    a.copy(p, p2);
    a.inc(bits);
    a.jmp(grow);

    a.bind(grown);
    a.copy(rem, z);
    Label outer = a.here();
    Label done = a.label();
    a.jz(bits, done);
    // half := 2^(bits-1), pw := 2^bits
    a.copy(i, bits);
    a.dec(i);
    pow2(a, half, i);
    a.add(pw, half, half);
    Label skip = a.label();
    a.jlt(rem, pw, skip);
    a.monus(rem, rem, pw);
    a.add(h, h, half);
    a.bind(skip);
    a.dec(bits);
    a.jmp(outer);

    a.bind(done);
    a.pair(Assembler::out(), h, rem);
    a.halt();
  });
  return code;
}

/// dst := parity of src (fast path for src <= 1).
inline void parity(Assembler& a, Reg dst, Reg src) {
  Reg one = a.reg(1);
  Label slow = a.label(), done = a.label();
  a.jlt(one, src, slow);
  a.copy(dst, src);
  a.jmp(done);
  a.bind(slow);
  a.call(dst, halve_code(), src);
  a.unr(dst, dst);
  a.bind(done);
}

// -- signed-difference rationals -------------------------------------------

struct Sdr {
  Reg p, n, d;
};

inline Sdr sdr(Assembler& a) { return {a.reg(), a.reg(), a.reg()}; }

inline void unpack(Assembler& a, Sdr dst, Reg src) {
  Reg rest = a.reg();
  a.split(dst.p, rest, src);
  a.split(dst.n, dst.d, rest);
}

inline void pack(Assembler& a, Reg dst, Sdr v) {
  Reg rest = a.reg();
  a.pair(rest, v.n, v.d);
  a.pair(dst, v.p, rest);
}

/// Rational code <a, <b, c>> (value (-1)^a b/(c+1)) -> <P, <N, D>>.
inline const Nat& qdec_code() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg sign = a.reg(), m = a.reg(), b = a.reg(), c = a.reg(), par = a.reg(), zero = a.reg(0);
    a.split(sign, m, Assembler::in());
    a.split(b, c, m);
    a.inc(c);
    parity(a, par, sign);
    Label neg = a.label();
    a.jnz(par, neg);
    pack(a, Assembler::out(), {b, zero, c});
    a.halt();
    a.bind(neg);
    pack(a, Assembler::out(), {zero, b, c});
    a.halt();
  });
  return code;
}

/// <P, <N, D>> -> canonical-sign rational code (denominator not reduced).
inline const Nat& qenc_code() {
  static const Nat code = assemble_code([](Assembler& a) {
    Sdr v = sdr(a);
    Reg diff = a.reg(), sign = a.reg(), rest = a.reg();
    unpack(a, v, Assembler::in());
    a.dec(v.d);
    Label pos = a.label(), neg = a.label();
    a.monus(diff, v.p, v.n);
    a.jnz(diff, pos);
    a.monus(diff, v.n, v.p);
    a.jnz(diff, neg);
    a.ret_const(0);
    a.bind(neg);
    a.set(sign, 1);
    a.bind(pos);
    a.pair(rest, diff, v.d);
    a.pair(Assembler::out(), sign, rest);
    a.halt();
  });
  return code;
}

/// <x, y> -> x + y.
inline const Nat& qadd_code() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg x = a.reg(), y = a.reg(), t = a.reg(), u = a.reg();
    Sdr p = sdr(a), q = sdr(a), r = sdr(a);
    a.split(x, y, Assembler::in());
    unpack(a, p, x);
    unpack(a, q, y);
    a.mul(t, p.p, q.d);
    a.mul(u, q.p, p.d);
    a.add(r.p, t, u);
    a.mul(t, p.n, q.d);
    a.mul(u, q.n, p.d);
    a.add(r.n, t, u);
    a.mul(r.d, p.d, q.d);
    pack(a, Assembler::out(), r);
    a.halt();
  });
  return code;
}

/// <x, y> -> x * y.
inline const Nat& qmul_code() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg x = a.reg(), y = a.reg(), t = a.reg(), u = a.reg();
    Sdr p = sdr(a), q = sdr(a), r = sdr(a);
    a.split(x, y, Assembler::in());
    unpack(a, p, x);
    unpack(a, q, y);
    a.mul(t, p.p, q.p);
    a.mul(u, p.n, q.n);
    a.add(r.p, t, u);
    a.mul(t, p.p, q.n);
    a.mul(u, p.n, q.p);
    a.add(r.n, t, u);
    a.mul(r.d, p.d, q.d);
    pack(a, Assembler::out(), r);
    a.halt();
  });
  return code;
}

/// <x, y> -> 1 if x < y else 0.
inline const Nat& qlt_code() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg x = a.reg(), y = a.reg(), lhs = a.reg(), rhs = a.reg(), t = a.reg();
    Sdr p = sdr(a), q = sdr(a);
    a.split(x, y, Assembler::in());
    unpack(a, p, x);
    unpack(a, q, y);
    // P1 D2 + N2 D1 < P2 D1 + N1 D2
    a.mul(lhs, p.p, q.d);
    a.mul(t, q.n, p.d);
    a.add(lhs, lhs, t);
    a.mul(rhs, q.p, p.d);
    a.mul(t, p.n, q.d);
    a.add(rhs, rhs, t);
    Label yes = a.label();
    a.jlt(lhs, rhs, yes);
    a.ret_const(0);
    a.bind(yes);
    a.ret_const(1);
  });
  return code;
}

/// Jumps to `yes` when x < y (both registers hold signed-difference triples).
inline void jump_if_less(Assembler& a, Reg x, Reg y, Label yes) {
  Reg t = a.reg();
  a.call(t, qlt_code(), x, y);
  a.jnz(t, yes);
}

/// lo := q - 1/pw and hi := q + 1/pw for a triple q.
inline void widen(Assembler& a, Reg lo, Reg hi, Reg q, Reg pw) {
  Sdr v = sdr(a), w = sdr(a);
  unpack(a, v, q);
  a.mul(w.p, v.p, pw);
  a.mul(w.n, v.n, pw);
  a.add(w.n, w.n, v.d);
  a.mul(w.d, v.d, pw);
  pack(a, lo, w);
  a.mul(w.p, v.p, pw);
  a.add(w.p, w.p, v.d);
  a.mul(w.n, v.n, pw);
  pack(a, hi, w);
}

/// dst := rational code of 1/pw.
inline void inverse_code(Assembler& a, Reg dst, Reg pw) {
  Reg zero = a.reg(0), one = a.reg(1), c = a.reg();
  a.copy(c, pw);
  a.dec(c);
  a.pair(dst, one, c);
  a.pair(dst, zero, dst);
}

// -- dovetailing ------------------------------------------------------------

/// Budget schedule of a dovetail: linear (base + step * round) or doubling.
/// A wide dovetail visits k < 2^(r+1) in round r instead of k <= r.
struct Schedule {
  Nat base;
  Nat step;
  bool doubling = false;
  bool wide = false;
};

/// Emits: for round r = 0, 1, 2, ...: per_round(r); for k = 0..r: body(k, budget, next).
/// The body continues the search by jumping to (or falling through to) `next`.
template <class PerRound, class Body>
void dovetail(Assembler& a, const Schedule& s, PerRound&& per_round, Body&& body) {
  Reg r = a.reg(0), k = a.reg(), budget = a.reg(s.base), last = a.reg(0);
  Label round = a.here();
  per_round(r);
  a.set(k, 0);
  Label inner = a.here();
  Label next = a.label();
  body(k, budget, next);
  a.bind(next);
  Label new_round = a.label();
  a.jeq(k, s.wide ? last : r, new_round);
  a.inc(k);
  a.jmp(inner);
  a.bind(new_round);
  a.inc(r);
  if (s.wide) {
    a.add(last, last, last);
    a.inc(last);
  }
  if (s.doubling) {
    a.add(budget, budget, budget);
  } else {
    a.add_const(budget, budget, s.step);
  }
  a.jmp(round);
}

}  // namespace ctopo::routines
