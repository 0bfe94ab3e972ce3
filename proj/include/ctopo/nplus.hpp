#pragma once

// The space N+ = N u {oo}, normed sequences and maps into N+, the weak
// separation search, the Markov diagonalization and its refuter, and a
// bounded search for semi-deciders.
//
// A point of N+ is named by a total non-decreasing 0/1 sequence: first 1 at
// position n names n, all zeros names oo. Open names are semi-deciders of sets
// of basis codes: 2n stands for {n}, 2n+1 for {k : k >= n} (including oo).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctopo/kernel.hpp"
#include "ctopo/machine.hpp"
#include "ctopo/nat.hpp"
#include "ctopo/numberings.hpp"
#include "ctopo/reals.hpp"
#include "ctopo/routines.hpp"
#include "ctopo/topology.hpp"

namespace ctopo::nplus {

using routines::Label;
using routines::Reg;
using routines::Schedule;

// -- names ------------------------------------------------------------------

/// On <n, k>: 1 if k >= n else 0.
inline const Nat& step_program() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg n = a.reg(), k = a.reg();
    a.split(n, k, Assembler::in());
    Label one = a.label();
    a.jle(n, k, one);
    a.ret_const(0);
    a.bind(one);
    a.ret_const(1);
  });
  return code;
}

/// Canonical name of the finite point n.
inline Nat canonical_name(const Nat& n) { return smn(step_program(), n); }

/// Canonical name of oo: the constant 0 sequence.
inline const Nat& infinity_name() {
  static const Nat code = constant_code(0);
  return code;
}

struct Value {
  enum Kind { Equals, AtLeast, Malformed, OutOfFuel } kind = OutOfFuel;
  Nat n;  // the point for Equals, the lower bound horizon + 1 for AtLeast
};

/// Inspects the prefix x(0..horizon), each query with the given fuel.
inline Value nplus_value(const Nat& x, std::uint64_t horizon, Fuel fuel) {
  Nat prev = 0;
  for (std::uint64_t k = 0; k <= horizon; ++k) {
    Outcome o = run(x, Nat(k), fuel);
    if (!o.halted) return {Value::OutOfFuel, Nat(k)};
    if (o.value > 1 || o.value < prev) return {Value::Malformed, Nat(k)};
    if (o.value == 1) {
      // Check the remaining prefix for monotonicity.
      for (std::uint64_t j = k + 1; j <= horizon; ++j) {
        Outcome p = run(x, Nat(j), fuel);
        if (!p.halted) return {Value::OutOfFuel, Nat(j)};
        if (p.value != 1) return {Value::Malformed, Nat(j)};
      }
      return {Value::Equals, Nat(k)};
    }
    prev = o.value;
  }
  return {Value::AtLeast, Nat(horizon + 1)};
}

/// Open name whose basis codes are exactly the listed ones.
inline Nat open_from_codes(const std::vector<Nat>& codes) {
  if (codes.empty()) return kDivergeCode;
  return finite_acceptor(codes);
}

inline Nat point_code(const Nat& n) { return 2 * n; }
inline Nat tail_code(const Nat& n) { return 2 * n + 1; }

// -- membership and the space -----------------------------------------------

namespace detail {

// Emits: jump to `yes` when the name x has x(m-1) = 0 or m = 0, i.e. x >= m.
inline void jump_if_at_least(Assembler& a, Reg x, Reg m, Label yes) {
  Reg t = a.reg(), v = a.reg();
  a.jz(m, yes);
  a.copy(t, m);
  a.dec(t);
  a.ueval(v, x, t);
  a.jz(v, yes);
}

}  // namespace detail

/// On <O, x>: dovetails the basis codes of O against the point named by x.
/// 2m is accepted when x(m) = 1 and x >= m; 2m+1 when x >= m.
inline const Nat& member_program() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg open = a.reg(), x = a.reg(), z = a.reg(), res = a.reg(), v = a.reg();
    a.split(open, x, Assembler::in());
    routines::dovetail(
        a, Schedule{Nat(16), Nat(0), true}, [](Reg) {},
        [&](Reg m, Reg budget, Label next) {
          Label odd = a.label(), yes = a.label();
          a.add(z, m, m);
          a.timed(res, open, z, budget);
          a.jz(res, odd);
          a.ueval(v, x, m);
          a.jz(v, odd);
          detail::jump_if_at_least(a, x, m, yes);
          a.bind(odd);
          a.inc(z);
          a.timed(res, open, z, budget);
          a.jz(res, next);
          detail::jump_if_at_least(a, x, m, yes);
          a.jmp(next);
          a.bind(yes);
          a.halt();
        });
  });
  return code;
}

/// On O: the first m found with 2m+1 in the domain of O.
inline const Nat& find_tail_program() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg open = a.reg(), z = a.reg(), res = a.reg();
    a.copy(open, Assembler::in());
    routines::dovetail(
        a, Schedule{Nat(16), Nat(0), true}, [](Reg) {},
        [&](Reg m, Reg budget, Label next) {
          a.add(z, m, m);
          a.inc(z);
          a.timed(res, open, z, budget);
          a.jz(res, next);
          a.ret(m);
        });
  });
  return code;
}

/// On <<o1, o2>, z>: 2h is accepted when h lies in both opens, 2h+1 when both
/// contain a tail {k >= j} with j <= h.
inline const Nat& intersect_program() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg os = a.reg(), z = a.reg(), o1 = a.reg(), o2 = a.reg(), hz = a.reg(), h = a.reg(),
        par = a.reg(), name = a.reg(), arg = a.reg(), sink = a.reg(), j = a.reg(),
        mem = a.reg(member_program()), stp = a.reg(step_program());
    a.split(os, z, Assembler::in());
    a.split(o1, o2, os);
    a.call(hz, routines::halve_code(), z);
    a.split(h, par, hz);
    Label odd = a.label();
    a.jnz(par, odd);
    a.quote(name, templates::smn(), {stp, h});
    a.pair(arg, o1, name);
    a.ueval(sink, mem, arg);
    a.pair(arg, o2, name);
    a.ueval(sink, mem, arg);
    a.halt();
    a.bind(odd);
    Label no = a.label();
    a.call(j, find_tail_program(), o1);
    a.jlt(h, j, no);
    a.call(j, find_tail_program(), o2);
    a.jlt(h, j, no);
    a.halt();
    a.bind(no);
    a.diverge();
  });
  return code;
}

inline Outcome member_nplus(const Nat& x, const Nat& open, Fuel fuel) {
  return run(member_program(), pair(open, x), fuel);
}

inline const SpaceDescriptor& nplus_space() {
  static const SpaceDescriptor s{
      "nplus",
      member_program(),
      smn_builder(member_program()),
      smn_builder(programs::domain_union()),
      smn_builder(intersect_program()),
      kDivergeCode,
      kIdentityCode,
  };
  return s;
}

// -- normed sequences and maps into N+ --------------------------------------

/// On <pre, O>: the first tail code 2N+1 in the preimage open pre(O); returns N.
inline const Nat& norm_program() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg pre = a.reg(), open = a.reg(), p = a.reg();
    a.split(pre, open, Assembler::in());
    a.ueval(p, pre, open);
    a.call(Assembler::out(), find_tail_program(), p);
    a.halt();
  });
  return code;
}

inline Outcome norm_from_map(const Nat& pre, const Nat& open, Fuel fuel) {
  return run(norm_program(), pair(pre, open), fuel);
}

/// Norm code realised by the preimage map: O -> norm_from_map(pre, O).
inline Nat norm_code_from_map(const Nat& pre) { return smn(norm_program(), pre); }

/// On <<<seq, <norm, member>>, O>, z>: the preimage of O under n -> u_n,
/// oo -> x, as a set of basis codes: 2n iff u_n in O, 2m+1 iff m >= norm(O).
inline const Nat& preimage_program() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg c1 = a.reg(), z = a.reg(), ctx = a.reg(), open = a.reg(), seq = a.reg(), rest = a.reg(),
        norm = a.reg(), mem = a.reg(), hz = a.reg(), h = a.reg(), par = a.reg(), u = a.reg(),
        arg = a.reg(), n = a.reg();
    a.split(c1, z, Assembler::in());
    a.split(ctx, open, c1);
    a.split(seq, rest, ctx);
    a.split(norm, mem, rest);
    a.call(hz, routines::halve_code(), z);
    a.split(h, par, hz);
    Label odd = a.label();
    a.jnz(par, odd);
    a.ueval(u, seq, h);
    a.pair(arg, open, u);
    a.ueval(Assembler::out(), mem, arg);
    a.halt();
    a.bind(odd);
    a.ueval(n, norm, open);
    Label yes = a.label();
    a.jle(n, h, yes);
    a.diverge();
    a.bind(yes);
    a.halt();
  });
  return code;
}

/// On <ctx, O>: the open name smn(preimage_program, <ctx, O>).
inline const Nat& map_builder_program() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg p = a.reg(preimage_program());
    a.quote(Assembler::out(), templates::smn(), {p, Assembler::in()});
    a.halt();
  });
  return code;
}

/// Preimage map of f: n -> u_n, oo -> x, for a normed sequence in a space.
inline Nat map_from_normed(const NormedWitness& w, const SpaceDescriptor& s) {
  return smn(map_builder_program(), pair(w.seq_code, pair(w.norm_code, s.member_code)));
}

// -- weak separation --------------------------------------------------------

/// On A: dovetails A over the canonical names of 0, 1, 2, ...; returns <n, name>.
inline const Nat& wso_program() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg sd = a.reg(), name = a.reg(), res = a.reg(), stp = a.reg(step_program());
    a.copy(sd, Assembler::in());
    routines::dovetail(
        a, Schedule{Nat(256), Nat(0), true}, [](Reg) {},
        [&](Reg n, Reg budget, Label next) {
          a.quote(name, templates::smn(), {stp, n});
          a.timed(res, sd, name, budget);
          a.jz(res, next);
          a.pair(Assembler::out(), n, name);
          a.halt();
        });
  });
  return code;
}

struct WsoResult {
  Nat n;
  Nat name;
  std::uint64_t steps = 0;
};

inline std::optional<WsoResult> wso_search(const Nat& sd, Fuel fuel) {
  Outcome o = run(wso_program(), sd, fuel);
  if (!o.halted) return std::nullopt;
  auto [n, name] = unpair(o.value);
  return WsoResult{n, name, o.steps};
}

// -- the diagonal family ----------------------------------------------------

/// On <<u, p>, n>: the name u_k, with k the halting time of phi_p(p) when that
/// is at most n+1, and k = n+1 otherwise.
inline const Nat& truncation_program() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg ctx = a.reg(), n = a.reg(), u = a.reg(), p = a.reg(), res = a.reg(), k = a.reg();
    a.split(ctx, n, Assembler::in());
    a.split(u, p, ctx);
    a.copy(k, n);
    a.inc(k);
    a.timed(res, p, p, k);
    Label run_out = a.label();
    a.jz(res, run_out);
    a.timed_steps(k, res);
    a.bind(run_out);
    a.ueval(Assembler::out(), u, k);
    a.halt();
  });
  return code;
}

/// On <u, p>: the name limit_fast(smn(truncation, <u, p>)) of w_p.
inline const Nat& family_program() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg s = a.reg(), tr = a.reg(truncation_program()), lf = a.reg(reals::limit_fast_program());
    a.quote(s, templates::smn(), {tr, Assembler::in()});
    a.quote(Assembler::out(), templates::smn(), {lf, s});
    a.halt();
  });
  return code;
}

struct DiagonalFamily {
  Nat u_code;  // n -> name of u_n, |u_n - x| < 2^-n
  Nat w_code;  // p -> name of w_p; w_p = x iff phi_p(p) diverges
};

inline DiagonalFamily diagonal_family(const Nat& u) { return {u, smn(family_program(), u)}; }

/// Name of w_p, obtained by running w_code.
inline Outcome family_member(const DiagonalFamily& f, const Nat& p, Fuel fuel) {
  return run(f.w_code, p, fuel);
}

// -- refutation -------------------------------------------------------------

/// On <<F, <member, o2>>, i>: run F on i, then test the result against o2.
inline const Nat& refuter_program() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg ctx = a.reg(), i = a.reg(), f = a.reg(), rest = a.reg(), mem = a.reg(), o2 = a.reg(),
        y = a.reg(), arg = a.reg();
    a.split(ctx, i, Assembler::in());
    a.split(f, rest, ctx);
    a.split(mem, o2, rest);
    a.ueval(y, f, i);
    a.pair(arg, o2, y);
    a.ueval(Assembler::out(), mem, arg);
    a.halt();
  });
  return code;
}

/// Semi-decider of f^-1(O2) for the candidate F; on {x} u f^-1(O2)^c it would
/// accept exactly x, which the Markov condition rules out.
inline SemiDeciderName refuter(const Nat& f, const DiscontinuityRecord& rec,
                               const SpaceDescriptor& codomain) {
  return {smn(refuter_program(), pair(f, pair(codomain.member_code, rec.o2_name))), "domain"};
}

/// A candidate for the function 0 -> 1, x -> 0 (x != 0) on the reals: it
/// decides "x = 0" by one approximation at the given precision.
inline Nat approximate_delta0(unsigned precision) {
  return assemble_code([&](Assembler& a) {
    Reg prec = a.reg(Nat(precision)), qc = a.reg(), q = a.reg(), lo = a.reg(), hi = a.reg(),
        zero = a.reg(), pw = a.reg(), t = a.reg(), nil = a.reg(0);
    a.ueval(qc, Assembler::in(), prec);
    a.call(q, routines::qdec_code(), qc);
    routines::pow2(a, pw, prec);
    routines::pack(a, zero, {nil, nil, pw});
    routines::widen(a, lo, hi, zero, pw);
    Label nonzero = a.label();
    a.call(t, routines::qlt_code(), q, hi);
    a.jz(t, nonzero);
    a.call(t, routines::qlt_code(), lo, q);
    a.jz(t, nonzero);
    a.ret_const(reals::real_from_rational(1));
    a.bind(nonzero);
    a.ret_const(reals::real_from_rational(0));
  });
}

// -- bounded search ---------------------------------------------------------

/// Claim that B is not semi-decidable inside A u B, given by fixture names.
struct RelSDClaim {
  std::vector<Nat> a_names;
  std::vector<Nat> b_names;
};

struct SweepReport {
  std::optional<Nat> code;  // a code halting on all of B and none of A, if found
  Nat checked;              // number of codes examined
};

inline SweepReport bounded_nonsd_search(const RelSDClaim& claim, const Nat& max_code, Fuel fuel) {
  SweepReport r;
  for (Nat c = 0; c <= max_code; ++c) {
    r.checked = c + 1;
    bool ok = true;
    for (const auto& b : claim.b_names) {
      if (!run(c, b, fuel).halted) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    for (const auto& a : claim.a_names) {
      if (run(c, a, fuel).halted) {
        ok = false;
        break;
      }
    }
    if (ok) {
      r.code = c;
      return r;
    }
  }
  return r;
}

}  // namespace ctopo::nplus
