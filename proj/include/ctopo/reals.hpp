#pragma once

// The computable reals: rational codes, Cauchy names, interval-union opens,
// membership, limits, sobriety recovery, closed-ball bases and dense search.
//
// A real name is a program i with |c_Q(phi_i(n)) - x| < 2^-n. An open name is
// a program i denoting the union of the open intervals (c_Q(a), c_Q(b)) over
// all outputs <a, b> of phi_i on inputs where it halts.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctopo/kernel.hpp"
#include "ctopo/machine.hpp"
#include "ctopo/nat.hpp"
#include "ctopo/routines.hpp"
#include "ctopo/topology.hpp"

namespace ctopo::reals {

using routines::Label;
using routines::Reg;
using routines::Schedule;

// -- rational codes ---------------------------------------------------------

/// <a, <b, c>> -> (-1)^a b / (c+1).
inline Rational cq_decode(const Nat& code) {
  auto [a, bc] = unpair(code);
  auto [b, c] = unpair(bc);
  Rational q(b, c + 1);
  return (a & 1) != 0 ? Rational(-q) : q;
}

/// Canonical code: a in {0,1}, reduced fraction, a = 0 for zero.
inline Nat cq_encode(const Rational& q) {
  const Nat num = boost::multiprecision::numerator(q);
  const Nat den = boost::multiprecision::denominator(q);
  const Nat a = num < 0 ? 1 : 0;
  return pair(a, pair(num < 0 ? Nat(-num) : num, den - 1));
}

inline Rational pow2_inverse(unsigned n) { return Rational(1, Nat(1) << n); }

inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  const auto slash = s.find('/');
  auto parse_int = [](std::string t) {
    bool neg = !t.empty() && t[0] == '-';
    if (neg || (!t.empty() && t[0] == '+')) t.erase(0, 1);
    Nat v = parse_nat(t);
    return neg ? Nat(-v) : v;
  };
  if (slash == std::string::npos) return Rational(parse_int(s));
  const Nat den = parse_int(s.substr(slash + 1));
  if (den == 0) throw PreconditionError("zero denominator in " + s);
  return Rational(parse_int(s.substr(0, slash)), den);
}

inline std::string format_rational(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

// -- names ------------------------------------------------------------------

/// Constant Cauchy name of q.
inline Nat real_from_rational(const Rational& q) { return constant_code(cq_encode(q)); }

/// Runs the name at precision n.
inline Outcome approx(const Nat& x, unsigned n, Fuel fuel) { return run(x, Nat(n), fuel); }

/// approx decoded to a rational, or nullopt on fuel exhaustion.
inline std::optional<Rational> approx_value(const Nat& x, unsigned n, Fuel fuel) {
  Outcome o = approx(x, n, fuel);
  if (!o.halted) return std::nullopt;
  return cq_decode(o.value);
}

/// Newton iteration p/q -> (p^2 + 2q^2) / 2pq from 3/2; stops once the
/// certified enclosure [2q/p, p/q] of sqrt 2 is narrower than 2^-n.
inline const Nat& sqrt2_code() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg n = a.reg(), p = a.reg(3), q = a.reg(2), pw = a.reg(), w = a.reg(), t = a.reg(),
        u = a.reg(), zero = a.reg(0);
    a.copy(n, Assembler::in());
    routines::pow2(a, pw, n);
    Label loop = a.here();
    Label done = a.label();
    a.mul(w, p, p);
    a.mul(t, q, q);
    a.add(t, t, t);
    a.monus(u, w, t);
    a.mul(u, u, pw);
    a.add(w, w, t);  // p^2 + 2q^2, the next numerator
    a.mul(t, p, q);
    a.jlt(u, t, done);
    a.add(q, t, t);
    a.copy(p, w);
    a.jmp(loop);
    a.bind(done);
    a.dec(q);
    a.pair(t, p, q);
    a.pair(Assembler::out(), zero, t);
    a.halt();
  });
  return code;
}

// -- opens ------------------------------------------------------------------

using Interval = std::pair<Rational, Rational>;

inline Nat interval_code(const Interval& iv) { return pair(cq_encode(iv.first), cq_encode(iv.second)); }

/// Open name enumerating the given intervals (the last one repeats forever).
inline Nat open_from_intervals(const std::vector<Interval>& ivs) {
  if (ivs.empty()) return kDivergeCode;
  return assemble_code([&](Assembler& a) {
    std::vector<Label> labels;
    for (std::size_t i = 0; i + 1 < ivs.size(); ++i) {
      labels.push_back(a.label());
      a.jeq_const(Assembler::in(), Nat(i), labels.back());
    }
    a.ret_const(interval_code(ivs.back()));
    for (std::size_t i = 0; i + 1 < ivs.size(); ++i) {
      a.bind(labels[i]);
      a.ret_const(interval_code(ivs[i]));
    }
  });
}

/// The whole line: k -> (-(k+1), k+1).
inline const Nat& full_open_code() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg t = a.reg(), b = a.reg(), zero = a.reg(0), one = a.reg(1), lo = a.reg(), hi = a.reg();
    a.copy(t, Assembler::in());
    a.inc(t);
    a.pair(b, t, zero);
    a.pair(lo, one, b);
    a.pair(hi, zero, b);
    a.pair(Assembler::out(), lo, hi);
    a.halt();
  });
  return code;
}

/// Parses "(p/q,r/s);(...)", "full" or "empty".
inline std::vector<Interval> parse_intervals(std::string_view text) {
  std::vector<Interval> out;
  std::string s;
  for (char ch : text) {
    if (ch != ' ' && ch != '\t') s += ch;
  }
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (s[pos] == ';') {
      ++pos;
      continue;
    }
    if (s[pos] != '(') throw PreconditionError("expected '(' in open spec: " + s);
    const auto comma = s.find(',', pos);
    const auto close = s.find(')', pos);
    if (comma == std::string::npos || close == std::string::npos || comma > close) {
      throw PreconditionError("malformed interval in open spec: " + s);
    }
    out.emplace_back(parse_rational(s.substr(pos + 1, comma - pos - 1)),
                     parse_rational(s.substr(comma + 1, close - comma - 1)));
    pos = close + 1;
  }
  return out;
}

inline Nat parse_open(std::string_view text) {
  if (text == "full") return full_open_code();
  if (text == "empty") return kDivergeCode;
  return open_from_intervals(parse_intervals(text));
}

namespace detail {

inline const Schedule kIntervalSchedule{Nat(128), Nat(64)};

enum class Found { Halt, Precision, Ball };

// Dovetails the intervals of an open against shrinking enclosures of a
// point. With point_is_name the point is the name x queried at precision
// r + shift in round r; otherwise it is a fixed rational code. Input layout
// is <O, x> for names and <c, O> for fixed rationals.
inline Nat interval_search(bool point_is_name, unsigned shift, Found found) {
  return assemble_code([&](Assembler& a) {
    Reg open = a.reg(), point = a.reg(), fixed = a.reg();
    if (point_is_name) {
      a.split(open, point, Assembler::in());
    } else {
      a.split(point, open, Assembler::in());
      a.call(fixed, routines::qdec_code(), point);
    }
    Reg pw = a.reg(), q = a.reg(), qcode = a.reg(), lo = a.reg(), hi = a.reg(), prec = a.reg();
    Reg round = a.reg();
    routines::dovetail(
        a, kIntervalSchedule,
        [&](Reg r) {
          a.copy(round, r);
          routines::pow2(a, pw, r);
          if (point_is_name) {
            a.add_const(prec, r, Nat(shift));
            a.ueval(qcode, point, prec);
            a.call(q, routines::qdec_code(), qcode);
          } else {
            a.copy(q, fixed);
          }
          routines::widen(a, lo, hi, q, pw);
        },
        [&](Reg k, Reg budget, Label next) {
          Reg res = a.reg(), z = a.reg(), ea = a.reg(), eb = a.reg(), t = a.reg();
          a.timed(res, open, k, budget);
          a.jz(res, next);
          a.timed_value(z, res);
          a.unl(t, z);
          a.call(ea, routines::qdec_code(), t);
          a.unr(t, z);
          a.call(eb, routines::qdec_code(), t);
          a.call(t, routines::qlt_code(), ea, lo);
          a.jz(t, next);
          a.call(t, routines::qlt_code(), hi, eb);
          a.jz(t, next);
          switch (found) {
            case Found::Halt: a.halt(); break;
            case Found::Precision: a.ret(round); break;
            case Found::Ball: {
              Reg radius = a.reg(), rest = a.reg();
              routines::inverse_code(a, radius, pw);
              a.pair(rest, radius, z);
              a.pair(Assembler::out(), qcode, rest);
              a.halt();
            }
          }
        });
  });
}

}  // namespace detail

/// Member program on <O, x>: halts iff the name x lies in the open O.
inline const Nat& member_code() {
  static const Nat code = detail::interval_search(true, 0, detail::Found::Halt);
  return code;
}

/// Semi-decider of O: x -> member(<O, x>).
inline Nat open_semidecider(const Nat& open) { return smn(member_code(), open); }

inline Outcome member_real(const Nat& x, const Nat& open, Fuel fuel) {
  return run(member_code(), pair(open, x), fuel);
}

/// On <s, k>: with <i, j> = unpair(k), the j-th interval of the i-th open of s.
inline const Nat& union_program() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg s = a.reg(), k = a.reg(), i = a.reg(), j = a.reg(), o = a.reg();
    a.split(s, k, Assembler::in());
    a.split(i, j, k);
    a.ueval(o, s, i);
    a.ueval(Assembler::out(), o, j);
    a.halt();
  });
  return code;
}

/// On <<o1, o2>, k>: intersection of interval i of o1 with interval j of o2.
inline const Nat& intersect_program() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg o1 = a.reg(), o2 = a.reg(), os = a.reg(), k = a.reg(), i = a.reg(), j = a.reg();
    Reg z1 = a.reg(), z2 = a.reg(), a1 = a.reg(), b1 = a.reg(), a2 = a.reg(), b2 = a.reg();
    Reg c1 = a.reg(), c2 = a.reg(), lo = a.reg(), hi = a.reg(), t = a.reg();
    a.split(os, k, Assembler::in());
    a.split(o1, o2, os);
    a.split(i, j, k);
    a.ueval(z1, o1, i);
    a.ueval(z2, o2, j);
    a.split(a1, b1, z1);
    a.split(a2, b2, z2);
    // lo := max(a1, a2)
    a.call(c1, routines::qdec_code(), a1);
    a.call(c2, routines::qdec_code(), a2);
    a.copy(lo, a2);
    Label lo_done = a.label();
    a.call(t, routines::qlt_code(), c1, c2);
    a.jnz(t, lo_done);
    a.copy(lo, a1);
    a.bind(lo_done);
    // hi := min(b1, b2)
    a.call(c1, routines::qdec_code(), b1);
    a.call(c2, routines::qdec_code(), b2);
    a.copy(hi, b1);
    Label hi_done = a.label();
    a.call(t, routines::qlt_code(), c1, c2);
    a.jnz(t, hi_done);
    a.copy(hi, b2);
    a.bind(hi_done);
    a.pair(Assembler::out(), lo, hi);
    a.halt();
  });
  return code;
}

/// Open name of the union of the opens listed by the total program s.
inline Nat open_union(const Nat& s) { return smn(union_program(), s); }
inline Nat open_intersect(const Nat& o1, const Nat& o2) {
  return smn(intersect_program(), pair(o1, o2));
}

// -- sequences and limits ---------------------------------------------------

/// On <<c, s>, n>: the constant name of c + 2^-n (s = 0) or c - 2^-n (s = 1).
inline const Nat& shifted_rational_program() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg ctx = a.reg(), n = a.reg(), c = a.reg(), s = a.reg(), base = a.reg(), pw = a.reg();
    Reg eps = a.reg(), sum = a.reg(), qc = a.reg(), zero = a.reg(0), one = a.reg(1);
    a.split(ctx, n, Assembler::in());
    a.split(c, s, ctx);
    a.call(base, routines::qdec_code(), c);
    routines::pow2(a, pw, n);
    Label minus = a.label(), join = a.label();
    a.jnz(s, minus);
    routines::pack(a, eps, {one, zero, pw});
    a.jmp(join);
    a.bind(minus);
    routines::pack(a, eps, {zero, one, pw});
    a.bind(join);
    a.call(sum, routines::qadd_code(), base, eps);
    a.call(qc, routines::qenc_code(), sum);
    a.quote(Assembler::out(), constant_template(), {qc});
    a.halt();
  });
  return code;
}

/// Sequence n -> name of c + 2^-n (or c - 2^-n when below is set).
inline Nat shifted_sequence(const Rational& c, bool below) {
  return smn(shifted_rational_program(), pair(cq_encode(c), Nat(below ? 1 : 0)));
}

/// Sequence n -> name of 1/(n+1).
inline const Nat& harmonic_sequence() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg one = a.reg(1), zero = a.reg(0), t = a.reg();
    a.pair(t, one, Assembler::in());
    a.pair(t, zero, t);
    a.quote(Assembler::out(), constant_template(), {t});
    a.halt();
  });
  return code;
}

/// k -> 2^k.
inline const Nat& pow2_program() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg t = a.reg();
    routines::pow2(a, t, Assembler::in());
    a.ret(t);
  });
  return code;
}

/// Sequence constantly equal to the name x.
inline Nat constant_sequence(const Nat& x) { return constant_code(x); }

/// On <seq, m>: query v_{m+2} at precision m+2.
inline const Nat& limit_fast_program() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg seq = a.reg(), m = a.reg(), v = a.reg();
    a.split(seq, m, Assembler::in());
    a.add_const(m, m, Nat(2));
    a.ueval(v, seq, m);
    a.ueval(Assembler::out(), v, m);
    a.halt();
  });
  return code;
}

/// On <<seq, mod>, k>: v_{mod(k)}.
inline const Nat& subsequence_program() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg ctx = a.reg(), k = a.reg(), seq = a.reg(), mod = a.reg(), n = a.reg();
    a.split(ctx, k, Assembler::in());
    a.split(seq, mod, ctx);
    a.ueval(n, mod, k);
    a.ueval(Assembler::out(), seq, n);
    a.halt();
  });
  return code;
}

/// Name of lim v_n for a sequence with |v_n - L| <= 2^-n.
inline Nat limit_fast(const Nat& seq) { return smn(limit_fast_program(), seq); }

/// Name of lim v_n given a modulus: n >= mod(k) implies |v_n - L| <= 2^-k.
inline Nat limit_with_modulus(const Nat& seq, const Nat& mod) {
  return limit_fast(smn(subsequence_program(), pair(seq, mod)));
}

// -- sobriety ---------------------------------------------------------------

namespace detail {

// dst := open name of the single interval ((j - 1)/pw, (j + 1)/pw), j = jp - jn.
inline void ball_name(Assembler& a, Reg dst, Reg jp, Reg jn, Reg pw) {
  Reg t = a.reg(), lo = a.reg(), hi = a.reg(), v = a.reg();
  a.copy(t, jn);
  a.inc(t);
  routines::pack(a, v, {jp, t, pw});
  a.call(lo, routines::qenc_code(), v);
  a.copy(t, jp);
  a.inc(t);
  routines::pack(a, v, {t, jn, pw});
  a.call(hi, routines::qenc_code(), v);
  a.pair(t, lo, hi);
  a.quote(dst, constant_template(), {t});
}

}  // namespace detail

/// On <t, n>: a rational code within 2^-n of the point whose tau*-name is t.
///
/// The point is located by bisection. Level 0 searches the integer balls
/// (j - 1, j + 1) in the order 0, 1, -1, 2, -2, ...; each further level tries
/// the five balls of half the radius centred at 2j - 2 .. 2j + 2 (scaled),
/// with a doubling budget. Some candidate contains the point with margin, and
/// any accepted candidate contains it, so after n levels |j/2^n - x| < 2^-n.
inline const Nat& recover_program() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg t = a.reg(), n = a.reg(), jp = a.reg(0), jn = a.reg(0), pw = a.reg(1), level = a.reg(0);
    Reg name = a.reg(), res = a.reg(), budget = a.reg(), bound = a.reg(), mag = a.reg(),
        zero = a.reg(0);
    a.split(t, n, Assembler::in());

    // level 0
    a.set(budget, 64);
    a.set(bound, 0);
    Label round0 = a.here();
    Label found0 = a.label();
    a.set(mag, 0);
    Label scan0 = a.here();
    detail::ball_name(a, name, mag, zero, pw);
    a.timed(res, t, name, budget);
    a.copy(jp, mag);
    a.set(jn, 0);
    a.jnz(res, found0);
    Label skip_neg = a.label();
    a.jz(mag, skip_neg);
    detail::ball_name(a, name, zero, mag, pw);
    a.timed(res, t, name, budget);
    a.set(jp, 0);
    a.copy(jn, mag);
    a.jnz(res, found0);
    a.bind(skip_neg);
    Label next_round0 = a.label();
    a.jeq(mag, bound, next_round0);
    a.inc(mag);
    a.jmp(scan0);
    a.bind(next_round0);
    a.inc(bound);
    a.add(budget, budget, budget);
    a.jmp(round0);
    a.bind(found0);

    // refinement levels
    Reg np = a.reg(), nn = a.reg(), pw2 = a.reg();
    Label level_loop = a.here();
    Label done = a.label();
    a.jeq(level, n, done);
    a.add(pw2, pw, pw);
    a.add(jp, jp, jp);
    a.add(jn, jn, jn);
    a.set(budget, 64);
    Label attempt = a.here();
    Label accept = a.label();
    const int offsets[] = {0, 1, -1, 2, -2};
    for (int off : offsets) {
      a.copy(np, jp);
      a.copy(nn, jn);
      for (int i = 0; i < (off < 0 ? -off : off); ++i) a.inc(off < 0 ? nn : np);
      detail::ball_name(a, name, np, nn, pw2);
      a.timed(res, t, name, budget);
      a.jnz(res, accept);
    }
    a.add(budget, budget, budget);
    a.jmp(attempt);
    a.bind(accept);
    a.copy(jp, np);
    a.copy(jn, nn);
    a.copy(pw, pw2);
    a.inc(level);
    a.jmp(level_loop);

    a.bind(done);
    Reg v = a.reg();
    routines::pack(a, v, {jp, jn, pw});
    a.call(Assembler::out(), routines::qenc_code(), v);
    a.halt();
  });
  return code;
}

inline Outcome sober_recover_real(const Nat& taustar, unsigned n, Fuel fuel) {
  return run(recover_program(), pair(taustar, Nat(n)), fuel);
}

/// Real name of the point described by a tau*-name.
inline Nat recover_name(const Nat& taustar) { return smn(recover_program(), taustar); }

// -- closed-ball bases ------------------------------------------------------

struct Ball {
  Nat center;  // rational code
  Nat radius;  // rational code
  Nat interval;  // the enumerated interval <a, b> of the neighbourhood containing the ball

  Rational center_value() const { return cq_decode(center); }
  Rational radius_value() const { return cq_decode(radius); }
};

/// On <O, x>: searches round r for an interval of O containing
/// [q - 2^-r, q + 2^-r] with q = x(r+1); returns <q, <2^-r, <a, b>>>.
/// The ball of radius 2^-r around q contains x with margin 2^-(r+1).
inline const Nat& ball_program() {
  static const Nat code = detail::interval_search(true, 1, detail::Found::Ball);
  return code;
}

inline Ball decode_ball(const Nat& v) {
  auto [c, rest] = unpair(v);
  auto [r, z] = unpair(rest);
  return {c, r, z};
}

inline std::optional<Ball> closed_ball_basis(const Nat& x, const Nat& nb, Fuel fuel) {
  Outcome o = run(ball_program(), pair(nb, x), fuel);
  if (!o.halted) return std::nullopt;
  return decode_ball(o.value);
}

/// On <<c, rad>, y>: halts iff y lies strictly outside [c - rad, c + rad].
inline const Nat& ball_complement_program() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg ctx = a.reg(), y = a.reg(), c = a.reg(), rad = a.reg(), cv = a.reg(), rv = a.reg();
    Reg neg = a.reg(), blo = a.reg(), bhi = a.reg(), m = a.reg(0), pw = a.reg(), qc = a.reg(),
        q = a.reg(), lo = a.reg(), hi = a.reg(), t = a.reg();
    a.split(ctx, y, Assembler::in());
    a.split(c, rad, ctx);
    a.call(cv, routines::qdec_code(), c);
    a.call(rv, routines::qdec_code(), rad);
    a.call(bhi, routines::qadd_code(), cv, rv);
    {
      routines::Sdr s = routines::sdr(a);
      routines::unpack(a, s, rv);
      routines::pack(a, neg, {s.n, s.p, s.d});
    }
    a.call(blo, routines::qadd_code(), cv, neg);
    Label loop = a.here();
    routines::pow2(a, pw, m);
    a.ueval(qc, y, m);
    a.call(q, routines::qdec_code(), qc);
    routines::widen(a, lo, hi, q, pw);
    Label out = a.label();
    a.call(t, routines::qlt_code(), hi, blo);
    a.jnz(t, out);
    a.call(t, routines::qlt_code(), bhi, lo);
    a.jnz(t, out);
    a.inc(m);
    a.jmp(loop);
    a.bind(out);
    a.halt();
  });
  return code;
}

/// Co-semi-decider name of the closed ball.
inline Nat ball_complement(const Ball& b) {
  return smn(ball_complement_program(), pair(b.center, b.radius));
}

// -- dense search -----------------------------------------------------------

/// Candidate k = <j, z> stands for the dyadic m / 2^j, with m = z/2 for even z
/// and -(z+1)/2 for odd z. Dyadics are dense and far cheaper to reach than
/// rationals in code order.
inline Rational dense_candidate(const Nat& k) {
  auto [j, z] = unpair(k);
  Nat m = (z + 1) / 2;
  Rational v(m, Nat(1) << static_cast<unsigned>(j));
  return z % 2 == 0 ? v : Rational(-v);
}

/// On <A, O>: dovetails the dyadic names k -> constant dense_candidate(k) and
/// returns the first one accepted both by the semi-decider A and by O.
inline const Nat& dense_search_program() {
  static const Nat code = assemble_code([](Assembler& a) {
    Reg sd = a.reg(), open = a.reg(), name = a.reg(), res = a.reg(), arg = a.reg(),
        member = a.reg(member_code());
    Reg j = a.reg(), z = a.reg(), hz = a.reg(), m = a.reg(), sign = a.reg(), den = a.reg(),
        frac = a.reg(), qc = a.reg();
    a.split(sd, open, Assembler::in());
    routines::dovetail(
        a, Schedule{Nat(512), Nat(512), false, true}, [](Reg) {},
        [&](Reg k, Reg budget, Label next) {
          a.split(j, z, k);
          a.call(hz, routines::halve_code(), z);
          a.split(m, sign, hz);
          a.add(m, m, sign);
          routines::pow2(a, den, j);
          a.dec(den);
          a.pair(frac, m, den);
          a.pair(qc, sign, frac);
          a.quote(name, constant_template(), {qc});
          a.timed(res, sd, name, budget);
          a.jz(res, next);
          a.pair(arg, open, name);
          a.timed(res, member, arg, budget);
          a.jz(res, next);
          a.ret(name);
        });
  });
  return code;
}

inline Outcome dense_search(const Nat& sd, const Nat& open, Fuel fuel) {
  return run(dense_search_program(), pair(sd, open), fuel);
}

// -- normed witnesses -------------------------------------------------------

/// On <c, O>: the first round r in which some interval of O contains
/// [c - 2^-r, c + 2^-r].
inline const Nat& rational_norm_program() {
  static const Nat code = detail::interval_search(false, 0, detail::Found::Precision);
  return code;
}

/// Norm for the sequence c +- 2^-n: maps an open O containing c to an index N
/// with c +- 2^-n in O for all n >= N.
inline Nat rational_norm(const Rational& c) { return smn(rational_norm_program(), cq_encode(c)); }

// -- the space --------------------------------------------------------------

inline const SpaceDescriptor& real_space() {
  static const SpaceDescriptor s{
      "reals",
      member_code(),
      smn_builder(member_code()),
      smn_builder(union_program()),
      smn_builder(intersect_program()),
      kDivergeCode,
      full_open_code(),
  };
  return s;
}

/// Closed-ball basis at the point x: an open containing x is refined to a ball
/// <center, <radius, interval>>, whose complement is semi-decided by cosd_code's output.
inline BasisDescriptor ball_basis(const Nat& x) {
  Nat refine = assemble_code([&](Assembler& a) {
    Reg xr = a.reg(x), t = a.reg();
    a.pair(t, Assembler::in(), xr);
    a.call(Assembler::out(), ball_program(), t);
    a.halt();
  });
  Nat cosd = assemble_code([](Assembler& a) {
    Reg c = a.reg(), rest = a.reg(), rad = a.reg(), z = a.reg(), t = a.reg(),
        p = a.reg(ball_complement_program());
    a.split(c, rest, Assembler::in());
    a.split(rad, z, rest);
    a.pair(t, c, rad);
    a.quote(Assembler::out(), templates::smn(), {p, t});
    a.halt();
  });
  return {"balls", std::move(refine), std::move(cosd)};
}

}  // namespace ctopo::reals
