#pragma once

// Type 1 computable topological spaces and the constructions on them.
//
// A space is given by codes only: a membership program on <O, x>, a Malcev
// builder turning an open name into a semi-decider, builders for unions of
// sequences and binary intersections, and names of the empty and full sets.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ctopo/kernel.hpp"
#include "ctopo/machine.hpp"
#include "ctopo/nat.hpp"
#include "ctopo/numberings.hpp"
#include "ctopo/routines.hpp"

namespace ctopo {

struct SpaceDescriptor {
  std::string id;
  Nat member_code;     // <O, x> -> halts iff x in O
  Nat malcev;          // O -> semi-decider code of O
  Nat union_code;      // s -> name of the union of the opens phi_s(0), phi_s(1), ...
  Nat intersect_code;  // <o1, o2> -> name of the intersection
  Nat empty_name;
  Nat full_name;
};

/// Fuel for running a space's builders, which are short straight-line programs.
inline constexpr Fuel kBuilderFuel = 1'000'000;

inline Nat run_builder(const Nat& builder, const Nat& input) {
  Outcome o = run(builder, input, kBuilderFuel);
  if (!o.halted) throw PreconditionError("builder program did not halt");
  return o.value;
}

inline Outcome member(const SpaceDescriptor& s, const Nat& x, const Nat& open, Fuel fuel) {
  return run(s.member_code, pair(open, x), fuel);
}

/// The semi-decider of an open, through the Malcev builder.
inline SemiDeciderName open_semidecider(const SpaceDescriptor& s, const Nat& open) {
  return {run_builder(s.malcev, open), s.id};
}

inline Nat open_union(const SpaceDescriptor& s, const Nat& seq) { return run_builder(s.union_code, seq); }

inline Nat open_intersect(const SpaceDescriptor& s, const Nat& o1, const Nat& o2) {
  return run_builder(s.intersect_code, pair(o1, o2));
}

// -- Ershov spaces ----------------------------------------------------------

namespace programs {

/// On <O, x>: phi_O(x).
inline const Nat& apply_open() {
  static const Nat code = assemble_code([](Assembler& a) {
    Assembler::Reg o = a.reg(), x = a.reg();
    a.split(o, x, Assembler::in());
    a.ueval(Assembler::out(), o, x);
    a.halt();
  });
  return code;
}

/// On <s, x>: halts iff x is in the domain of some phi_{s(k)}.
inline const Nat& domain_union() {
  static const Nat code = assemble_code([](Assembler& a) {
    using Reg = Assembler::Reg;
    Reg s = a.reg(), x = a.reg(), o = a.reg(), res = a.reg();
    a.split(s, x, Assembler::in());
    routines::dovetail(
        a, routines::Schedule{Nat(16), Nat(0), true}, [](Reg) {},
        [&](Reg k, Reg budget, Assembler::Label next) {
          a.ueval(o, s, k);
          a.timed(res, o, x, budget);
          a.jz(res, next);
          a.halt();
        });
  });
  return code;
}

/// On <o1, o2>: the code w_intersect(o1, o2).
inline const Nat& domain_intersect_builder() {
  static const Nat code = assemble_code([](Assembler& a) {
    Assembler::Reg o1 = a.reg(), o2 = a.reg();
    a.split(o1, o2, Assembler::in());
    a.quote(Assembler::out(), templates::w_intersect(), {o1, o2});
    a.halt();
  });
  return code;
}

/// On <<mc, x>, O>: run the Malcev image of O on x.
inline const Nat& taustar() {
  static const Nat code = assemble_code([](Assembler& a) {
    Assembler::Reg ctx = a.reg(), o = a.reg(), mc = a.reg(), x = a.reg(), m = a.reg();
    a.split(ctx, o, Assembler::in());
    a.split(mc, x, ctx);
    a.ueval(m, mc, o);
    a.ueval(Assembler::out(), m, x);
    a.halt();
  });
  return code;
}

/// On <<pre, <mc, x>>, O>: is x in the preimage of O?
inline const Nat& preimage_taustar() {
  static const Nat code = assemble_code([](Assembler& a) {
    Assembler::Reg ctx = a.reg(), o = a.reg(), pre = a.reg(), rest = a.reg(), mc = a.reg(),
                   x = a.reg(), p = a.reg(), m = a.reg();
    a.split(ctx, o, Assembler::in());
    a.split(pre, rest, ctx);
    a.split(mc, x, rest);
    a.ueval(p, pre, o);
    a.ueval(m, mc, p);
    a.ueval(Assembler::out(), m, x);
    a.halt();
  });
  return code;
}

/// On <rec, <pre, <mc, x>>>: the name smn(rec, smn(preimage_taustar, <pre, <mc, x>>)).
inline const Nat& sober_apply() {
  static const Nat code = assemble_code([](Assembler& a) {
    Assembler::Reg rec = a.reg(), ctx = a.reg(), ts = a.reg(), p = a.reg(preimage_taustar());
    a.split(rec, ctx, Assembler::in());
    a.quote(ts, templates::smn(), {p, ctx});
    a.quote(Assembler::out(), templates::smn(), {rec, ts});
    a.halt();
  });
  return code;
}

/// On <<seq, member>, O>: the first entry u_n of seq found inside O.
inline const Nat& sequence_to_closure() {
  static const Nat code = assemble_code([](Assembler& a) {
    using Reg = Assembler::Reg;
    Reg ctx = a.reg(), o = a.reg(), seq = a.reg(), mem = a.reg(), u = a.reg(), arg = a.reg(),
        res = a.reg();
    a.split(ctx, o, Assembler::in());
    a.split(seq, mem, ctx);
    routines::dovetail(
        a, routines::Schedule{Nat(2048), Nat(512)}, [](Reg) {},
        [&](Reg k, Reg budget, Assembler::Label next) {
          a.ueval(u, seq, k);
          a.pair(arg, o, u);
          a.timed(res, mem, arg, budget);
          a.jz(res, next);
          a.ret(u);
        });
  });
  return code;
}

}  // namespace programs

/// The Ershov topology of a numbered set: opens are the semi-decidable sets and
/// their names the semi-decider codes.
inline SpaceDescriptor ershov_space(std::string id) {
  return SpaceDescriptor{
      std::move(id),
      programs::apply_open(),
      kIdentityCode,
      smn_builder(programs::domain_union()),
      programs::domain_intersect_builder(),
      kDivergeCode,
      kIdentityCode,
  };
}

// -- finite spaces ----------------------------------------------------------

using PointSet = std::uint32_t;  // bit i set = point i present

inline std::vector<Nat> members_of(PointSet s) {
  std::vector<Nat> out;
  for (unsigned i = 0; i < 32; ++i) {
    if ((s >> i) & 1U) out.emplace_back(i);
  }
  return out;
}

/// A topology on {0, ..., size-1} with the identity numbering. Opens are named
/// by semi-decider codes (the Ershov structure restricted to the topology); the
/// listed opens have canonical table-lookup names.
struct FiniteSpace {
  unsigned size = 0;
  std::vector<PointSet> opens;
  SpaceDescriptor space;

  PointSet all() const { return size == 32 ? ~PointSet{0} : ((PointSet{1} << size) - 1); }

  Nat canonical_name(std::size_t i) const { return finite_acceptor(members_of(opens.at(i))); }

  std::optional<std::size_t> index_of(PointSet s) const {
    auto it = std::find(opens.begin(), opens.end(), s);
    if (it == opens.end()) return std::nullopt;
    return static_cast<std::size_t>(it - opens.begin());
  }

  /// Topological closure of a set.
  PointSet closure(PointSet a) const {
    PointSet outside = 0;
    for (PointSet o : opens) {
      if ((o & a) == 0) outside |= o;
    }
    return all() & ~outside;
  }
};

inline FiniteSpace finite_space(unsigned size, std::vector<PointSet> opens) {
  if (size == 0 || size > 16) throw PreconditionError("finite space needs 1..16 points");
  FiniteSpace fs;
  fs.size = size;
  for (PointSet o : opens) {
    if ((o & ~fs.all()) != 0) throw PreconditionError("open set mentions a missing point");
    if (std::find(fs.opens.begin(), fs.opens.end(), o) == fs.opens.end()) fs.opens.push_back(o);
  }
  auto has = [&](PointSet s) { return fs.index_of(s).has_value(); };
  if (!has(0)) throw PreconditionError("topology must contain the empty set");
  if (!has(fs.all())) throw PreconditionError("topology must contain the whole space");
  for (PointSet a : fs.opens) {
    for (PointSet b : fs.opens) {
      if (!has(a | b)) throw PreconditionError("topology not closed under union");
      if (!has(a & b)) throw PreconditionError("topology not closed under intersection");
    }
  }
  fs.space = ershov_space("finite");
  fs.space.empty_name = fs.canonical_name(*fs.index_of(0));
  fs.space.full_name = fs.canonical_name(*fs.index_of(fs.all()));
  return fs;
}

struct TauFromSd {
  std::size_t index = 0;  // position of the recovered open in the list
  Nat name;               // its canonical name
  bool settled = false;   // false: the emitted union still changed in the later rounds
};

/// Fuel granted to the semi-decider in round t.
inline Fuel tau_round_fuel(std::uint64_t t) { return 32 * t; }

/// Runs the semi-decider in rounds of increasing fuel; after each round every
/// listed open contained in the accepted points is emitted. The answer is the
/// union of the emitted opens.
inline TauFromSd finite_tau_from_sd(const FiniteSpace& fs, const Nat& sd, std::uint64_t rounds) {
  if (rounds == 0) throw PreconditionError("rounds must be positive");
  PointSet accepted = 0, emitted = 0;
  std::uint64_t last_change = 0;
  for (std::uint64_t t = 1; t <= rounds; ++t) {
    for (unsigned x = 0; x < fs.size; ++x) {
      if ((accepted >> x) & 1U) continue;
      if (run(sd, Nat(x), tau_round_fuel(t)).halted) accepted |= PointSet{1} << x;
    }
    PointSet u = 0;
    for (PointSet o : fs.opens) {
      if ((o & ~accepted) == 0) u |= o;
    }
    if (u != emitted) {
      emitted = u;
      last_change = t;
    }
  }
  TauFromSd out;
  out.index = *fs.index_of(emitted);
  out.name = fs.canonical_name(out.index);
  out.settled = last_change <= rounds / 2;
  return out;
}

/// All (x, A) with x outside A but in its closure.
inline std::vector<std::pair<unsigned, PointSet>> markov_obstructions(const FiniteSpace& fs) {
  std::vector<std::pair<unsigned, PointSet>> out;
  for (unsigned x = 0; x < fs.size; ++x) {
    for (PointSet a = 0; a <= fs.all(); ++a) {
      if ((a >> x) & 1U) continue;
      if ((fs.closure(a) >> x) & 1U) out.emplace_back(x, a);
    }
  }
  return out;
}

// -- tau* and sobriety ------------------------------------------------------

/// Code halting exactly on the names of the opens containing the point x.
inline Nat nu_to_taustar(const SpaceDescriptor& s, const Nat& x) {
  return smn(programs::taustar(), pair(s.malcev, x));
}

/// tau*-name of f(x) for a map f whose preimages are given by pre (codomain
/// open name -> domain open name).
inline Nat preimage_taustar(const Nat& pre, const SpaceDescriptor& domain, const Nat& x) {
  return smn(programs::preimage_taustar(), pair(pre, pair(domain.malcev, x)));
}

/// Runs the in-machine construction of the codomain name of f(x): the tau*-name
/// "O -> x in f^-1(O)" handed to the codomain's recovery program.
inline Outcome sober_apply(const Nat& pre, const Nat& recovery, const SpaceDescriptor& domain,
                           const Nat& x, Fuel fuel) {
  return run(programs::sober_apply(), pair(recovery, pair(pre, pair(domain.malcev, x))), fuel);
}

// -- witnesses --------------------------------------------------------------

/// On an open O containing the point, returns a name of a point of A inside O.
struct ClosureWitness {
  Nat code;
};

/// A computable sequence in A converging to the point.
struct SeqClosureWitness {
  Nat seq_code;
};

/// A sequence with a norm: O -> N such that u_n is in O for all n >= N.
struct NormedWitness {
  Nat seq_code;
  Nat norm_code;
};

using AnyWitness = std::variant<ClosureWitness, SeqClosureWitness, NormedWitness>;

struct DiscontinuityRecord {
  Nat x_name;
  Nat o2_name;
  AnyWitness witness;
};

inline SeqClosureWitness weaken_witness(const NormedWitness& w) { return {w.seq_code}; }

inline ClosureWitness weaken_witness(const SeqClosureWitness& w, const SpaceDescriptor& s) {
  return {smn(programs::sequence_to_closure(), pair(w.seq_code, s.member_code))};
}

// -- neighbourhood bases ----------------------------------------------------

struct BasisDescriptor {
  std::string id;
  Nat refine_code;  // neighbourhood name -> basis name
  std::optional<Nat> cosd_code;  // basis name -> co-semi-decider code
};

/// The opens themselves, refined by the identity.
inline BasisDescriptor trivial_basis(std::string id) { return {std::move(id), kIdentityCode, std::nullopt}; }

inline Outcome refine_neighborhood(const BasisDescriptor& b, const Nat& nb, Fuel fuel) {
  return run(b.refine_code, nb, fuel);
}

}  // namespace ctopo
