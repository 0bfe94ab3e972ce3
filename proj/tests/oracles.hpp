#pragma once

// Test-side reference implementations, written from the definitions and
// independent of the library code they check.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ctopo/nat.hpp"
#include "ctopo/program.hpp"

namespace oracle {

using ctopo::Nat;
using ctopo::Rational;

inline std::uint64_t cantor(std::uint64_t n, std::uint64_t m) { return (n + m) * (n + m + 1) / 2 + m; }

/// Inverse of cantor by walking the diagonals.
inline std::pair<std::uint64_t, std::uint64_t> uncantor(std::uint64_t k) {
  std::uint64_t d = 0;
  while ((d + 1) * (d + 2) / 2 <= k) ++d;
  std::uint64_t m = k - d * (d + 1) / 2;
  return {d - m, m};
}

// -- program codes as bit strings ------------------------------------------

/// Self-delimiting number, least significant bit first, as a '0'/'1' string.
inline std::string number_bits(const Nat& v) {
  if (v == 0) return "0";
  std::string bin;  // most significant first
  for (Nat t = v; t > 0; t >>= 1) bin.insert(bin.begin(), (t & 1) != 0 ? '1' : '0');
  const std::size_t len = bin.size();
  std::string lbin;
  for (std::size_t t = len; t > 0; t >>= 1) lbin.insert(lbin.begin(), (t & 1) ? '1' : '0');
  std::string out(lbin.size(), '1');
  out += '0';
  // low bits of L without its leading one, least significant first
  for (std::size_t i = lbin.size(); i-- > 1;) out += lbin[i];
  for (std::size_t i = bin.size(); i-- > 1;) out += bin[i];
  return out;
}

struct Ins {
  unsigned op;
  std::vector<long long> args;  // jump offsets signed, registers non-negative
};

inline Nat code_from_bits(const std::string& bits) {
  Nat v = 0;
  for (std::size_t i = bits.size(); i-- > 0;) v = 2 * v + (bits[i] == '1' ? 1 : 0);
  return v;
}

/// Code of a program: the numbers of all instructions and the end-marker bit.
inline Nat encode_program(const std::vector<Ins>& prog) {
  if (prog.empty()) return 0;
  std::string bits;
  for (const auto& ins : prog) {
    bits += number_bits(ins.op);
    for (std::size_t i = 0; i < ins.args.size(); ++i) {
      long long a = ins.args[i];
      bool is_offset = (ins.op == 1 && i == 1) || (ins.op == 2 && i == 0);
      long long z = is_offset ? (a > 0 ? 2 * a - 1 : -2 * a) : a;
      bits += number_bits(Nat(z));
    }
  }
  bits += '1';
  return code_from_bits(bits);
}

// -- a direct interpreter for programs without calls ------------------------

struct Result {
  bool halted = false;
  Nat value;
  std::uint64_t steps = 0;
};

/// Runs a decoded program (no UEVAL/TEVAL) with the documented step costs.
inline Result interpret(const ctopo::Program& p, const Nat& input, std::uint64_t fuel) {
  using ctopo::Opcode;
  std::vector<Nat> r(16);
  r[0] = input;
  auto reg = [&](const Nat& i) -> Nat& {
    auto k = static_cast<std::size_t>(i);
    if (k >= r.size()) r.resize(k + 1);
    return r[k];
  };
  long long pc = 0;
  std::uint64_t steps = 0;
  for (;;) {
    if (steps >= fuel) return {false, 0, steps};
    ++steps;
    if (pc < 0 || pc >= static_cast<long long>(p.size()) || p[pc].op == Opcode::Halt) {
      return {true, r[0], steps};
    }
    const auto& ins = p[pc];
    const auto& a = ins.arg;
    switch (ins.op) {
      case Opcode::Jz:
        if (reg(a[0]) == 0) {
          pc += static_cast<long long>(a[1]);
          continue;
        }
        break;
      case Opcode::Jmp: pc += static_cast<long long>(a[0]); continue;
      case Opcode::Inc: reg(a[0]) += 1; break;
      case Opcode::Const: reg(a[0]) = a[1]; break;
      case Opcode::Copy: { Nat v = reg(a[1]); reg(a[0]) = v; break; }
      case Opcode::Add: { Nat v = reg(a[1]) + reg(a[2]); reg(a[0]) = v; break; }
      case Opcode::Monus: { Nat x = reg(a[1]), y = reg(a[2]); reg(a[0]) = x > y ? Nat(x - y) : Nat(0); break; }
      case Opcode::Mul: { Nat v = reg(a[1]) * reg(a[2]); reg(a[0]) = v; break; }
      case Opcode::Pair: {
        Nat n = reg(a[1]), m = reg(a[2]);
        reg(a[0]) = (n + m) * (n + m + 1) / 2 + m;
        break;
      }
      case Opcode::Unl:
      case Opcode::Unr: {
        Nat k = reg(a[1]);
        Nat d = boost::multiprecision::sqrt(Nat(8 * k + 1));
        d = (d - 1) / 2;
        Nat m = k - d * (d + 1) / 2;
        reg(a[0]) = ins.op == Opcode::Unl ? Nat(d - m) : m;
        break;
      }
      default: return {false, 0, steps};  // calls are out of scope here
    }
    ++pc;
  }
}

/// Random call-free program over registers 0..3: forward JZ only, and with
/// probability 1/4 a trailing backward JMP that may make it loop. Looping
/// programs avoid MUL and PAIR so values stay small under large fuel.
inline ctopo::Program random_program(std::mt19937_64& rng) {
  using ctopo::Instruction;
  using ctopo::Opcode;
  std::uniform_int_distribution<int> len(1, 7), reg(0, 3), small(0, 9), kind(0, 9);
  ctopo::Program p;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) {
    Instruction ins;
    switch (kind(rng)) {
      case 0: ins = {Opcode::Inc, {Nat(reg(rng)), 0, 0}}; break;
      case 1: ins = {Opcode::Const, {Nat(reg(rng)), Nat(small(rng)), 0}}; break;
      case 2: ins = {Opcode::Copy, {Nat(reg(rng)), Nat(reg(rng)), 0}}; break;
      case 3: ins = {Opcode::Add, {Nat(reg(rng)), Nat(reg(rng)), Nat(reg(rng))}}; break;
      case 4: ins = {Opcode::Monus, {Nat(reg(rng)), Nat(reg(rng)), Nat(reg(rng))}}; break;
      case 5: ins = {Opcode::Mul, {Nat(reg(rng)), Nat(reg(rng)), Nat(reg(rng))}}; break;
      case 6: ins = {Opcode::Pair, {Nat(reg(rng)), Nat(reg(rng)), Nat(reg(rng))}}; break;
      case 7: ins = {Opcode::Unl, {Nat(reg(rng)), Nat(reg(rng)), 0}}; break;
      case 8: ins = {Opcode::Unr, {Nat(reg(rng)), Nat(reg(rng)), 0}}; break;
      default: ins = {Opcode::Jz, {Nat(reg(rng)), Nat(1 + small(rng) % 3), 0}}; break;
    }
    p.push_back(ins);
  }
  if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
    for (auto& ins : p) {
      if (ins.op == Opcode::Mul || ins.op == Opcode::Pair) ins.op = Opcode::Add;
    }
    p.push_back({Opcode::Jz, {Nat(reg(rng)), Nat(2), 0}});
    p.push_back({Opcode::Jmp, {Nat(-static_cast<long long>(p.size()) + 1), 0, 0}});
  }
  return p;
}

// -- rationals --------------------------------------------------------------

inline Rational pow2_inv(unsigned n) { return Rational(1, Nat(1) << n); }

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// Membership in a finite union of open intervals (a, b).
inline bool in_union(const Rational& x, const std::vector<std::pair<Rational, Rational>>& ivs) {
  for (const auto& [a, b] : ivs) {
    if (a < x && x < b) return true;
  }
  return false;
}

}  // namespace oracle
