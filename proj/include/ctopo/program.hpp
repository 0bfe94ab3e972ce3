#pragma once

// Instruction set, Goedel coding of programs and the textual assembler format.
//
// A program code is a natural number read as a stream of self-delimiting
// numbers: each instruction is its opcode number followed by its operands.
// Code length is linear in the total size of the operands, so programs can
// carry other programs' codes as constants without blowup. Jump offsets are
// relative to the jumping instruction and zigzag-coded (0, +1, -1, +2, ...).
// Decoding is total: every natural is a program.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ctopo/nat.hpp"

namespace ctopo {

enum class Opcode : std::uint8_t {
  Halt,
  Jz,
  Jmp,
  Inc,
  Const,
  Copy,
  Add,
  Monus,
  Mul,
  Pair,
  Unl,
  Unr,
  Ueval,
  Teval,
};

inline constexpr std::size_t kOpcodeCount = 14;

inline constexpr std::array<std::string_view, kOpcodeCount> kOpcodeNames = {
    "HALT", "JZ",   "JMP", "INC", "CONST", "COPY",  "ADD",
    "MONUS", "MUL", "PAIR", "UNL", "UNR",  "UEVAL", "TEVAL"};

inline constexpr std::array<int, kOpcodeCount> kArity = {0, 2, 1, 1, 2, 2, 3, 3, 3, 3, 2, 2, 3, 3};

/// Index of the operand holding a relative jump offset, or -1.
inline constexpr int offset_operand(Opcode op) {
  switch (op) {
    case Opcode::Jz: return 1;
    case Opcode::Jmp: return 0;
    default: return -1;
  }
}

struct Instruction {
  Opcode op = Opcode::Halt;
  // Register indices are naturals; a jump offset is a signed integer.
  std::array<Nat, 3> arg{};

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

using Program = std::vector<Instruction>;

inline Nat zigzag_encode(const Nat& offset) {
  if (offset > 0) return 2 * offset - 1;
  return -2 * offset;
}

inline Nat zigzag_decode(const Nat& z) {
  if (z == 0) return 0;
  if ((z & 1) != 0) return (z + 1) / 2;
  return -(z / 2);
}

// -- self-delimiting numbers ------------------------------------------------
//
// Least significant bit first, 0 is the single bit 0 and v >= 1 is
//   K ones, one zero, the low K-1 bits of L, the low L-1 bits of v
// where L = bitlen(v) and K = bitlen(L) (Elias gamma on the length). A code is
// such a stream followed by a single 1 bit marking its end. In codes that are
// not encodings, bits past the end read as zero and a length running past the
// end is clamped to the bits that are left, so every natural is readable.

inline std::size_t bit_length(const Nat& v) { return v == 0 ? 0 : boost::multiprecision::msb(v) + 1; }

struct Element {
  Nat bits;           // the element as a number
  std::size_t width;  // its width in bits
};

inline Element encode_element(const Nat& v) {
  if (v == 0) return {Nat(0), 1};
  const std::size_t l = bit_length(v);
  const std::size_t k = bit_length(Nat(l));
  Nat bits = (Nat(1) << k) - 1;
  bits |= (Nat(l) - (Nat(1) << (k - 1))) << (k + 1);
  bits |= (v - (Nat(1) << (l - 1))) << (2 * k);
  return {bits, 2 * k + l - 1};
}

namespace detail {

/// A natural as little-endian 64-bit limbs.
inline std::vector<std::uint64_t> limbs_of(const Nat& v) {
  std::vector<std::uint64_t> out((mpz_sizeinbase(v.backend().data(), 2) + 63) / 64);
  std::size_t n = 0;
  if (v != 0) mpz_export(out.data(), &n, -1, sizeof(std::uint64_t), 0, 0, v.backend().data());
  out.resize(n);
  return out;
}

inline Nat from_limbs(const std::vector<std::uint64_t>& limbs) {
  Nat v;
  if (!limbs.empty()) mpz_import(v.backend().data(), limbs.size(), -1, sizeof(std::uint64_t), 0, 0, limbs.data());
  return v;
}

}  // namespace detail

/// Reads self-delimiting numbers from a code.
class ElementReader {
 public:
  // The top bit of the code is the end marker.
  explicit ElementReader(const Nat& code)
      : limbs_(detail::limbs_of(code)), size_(code == 0 ? 0 : bit_length(code) - 1) {}

  bool done() const { return pos_ >= size_; }

  Nat next() {
    std::size_t k = 0;
    while (pos_ < size_ && bit(pos_)) {
      ++k;
      ++pos_;
    }
    ++pos_;  // the separating zero
    if (k == 0) return 0;
    const Nat l = (Nat(1) << (k - 1)) + read(k - 1);
    // A length running past the end of the code is clamped to what is left.
    const std::size_t rest = size_ > pos_ ? size_ - pos_ : 0;
    const std::size_t take = l - 1 > Nat(rest) ? rest : static_cast<std::size_t>(l - 1);
    return (Nat(1) << take) + read(take);
  }

 private:
  bool bit(std::size_t i) const { return (limbs_[i / 64] >> (i % 64)) & 1U; }

  // 64 bits starting at position i (zero past the end).
  std::uint64_t window(std::size_t i) const {
    const std::size_t w = i / 64, o = i % 64;
    std::uint64_t lo = w < limbs_.size() ? limbs_[w] >> o : 0;
    std::uint64_t hi = (o != 0 && w + 1 < limbs_.size()) ? limbs_[w + 1] << (64 - o) : 0;
    return lo | hi;
  }

  Nat read(std::size_t n) {
    const std::size_t avail = pos_ >= size_ ? 0 : std::min(n, size_ - pos_);
    std::vector<std::uint64_t> out((avail + 63) / 64);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = window(pos_ + 64 * j);
    if (avail % 64 != 0) out.back() &= (std::uint64_t{1} << (avail % 64)) - 1;
    pos_ += n;
    return detail::from_limbs(out);
  }

  std::vector<std::uint64_t> limbs_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

/// Concatenation of self-delimiting numbers.
class ElementWriter {
 public:
  void put(const Nat& v) { put(encode_element(v)); }
  void put(const Element& e) {
    const auto src = detail::limbs_of(e.bits);
    const std::size_t o = width_ % 64, base = width_ / 64;
    width_ += e.width;
    limbs_.resize((width_ + 63) / 64, 0);
    for (std::size_t j = 0; j < src.size(); ++j) {
      limbs_[base + j] |= src[j] << o;
      if (o != 0 && base + j + 1 < limbs_.size()) limbs_[base + j + 1] |= src[j] >> (64 - o);
    }
  }
  /// The stream followed by the end-marker bit.
  Nat code_with_marker() const {
    auto l = limbs_;
    l.resize(width_ / 64 + 1, 0);
    l[width_ / 64] |= std::uint64_t{1} << (width_ % 64);
    return detail::from_limbs(l);
  }
  std::size_t width() const { return width_; }

 private:
  std::vector<std::uint64_t> limbs_;
  std::size_t width_ = 0;
};

/// The numbers an instruction is written as: opcode, then one per operand.
inline std::vector<Nat> instruction_elements(const Instruction& ins) {
  const int arity = kArity[static_cast<std::size_t>(ins.op)];
  const int off = offset_operand(ins.op);
  std::vector<Nat> out{Nat(static_cast<unsigned>(ins.op))};
  for (int i = 0; i < arity; ++i) {
    Nat v = (i == off) ? zigzag_encode(ins.arg[i]) : ins.arg[i];
    if (v < 0) throw PreconditionError("negative register operand");
    out.push_back(std::move(v));
  }
  return out;
}

/// Program code: the instructions' numbers, concatenated, then the end marker.
/// The empty program has code 0.
inline Nat encode(const Program& p) {
  if (p.empty()) return 0;
  ElementWriter w;
  for (const auto& ins : p) {
    for (const auto& v : instruction_elements(ins)) w.put(v);
  }
  return w.code_with_marker();
}

/// Total decoding: an instruction is read as a number (opcode = number mod 14)
/// followed by its operands; operands past the end of the code are 0.
inline Program decode(const Nat& code) {
  Program out;
  ElementReader r(code);
  while (!r.done()) {
    Instruction ins;
    ins.op = static_cast<Opcode>(static_cast<unsigned>(r.next() % kOpcodeCount));
    const int arity = kArity[static_cast<std::size_t>(ins.op)];
    for (int i = 0; i < arity; ++i) ins.arg[i] = r.done() ? Nat(0) : r.next();
    const int off = offset_operand(ins.op);
    if (off >= 0) ins.arg[off] = zigzag_decode(ins.arg[off]);
    out.push_back(std::move(ins));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text format: one instruction per line, `OPCODE arg1 arg2 arg3`.
// `;` or `#` start a comment.

inline std::string disassemble(const Instruction& ins) {
  std::string s(kOpcodeNames[static_cast<std::size_t>(ins.op)]);
  for (int i = 0; i < kArity[static_cast<std::size_t>(ins.op)]; ++i) {
    s += ' ';
    s += ins.arg[i].str();
  }
  return s;
}

inline std::string disassemble(const Program& p) {
  std::string out;
  for (const auto& ins : p) {
    out += disassemble(ins);
    out += '\n';
  }
  return out;
}

inline Program assemble(std::string_view text) {
  Program p;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find_first_of(";#"); pos != std::string::npos) line.erase(pos);
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name)) continue;
    for (auto& ch : name) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    std::size_t op = 0;
    while (op < kOpcodeCount && kOpcodeNames[op] != name) ++op;
    if (op == kOpcodeCount) {
      throw PreconditionError("line " + std::to_string(lineno) + ": unknown opcode " + name);
    }
    Instruction ins;
    ins.op = static_cast<Opcode>(op);
    const int off = offset_operand(ins.op);
    for (int i = 0; i < kArity[op]; ++i) {
      std::string tok;
      if (!(ls >> tok)) {
        throw PreconditionError("line " + std::to_string(lineno) + ": missing operand");
      }
      bool neg = !tok.empty() && tok[0] == '-';
      if (neg && i != off) {
        throw PreconditionError("line " + std::to_string(lineno) + ": negative register");
      }
      Nat v = parse_nat(neg ? tok.substr(1) : (tok[0] == '+' ? tok.substr(1) : tok));
      ins.arg[i] = neg ? Nat(-v) : v;
    }
    std::string extra;
    if (ls >> extra) {
      throw PreconditionError("line " + std::to_string(lineno) + ": trailing operand " + extra);
    }
    p.push_back(ins);
  }
  return p;
}

}  // namespace ctopo
