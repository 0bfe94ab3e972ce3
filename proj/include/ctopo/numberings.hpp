#pragma once

// Numberings, multi-numberings and the name roles built on them: semi-deciders,
// co-semi-deciders, function names and reductions.
//
// The host-side fields of a descriptor (domain, decoder, equality) exist for
// tests and demos only. In-machine constructions consume codes.

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "ctopo/kernel.hpp"
#include "ctopo/machine.hpp"
#include "ctopo/nat.hpp"

namespace ctopo {

template <class Point>
struct Numbering {
  std::string id;
  std::function<bool(const Nat&)> in_domain;
  std::function<Point(const Nat&)> decode;
  std::function<bool(const Point&, const Point&)> equal = [](const Point& a, const Point& b) {
    return a == b;
  };

  bool same_point(const Nat& n, const Nat& m) const {
    return in_domain(n) && in_domain(m) && equal(decode(n), decode(m));
  }
};

/// A name may denote several points, or none (then it is outside the domain).
template <class Point>
struct MultiNumbering {
  std::string id;
  std::function<std::set<Point>(const Nat&)> decode;

  bool in_domain(const Nat& n) const { return !decode(n).empty(); }
};

/// Identity numbering of {0, ..., size-1} (of all of N when size is empty).
inline Numbering<Nat> identity_numbering(std::optional<Nat> size = std::nullopt,
                                         std::string id = "id") {
  return Numbering<Nat>{
      std::move(id),
      [size](const Nat& n) { return !size || n < *size; },
      [](const Nat& n) { return n; },
  };
}

template <class Point>
Numbering<Point> restrict_numbering(const Numbering<Point>& nu,
                                    std::function<bool(const Point&)> subset) {
  Numbering<Point> out = nu;
  out.id = nu.id + "|A";
  auto dom = nu.in_domain;
  auto dec = nu.decode;
  out.in_domain = [dom, dec, subset](const Nat& n) { return dom(n) && subset(dec(n)); };
  return out;
}

// -- name roles -------------------------------------------------------------

/// phi_code halts on exactly the names of the points of the set.
struct SemiDeciderName {
  Nat code;
  std::string subject;
};

/// The complement of the set semi-decided by `code`.
struct CoSemiDeciderName {
  Nat code;
  std::string subject;
};

struct FunctionName {
  Nat code;
  std::string source;
  std::string target;
};

/// phi_code translates nu-names into mu-names of the same point.
struct Reduction {
  Nat code;
  std::string source;
  std::string target;
};

inline Nat product_name(const Nat& n, const Nat& m) { return pair(n, m); }

inline Outcome semidecide(const SemiDeciderName& sd, const Nat& n, Fuel fuel) {
  return run(sd.code, n, fuel);
}

inline Outcome apply_fn_name(const FunctionName& f, const Nat& n, Fuel fuel) {
  return run(f.code, n, fuel);
}

/// The same code, read over nu|A; it denotes the original set intersected with A.
inline SemiDeciderName restrict_semidecider(const SemiDeciderName& sd, std::string restricted_id) {
  return {sd.code, std::move(restricted_id)};
}

inline SemiDeciderName complement_roundtrip(const CoSemiDeciderName& c) {
  return {c.code, c.subject};
}

inline CoSemiDeciderName as_cosemidecider(const SemiDeciderName& sd) { return {sd.code, sd.subject}; }

/// nu <= mu and mu <= rho give nu <= rho.
inline Reduction compose_reductions(const Reduction& first, const Reduction& second) {
  if (first.target != second.source) {
    throw PreconditionError("reduction mismatch: " + first.target + " vs " + second.source);
  }
  return {compose(second.code, first.code), first.source, second.target};
}

// -- common semi-deciders ---------------------------------------------------

/// Halts on every input.
inline SemiDeciderName full_semidecider(std::string subject) { return {kIdentityCode, std::move(subject)}; }

/// Halts on no input.
inline SemiDeciderName empty_semidecider(std::string subject) { return {kDivergeCode, std::move(subject)}; }

/// Halts exactly on even inputs.
inline const Nat& evens_acceptor() {
  static const Nat code = code_of_text(
      "CONST 1 2\n"
      "MONUS 2 0 1\n"  // loop: subtract 2 until below 2
      "JZ 0 +6\n"
      "CONST 3 1\n"
      "MONUS 0 0 3\n"
      "JZ 0 +4\n"  // was 1: odd
      "COPY 0 2\n"
      "JMP -6\n"
      "HALT\n"
      "JMP 0\n");
  return code;
}

/// Halts exactly on odd inputs.
inline const Nat& odds_acceptor() {
  static const Nat code = code_of_text(
      "CONST 1 2\n"
      "MONUS 2 0 1\n"
      "JZ 0 +6\n"
      "CONST 3 1\n"
      "MONUS 0 0 3\n"
      "JZ 0 +4\n"
      "COPY 0 2\n"
      "JMP -6\n"
      "JMP 0\n"
      "HALT\n");
  return code;
}

}  // namespace ctopo
