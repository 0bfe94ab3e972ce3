#pragma once

// Fixture formats: finite-space JSON, machine lists, and the textual specs
// accepted by the command line for reals, opens and N+ sets.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <variant>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ctopo/kernel.hpp"
#include "ctopo/nat.hpp"
#include "ctopo/nplus.hpp"
#include "ctopo/reals.hpp"
#include "ctopo/topology.hpp"

namespace ctopo::io {

using json = nlohmann::json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// -- finite spaces ----------------------------------------------------------

struct FiniteSpaceFile {
  std::vector<std::string> labels;
  FiniteSpace space;
};

/// {"points": [labels], "opens": [[indices]], "numbering": "identity"}
inline FiniteSpaceFile parse_finite_space(const json& j) {
  if (!j.is_object() || !j.contains("points") || !j.contains("opens")) {
    throw PreconditionError("finite space needs \"points\" and \"opens\"");
  }
  if (j.value("numbering", std::string("identity")) != "identity") {
    throw PreconditionError("only the identity numbering is supported");
  }
  FiniteSpaceFile out;
  for (const auto& p : j.at("points")) out.labels.push_back(p.is_string() ? p.get<std::string>() : p.dump());
  std::vector<PointSet> opens;
  for (const auto& o : j.at("opens")) {
    PointSet s = 0;
    for (const auto& i : o) {
      auto idx = i.get<long long>();
      if (idx < 0 || idx >= static_cast<long long>(out.labels.size())) {
        throw PreconditionError("open mentions point " + std::to_string(idx));
      }
      s |= PointSet{1} << idx;
    }
    opens.push_back(s);
  }
  out.space = finite_space(static_cast<unsigned>(out.labels.size()), std::move(opens));
  return out;
}

inline FiniteSpaceFile load_finite_space(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("bad finite space JSON: ") + e.what());
  }
  return parse_finite_space(j);
}

inline json points_json(PointSet s) {
  json a = json::array();
  for (unsigned x = 0; x < 32; ++x) {
    if ((s >> x) & 1U) a.push_back(x);
  }
  return a;
}

/// "0,2" -> {0, 2}; "" -> {}.
inline PointSet parse_point_set(std::string_view text, unsigned size) {
  PointSet s = 0;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    Nat i = parse_nat(item);
    if (i >= size) throw PreconditionError("point " + item + " outside the space");
    s |= PointSet{1} << static_cast<unsigned>(i);
  }
  return s;
}

// -- machine lists ----------------------------------------------------------

struct MachineEntry {
  enum Status { Unknown, Halts, Loops } status = Unknown;
  Nat code;
  std::uint64_t halting_time = 0;  // meaningful for Halts
};

/// One decimal code per line, optionally followed by "#halts k" or "#loops".
/// Blank lines and lines starting with '#' are skipped.
inline std::vector<MachineEntry> parse_machine_list(std::istream& in) {
  std::vector<MachineEntry> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    std::string head = line.substr(0, hash);
    std::string note = hash == std::string::npos ? "" : line.substr(hash + 1);
    std::istringstream hs(head);
    std::string word;
    if (!(hs >> word)) continue;
    MachineEntry e;
    try {
      e.code = parse_nat(word);
    } catch (const PreconditionError&) {
      throw PreconditionError("line " + std::to_string(lineno) + ": bad code '" + word + "'");
    }
    std::string extra;
    if (hs >> extra) throw PreconditionError("line " + std::to_string(lineno) + ": trailing text");
    std::istringstream ns(note);
    std::string tag;
    if (ns >> tag) {
      if (tag == "halts") {
        std::string k;
        if (!(ns >> k)) throw PreconditionError("line " + std::to_string(lineno) + ": #halts needs k");
        e.status = MachineEntry::Halts;
        e.halting_time = saturate_u64(parse_nat(k));
      } else if (tag == "loops") {
        e.status = MachineEntry::Loops;
      } else {
        throw PreconditionError("line " + std::to_string(lineno) + ": unknown tag '" + tag + "'");
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<MachineEntry> load_machine_list(const std::string& path) {
  std::istringstream in(read_file(path));
  return parse_machine_list(in);
}

/// True when the program provably never halts on any input: it has no
/// conditional jumps or calls, and its unconditional control flow revisits a pc.
inline bool syntactic_loop(const Program& p) {
  for (const auto& ins : p) {
    if (ins.op == Opcode::Jz || ins.op == Opcode::Ueval || ins.op == Opcode::Teval) return false;
  }
  std::vector<bool> seen(p.size(), false);
  long long pc = 0;
  while (pc >= 0 && pc < static_cast<long long>(p.size())) {
    if (seen[pc]) return true;
    seen[pc] = true;
    const auto& ins = p[pc];
    if (ins.op == Opcode::Halt) return false;
    if (ins.op == Opcode::Jmp) {
      pc += static_cast<long long>(ins.arg[0]);
    } else {
      ++pc;
    }
  }
  return false;
}

// -- textual specs ----------------------------------------------------------

/// Decimal codes, one per line; '#' starts a comment.
inline std::vector<Nat> read_code_list(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<Nat> out;
  for (std::string line; std::getline(in, line);) {
    line = line.substr(0, line.find('#'));
    line.erase(std::remove_if(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); }),
               line.end());
    if (!line.empty()) out.push_back(parse_nat(line));
  }
  return out;
}

/// Sequence v_0, ..., v_{L-1}, v_{L-1}, ... from a finite list of names.
inline Nat sequence_from_list(const std::vector<Nat>& names) {
  if (names.empty()) throw PreconditionError("empty sequence list");
  return assemble_code([&](Assembler& a) {
    Assembler::Reg n = a.reg();
    a.copy(n, Assembler::in());
    for (std::size_t i = 0; i + 1 < names.size(); ++i) {
      Assembler::Label later = a.label();
      a.jnz(n, later);
      a.ret_const(names[i]);
      a.bind(later);
      a.dec(n);
    }
    a.ret_const(names.back());
  });
}

/// "rat:p/q", "sqrt2", "code:N", or "limit-fast:FILE" with FILE listing the
/// names of a sequence converging faster than 2^-n (the last one repeats).
inline Nat parse_real_spec(std::string_view spec) {
  if (spec == "sqrt2") return reals::sqrt2_code();
  if (spec.rfind("limit-fast:", 0) == 0) {
    return reals::limit_fast(sequence_from_list(read_code_list(std::string(spec.substr(11)))));
  }
  if (spec.rfind("rat:", 0) == 0) return reals::real_from_rational(reals::parse_rational(spec.substr(4)));
  if (spec.rfind("code:", 0) == 0) return parse_nat(std::string(spec.substr(5)));
  throw PreconditionError("unknown real '" + std::string(spec) + "'");
}

/// "shifted:c" (c + 2^-n), "below:c" (c - 2^-n), "pow2" (2^-n) or "code:N".
inline Nat parse_sequence_spec(std::string_view spec) {
  if (spec == "pow2") return reals::shifted_sequence(0, false);
  if (spec.rfind("shifted:", 0) == 0) return reals::shifted_sequence(reals::parse_rational(spec.substr(8)), false);
  if (spec.rfind("below:", 0) == 0) return reals::shifted_sequence(reals::parse_rational(spec.substr(6)), true);
  if (spec.rfind("code:", 0) == 0) return parse_nat(std::string(spec.substr(5)));
  throw PreconditionError("unknown sequence '" + std::string(spec) + "'");
}

/// A point of N+: "inf" or a decimal number.
inline Nat parse_nplus_point(std::string_view spec) {
  if (spec == "inf") return nplus::infinity_name();
  return nplus::canonical_name(parse_nat(std::string(spec)));
}

/// An open of N+: "full", "empty", or a comma list of basis items "p3" ({3})
/// and "t5" ({n >= 5} with oo).
inline Nat parse_nplus_open(std::string_view spec) {
  if (spec == "full") return kIdentityCode;
  if (spec == "empty") return kDivergeCode;
  std::vector<Nat> codes;
  std::string item;
  std::istringstream in{std::string(spec)};
  while (std::getline(in, item, ',')) {
    if (item.size() < 2 || (item[0] != 'p' && item[0] != 't')) {
      throw PreconditionError("bad basis item '" + item + "'");
    }
    Nat n = parse_nat(item.substr(1));
    codes.push_back(item[0] == 'p' ? nplus::point_code(n) : nplus::tail_code(n));
  }
  return nplus::open_from_codes(codes);
}

/// A subset of N+ given by a semi-decider on names: an open spec, or "code:N".
inline Nat parse_nplus_set(std::string_view spec) {
  if (spec.rfind("code:", 0) == 0) return parse_nat(std::string(spec.substr(5)));
  if (spec == "full" || spec == "empty") return parse_nplus_open(spec);
  return smn(nplus::member_program(), parse_nplus_open(spec));
}

// -- witness bundles --------------------------------------------------------

/// {"kind": "closure", "code"}, {"kind": "sequence", "seq"} or
/// {"kind": "normed", "seq", "norm"}; codes as decimal strings.
inline json witness_json(const AnyWitness& w) {
  if (const auto* c = std::get_if<ClosureWitness>(&w)) return {{"kind", "closure"}, {"code", c->code.str()}};
  if (const auto* s = std::get_if<SeqClosureWitness>(&w)) return {{"kind", "sequence"}, {"seq", s->seq_code.str()}};
  const auto& n = std::get<NormedWitness>(w);
  return {{"kind", "normed"}, {"seq", n.seq_code.str()}, {"norm", n.norm_code.str()}};
}

inline AnyWitness parse_witness(const json& j) {
  auto code = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_string()) throw PreconditionError(std::string("witness needs \"") + key + "\"");
    return parse_nat(j.at(key).get<std::string>());
  };
  const std::string kind = j.value("kind", std::string());
  if (kind == "closure") return ClosureWitness{code("code")};
  if (kind == "sequence") return SeqClosureWitness{code("seq")};
  if (kind == "normed") return NormedWitness{code("seq"), code("norm")};
  throw PreconditionError("unknown witness kind '" + kind + "'");
}

// -- numbering fixtures -----------------------------------------------------

struct SemiDeciderFixture {
  Nat code;
  std::set<std::string> accepts;  // point labels
  Fuel fuel = 0;                  // documented budget
};

struct NumberingFixture {
  std::string numbering;
  std::vector<std::pair<Nat, std::string>> names;  // name, point label
  std::vector<SemiDeciderFixture> semideciders;
};

/// {"numbering": id, "names": [[name, label]], "semideciders":
///  [{"code", "accepts": [labels], "fuel"}]}; names and codes as decimal strings.
inline NumberingFixture parse_numbering_fixture(const json& j) {
  if (!j.is_object() || !j.contains("numbering") || !j.contains("names")) {
    throw PreconditionError("numbering fixture needs \"numbering\" and \"names\"");
  }
  NumberingFixture f;
  f.numbering = j.at("numbering").get<std::string>();
  for (const auto& row : j.at("names")) {
    if (!row.is_array() || row.size() != 2) throw PreconditionError("name entries are [name, label]");
    f.names.emplace_back(parse_nat(row[0].get<std::string>()), row[1].get<std::string>());
  }
  for (const auto& sd : j.value("semideciders", json::array())) {
    SemiDeciderFixture s;
    s.code = parse_nat(sd.at("code").get<std::string>());
    for (const auto& l : sd.at("accepts")) s.accepts.insert(l.get<std::string>());
    s.fuel = sd.at("fuel").get<Fuel>();
    f.semideciders.push_back(std::move(s));
  }
  return f;
}

inline NumberingFixture load_numbering_fixture(const std::string& path) {
  try {
    return parse_numbering_fixture(json::parse(read_file(path)));
  } catch (const json::exception& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

/// Names on which a semi-decider disagrees with its documented set: halting
/// within the fuel for accepted labels, fuel exhausted for the others.
inline std::vector<Nat> fixture_disagreements(const NumberingFixture& f, const SemiDeciderFixture& sd) {
  std::vector<Nat> bad;
  for (const auto& [name, label] : f.names) {
    if (run(sd.code, name, sd.fuel).halted != (sd.accepts.count(label) > 0)) bad.push_back(name);
  }
  return bad;
}

}  // namespace ctopo::io
