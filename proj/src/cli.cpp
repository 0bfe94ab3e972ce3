#include "ctopo/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctopo/io.hpp"
#include "ctopo/nplus.hpp"
#include "ctopo/reals.hpp"
#include "ctopo/topology.hpp"

namespace ctopo::cli {
namespace {

using json = nlohmann::json;

struct FuelExhausted {
  json report;
};

std::string str(const Nat& n) { return n.str(); }

Outcome require(const Outcome& o, json report = json::object()) {
  if (!o.halted) {
    report["halted"] = false;
    report["steps"] = o.steps;
    throw FuelExhausted{std::move(report)};
  }
  return o;
}

Rational approx_or_throw(const Nat& x, unsigned bits, Fuel fuel) {
  Outcome o = require(reals::approx(x, bits, fuel));
  return reals::cq_decode(o.value);
}

json rational_json(const Rational& q) { return reals::format_rational(q); }

void emit(std::ostream& out, const json& j) { out << j.dump() << '\n'; }

// -- commands ---------------------------------------------------------------

struct Options {
  std::string x, open, set, seq, space, witness, machines, file, code, a, b, sd;
  unsigned bits = 0;
  Fuel fuel = 0;
  std::uint64_t rounds = 0;
  std::string max_code;
};

void real_approx(const Options& o, std::ostream& out) {
  Nat x = io::parse_real_spec(o.x);
  Outcome r = require(reals::approx(x, o.bits, o.fuel));
  emit(out, {{"q", rational_json(reals::cq_decode(r.value))}, {"steps", r.steps}});
}

void diag(const Options& o, std::ostream& out) {
  auto machines = io::load_machine_list(o.machines);
  auto fam = nplus::diagonal_family(reals::shifted_sequence(0, false));
  for (const auto& m : machines) {
    json row{{"code", str(m.code)}};
    Outcome w = require(nplus::family_member(fam, m.code, o.fuel), row);
    Rational q = approx_or_throw(w.value, o.bits, o.fuel);
    row["w_approx"] = rational_json(q);
    switch (m.status) {
      case io::MachineEntry::Halts:
        row["status"] = "halts";
        row["halts_known"] = m.halting_time;
        row["expected"] = rational_json(reals::pow2_inverse(static_cast<unsigned>(m.halting_time)));
        break;
      case io::MachineEntry::Loops:
        row["status"] = "loops";
        row["halts_known"] = nullptr;
        row["expected"] = rational_json(0);
        break;
      default:
        row["status"] = "unknown";
        row["halts_known"] = nullptr;
        row["expected"] = nullptr;
    }
    emit(out, row);
  }
}

void member(const Options& o, std::ostream& out) {
  Outcome r;
  if (o.space == "reals") {
    r = reals::member_real(io::parse_real_spec(o.x), reals::parse_open(o.open), o.fuel);
  } else if (o.space == "nplus") {
    r = nplus::member_nplus(io::parse_nplus_point(o.x), io::parse_nplus_open(o.open), o.fuel);
  } else {
    auto fs = io::load_finite_space(o.space);
    PointSet s = io::parse_point_set(o.open, fs.space.size);
    if (!fs.space.index_of(s)) throw PreconditionError("not an open of the space: " + o.open);
    Nat x = parse_nat(o.x);
    if (x >= fs.space.size) throw PreconditionError("point outside the space");
    r = ctopo::run(finite_acceptor(members_of(s)), x, o.fuel);
  }
  require(r);
  emit(out, {{"halted", true}, {"steps", r.steps}});
}

void wso(const Options& o, std::ostream& out) {
  auto w = nplus::wso_search(io::parse_nplus_set(o.set), o.fuel);
  if (!w) throw FuelExhausted{{{"halted", false}, {"steps", o.fuel}}};
  emit(out, {{"n", str(w->n)}, {"name", str(w->name)}, {"steps", w->steps}});
}

void sober_recover(const Options& o, std::ostream& out) {
  Nat t = nu_to_taustar(reals::real_space(), io::parse_real_spec(o.x));
  Outcome r = require(reals::sober_recover_real(t, o.bits, o.fuel));
  emit(out, {{"q", rational_json(reals::cq_decode(r.value))}, {"steps", r.steps}});
}

void limit(const Options& o, std::ostream& out) {
  Nat lim = reals::limit_fast(io::parse_sequence_spec(o.seq));
  Outcome r = require(reals::approx(lim, o.bits, o.fuel));
  emit(out, {{"q", rational_json(reals::cq_decode(r.value))}, {"steps", r.steps}});
}

void nplus_norm(const Options& o, std::ostream& out) {
  if (o.witness.rfind("shifted:", 0) != 0 && o.witness.rfind("below:", 0) != 0) {
    throw PreconditionError("witness must be shifted:c or below:c");
  }
  Rational c = reals::parse_rational(o.witness.substr(o.witness.find(':') + 1));
  NormedWitness w{io::parse_sequence_spec(o.witness), reals::rational_norm(c)};
  Nat pre = nplus::map_from_normed(w, reals::real_space());
  Outcome r = require(nplus::norm_from_map(pre, reals::parse_open(o.open), o.fuel));
  emit(out, {{"n", str(r.value)}, {"steps", r.steps}});
}

void finite_markov(const Options& o, std::ostream& out) {
  auto fs = io::load_finite_space(o.space);
  json rows = json::array();
  for (auto [x, a] : markov_obstructions(fs.space)) rows.push_back({x, io::points_json(a)});
  emit(out, rows);
}

void finite_tau(const Options& o, std::ostream& out) {
  auto fs = io::load_finite_space(o.space);
  Nat sd = !o.sd.empty() ? parse_nat(o.sd)
                         : finite_acceptor(members_of(io::parse_point_set(o.set, fs.space.size)));
  TauFromSd t = finite_tau_from_sd(fs.space, sd, o.rounds);
  emit(out, {{"index", t.index},
             {"open", io::points_json(fs.space.opens[t.index])},
             {"name", str(t.name)},
             {"settled", t.settled}});
}

void nonsd_sweep(const Options& o, std::ostream& out) {
  nplus::RelSDClaim claim;
  if (!o.machines.empty()) {
    // {x} inside {x} u {w_p}: B holds the names of x, A those of the w_p != x.
    auto fam = nplus::diagonal_family(reals::shifted_sequence(0, false));
    for (const auto& m : io::load_machine_list(o.machines)) {
      if (m.status == io::MachineEntry::Unknown) continue;
      Outcome w = require(nplus::family_member(fam, m.code, o.fuel));
      (m.status == io::MachineEntry::Loops ? claim.b_names : claim.a_names).push_back(w.value);
    }
  } else {
    auto fs = io::load_finite_space(o.space);
    for (Nat x : members_of(io::parse_point_set(o.a, fs.space.size))) claim.a_names.push_back(x);
    for (Nat x : members_of(io::parse_point_set(o.b, fs.space.size))) claim.b_names.push_back(x);
  }
  auto rep = nplus::bounded_nonsd_search(claim, parse_nat(o.max_code), o.fuel);
  json j{{"refuted", rep.code.has_value()}, {"checked", str(rep.checked)},
         {"max_code", o.max_code}, {"fuel", o.fuel}};
  j["code"] = rep.code ? json(str(*rep.code)) : json(nullptr);
  emit(out, j);
}

void asm_cmd(const Options& o, std::ostream& out) {
  std::string text = o.file.empty() || o.file == "-"
                         ? std::string(std::istreambuf_iterator<char>(std::cin), {})
                         : io::read_file(o.file);
  emit(out, {{"code", str(code_of_text(text))}});
}

void disasm_cmd(const Options& o, std::ostream& out) {
  Program p = decode(parse_nat(o.code));
  json lines = json::array();
  for (const auto& ins : p) lines.push_back(disassemble(ins));
  emit(out, {{"code", o.code}, {"program", lines}});
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Executable Type-1 computable topology"};
  app.require_subcommand(1);
  Options o;

  auto fuel = [&](CLI::App* c) { c->add_option("--fuel", o.fuel, "step budget")->required(); };
  auto bits = [&](CLI::App* c) { c->add_option("--bits", o.bits, "precision 2^-bits")->required(); };

  auto* real = app.add_subcommand("real", "real number names");
  real->require_subcommand(1);
  auto* approx = real->add_subcommand("approx", "approximate a real");
  approx->add_option("--x", o.x, "rat:p/q | sqrt2 | code:N")->required();
  bits(approx);
  fuel(approx);

  auto* dg = app.add_subcommand("diag", "diagonal family report over a machine list");
  dg->add_option("--machines", o.machines)->required();
  bits(dg);
  fuel(dg);

  auto* mem = app.add_subcommand("member", "membership of a point in an open");
  mem->add_option("--space", o.space, "reals | nplus | finite-space JSON file")->default_val("reals");
  mem->add_option("--x", o.x)->required();
  mem->add_option("--open", o.open)->required();
  fuel(mem);

  auto* ws = app.add_subcommand("wso", "find a finite point in a subset of N+ containing oo");
  ws->add_option("--set", o.set, "full | empty | p3,t5 | code:N")->required();
  fuel(ws);

  auto* sob = app.add_subcommand("sober-recover", "recover a real from its neighbourhood filter");
  sob->add_option("--x", o.x)->required();
  bits(sob);
  fuel(sob);

  auto* lim = app.add_subcommand("limit", "limit of a fast converging sequence");
  lim->add_option("--seq", o.seq, "pow2 | shifted:c | below:c | code:N")->required();
  bits(lim);
  fuel(lim);

  auto* nn = app.add_subcommand("nplus-norm", "norm recovered from the induced map into N+");
  nn->add_option("--witness", o.witness, "shifted:c | below:c")->required();
  nn->add_option("--open", o.open)->required();
  fuel(nn);

  auto* fin = app.add_subcommand("finite", "finite spaces");
  fin->require_subcommand(1);
  auto* mk = fin->add_subcommand("markov", "obstructions to the Markov condition");
  mk->add_option("--space", o.space)->required();
  auto* tau = fin->add_subcommand("tau-from-sd", "open name from a semi-decider");
  tau->add_option("--space", o.space)->required();
  auto* src = tau->add_option_group("source");
  src->add_option("--set", o.set, "accepted points, e.g. 0,2");
  src->add_option("--sd", o.sd, "semi-decider code");
  src->require_option(1);
  tau->add_option("--rounds", o.rounds)->required();

  auto* sw = app.add_subcommand("nonsd-sweep", "bounded search for a semi-decider of B inside A u B");
  auto* which = sw->add_option_group("claim");
  which->add_option("--space", o.space, "finite-space JSON file (with --a, --b)");
  which->add_option("--machines", o.machines, "probe list for the diagonal family");
  which->require_option(1);
  sw->add_option("--a", o.a, "points of A");
  sw->add_option("--b", o.b, "points of B");
  sw->add_option("--max-code", o.max_code)->required();
  fuel(sw);

  auto* as = app.add_subcommand("asm", "assemble program text");
  as->add_option("--file", o.file, "input file, - for stdin");
  auto* ds = app.add_subcommand("disasm", "disassemble a program code");
  ds->add_option("--code", o.code)->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kPrecondition;
  }

  try {
    if (approx->parsed()) real_approx(o, out);
    else if (dg->parsed()) diag(o, out);
    else if (mem->parsed()) member(o, out);
    else if (ws->parsed()) wso(o, out);
    else if (sob->parsed()) sober_recover(o, out);
    else if (lim->parsed()) limit(o, out);
    else if (nn->parsed()) nplus_norm(o, out);
    else if (mk->parsed()) finite_markov(o, out);
    else if (tau->parsed()) finite_tau(o, out);
    else if (sw->parsed()) nonsd_sweep(o, out);
    else if (as->parsed()) asm_cmd(o, out);
    else if (ds->parsed()) disasm_cmd(o, out);
  } catch (const FuelExhausted& f) {
    emit(out, f.report);
    err << "out of fuel\n";
    return kOutOfFuel;
  } catch (const PreconditionError& e) {
    err << e.what() << '\n';
    return kPrecondition;
  } catch (const std::exception& e) {
    err << "invalid input: " << e.what() << '\n';
    return kPrecondition;
  }
  return kOk;
}

}  // namespace ctopo::cli
