#pragma once

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cayley/iso.hpp"
#include "cayley/numbers.hpp"
#include "cayley/recognition.hpp"
#include "cayley/split.hpp"
#include "cayley/table.hpp"

namespace cayley::cli {

// Exit codes (see README):
//   verify:    0 group, 3 not a group
//   upsilon:   0 member, 1 non-member
//   iso:       0 isomorphic, 1 not isomorphic, 2 bad input, 3 mode/resource
//   decompose: 0 ok, 2 bad input, 3 mode/resource
//   density:   0 ok, 3 resource limit
//   all:       64 usage error
inline constexpr int kUsageError = 64;

namespace detail {

inline GroupTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TableError(TableError::Kind::MalformedInput,
                            "cannot open '" + path + "'");
  return parse_table(in);
}

inline std::string format_ratio(double r) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << r;
  return os.str();
}

inline int cmd_verify(const std::string& file, std::ostream& out,
                      std::ostream& err) {
  GroupTable t = [&] {
    try {
      return load_table(file);
    } catch (const TableError& e) {
      err << "verify: " << e.what() << '\n';
      out << "notgroup reason="
          << (e.kind() == TableError::Kind::NotReduced ? "not_reduced"
                                                       : "malformed_input")
          << '\n';
      throw;
    }
  }();
  const auto result = recognize(t);
  if (std::holds_alternative<NotGroup>(result)) {
    const auto& ng = std::get<NotGroup>(result);
    err << "verify: " << ng.detail << '\n';
    out << "notgroup n=" << t.order() << " reason=" << to_string(ng.reason)
        << '\n';
    return 3;
  }
  const auto& rep = std::get<PermRep>(result);
  out << "group n=" << t.order() << " gens=" << rep.gen_count() / 2
      << " depth=" << rep.tree_depth() << '\n';
  return 0;
}

inline int cmd_upsilon(std::uint64_t n, std::ostream& out, std::ostream& err) {
  try {
    const auto cert = upsilon_check(n);
    out << "member=" << (cert.member ? "true" : "false") << " a=" << cert.a
        << " b=" << cert.b;
    if (cert.failing_condition)
      out << " failing=" << *cert.failing_condition
          << " witness=" << cert.witness;
    out << '\n';
    return cert.member ? 0 : 1;
  } catch (const NumbersError& e) {
    err << "upsilon: " << e.what() << '\n';
    return 3;
  }
}

inline int cmd_density(std::uint64_t n, const std::string& csv_path,
                       bool allow_huge, bool base2_exact, std::ostream& out,
                       std::ostream& err) {
  DensityOptions opt;
  opt.allow_above_cap = allow_huge;
  opt.base2_exact = base2_exact;
  std::vector<DensityPoint> points;
  try {
    points = density(n, opt);
  } catch (const NumbersError& e) {
    err << "density: " << e.what() << '\n';
    return 3;
  }
  std::ostringstream csv;
  for (const auto& p : points)
    csv << p.checkpoint << ',' << p.count << ',' << format_ratio(p.ratio)
        << '\n';
  if (csv_path.empty()) {
    out << csv.str();
  } else {
    std::ofstream f(csv_path);
    if (!f) {
      err << "density: cannot write '" << csv_path << "'\n";
      return 3;
    }
    f << csv.str();
  }
  return 0;
}

inline int cmd_decompose(const std::string& file, const std::string& emit_h,
                         bool force, std::ostream& out, std::ostream& err) {
  GroupTable t = [&] {
    try {
      return load_table(file);
    } catch (const TableError& e) {
      err << "decompose: " << e.what() << '\n';
      throw;
    }
  }();
  auto result = recognize(t);
  if (std::holds_alternative<NotGroup>(result)) {
    err << "decompose: not a group: " << std::get<NotGroup>(result).detail
        << '\n';
    return 2;
  }
  const auto cert = upsilon_check(t.order());
  if (!cert.member && !force) {
    err << "decompose: order " << t.order()
        << " is not in the supported class (use --force to try anyway)\n";
    return 3;
  }
  try {
    const auto dec =
        decompose(std::move(std::get<PermRep>(result)), cert, force);
    out << "n=" << t.order() << " b=" << dec.b << " h=" << dec.h_order()
        << " theta=";
    for (std::size_t i = 0; i < dec.theta.size(); ++i)
      out << (i ? "," : "") << dec.theta[i];
    if (dec.theta.empty()) out << "-";
    out << '\n';
    if (!emit_h.empty()) {
      std::ofstream f(emit_h);
      if (!f) {
        err << "decompose: cannot write '" << emit_h << "'\n";
        return 3;
      }
      emit_table(dec.h_table, f);
    }
    return 0;
  } catch (const SplitError& e) {
    err << "decompose: " << e.what() << '\n';
    return 3;
  }
}

inline int cmd_iso(const std::string& file1, const std::string& file2,
                   const std::string& mode_str, const std::string& witness_path,
                   std::ostream& out, std::ostream& err) {
  IsoMode mode = IsoMode::Auto;
  if (mode_str == "pipeline") mode = IsoMode::Pipeline;
  if (mode_str == "brute") mode = IsoMode::Brute;
  GroupTable t1 = GroupTable(1, {0}), t2 = GroupTable(1, {0});
  try {
    t1 = load_table(file1);
    t2 = load_table(file2);
  } catch (const TableError& e) {
    err << "iso: " << e.what() << '\n';
    return 2;
  }
  if (mode == IsoMode::Auto && t1.order() == t2.order() &&
      !upsilon_check(t1.order()).member)
    err << "iso: order " << t1.order()
        << " outside the fast class; falling back to brute force\n";
  try {
    const auto w = iso_main(t1, t2, mode);
    out << "verdict=" << (w.isomorphic ? "isomorphic" : "not_isomorphic")
        << " method=" << to_string(w.method);
    if (!w.isomorphic) out << " reason=" << to_string(w.reason);
    out << '\n';
    if (w.isomorphic && !witness_path.empty()) {
      std::ofstream f(witness_path);
      if (!f) {
        err << "iso: cannot write '" << witness_path << "'\n";
        return 3;
      }
      for (std::size_t i = 0; i < w.sigma.size(); ++i)
        f << (i ? " " : "") << w.sigma[i] + 1;
      f << '\n';
    }
    return w.isomorphic ? 0 : 1;
  } catch (const NotGroupError& e) {
    err << "iso: " << e.what() << '\n';
    return 2;
  } catch (const ModeError& e) {
    err << "iso: " << e.what() << '\n';
    return 3;
  } catch (const SplitError& e) {
    err << "iso: " << e.what() << '\n';
    return 3;
  }
}

inline int cmd_gen(const std::string& family,
                   const std::vector<std::uint64_t>& params,
                   const std::string& out_path, std::ostream& out,
                   std::ostream& err) {
  FamilySpec spec;
  if (family == "cyclic")
    spec.kind = FamilySpec::Kind::Cyclic;
  else if (family == "dihedral")
    spec.kind = FamilySpec::Kind::Dihedral;
  else if (family == "direct_product")
    spec.kind = FamilySpec::Kind::DirectProduct;
  else if (family == "semidirect_cyclic")
    spec.kind = FamilySpec::Kind::SemidirectCyclic;
  else {
    err << "gen: unknown family '" << family
        << "' (cyclic, dihedral, direct_product, semidirect_cyclic)\n";
    return kUsageError;
  }
  spec.params = params;
  try {
    const GroupTable t = make_family(spec);
    if (out_path.empty()) {
      emit_table(t, out);
    } else {
      std::ofstream f(out_path);
      if (!f) {
        err << "gen: cannot write '" << out_path << "'\n";
        return 3;
      }
      emit_table(t, f);
    }
    return 0;
  } catch (const TableError& e) {
    err << "gen: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace detail

/// Entry point shared by the binary and the test suite.
inline int run(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  CLI::App app{
      "multiplication-table group recognition, decomposition and "
      "isomorphism testing"};
  app.name("cayley");
  app.require_subcommand(1);

  std::string verify_file;
  auto* verify =
      app.add_subcommand("verify", "decide whether a table file is a group");
  verify->add_option("file", verify_file, "table file")->required();

  std::uint64_t upsilon_n = 0;
  auto* upsilon = app.add_subcommand(
      "upsilon", "certificate for membership of n in the fast order class");
  upsilon->add_option("n", upsilon_n, "order to test")->required();

  std::uint64_t density_n = 0;
  std::string density_csv;
  bool density_allow_huge = false;
  bool density_exact = true;
  auto* dens = app.add_subcommand(
      "density", "count fast-class orders up to N at decimal checkpoints");
  dens->add_option("N", density_n, "upper limit")->required();
  dens->add_option("--csv", density_csv, "write CSV here instead of stdout");
  dens->add_flag("--allow-huge", density_allow_huge,
                 "override the resource cap");
  dens->add_flag("--base2-exact,!--no-base2-exact", density_exact,
                 "exact integer base-2 log comparisons (default on)");

  std::string dec_file, dec_emit_h;
  bool dec_force = false;
  auto* dec = app.add_subcommand(
      "decompose", "split a group into its cyclic Hall part and complement");
  dec->add_option("file", dec_file, "table file")->required();
  dec->add_option("--emit-h", dec_emit_h, "write the complement table here");
  dec->add_flag("--force", dec_force,
                "attempt the split for uncertified orders");

  std::string iso_file1, iso_file2, iso_mode = "auto", iso_witness;
  auto* iso = app.add_subcommand("iso", "decide isomorphism of two tables");
  iso->add_option("file1", iso_file1, "first table")->required();
  iso->add_option("file2", iso_file2, "second table")->required();
  iso->add_option("--mode", iso_mode, "auto|pipeline|brute")
      ->check(CLI::IsMember({"auto", "pipeline", "brute"}))
      ->capture_default_str();
  iso->add_option("--emit-witness", iso_witness,
                  "write the isomorphism as 1-based images");

  std::string gen_family, gen_out;
  std::vector<std::uint64_t> gen_params;
  auto* gen = app.add_subcommand("gen", "emit a family table");
  gen->add_option("family", gen_family,
                  "cyclic|dihedral|direct_product|semidirect_cyclic")
      ->required();
  gen->add_option("params", gen_params, "family parameters")->required();
  gen->add_option("-o,--output", gen_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (app.got_subcommand(verify)) return detail::cmd_verify(verify_file, out, err);
    if (app.got_subcommand(upsilon)) return detail::cmd_upsilon(upsilon_n, out, err);
    if (app.got_subcommand(dens))
      return detail::cmd_density(density_n, density_csv, density_allow_huge,
                                 density_exact, out, err);
    if (app.got_subcommand(dec))
      return detail::cmd_decompose(dec_file, dec_emit_h, dec_force, out, err);
    if (app.got_subcommand(iso))
      return detail::cmd_iso(iso_file1, iso_file2, iso_mode, iso_witness, out,
                             err);
    if (app.got_subcommand(gen))
      return detail::cmd_gen(gen_family, gen_params, gen_out, out, err);
  } catch (const TableError&) {
    return 3;  // verify's parse failure already reported
  } catch (const std::exception& e) {
    err << "cayley: " << e.what() << '\n';
    return 3;
  }
  return kUsageError;
}

}  // namespace cayley::cli
