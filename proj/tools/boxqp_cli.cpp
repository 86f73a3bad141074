// Command-line front end. Exit status: 0 success, 1 usage or input errors,
// 2 numerical trouble in the conic backend.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "boxqp/bench.hpp"
#include "boxqp/conic.hpp"
#include "boxqp/cuts.hpp"
#include "boxqp/driver.hpp"
#include "boxqp/exact.hpp"
#include "boxqp/oracle.hpp"

using namespace boxqp;

namespace {

constexpr int kUsageError = 1;
constexpr int kNumericalTrouble = 2;

// "bl" names the built-in instance; anything else is an instance file.
BoxQpInstance load(const std::string& source) {
  if (source == "bl" || source == "BL") return builtin_bl();
  return read_instance(source);
}

std::string vec_text(const Vector& x) {
  std::string s;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += (i ? " " : "") + format_value(x[i]);
  return s;
}

struct SolveArgs {
  std::string file;
  std::string level = "soc";
  int rounds = 20;
  int cap = 10;
  double threshold = 1e-5;
  std::uint64_t seed = 1;

  DriverConfig config() const {
    DriverConfig c;
    c.max_rounds = rounds;
    c.cuts_per_round = cap;
    c.threshold = threshold;
    c.seed = seed;
    c.validate();
    return c;
  }
};

void add_solve_options(CLI::App* cmd, SolveArgs& a) {
  cmd->add_option("file", a.file, "instance file, or 'bl'")->required();
  cmd->add_option("--level", a.level, "psd+diag, psd+rlt, psd+rlt+tri, etri1, etri123 or soc")
      ->capture_default_str();
  cmd->add_option("--rounds", a.rounds, "round limit per phase")->capture_default_str();
  cmd->add_option("--cap", a.cap, "cuts (and SOC blocks) added per round")->capture_default_str();
  cmd->add_option("--threshold", a.threshold, "normalized violation threshold")->capture_default_str();
  cmd->add_option("--seed", a.seed, "seed for tie-breaking and extraction")->capture_default_str();
}

int cmd_solve(const SolveArgs& a, const ConicBackend& backend) {
  const BoxQpInstance inst = load(a.file);
  const RelaxationLevel level = RelaxationLevel::parse(a.level);
  const SolveReport r = run(inst, level, a.config(), backend);
  std::printf("instance %s  n %d  level %s\n", inst.label().c_str(), inst.n(), level.name().c_str());
  for (const RoundLog& log : r.rounds) {
    int cuts = 0;
    for (const auto& [f, c] : log.cuts_added) cuts += c;
    std::printf("round %2d  %-6s %-8s %s  cuts %d  blocks %d  caps %d\n", log.round, log.phase.c_str(),
                std::string(status_name(log.status)).c_str(), format_value(log.value).c_str(), cuts,
                log.blocks_added, log.caps_added);
  }
  if (!r.ok()) {
    std::fprintf(stderr, "%s: %s\n", std::string(status_name(r.status)).c_str(), r.diagnostics.c_str());
    return kNumericalTrouble;
  }
  std::printf("bound %s\n", format_value(r.value).c_str());
  std::printf("feasible %s  rank ratio %.2e\n", format_value(r.feasible_value).c_str(), r.rank_ratio);
  for (const auto& [f, c] : r.cut_counts) std::printf("cuts %s %d\n", std::string(family_name(f)).c_str(), c);
  std::printf("soc blocks %d  caps %d\n", r.soc_blocks, r.soc_caps);
  if (r.rank_one_x) std::printf("x %s\n", vec_text(*r.rank_one_x).c_str());
  return 0;
}

int cmd_extract(const SolveArgs& a, double pin, const ConicBackend& backend) {
  const BoxQpInstance inst = load(a.file);
  const SolveReport r = run(inst, RelaxationLevel::parse(a.level), a.config(), backend);
  if (!r.ok()) {
    std::fprintf(stderr, "%s: %s\n", std::string(status_name(r.status)).c_str(), r.diagnostics.c_str());
    return kNumericalTrouble;
  }
  const auto x = extract_rank_one(inst, pin, r.model, backend, a.seed);
  if (!x) {
    std::printf("no rank-one point at %s (bound %s)\n", format_value(pin).c_str(), format_value(r.value).c_str());
    return kNumericalTrouble;
  }
  std::printf("x %s\nvalue %s\n", vec_text(*x).c_str(), format_value(feasible_value(inst, *x)).c_str());
  return 0;
}

int cmd_verify_catalog(bool print) {
  bool all = true;
  for (CutFamily f : {CutFamily::kEtri1, CutFamily::kEtri2, CutFamily::kEtri3}) {
    const auto gen = generate_family(f);
    const auto& pub = catalog(f);
    bool same = gen.size() == pub.size();
    for (const auto& g : gen) {
      bool found = false;
      for (const auto& p : pub) found = found || canonical_key(g) == canonical_key(p);
      same = same && found;
    }
    double min_norm = 1e300;
    for (const auto& g : gen) min_norm = std::min(min_norm, coefficient_norm(g));
    std::printf("%-5s %zu rows  %s  min norm^2 %.0f  base norm^2 %.0f\n", std::string(family_name(f)).c_str(),
                gen.size(), same ? "match" : "MISMATCH", min_norm * min_norm,
                coefficient_norm(base_cuts(f)[0]) * coefficient_norm(base_cuts(f)[0]));
    if (print) std::fputs(format_cut_table(gen).c_str(), stdout);
    all = all && same;
  }
  return all ? 0 : kUsageError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conic relaxations for box-constrained quadratic programs"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  add_solve_options(app.add_subcommand("solve", "run the cutting-plane driver"), solve_args);

  SolveArgs extract_args;
  double pin = 0.0;
  auto* extract = app.add_subcommand("extract", "recover a rank-one point at a pinned objective value");
  add_solve_options(extract, extract_args);
  extract->add_option("--pin", pin, "objective value to pin")->required();

  std::string exact_file;
  app.add_subcommand("exact3", "exact value over the n = 3 hull")->add_option("file", exact_file)->required();

  std::string oracle_file;
  app.add_subcommand("oracle", "global optimum by face enumeration")->add_option("file", oracle_file)->required();

  int table = 1;
  auto* maxviol = app.add_subcommand("maxviol", "violation grid of the cut families");
  maxviol->add_option("--table", table, "1 or 2")->check(CLI::IsMember({1, 2}))->capture_default_str();

  std::string which;
  bool csv = false;
  TableOptions table_options;
  auto* tables = app.add_subcommand("tables", "experiment tables");
  tables->add_option("--which", which, "t1, t2, t3, t4 or t5")->required();
  tables->add_flag("--csv", csv, "machine-readable rows instead of aligned text");
  tables->add_option("--budget", table_options.search_budget, "gap search budget for t4 (0 skips)")
      ->capture_default_str();
  tables->add_option("--seed", table_options.seed, "gap search seed")->capture_default_str();

  GenSpec spec;
  std::string diag = "same";
  std::string out_file;
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  gen->add_option("--n", spec.n)->capture_default_str();
  gen->add_option("--d", spec.density, "density in percent")->capture_default_str();
  gen->add_option("--num", spec.number)->capture_default_str();
  gen->add_option("--seed", spec.seed)->capture_default_str();
  gen->add_option("--diag", diag, "same or zero")->capture_default_str();
  gen->add_option("-o,--out", out_file, "write to a file instead of stdout");

  bool print_catalog = false;
  auto* verify = app.add_subcommand("verify-catalog", "regenerate the ETRI families and compare");
  verify->add_flag("--print", print_catalog, "print the regenerated rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    const InteriorPointBackend backend(BackendOptions::from_environment());
    if (app.got_subcommand("solve")) return cmd_solve(solve_args, backend);
    if (app.got_subcommand("extract")) return cmd_extract(extract_args, pin, backend);
    if (app.got_subcommand("exact3")) {
      std::printf("%s\n", format_value(solve_exact_qpb3(load(exact_file), backend)).c_str());
      return 0;
    }
    if (app.got_subcommand("oracle")) {
      const GlobalSolution s = solve_global(load(oracle_file));
      std::printf("value %s\nx %s\n", format_value(s.value).c_str(), vec_text(s.x).c_str());
      return 0;
    }
    if (app.got_subcommand("maxviol")) {
      const TableArtifact t = run_tables(table == 1 ? TableKind::kT1 : TableKind::kT2, backend);
      std::fputs(t.text.c_str(), stdout);
      return 0;
    }
    if (app.got_subcommand("tables")) {
      const TableArtifact t = run_tables(parse_table_kind(which), backend, table_options);
      std::fputs((csv ? cells_to_csv(t.cells) : t.text).c_str(), stdout);
      for (const TableCell& c : t.cells) {
        if (!c.ok) return kNumericalTrouble;
      }
      return 0;
    }
    if (app.got_subcommand("gen")) {
      spec.diag = parse_diag_rule(diag);
      const BoxQpInstance inst = generate(spec);
      if (out_file.empty()) {
        std::fputs(serialize_instance(inst).c_str(), stdout);
      } else {
        write_instance(out_file, inst);
      }
      return 0;
    }
    if (app.got_subcommand("verify-catalog")) return cmd_verify_catalog(print_catalog);
  } catch (const NumericalTrouble& e) {
    std::fprintf(stderr, "numerical trouble: %s\n", e.what());
    return kNumericalTrouble;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsageError;
  }
  return kUsageError;
}
