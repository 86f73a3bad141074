#include "boxqp/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <random>
#include <sstream>

#include "boxqp/oracle.hpp"

namespace boxqp {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string shortest(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_number(const std::string& tok, int line) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw ParseError(line, "not a finite number: '" + tok + "'");
  }
  return v;
}

// Grid of cells as aligned text: one row label column, then the columns in
// first-seen order.
std::string grid_text(const std::string& title, const std::vector<TableCell>& cells) {
  std::vector<std::string> rows, cols;
  for (const auto& c : cells) {
    if (std::find(rows.begin(), rows.end(), c.row) == rows.end()) rows.push_back(c.row);
    if (std::find(cols.begin(), cols.end(), c.col) == cols.end()) cols.push_back(c.col);
  }
  std::size_t w0 = 0;
  for (const auto& r : rows) w0 = std::max(w0, r.size());
  std::vector<std::size_t> w(cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) w[j] = std::max<std::size_t>(cols[j].size(), 8);
  std::ostringstream os;
  os << title << "\n" << std::left << std::setw(static_cast<int>(w0)) << "" ;
  for (std::size_t j = 0; j < cols.size(); ++j) os << "  " << std::right << std::setw(static_cast<int>(w[j])) << cols[j];
  os << "\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(static_cast<int>(w0)) << r;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      std::string v;
      for (const auto& c : cells) {
        if (c.row == r && c.col == cols[j]) v = c.ok ? format_value(c.value) : "FAILED";
      }
      os << "  " << std::right << std::setw(static_cast<int>(w[j])) << v;
    }
    os << "\n";
  }
  return os.str();
}

Objective9 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Objective9 c{};
  double s = 0.0;
  do {
    for (int a = 0; a < 9; ++a) c[a] = normal(rng);
    s = norm9(c);
  } while (s < 1e-12);
  for (int a = 0; a < 9; ++a) c[a] /= s;
  return c;
}

double closeness(double a, double b) { return std::abs(a - b); }

}  // namespace

// ------------------------------------------------------------ instances

DiagRule parse_diag_rule(std::string_view name) {
  const std::string s = lower(name);
  if (s == "same") return DiagRule::kSame;
  if (s == "zero") return DiagRule::kZero;
  throw std::invalid_argument("diagonal rule must be 'same' or 'zero'");
}

std::string GenSpec::label() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%02d-%03d-%d", n, density, number);
  return buf;
}

BoxQpInstance generate(const GenSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("n must be positive");
  if (spec.density < 0 || spec.density > 100) throw std::invalid_argument("density must be in 0..100");
  std::seed_seq seq{static_cast<std::uint32_t>(spec.n), static_cast<std::uint32_t>(spec.density),
                    static_cast<std::uint32_t>(spec.number),
                    static_cast<std::uint32_t>(spec.seed & 0xffffffffU),
                    static_cast<std::uint32_t>(spec.seed >> 32)};
  std::mt19937_64 rng(seq);
  // Explicit reductions instead of std distributions keep the stream
  // identical across standard libraries.
  auto draw = [&]() -> double {
    const bool present = static_cast<int>(rng() % 100) < spec.density;
    const long long v = static_cast<long long>(rng() % 101) - 50;
    return present ? static_cast<double>(v) : 0.0;
  };
  const int n = spec.n;
  Vector q(n);
  for (int i = 0; i < n; ++i) q[i] = draw();
  Matrix Q = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (i == j && spec.diag == DiagRule::kZero) continue;
      Q(i, j) = Q(j, i) = draw();
    }
  }
  return BoxQpInstance(std::move(Q), std::move(q), spec.label());
}

BoxQpInstance builtin_bl() {
  Matrix Q(3, 3);
  Q << -2.25, -3, -3,
       -3, 0, -0.5,
       -3, -0.5, 1;
  return BoxQpInstance(std::move(Q), Vector{{3.0, 1.0, 0.0}}, "BL");
}

ParseError::ParseError(int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

BoxQpInstance parse_instance(std::string_view text) {
  int n = -1;
  std::optional<Vector> q;
  std::vector<Vector> rows;
  std::vector<int> row_lines;
  std::string label;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto toks = split_ws(line);
    if (toks.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (toks[0][0] == '#') {
      if (toks[0] == "#" && toks.size() >= 3 && toks[1] == "label") {
        const std::size_t at = line.find("label") + 5;
        std::string rest(line.substr(at));
        rest.erase(0, rest.find_first_not_of(" \t"));
        label = rest;
      }
      if (end == text.size()) break;
      continue;
    }
    if (toks[0] == "n") {
      if (n != -1) throw ParseError(line_no, "duplicate 'n' line");
      if (toks.size() != 2) throw ParseError(line_no, "expected 'n <int>'");
      int v = 0;
      const auto r = std::from_chars(toks[1].data(), toks[1].data() + toks[1].size(), v);
      if (r.ec != std::errc() || r.ptr != toks[1].data() + toks[1].size() || v < 1) {
        throw ParseError(line_no, "n must be a positive integer");
      }
      n = v;
    } else if (toks[0] == "q" || toks[0] == "Q") {
      if (n == -1) throw ParseError(line_no, "'" + toks[0] + "' before 'n'");
      if (static_cast<int>(toks.size()) != n + 1) {
        throw ParseError(line_no, "expected " + std::to_string(n) + " values after '" + toks[0] + "'");
      }
      Vector v(n);
      for (int i = 0; i < n; ++i) v[i] = parse_number(toks[static_cast<std::size_t>(i) + 1], line_no);
      if (toks[0] == "q") {
        if (q) throw ParseError(line_no, "duplicate 'q' line");
        q = std::move(v);
      } else {
        if (static_cast<int>(rows.size()) == n) throw ParseError(line_no, "more than n 'Q' lines");
        rows.push_back(std::move(v));
        row_lines.push_back(line_no);
      }
    } else {
      throw ParseError(line_no, "unknown record '" + toks[0] + "'");
    }
    if (end == text.size()) break;
  }
  if (n == -1) throw ParseError(line_no, "missing 'n' line");
  if (!q) throw ParseError(line_no, "missing 'q' line");
  if (static_cast<int>(rows.size()) != n) {
    throw ParseError(line_no, "expected " + std::to_string(n) + " 'Q' lines, found " + std::to_string(rows.size()));
  }
  Matrix Q(n, n);
  for (int i = 0; i < n; ++i) Q.row(i) = rows[static_cast<std::size_t>(i)].transpose();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      if (Q(i, j) != Q(j, i)) {
        throw ParseError(row_lines[static_cast<std::size_t>(i)],
                         "Q is not symmetric: Q[" + std::to_string(j + 1) + "][" + std::to_string(i + 1) +
                             "] = " + shortest(Q(j, i)) + " but Q[" + std::to_string(i + 1) + "][" +
                             std::to_string(j + 1) + "] = " + shortest(Q(i, j)));
      }
    }
  }
  return BoxQpInstance(std::move(Q), std::move(*q), label);
}

std::string serialize_instance(const BoxQpInstance& inst) {
  std::ostringstream os;
  if (!inst.label().empty()) os << "# label " << inst.label() << "\n";
  os << "n " << inst.n() << "\n";
  os << "q";
  for (int i = 0; i < inst.n(); ++i) os << ' ' << shortest(inst.q()[i]);
  os << "\n";
  for (int i = 0; i < inst.n(); ++i) {
    os << "Q";
    for (int j = 0; j < inst.n(); ++j) os << ' ' << shortest(inst.Q()(i, j));
    os << "\n";
  }
  return os.str();
}

BoxQpInstance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

void write_instance(const std::filesystem::path& path, const BoxQpInstance& inst) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize_instance(inst);
}

// ------------------------------------------------------------ output

std::string format_value(double v) {
  char buf[64];
  if (std::abs(v) < 5e-6) v = 0.0;
  std::snprintf(buf, sizeof buf, "%.5f", v);
  return buf;
}

std::string cells_to_csv(const std::vector<TableCell>& cells) {
  std::ostringstream os;
  os << "table,row,col,value\n";
  for (const auto& c : cells) {
    os << c.table << ',' << c.row << ',' << c.col << ',' << (c.ok ? format_value(c.value) : "nan") << "\n";
  }
  return os.str();
}

// ------------------------------------------------------------ experiments

const std::array<std::pair<std::string, RelaxationLevel>, 4>& ladder() {
  static const std::array<std::pair<std::string, RelaxationLevel>, 4> levels{{
      {"PSD+RLT+TRI", RelaxationLevel::psd_rlt_tri()},
      {"+ETRI1", RelaxationLevel::etri1_level()},
      {"+ETRI1/2/3", RelaxationLevel::etri123_level()},
      {"+SOC", RelaxationLevel::soc_level()},
  }};
  return levels;
}

GapSearchResult search_max_gap(const RelaxationLevel& level, int budget, std::uint64_t seed,
                               const ConicBackend& backend) {
  if (budget < 1) throw std::invalid_argument("search budget must be at least 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  GapSearchResult best;
  best.gap = -std::numeric_limits<double>::infinity();
  auto evaluate = [&](const Objective9& c) {
    ++best.evaluations;
    double g = 0.0;
    try {
      g = objective_gap(c, level, backend);
    } catch (const NumericalTrouble&) {
      return;
    }
    if (g > best.gap) {
      best.gap = g;
      best.objective = c;
    }
  };
  // Cut normals are the usual worst directions, so a quarter of the draws
  // start from normalized catalog rows with some noise.
  std::vector<std::vector<Objective9>> rows;
  for (CutFamily f : {CutFamily::kRlt, CutFamily::kTri, CutFamily::kEtri1, CutFamily::kEtri2, CutFamily::kEtri3}) {
    rows.emplace_back();
    for (const LinearCut& c : catalog(f)) rows.back().push_back(objective_of(c));
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int random_draws = std::max(1, budget / 2);
  for (int i = 0; i < random_draws; ++i) {
    if (i % 2 == 1) {
      // One row, or the sum of two rows of a family.
      const auto& fam = rows[static_cast<std::size_t>(rng() % rows.size())];
      const int terms = 1 + static_cast<int>(rng() % 2);
      Objective9 c{};
      for (int t = 0; t < terms; ++t) {
        const Objective9& row = fam[static_cast<std::size_t>(rng() % fam.size())];
        const double s0 = norm9(row);
        for (int a = 0; a < 9; ++a) c[a] += row[a] / s0;
      }
      const double r = unif(rng);
      const double noise = 0.1 * r * r;
      for (int a = 0; a < 9; ++a) c[a] += noise * normal(rng);
      c[9] = 0.0;
      const double s1 = norm9(c);
      if (s1 < 1e-12) continue;
      for (int a = 0; a < 9; ++a) c[a] /= s1;
      evaluate(c);
    } else {
      evaluate(random_unit(rng));
    }
  }
  const int local = budget - random_draws;
  double step = 0.1;
  int stale = 0;
  for (int i = 0; i < local; ++i) {
    Objective9 c = best.objective;
    for (int a = 0; a < 9; ++a) c[a] += step * normal(rng);
    const double s = norm9(c);
    if (s < 1e-12) continue;
    for (int a = 0; a < 9; ++a) c[a] /= s;
    const double before = best.gap;
    evaluate(c);
    if (best.gap > before) {
      stale = 0;
    } else if (++stale >= 20) {
      step = std::max(step * 0.5, 1e-3);
      stale = 0;
    }
  }
  if (!std::isfinite(best.gap)) best.gap = 0.0;
  return best;
}

std::vector<DeterministicGap> deterministic_gap_objectives() {
  auto min_norm = [](CutFamily f) {
    const auto cuts = generate_family(f);
    return *std::min_element(cuts.begin(), cuts.end(), [](const LinearCut& a, const LinearCut& b) {
      return coefficient_norm(a) < coefficient_norm(b);
    });
  };
  auto unit = [](Objective9 c) {
    c[9] = 0.0;
    const double s = norm9(c);
    for (int a = 0; a < 9; ++a) c[a] /= s;
    return c;
  };
  Objective9 two_rlt{};
  two_rlt[6] = two_rlt[7] = 1.0;
  return {
      {"PSD+DIAG", "Sum of 2 RLT", unit(two_rlt), RelaxationLevel::psd_diag()},
      {"PSD+RLT", "TRI", unit(objective_of(min_norm(CutFamily::kTri))), RelaxationLevel::psd_rlt()},
      {"PSD+RLT+TRI", "ETRI1", unit(objective_of(min_norm(CutFamily::kEtri1))), RelaxationLevel::psd_rlt_tri()},
  };
}

std::vector<GenSpec> suite_specs(const SuiteOptions& options) {
  if (options.min_n < 1 || options.max_n < options.min_n) throw std::invalid_argument("bad suite size range");
  if (options.densities.empty()) throw std::invalid_argument("suite needs at least one density");
  std::vector<GenSpec> out;
  const int span = options.max_n - options.min_n + 1;
  for (int i = 0; i < options.instances; ++i) {
    GenSpec s;
    s.n = options.min_n + i % span;
    s.density = options.densities[static_cast<std::size_t>(i / span) % options.densities.size()];
    s.number = i + 1;
    s.seed = options.seed;
    s.diag = options.diag;
    out.push_back(s);
  }
  return out;
}

SuiteRow run_suite_instance(const BoxQpInstance& inst, const SuiteOptions& options,
                            const ConicBackend& backend) {
  SuiteRow row;
  row.label = inst.label();
  row.n = inst.n();
  row.optimum = solve_global(inst).value;
  SolveReport last;
  for (std::size_t l = 0; l < ladder().size(); ++l) {
    SolveReport rep = run(inst, ladder()[l].second, options.driver, backend);
    row.solved[l] = rep.ok();
    row.value[l] = rep.value;
    row.feasible[l] = rep.feasible_value;
    last = std::move(rep);
  }
  if (!row.solved.back()) return row;
  row.etri_cuts = last.etri_cuts();
  row.soc_blocks = last.soc_blocks;
  row.closed = last.value - row.optimum < 1e-4;
  if (last.rank_one_x && closeness(feasible_value(inst, *last.rank_one_x), last.value) <= 1e-4) {
    row.extracted = true;
    row.extracted_value = feasible_value(inst, *last.rank_one_x);
    return row;
  }
  for (int s = 0; s < options.extraction_seeds && !row.extracted; ++s) {
    const auto x = extract_rank_one(inst, last.value, last.model, backend,
                                    options.driver.seed + static_cast<std::uint64_t>(s),
                                    options.driver.rank_tolerance);
    if (x) {
      row.extracted = true;
      row.extracted_value = feasible_value(inst, *x);
    }
  }
  return row;
}

std::vector<SuiteRow> run_suite(const SuiteOptions& options, const ConicBackend& backend) {
  const auto specs = suite_specs(options);
  std::vector<std::future<SuiteRow>> jobs;
  for (const GenSpec& s : specs) {
    jobs.push_back(std::async(std::launch::async, [&options, &backend, s] {
      return run_suite_instance(generate(s), options, backend);
    }));
  }
  std::vector<SuiteRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

TableKind parse_table_kind(std::string_view name) {
  const std::string s = lower(name);
  if (s == "t1" || s == "1") return TableKind::kT1;
  if (s == "t2" || s == "2") return TableKind::kT2;
  if (s == "t3" || s == "3") return TableKind::kT3;
  if (s == "t4" || s == "4") return TableKind::kT4;
  if (s == "t5" || s == "t6" || s == "t5t6" || s == "5") return TableKind::kT5;
  throw std::invalid_argument("unknown table '" + std::string(name) + "'");
}

TableArtifact run_tables(TableKind which, const ConicBackend& backend, const TableOptions& options) {
  TableArtifact art;
  switch (which) {
    case TableKind::kT1:
    case TableKind::kT2: {
      const int t = which == TableKind::kT1 ? 1 : 2;
      art.cells = violation_table(t, backend);
      art.text = grid_text(t == 1 ? "Maximum violations (RLT, TRI, ETRI1)" : "Maximum violations (ETRI2, ETRI3)",
                           art.cells);
      break;
    }
    case TableKind::kT3: {
      const BoxQpInstance bl = builtin_bl();
      for (const auto& [name, level] : ladder()) {
        const SolveReport rep = run(bl, level, options.driver, backend);
        art.cells.push_back({"T3", name, "value", rep.value, rep.ok()});
      }
      art.text = grid_text("BL objective values", art.cells);
      break;
    }
    case TableKind::kT4: {
      for (const DeterministicGap& d : deterministic_gap_objectives()) {
        TableCell cell{"T4", d.level, "gap", 0.0, true};
        try {
          cell.value = objective_gap(d.objective, d.relaxation, backend);
        } catch (const NumericalTrouble&) {
          cell.ok = false;
        }
        art.cells.push_back(cell);
      }
      if (options.search_budget > 0) {
        for (std::size_t l = 1; l < ladder().size(); ++l) {
          const GapSearchResult r = search_max_gap(ladder()[l].second, options.search_budget,
                                                   options.seed + l, backend);
          art.cells.push_back({"T4", ladder()[l].first, "gap", r.gap, true});
        }
      }
      art.text = grid_text("Maximum normalized gaps", art.cells);
      break;
    }
    case TableKind::kT5: {
      const auto rows = run_suite(options.suite, backend);
      std::vector<TableCell> values, gaps;
      for (const SuiteRow& r : rows) {
        values.push_back({"T5", r.label, "OPT", r.optimum, true});
        for (std::size_t l = 0; l < ladder().size(); ++l) {
          const std::string& lv = ladder()[l].first;
          values.push_back({"T5", r.label, lv + " bound", r.value[l], r.solved[l]});
          values.push_back({"T5", r.label, lv + " feasible", r.feasible[l], r.solved[l]});
          gaps.push_back({"T6", r.label, lv + " opt gap", r.value[l] - r.optimum, r.solved[l]});
          gaps.push_back({"T6", r.label, lv + " feas gap", r.value[l] - r.feasible[l], r.solved[l]});
        }
      }
      art.text = grid_text("Regenerated instances: values", values) + "\n" +
                 grid_text("Regenerated instances: gaps", gaps);
      art.cells = std::move(values);
      art.cells.insert(art.cells.end(), gaps.begin(), gaps.end());
      break;
    }
  }
  return art;
}

}  // namespace boxqp
