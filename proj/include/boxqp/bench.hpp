#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "boxqp/conic.hpp"
#include "boxqp/driver.hpp"
#include "boxqp/exact.hpp"
#include "boxqp/model.hpp"

namespace boxqp {

// ------------------------------------------------------------ instances

enum class DiagRule : std::uint8_t {
  kSame,  // Q_ii drawn like the off-diagonal entries
  kZero,  // Q_ii = 0
};
DiagRule parse_diag_rule(std::string_view name);

/// Random instance recipe: every q_i and Q_ij (i < j; i = j under kSame) is,
/// with probability density%, an integer uniform on [-50, 50], else 0.
struct GenSpec {
  int n = 3;
  int density = 100;  // percent
  int number = 1;
  std::uint64_t seed = 0;
  DiagRule diag = DiagRule::kSame;

  /// "nn-ddd-k", e.g. 08-075-1.
  std::string label() const;
};

/// Deterministic in the recipe: the generator stream is seeded from
/// (n, density, number, seed). Throws std::invalid_argument on bad ranges.
BoxQpInstance generate(const GenSpec& spec);

/// n = 3 instance with several global maximizers of value 1.
BoxQpInstance builtin_bl();

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

/// Text format: '#' comments (a "# label <text>" comment carries the label),
/// "n <int>", "q <n values>", then n lines "Q <n values>".
BoxQpInstance parse_instance(std::string_view text);
/// Canonical text; numbers in shortest round-trip form.
std::string serialize_instance(const BoxQpInstance& inst);

BoxQpInstance read_instance(const std::filesystem::path& path);
void write_instance(const std::filesystem::path& path, const BoxQpInstance& inst);

// ------------------------------------------------------------ output

/// Fixed five-decimal rendering used in every table.
std::string format_value(double v);
/// "table,row,col,value" lines with a header; failed cells print "nan".
std::string cells_to_csv(const std::vector<TableCell>& cells);

// ------------------------------------------------------------ experiments

/// The ladder used for the BL table and the regenerated suite.
const std::array<std::pair<std::string, RelaxationLevel>, 4>& ladder();

struct GapSearchResult {
  double gap = 0.0;
  Objective9 objective{};  // unit norm over the nine coordinates
  int evaluations = 0;
};

/// Best (exact min - relaxation min) over unit objectives. Half of the
/// budget goes to fresh draws, alternating uniform directions and noisy
/// normalized catalog rows; the other half perturbs the incumbent with a
/// shrinking step. Throws std::invalid_argument for budget < 1.
GapSearchResult search_max_gap(const RelaxationLevel& level, int budget, std::uint64_t seed,
                               const ConicBackend& backend);

/// Unit objectives with known worst gaps: X12 + X13 (PSD+DIAG), the
/// smallest-norm TRI row (PSD+RLT), the smallest-norm ETRI1 row (PSD+RLT+TRI).
struct DeterministicGap {
  std::string level;
  std::string remark;
  Objective9 objective{};
  RelaxationLevel relaxation;
};
std::vector<DeterministicGap> deterministic_gap_objectives();

struct SuiteOptions {
  int instances = 50;
  int min_n = 5;
  int max_n = 10;
  std::vector<int> densities{25, 50, 75, 100};
  std::uint64_t seed = 2024;
  DiagRule diag = DiagRule::kSame;
  DriverConfig driver;
  int extraction_seeds = 5;
};

struct SuiteRow {
  std::string label;
  int n = 0;
  double optimum = 0.0;
  std::array<double, 4> value{};     // bound per ladder level
  std::array<double, 4> feasible{};  // x'Qx + q'x at the level's x
  std::array<bool, 4> solved{};
  int etri_cuts = 0;                 // in the last level's model
  int soc_blocks = 0;
  bool closed = false;               // last level within 1e-4 of the optimum
  bool extracted = false;            // rank-one x within 1e-4 of the bound
  double extracted_value = 0.0;
};

std::vector<GenSpec> suite_specs(const SuiteOptions& options);
SuiteRow run_suite_instance(const BoxQpInstance& inst, const SuiteOptions& options,
                            const ConicBackend& backend);
/// Instances run concurrently; rows come back in spec order.
std::vector<SuiteRow> run_suite(const SuiteOptions& options, const ConicBackend& backend);

enum class TableKind : std::uint8_t { kT1, kT2, kT3, kT4, kT5 };
TableKind parse_table_kind(std::string_view name);

struct TableOptions {
  DriverConfig driver;
  int search_budget = 0;  // T4 search rows; 0 skips them
  std::uint64_t seed = 1;
  SuiteOptions suite;
};

struct TableArtifact {
  std::string text;  // aligned plain text
  std::vector<TableCell> cells;
};

/// T1/T2 violation grids, T3 BL ladder, T4 deterministic gaps (plus search
/// rows when budgeted), T5 regenerated suite values and gaps. A failed cell
/// is marked and the run continues.
TableArtifact run_tables(TableKind which, const ConicBackend& backend, const TableOptions& options = {});

}  // namespace boxqp
