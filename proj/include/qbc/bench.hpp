#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qbc/bounds.hpp"
#include "qbc/exact.hpp"
#include "qbc/io.hpp"
#include "qbc/rational.hpp"

namespace qbc {

enum class BenchMethod { BranchAndBound, Oracle, Greedy, ExternalMip };

// A method column: solver plus objective. Names are "bb", "oracle",
// "greedy", "external-mip", with a "-quality" suffix for the quality
// objective (not for greedy).
struct MethodSpec {
  BenchMethod method = BenchMethod::BranchAndBound;
  Objective objective = Objective::Size;

  static MethodSpec parse(const std::string& name);
  std::string name() const;
  friend bool operator==(const MethodSpec&, const MethodSpec&) = default;
};

struct DatasetSpec {
  std::string name;
  std::filesystem::path path;
  GraphFormat format = GraphFormat::Auto;
  std::optional<SizeBounds> bounds;
  // Replaces the suite-wide method list for this dataset when nonempty.
  std::vector<MethodSpec> methods;
  // Key into the stored reference values; empty means none.
  std::string reference;
};

struct BenchConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<Rational> gammas;
  std::vector<MethodSpec> methods;
  std::size_t pool_limit = 100;
  std::optional<double> time_limit_seconds;
  std::size_t workers = 1;
  std::size_t threads = 1;
  std::optional<Rational> theta;
  // Greedy runs at delta = 1 - gamma; tau sweeps 1..|U| unless fixed here.
  std::optional<std::size_t> greedy_tau;
  std::optional<std::string> solver_cmd;

  // Relative dataset paths resolve against base_dir. Throws ParseError on
  // malformed TOML and ArgumentError on invalid values.
  static BenchConfig parse(const std::string& toml_text, const std::filesystem::path& base_dir = ".");
  static BenchConfig load(const std::filesystem::path& path);
  void validate() const;
};

struct BenchRow {
  std::string dataset;
  std::string method;
  Rational gamma{1};
  double time_ms = 0.0;
  std::int64_t count = 0;
  std::int64_t size_u = 0;
  std::int64_t size_v = 0;
  std::int64_t total = 0;
  std::string objective;  // value, "infeasible" or "error"
  bool certified = false;
  // Report-only fields (not in the CSV).
  std::string bounds_used;
  std::string note;
};

struct GraphStats {
  std::int64_t u = 0, v = 0, edges = 0;
  friend bool operator==(const GraphStats&, const GraphStats&) = default;
};

struct SuiteResult {
  std::vector<BenchRow> rows;
  std::map<std::string, GraphStats> graphs;  // datasets that loaded
};

// Runs every (dataset, gamma, method) cell; rows come out in that order no
// matter how many workers ran them. Load failures become error rows.
SuiteResult run_suite(const BenchConfig& config);

inline constexpr const char* kCsvHeader = "dataset,method,gamma,time_ms,count,size_u,size_v,total,objective,certified";

std::string write_csv(const std::vector<BenchRow>& rows);
// Inverse of write_csv on its columns. Throws ParseError.
std::vector<BenchRow> read_csv(const std::string& text);

// A reported size from the reference tables.
struct ReferenceEntry {
  std::string dataset;
  std::string model;  // "model1", "model2" or "greedy"
  Rational gamma{1};
  std::optional<std::int64_t> size_u, size_v;  // unset when only the total is reported
  std::int64_t total = 0;
  std::int64_t count = 0;
};

struct ReferenceDataset {
  std::string key;
  std::string title;
  GraphStats stats;
};

const std::vector<ReferenceEntry>& reference_entries();
const std::vector<ReferenceDataset>& reference_datasets();

enum class ComparisonStatus { Matches, ArtifactBetter, ArtifactWorse, NotComparable };
std::string to_string(ComparisonStatus s);

struct Annotation {
  std::optional<ReferenceEntry> reference;
  ComparisonStatus status = ComparisonStatus::NotComparable;
  std::string note;
};

// One annotation per row. Reference sizes are feasibility witnesses: an
// artifact result larger than the reference is "artifact-better", never an
// error. Quality-objective rows match only on identical shapes.
std::vector<Annotation> reference_comparison(const BenchConfig& config, const SuiteResult& result);

std::string render_markdown(const BenchConfig& config, const SuiteResult& result,
                            const std::vector<Annotation>& annotations);

}  // namespace qbc
