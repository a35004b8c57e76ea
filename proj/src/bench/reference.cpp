#include "qbc/bench.hpp"

namespace qbc {
namespace {

ReferenceEntry shape(const char* ds, const char* model, Rational gamma, std::int64_t u, std::int64_t v,
                     std::int64_t count) {
  return {ds, model, gamma, u, v, u + v, count};
}

ReferenceEntry total(const char* ds, const char* model, Rational gamma, std::int64_t t, std::int64_t count) {
  return {ds, model, gamma, std::nullopt, std::nullopt, t, count};
}

// Which reference column a bench method corresponds to.
std::string model_of(const MethodSpec& m) {
  if (m.method == BenchMethod::Greedy) return "greedy";
  return m.objective == Objective::Size ? "model1" : "model2";
}

}  // namespace

const std::vector<ReferenceDataset>& reference_datasets() {
  static const std::vector<ReferenceDataset> sets{
      {"southern-women", "Southern Women", {18, 14, 89}},
      {"divorce-us", "Divorce in US", {9, 50, 225}},
      {"dutch-elite-top200", "DutchElite (top 200)", {200, 395, 877}},
      {"dutch-elite", "DutchElite", {3810, 937, 5221}},
      {"movielens-small", "Movie-Lens (small)", {99125, 50, 20340}},
  };
  return sets;
}

const std::vector<ReferenceEntry>& reference_entries() {
  const Rational g6(3, 5), g7(7, 10), g8(4, 5);
  static const std::vector<ReferenceEntry> entries{
      shape("southern-women", "model1", g6, 18, 4, 4),
      shape("southern-women", "model2", g6, 18, 4, 2),
      shape("southern-women", "greedy", g6, 17, 5, 4),
      shape("divorce-us", "model1", g6, 4, 50, 1),
      shape("divorce-us", "model2", g6, 4, 50, 1),
      shape("divorce-us", "greedy", g6, 2, 46, 1),
      shape("dutch-elite-top200", "model1", g6, 26, 1, 2),
      shape("dutch-elite-top200", "model2", g6, 11, 3, 1),
      shape("dutch-elite-top200", "greedy", g6, 10, 3, 1),
      shape("dutch-elite", "model2", g6, 45, 2, 1),
      shape("dutch-elite", "greedy", g6, 40, 2, 1),
      shape("movielens-small", "model1", g6, 692, 2, 2),
      shape("movielens-small", "model2", g6, 900, 3, 5),
      shape("movielens-small", "greedy", g6, 754, 2, 2),

      shape("southern-women", "model1", g7, 16, 3, 1),
      shape("southern-women", "model2", g7, 10, 6, 1),
      shape("southern-women", "greedy", g7, 16, 2, 1),
      shape("divorce-us", "model1", g7, 2, 45, 1),
      shape("divorce-us", "model2", g7, 5, 36, 3),
      shape("divorce-us", "greedy", g7, 2, 28, 1),
      shape("dutch-elite-top200", "model1", g7, 23, 1, 1),
      shape("dutch-elite-top200", "model2", g7, 10, 3, 3),
      shape("dutch-elite-top200", "greedy", g7, 10, 3, 1),
      shape("dutch-elite", "model2", g7, 20, 2, 1),
      shape("dutch-elite", "greedy", g7, 20, 1, 1),
      shape("movielens-small", "model2", g7, 800, 3, 6),

      total("divorce-us", "model1", g8, 38, 1),
      total("divorce-us", "model2", g8, 33, 2),
      total("divorce-us", "greedy", g8, 25, 1),
      total("dutch-elite-top200", "model2", g8, 13, 2),
      total("dutch-elite-top200", "greedy", g8, 13, 1),
      total("dutch-elite", "model2", g8, 47, 1),
      total("dutch-elite", "greedy", g8, 21, 1),
      total("movielens-small", "model2", g8, 445, 2),
  };
  return entries;
}

std::string to_string(ComparisonStatus s) {
  switch (s) {
    case ComparisonStatus::Matches: return "matches";
    case ComparisonStatus::ArtifactBetter: return "artifact-better";
    case ComparisonStatus::ArtifactWorse: return "artifact-worse";
    case ComparisonStatus::NotComparable: return "not-comparable";
  }
  return "not-comparable";
}

std::vector<Annotation> reference_comparison(const BenchConfig& config, const SuiteResult& result) {
  std::vector<Annotation> out;
  for (const auto& row : result.rows) {
    Annotation a;
    const DatasetSpec* ds = nullptr;
    for (const auto& d : config.datasets) {
      if (d.name == row.dataset) ds = &d;
    }
    if (!ds || ds->reference.empty()) {
      a.note = "no reference values";
      out.push_back(a);
      continue;
    }
    const MethodSpec method = MethodSpec::parse(row.method);
    for (const auto& e : reference_entries()) {
      if (e.dataset == ds->reference && e.model == model_of(method) && e.gamma == row.gamma) a.reference = e;
    }
    if (!a.reference) {
      out.push_back(a);
      continue;
    }
    const ReferenceEntry& ref = *a.reference;
    for (const auto& rd : reference_datasets()) {
      auto it = result.graphs.find(row.dataset);
      if (rd.key == ds->reference && it != result.graphs.end() && !(rd.stats == it->second)) {
        a.note = "best effort: graph is " + std::to_string(it->second.u) + "x" + std::to_string(it->second.v) + "/" +
                 std::to_string(it->second.edges) + ", reference " + std::to_string(rd.stats.u) + "x" +
                 std::to_string(rd.stats.v) + "/" + std::to_string(rd.stats.edges);
      }
    }
    if (row.objective == "error" || row.objective == "infeasible" || row.objective == "none") {
      out.push_back(a);
      continue;
    }
    if (ds->bounds) {
      a.note += std::string(a.note.empty() ? "" : "; ") + "custom size bounds";
    }
    if (method.objective == Objective::Quality) {
      // Only the shape is published for the quality objective.
      if (ref.size_u && *ref.size_u == row.size_u && *ref.size_v == row.size_v) {
        a.status = ComparisonStatus::Matches;
      } else if (!ref.size_u && ref.total == row.total) {
        a.status = ComparisonStatus::Matches;
      }
    } else if (row.total > ref.total) {
      a.status = ComparisonStatus::ArtifactBetter;
    } else if (row.total < ref.total) {
      a.status = ComparisonStatus::ArtifactWorse;
    } else {
      a.status = ComparisonStatus::Matches;
    }
    out.push_back(a);
  }
  return out;
}

}  // namespace qbc
