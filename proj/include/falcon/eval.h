#ifndef FALCON_EVAL_H_
#define FALCON_EVAL_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "falcon/linker.h"
#include "falcon/wikidata_id.h"

namespace falcon {
namespace eval {

struct GoldRecord {
  std::string text;
  std::set<WikidataId> gold_entities;
  std::set<WikidataId> gold_relations;

  friend bool operator==(const GoldRecord &, const GoldRecord &) = default;
};

// JSON lines: {"text": ..., "gold_entities": [...], "gold_relations": [...]}.
// Both gold arrays are optional. Blank lines are ignored.
std::vector<GoldRecord> ParseGold(std::string_view jsonl);
std::vector<GoldRecord> LoadGold(const std::filesystem::path &path);

enum class Task { kEntity, kRelation };

std::string_view TaskName(Task task);
std::optional<Task> ParseTask(std::string_view name);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;

  friend bool operator==(const PrecisionRecall &, const PrecisionRecall &) = default;
};

// Empty prediction: precision 0 against non-empty gold, 1 against empty
// gold. Empty gold: recall 1.
PrecisionRecall ScoreQuestion(const std::set<WikidataId> &predicted,
                              const std::set<WikidataId> &gold);

struct EvalReport {
  std::vector<PrecisionRecall> per_question;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double f_measure = 0.0;
  std::int64_t question_count = 0;
  std::int64_t empty_prediction_count = 0;
};

// Harmonic mean, 0 when both are 0.
double FMeasure(double precision, double recall);

// Builds a report from per-question scores (macro averages).
EvalReport Summarize(std::vector<PrecisionRecall> per_question,
                     std::int64_t empty_prediction_count);

// Text -> link result. May throw; a throw counts as an empty prediction.
using LinkFn = std::function<linker::LinkResult(const std::string &)>;

// Top-1 IRI per surface form for the task.
std::set<WikidataId> PredictedSet(const linker::LinkResult &result, Task task);

// Links every record (OpenMP over records) and macro-averages P and R.
EvalReport Evaluate(const LinkFn &link, std::span<const GoldRecord> records, Task task);
// Single-threaded reference for Evaluate.
EvalReport EvaluateSerial(const LinkFn &link, std::span<const GoldRecord> records,
                          Task task);

struct NamedReport {
  std::string approach;
  std::string dataset;
  EvalReport report;
};

// "Approach  Dataset  P      R      F" with three decimals.
std::string FormatTable(std::span<const NamedReport> reports);
std::string FormatCsv(std::span<const NamedReport> reports);

}  // namespace eval
}  // namespace falcon

#endif  // FALCON_EVAL_H_
