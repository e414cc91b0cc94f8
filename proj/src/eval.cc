#include "falcon/eval.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "falcon/error.h"
#include "falcon/text.h"

namespace falcon {
namespace eval {

namespace {

using json = nlohmann::json;

std::set<WikidataId> ReadIds(const json &obj, const char *key, bool want_item,
                             long line_no) {
  std::set<WikidataId> ids;
  if (!obj.contains(key) || obj[key].is_null()) return ids;
  const json &arr = obj[key];
  if (!arr.is_array()) throw FormatError(std::string(key) + " must be an array", line_no);
  for (const json &v : arr) {
    if (!v.is_string()) throw FormatError(std::string(key) + " holds a non-string", line_no);
    std::string s = v.get<std::string>();
    // Full IRIs are accepted and reduced to their id.
    if (auto slash = s.rfind('/'); slash != std::string::npos) s = s.substr(slash + 1);
    auto id = WikidataId::Parse(s);
    if (!id || id->is_item() != want_item) {
      throw FormatError(std::string(key) + ": bad id '" + v.get<std::string>() + "'",
                        line_no);
    }
    ids.insert(*id);
  }
  return ids;
}

std::string Fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string CsvField(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<GoldRecord> ParseGold(std::string_view jsonl) {
  std::vector<GoldRecord> records;
  long line_no = 0;
  for (std::string_view line : text::Split(jsonl, '\n')) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error &e) {
      throw FormatError(std::string("gold: invalid JSON: ") + e.what(), line_no);
    }
    if (!obj.is_object()) throw FormatError("gold: record is not an object", line_no);
    if (!obj.contains("text") || !obj["text"].is_string()) {
      throw FormatError("gold: missing string field 'text'", line_no);
    }
    GoldRecord rec;
    rec.text = obj["text"].get<std::string>();
    rec.gold_entities = ReadIds(obj, "gold_entities", true, line_no);
    rec.gold_relations = ReadIds(obj, "gold_relations", false, line_no);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<GoldRecord> LoadGold(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseGold(ss.str());
}

std::string_view TaskName(Task task) {
  return task == Task::kEntity ? "entity" : "relation";
}

std::optional<Task> ParseTask(std::string_view name) {
  if (name == "entity") return Task::kEntity;
  if (name == "relation") return Task::kRelation;
  return std::nullopt;
}

PrecisionRecall ScoreQuestion(const std::set<WikidataId> &predicted,
                              const std::set<WikidataId> &gold) {
  std::size_t overlap = 0;
  for (const WikidataId &id : predicted) overlap += gold.count(id);
  PrecisionRecall pr;
  if (predicted.empty()) {
    pr.precision = gold.empty() ? 1.0 : 0.0;
  } else {
    pr.precision = static_cast<double>(overlap) / static_cast<double>(predicted.size());
  }
  pr.recall = gold.empty() ? 1.0
                           : static_cast<double>(overlap) / static_cast<double>(gold.size());
  return pr;
}

double FMeasure(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

EvalReport Summarize(std::vector<PrecisionRecall> per_question,
                     std::int64_t empty_prediction_count) {
  EvalReport report;
  report.question_count = static_cast<std::int64_t>(per_question.size());
  report.empty_prediction_count = empty_prediction_count;
  if (!per_question.empty()) {
    double p = 0.0, r = 0.0;
    for (const PrecisionRecall &pr : per_question) {
      p += pr.precision;
      r += pr.recall;
    }
    report.macro_precision = p / static_cast<double>(per_question.size());
    report.macro_recall = r / static_cast<double>(per_question.size());
  }
  report.f_measure = FMeasure(report.macro_precision, report.macro_recall);
  report.per_question = std::move(per_question);
  return report;
}

std::set<WikidataId> PredictedSet(const linker::LinkResult &result, Task task) {
  std::set<WikidataId> ids;
  const auto &items = task == Task::kEntity ? result.entities : result.relations;
  for (const linker::LinkedItem &item : items) ids.insert(item.candidate.iri);
  return ids;
}

namespace {

// Scores one record; returns true when the predicted set was empty.
bool ScoreOne(const LinkFn &link, const GoldRecord &rec, Task task, PrecisionRecall &out) {
  std::set<WikidataId> predicted;
  try {
    predicted = PredictedSet(link(rec.text), task);
  } catch (const std::exception &) {
    predicted.clear();
  }
  out = ScoreQuestion(predicted,
                      task == Task::kEntity ? rec.gold_entities : rec.gold_relations);
  return predicted.empty();
}

}  // namespace

EvalReport EvaluateSerial(const LinkFn &link, std::span<const GoldRecord> records,
                          Task task) {
  std::vector<PrecisionRecall> per_question(records.size());
  std::int64_t empty = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    empty += ScoreOne(link, records[i], task, per_question[i]);
  }
  return Summarize(std::move(per_question), empty);
}

EvalReport Evaluate(const LinkFn &link, std::span<const GoldRecord> records, Task task) {
  std::vector<PrecisionRecall> per_question(records.size());
  std::vector<std::uint8_t> empty(records.size());
  const auto n = static_cast<std::int64_t>(records.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) {
    empty[i] = ScoreOne(link, records[i], task, per_question[i]);
  }
  std::int64_t empty_count = std::count(empty.begin(), empty.end(), std::uint8_t{1});
  return Summarize(std::move(per_question), empty_count);
}

std::string FormatTable(std::span<const NamedReport> reports) {
  std::size_t w_approach = std::string_view("Approach").size();
  std::size_t w_dataset = std::string_view("Dataset").size();
  for (const NamedReport &r : reports) {
    w_approach = std::max(w_approach, r.approach.size());
    w_dataset = std::max(w_dataset, r.dataset.size());
  }
  auto pad = [](const std::string &s, std::size_t w) {
    return s + std::string(w - s.size(), ' ');
  };
  std::string out = pad("Approach", w_approach) + "  " + pad("Dataset", w_dataset) +
                    "  " + "P     R     F\n";
  for (const NamedReport &r : reports) {
    out += pad(r.approach, w_approach) + "  " + pad(r.dataset, w_dataset) + "  " +
           Fixed3(r.report.macro_precision) + " " + Fixed3(r.report.macro_recall) + " " +
           Fixed3(r.report.f_measure) + "\n";
  }
  return out;
}

std::string FormatCsv(std::span<const NamedReport> reports) {
  std::string out = "approach,dataset,precision,recall,f_measure,questions,empty_predictions\n";
  for (const NamedReport &r : reports) {
    out += CsvField(r.approach) + "," + CsvField(r.dataset) + "," +
           Fixed3(r.report.macro_precision) + "," + Fixed3(r.report.macro_recall) + "," +
           Fixed3(r.report.f_measure) + "," + std::to_string(r.report.question_count) +
           "," + std::to_string(r.report.empty_prediction_count) + "\n";
  }
  return out;
}

}  // namespace eval
}  // namespace falcon
