#include "falcon/kb_ingest.h"

#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "falcon/error.h"
#include "falcon/resources.h"
#include "falcon/text.h"
#include "json.hpp"

namespace falcon {

std::string_view RangeClassName(RangeClass range) {
  switch (range) {
    case RangeClass::kDate: return "DATE";
    case RangeClass::kPlace: return "PLACE";
    case RangeClass::kOther: return "OTHER";
  }
  return "OTHER";
}

std::optional<RangeClass> ParseRangeClass(std::string_view name) {
  if (name == "DATE") return RangeClass::kDate;
  if (name == "PLACE") return RangeClass::kPlace;
  if (name == "OTHER") return RangeClass::kOther;
  return std::nullopt;
}

namespace kb {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr std::string_view kTimeDatatype = "time";
constexpr WikidataId kPropertyConstraint = WikidataId::Property(2302);
constexpr WikidataId kValueTypeConstraint = WikidataId::Item(21510865);
constexpr WikidataId kConstraintClass = WikidataId::Property(2308);

const Json *Find(const Json &obj, const char *key) {
  if (!obj.is_object()) return nullptr;
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

// Item id carried by a wikibase-entityid datavalue, if the value is an item.
std::optional<WikidataId> ItemValue(const Json &snak) {
  const Json *dv = Find(snak, "datavalue");
  if (dv == nullptr) return std::nullopt;
  const Json *type = Find(*dv, "type");
  if (type == nullptr || !type->is_string() ||
      type->get_ref<const std::string &>() != "wikibase-entityid") {
    return std::nullopt;
  }
  const Json *value = Find(*dv, "value");
  if (value == nullptr) return std::nullopt;
  if (const Json *id = Find(*value, "id"); id != nullptr && id->is_string()) {
    auto parsed = WikidataId::Parse(id->get_ref<const std::string &>());
    if (parsed && parsed->is_item()) return parsed;
    return std::nullopt;
  }
  const Json *etype = Find(*value, "entity-type");
  const Json *num = Find(*value, "numeric-id");
  if (etype != nullptr && num != nullptr && etype->is_string() &&
      etype->get_ref<const std::string &>() == "item" &&
      num->is_number_unsigned()) {
    return WikidataId::Item(num->get<std::uint64_t>());
  }
  return std::nullopt;
}

StatementRank ParseRank(const Json &stmt) {
  const Json *rank = Find(stmt, "rank");
  if (rank == nullptr || !rank->is_string()) return StatementRank::kNormal;
  const auto &r = rank->get_ref<const std::string &>();
  if (r == "preferred") return StatementRank::kPreferred;
  if (r == "deprecated") return StatementRank::kDeprecated;
  return StatementRank::kNormal;
}

SnakType ParseSnakType(const Json &snak) {
  const Json *t = Find(snak, "snaktype");
  if (t == nullptr || !t->is_string()) return SnakType::kValue;
  const auto &s = t->get_ref<const std::string &>();
  if (s == "novalue") return SnakType::kNoValue;
  if (s == "somevalue") return SnakType::kSomeValue;
  return SnakType::kValue;
}

std::optional<std::string> EnglishValue(const Json &obj, const char *field) {
  const Json *m = Find(obj, field);
  if (m == nullptr) return std::nullopt;
  const Json *en = Find(*m, "en");
  if (en == nullptr) return std::nullopt;
  const Json *v = Find(*en, "value");
  if (v == nullptr || !v->is_string()) return std::nullopt;
  std::string s = text::Trim(v->get_ref<const std::string &>());
  if (s.empty()) return std::nullopt;
  return s;
}

void ParseClaims(const Json &claims, DumpRecord &rec) {
  if (!claims.is_object()) return;
  for (const auto &[key, statements] : claims.items()) {
    auto pid = WikidataId::Parse(key);
    if (!pid || !pid->is_property() || !statements.is_array()) continue;
    for (const Json &stmt : statements) {
      const Json *snak = Find(stmt, "mainsnak");
      if (snak == nullptr) continue;
      Statement s;
      s.property = *pid;
      s.rank = ParseRank(stmt);
      s.snak = ParseSnakType(*snak);
      if (s.snak == SnakType::kValue) s.item = ItemValue(*snak);
      rec.claims.push_back(s);

      if (rec.kind == RecordKind::kProperty && *pid == kPropertyConstraint &&
          s.item == kValueTypeConstraint) {
        const Json *quals = Find(stmt, "qualifiers");
        const Json *classes =
            quals ? Find(*quals, "P2308") : nullptr;
        if (classes == nullptr || !classes->is_array()) continue;
        for (const Json &q : *classes) {
          if (auto c = ItemValue(q)) rec.value_type_classes.push_back(*c);
        }
      }
    }
  }
}

}  // namespace

ParsedLine ParseDumpRecord(std::string_view line) {
  std::string trimmed = text::Trim(line);
  if (!trimmed.empty() && trimmed.back() == ',') trimmed.pop_back();
  if (trimmed.empty() || trimmed == "[" || trimmed == "]" || trimmed == "[]") {
    return SkipMarker{SkipReason::kStructural};
  }

  Json obj = Json::parse(trimmed, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw FormatError("dump record is not a JSON object");
  }
  const Json *id_field = Find(obj, "id");
  if (id_field == nullptr || !id_field->is_string()) {
    throw FormatError("dump record has no id");
  }
  const std::string &id_text = id_field->get_ref<const std::string &>();
  const Json *type = Find(obj, "type");
  bool lexeme = (!id_text.empty() && id_text[0] == 'L') ||
                (type != nullptr && type->is_string() &&
                 type->get_ref<const std::string &>() == "lexeme");
  if (lexeme) return SkipMarker{SkipReason::kLexeme};

  auto id = WikidataId::Parse(id_text);
  if (!id) {
    bool other_entity = !id_text.empty() && id_text[0] != 'Q' &&
                        id_text[0] != 'P' && WikidataId::Parse(
                            "Q" + id_text.substr(1)).has_value();
    if (other_entity) return SkipMarker{SkipReason::kOtherEntityType};
    throw FormatError("malformed record id '" + id_text + "'");
  }

  DumpRecord rec;
  rec.id = *id;
  rec.kind = id->is_property() ? RecordKind::kProperty : RecordKind::kEntity;
  rec.label_en = EnglishValue(obj, "labels");

  if (const Json *aliases = Find(obj, "aliases")) {
    const Json *en = Find(*aliases, "en");
    if (en != nullptr && en->is_array()) {
      std::unordered_set<std::string> seen;
      for (const Json &a : *en) {
        const Json *v = Find(a, "value");
        if (v == nullptr || !v->is_string()) continue;
        std::string alias = text::Trim(v->get_ref<const std::string &>());
        if (alias.empty()) continue;
        if (seen.insert(text::ToLower(alias)).second) {
          rec.aliases_en.push_back(std::move(alias));
        }
      }
    }
  }
  if (!rec.label_en && rec.aliases_en.empty()) {
    return SkipMarker{SkipReason::kNoEnglish};
  }

  if (const Json *dt = Find(obj, "datatype"); dt != nullptr && dt->is_string()) {
    rec.datatype = dt->get<std::string>();
  }
  if (const Json *claims = Find(obj, "claims")) ParseClaims(*claims, rec);
  return rec;
}

std::vector<Alignment> ExtractAlignments(const DumpRecord &rec) {
  std::vector<Alignment> out;
  std::string canonical =
      text::SanitizeField(rec.label_en ? *rec.label_en : rec.aliases_en.front());
  out.push_back({rec.id, canonical, canonical});
  for (const std::string &alias : rec.aliases_en) {
    std::string a = text::SanitizeField(alias);
    if (text::Trim(a).empty() || a == canonical) continue;
    out.push_back({rec.id, canonical, std::move(a)});
  }
  return out;
}

std::vector<Triple> ExtractTriples(const DumpRecord &rec) {
  std::vector<Triple> out;
  if (rec.kind != RecordKind::kEntity) return out;

  // Best rank per property, over non-deprecated statements.
  std::vector<std::pair<WikidataId, StatementRank>> best;
  for (const Statement &s : rec.claims) {
    if (s.rank == StatementRank::kDeprecated) continue;
    auto it = std::find_if(best.begin(), best.end(),
                           [&](const auto &b) { return b.first == s.property; });
    if (it == best.end()) {
      best.emplace_back(s.property, s.rank);
    } else if (s.rank == StatementRank::kPreferred) {
      it->second = StatementRank::kPreferred;
    }
  }

  for (const Statement &s : rec.claims) {
    if (s.snak != SnakType::kValue || s.rank == StatementRank::kDeprecated) {
      continue;
    }
    auto it = std::find_if(best.begin(), best.end(),
                           [&](const auto &b) { return b.first == s.property; });
    if (it->second != s.rank) continue;
    Triple t{rec.id, s.property, s.item};
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  }
  return out;
}

PropertyMeta ClassifyPropertyRange(const DumpRecord &rec,
                                   const PlaceAllowlist &allowlist) {
  PropertyMeta meta{rec.id, RangeClass::kOther};
  if (rec.datatype == kTimeDatatype) {
    meta.range_class = RangeClass::kDate;
  } else if (allowlist.properties.count(rec.id) > 0) {
    meta.range_class = RangeClass::kPlace;
  } else {
    for (const WikidataId &c : rec.value_type_classes) {
      if (allowlist.place_classes.count(c) > 0) {
        meta.range_class = RangeClass::kPlace;
        break;
      }
    }
  }
  return meta;
}

PlaceAllowlist PlaceAllowlist::Parse(std::string_view content) {
  PlaceAllowlist list;
  long line_no = 0;
  for (std::string_view raw : text::Split(content, '\n')) {
    ++line_no;
    std::string line = text::Trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    auto id = WikidataId::Parse(line);
    if (!id) throw FormatError("bad id in place allowlist: " + line, line_no);
    (id->is_property() ? list.properties : list.place_classes).insert(*id);
  }
  return list;
}

PlaceAllowlist PlaceAllowlist::Load(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open place allowlist " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str());
}

PlaceAllowlist PlaceAllowlist::Default() {
  return Parse(resources::PlaceAllowlist());
}

std::string FormatAlignment(const Alignment &a) {
  return a.iri.ToString() + '\t' + text::SanitizeField(a.canonical_label) + '\t' +
         text::SanitizeField(a.alias);
}

std::string FormatTriple(const Triple &t) {
  return t.s.ToString() + '\t' + t.p.ToString() + '\t' + t.ObjectString();
}

std::string FormatPropertyMeta(const PropertyMeta &m) {
  return m.pid.ToString() + '\t' + std::string(RangeClassName(m.range_class));
}

namespace {

// Line reader over plain or gzip-compressed files.
class DumpReader {
 public:
  explicit DumpReader(const fs::path &path)
      : file_(gzopen(path.c_str(), "rb")) {
    if (file_ == nullptr) throw IoError("cannot open dump " + path.string());
    gzbuffer(file_, 1 << 20);
  }
  ~DumpReader() { gzclose(file_); }
  DumpReader(const DumpReader &) = delete;
  DumpReader &operator=(const DumpReader &) = delete;

  bool Next(std::string &line) {
    while (true) {
      std::size_t nl = buffer_.find('\n', pos_);
      if (nl != std::string::npos) {
        line.assign(buffer_, pos_, nl - pos_);
        pos_ = nl + 1;
        return true;
      }
      if (eof_) {
        if (pos_ >= buffer_.size()) return false;
        line.assign(buffer_, pos_, std::string::npos);
        pos_ = buffer_.size();
        return true;
      }
      buffer_.erase(0, pos_);
      pos_ = 0;
      std::size_t old = buffer_.size();
      buffer_.resize(old + kChunk);
      int n = gzread(file_, buffer_.data() + old, kChunk);
      if (n < 0) {
        int err = 0;
        throw IoError(std::string("dump read failed: ") + gzerror(file_, &err));
      }
      buffer_.resize(old + n);
      if (n == 0) eof_ = true;
    }
  }

 private:
  static constexpr unsigned kChunk = 1 << 20;
  gzFile file_;
  std::string buffer_;
  std::size_t pos_ = 0;
  bool eof_ = false;
};

// Everything one dump line contributes to the outputs, pre-formatted.
struct LineOutput {
  enum class Status { kStructural, kRecord, kSkipped } status;
  WikidataId id;
  bool property = false;
  std::string alignments;
  std::string triples;
  std::string meta;
  std::int64_t alignment_count = 0;
  std::int64_t triple_count = 0;
};

LineOutput ProcessLine(std::string_view line, const PlaceAllowlist &allowlist) {
  LineOutput out{LineOutput::Status::kSkipped, {}, false, {}, {}, {}, 0, 0};
  ParsedLine parsed;
  try {
    parsed = ParseDumpRecord(line);
  } catch (const FormatError &) {
    return out;
  }
  if (auto *skip = std::get_if<SkipMarker>(&parsed)) {
    if (skip->reason == SkipReason::kStructural) {
      out.status = LineOutput::Status::kStructural;
    }
    return out;
  }
  const DumpRecord &rec = std::get<DumpRecord>(parsed);
  out.status = LineOutput::Status::kRecord;
  out.id = rec.id;
  out.property = rec.kind == RecordKind::kProperty;
  for (const Alignment &a : ExtractAlignments(rec)) {
    out.alignments += FormatAlignment(a);
    out.alignments += '\n';
    ++out.alignment_count;
  }
  if (out.property) {
    out.meta = FormatPropertyMeta(ClassifyPropertyRange(rec, allowlist)) + '\n';
  } else {
    for (const Triple &t : ExtractTriples(rec)) {
      out.triples += FormatTriple(t);
      out.triples += '\n';
      ++out.triple_count;
    }
  }
  return out;
}

void ProcessBatch(const std::vector<std::string> &lines,
                  const PlaceAllowlist &allowlist, bool parallel,
                  std::vector<LineOutput> &outputs) {
  outputs.resize(lines.size());
  const long n = static_cast<long>(lines.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) {
      outputs[i] = ProcessLine(lines[i], allowlist);
    }
  } else {
    for (long i = 0; i < n; ++i) {
      outputs[i] = ProcessLine(lines[i], allowlist);
    }
  }
}

// Tracks record ids already written so that a repeated record cannot emit
// duplicate (iri, alias) pairs.
class SeenIds {
 public:
  bool Insert(const WikidataId &id) {
    auto &bits = id.is_item() ? items_ : properties_;
    if (id.number() >= bits.size()) bits.resize(id.number() + 1 + bits.size() / 2);
    if (bits[id.number()]) return false;
    bits[id.number()] = true;
    return true;
  }

 private:
  std::vector<bool> items_;
  std::vector<bool> properties_;
};

class OutputFile {
 public:
  OutputFile(const fs::path &final_path)
      : final_(final_path), temp_(final_path.string() + ".partial") {
    out_.open(temp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot create " + temp_.string());
  }
  ~OutputFile() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      fs::remove(temp_, ec);
    }
  }

  void Write(const std::string &s) {
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    if (!out_) throw IoError("write failed for " + temp_.string());
  }
  void Close() {
    out_.close();
    if (!out_) throw IoError("close failed for " + temp_.string());
  }
  void Commit() {
    fs::rename(temp_, final_);
    committed_ = true;
  }

 private:
  fs::path final_;
  fs::path temp_;
  std::ofstream out_;
  bool committed_ = false;
};

}  // namespace

KbStats BuildKb(const fs::path &dump_path, const fs::path &out_dir,
                const BuildOptions &options) {
  PlaceAllowlist allowlist = options.place_allowlist
                                 ? PlaceAllowlist::Load(*options.place_allowlist)
                                 : PlaceAllowlist::Default();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  DumpReader reader(dump_path);
  OutputFile entities(out_dir / kEntityAlignmentsFile);
  OutputFile properties(out_dir / kPropertyAlignmentsFile);
  OutputFile triples(out_dir / kTriplesFile);
  OutputFile meta(out_dir / kPropertyMetaFile);

  KbStats stats;
  SeenIds seen;
  std::vector<std::string> batch;
  std::vector<LineOutput> outputs;
  const std::size_t batch_size = std::max<std::size_t>(1, options.batch_lines);
  bool more = true;
  while (more) {
    batch.clear();
    std::string line;
    while (batch.size() < batch_size && (more = reader.Next(line))) {
      batch.push_back(std::move(line));
    }
    ProcessBatch(batch, allowlist, options.parallel, outputs);
    for (const LineOutput &o : outputs) {
      if (o.status == LineOutput::Status::kStructural) continue;
      if (o.status == LineOutput::Status::kSkipped || !seen.Insert(o.id)) {
        ++stats.records_skipped;
        continue;
      }
      if (o.property) {
        properties.Write(o.alignments);
        meta.Write(o.meta);
        stats.property_alignment_count += o.alignment_count;
      } else {
        entities.Write(o.alignments);
        triples.Write(o.triples);
        stats.entity_alignment_count += o.alignment_count;
        stats.triple_count += o.triple_count;
      }
    }
  }

  OutputFile stats_file(out_dir / kStatsFile);
  stats_file.Write(FormatStats(stats));
  for (OutputFile *f : {&entities, &properties, &triples, &meta, &stats_file}) {
    f->Close();
  }
  for (OutputFile *f : {&entities, &properties, &triples, &meta, &stats_file}) {
    f->Commit();
  }
  return stats;
}

std::vector<Alignment> ReadAlignments(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open alignments " + path.string());
  std::vector<Alignment> out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = text::Split(line, '\t');
    if (fields.size() != 3) {
      throw FormatError(path.string() + ": expected 3 tab-separated fields",
                        line_no);
    }
    auto id = WikidataId::Parse(fields[0]);
    if (!id) {
      throw FormatError(path.string() + ": bad id '" + std::string(fields[0]) + "'",
                        line_no);
    }
    if (text::Trim(fields[2]).empty()) {
      throw FormatError(path.string() + ": empty alias", line_no);
    }
    out.push_back({*id, std::string(fields[1]), std::string(fields[2])});
  }
  if (in.bad()) throw IoError("read failed for " + path.string());
  return out;
}

std::string FormatStats(const KbStats &stats) {
  Json j;
  j["entity_alignment_count"] = stats.entity_alignment_count;
  j["property_alignment_count"] = stats.property_alignment_count;
  j["triple_count"] = stats.triple_count;
  j["records_skipped"] = stats.records_skipped;
  return j.dump(2) + '\n';
}

KbStats ReadStats(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw FormatError(path.string() + ": not a stats object");
  }
  KbStats s;
  s.entity_alignment_count = j.value("entity_alignment_count", std::int64_t{0});
  s.property_alignment_count =
      j.value("property_alignment_count", std::int64_t{0});
  s.triple_count = j.value("triple_count", std::int64_t{0});
  s.records_skipped = j.value("records_skipped", std::int64_t{0});
  return s;
}

}  // namespace kb
}  // namespace falcon
