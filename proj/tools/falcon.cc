// Command-line front end: falcon <subcommand> [options]. Exit status is 0 on
// success, 1 on domain errors, 2 on usage errors.

#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "falcon/alias_index.h"
#include "falcon/error.h"
#include "falcon/eval.h"
#include "falcon/kb_ingest.h"
#include "falcon/knowledge_base.h"
#include "falcon/linker.h"
#include "falcon/pipeline.h"
#include "falcon/rules.h"
#include "falcon/service.h"
#include "falcon/triple_store.h"

namespace {

using namespace falcon;

constexpr int kExitUsage = 2;

std::string DefaultKbDir() {
  const char *env = std::getenv("FALCON_KB_DIR");
  return env ? env : "";
}

std::string RequireKb(const std::string &kb) {
  if (kb.empty()) throw CLI::RequiredError("--kb (or FALCON_KB_DIR)");
  return kb;
}

std::optional<WikidataId> ParsePatternId(const std::string &text, const char *flag) {
  if (text == "*" || text == "?") return std::nullopt;
  auto id = WikidataId::Parse(text);
  if (!id) throw InvalidRequest(std::string(flag) + ": bad id '" + text + "'");
  return id;
}

struct Options {
  // build-kb
  std::string dump, out, place_allowlist;
  int threads = 0;
  // index
  std::string alignments, kind = "entity", index_path, text;
  std::size_t k = 10;
  // store / link / serve / eval
  std::string kb = DefaultKbDir();
  std::string s = "*", p, o = "*";
  bool keyword = false, explain = false;
  std::size_t k_entities = index::kDefaultEntityK;
  std::size_t k_relations = index::kDefaultPropertyK;
  std::string rules_path;
  std::string bind = "127.0.0.1:8080";
  std::string gold, task = "both", csv, approach = "Falcon", dataset;
};

int RunBuildKb(const Options &opt) {
  if (opt.threads > 0) omp_set_num_threads(opt.threads);
  kb::BuildOptions build;
  if (!opt.place_allowlist.empty()) build.place_allowlist = opt.place_allowlist;
  kb::KbStats stats = kb::BuildKb(opt.dump, opt.out, build);
  std::cout << kb::FormatStats(stats);
  return 0;
}

int RunIndexBuild(const Options &opt) {
  auto kind = index::ParseIndexKind(opt.kind);
  if (!kind) throw CLI::ValidationError("--kind", "must be entity or property");
  index::AliasIndex idx = index::AliasIndex::FromAlignmentsFile(opt.alignments, *kind);
  idx.Save(opt.out);
  std::cerr << "indexed " << idx.size() << " alignments, " << idx.token_count()
            << " tokens\n";
  return 0;
}

int RunIndexQuery(const Options &opt) {
  if (opt.k == 0) throw CLI::ValidationError("--k", "must be at least 1");
  index::AliasIndex idx = index::AliasIndex::Load(opt.index_path);
  for (const index::Candidate &c : idx.Query(opt.text, opt.k)) {
    char score[32];
    std::snprintf(score, sizeof(score), "%.3f", c.text_score);
    std::cout << c.iri.ToString() << '\t' << c.matched_label << '\t' << score << '\n';
  }
  return 0;
}

int RunStoreAsk(const Options &opt) {
  std::filesystem::path dir = RequireKb(opt.kb);
  auto p = WikidataId::Parse(opt.p);
  if (!p || !p->is_property()) throw CLI::ValidationError("--p", "must be a property id");
  auto s = ParsePatternId(opt.s, "--s");
  auto o = ParsePatternId(opt.o, "--o");
  if (!s && !o) throw CLI::ValidationError("--s/--o", "at least one must be bound");
  store::TripleStore store =
      store::TripleStore::Load(dir / kb::kTriplesFile, dir / kb::kPropertyMetaFile);
  bool found = store.Ask(s, *p, o);
  std::cout << (found ? "true" : "false") << '\n';
  return found ? 0 : 1;
}

int RunRecognize(const Options &opt) {
  rules::Catalog catalog = opt.rules_path.empty() ? rules::Catalog::Builtin()
                                                  : rules::Catalog::Load(opt.rules_path);
  const pipeline::LexiconTagger &tagger = pipeline::LexiconTagger::Default();
  auto tagged = tagger.Tag(opt.text);
  auto forms = pipeline::TokenizeCompound(tagged);
  rules::ChainRecognition(catalog, forms);
  rules::ChainTiling(catalog, forms, tagged);
  for (const pipeline::SurfaceForm &f : forms) {
    std::cout << f.text << '\t' << pipeline::HintName(f.hint) << '\n';
  }
  return 0;
}

int RunLink(const Options &opt) {
  KnowledgeBase kb = LoadKnowledgeBase(RequireKb(opt.kb));
  linker::Linker linker(kb);
  linker::LinkRequest req;
  req.text = opt.text;
  req.k_entities = opt.k_entities;
  req.k_relations = opt.k_relations;
  req.mode = opt.keyword ? linker::Mode::kKeyword : linker::Mode::kAuto;
  linker::LinkResult result = linker.Link(req);
  if (opt.explain) std::cerr << linker::Explain(result);
  std::cout << service::ResponseJson(result) << '\n';
  return 0;
}

int RunServe(const Options &opt) {
  service::Serve(RequireKb(opt.kb), opt.bind, std::cerr);
  return 0;
}

int RunEval(const Options &opt) {
  std::vector<eval::Task> tasks;
  if (opt.task == "both") {
    tasks = {eval::Task::kEntity, eval::Task::kRelation};
  } else if (auto t = eval::ParseTask(opt.task)) {
    tasks = {*t};
  } else {
    throw CLI::ValidationError("--task", "must be entity, relation or both");
  }
  KnowledgeBase kb = LoadKnowledgeBase(RequireKb(opt.kb));
  std::vector<eval::GoldRecord> gold = eval::LoadGold(opt.gold);
  linker::Linker linker(kb);
  eval::LinkFn link = [&](const std::string &text) {
    linker::LinkRequest req;
    req.text = text;
    return linker.Link(req);
  };
  std::string dataset =
      opt.dataset.empty() ? std::filesystem::path(opt.gold).stem().string() : opt.dataset;
  std::vector<eval::NamedReport> reports;
  for (eval::Task task : tasks) {
    std::string approach = opt.approach;
    if (tasks.size() > 1) approach += " (" + std::string(eval::TaskName(task)) + ")";
    reports.push_back({approach, dataset, eval::Evaluate(link, gold, task)});
  }
  std::cout << eval::FormatTable(reports);
  if (!opt.csv.empty()) {
    std::ofstream out(opt.csv, std::ios::binary);
    out << eval::FormatCsv(reports);
    if (!out) throw IoError("cannot write " + opt.csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  Options opt;
  CLI::App app{"Joint entity and relation linker over Wikidata"};
  app.require_subcommand(1);
  int (*action)(const Options &) = nullptr;

  auto *build_kb = app.add_subcommand("build-kb", "Build KB files from a Wikidata JSON dump");
  build_kb->add_option("--dump", opt.dump, "dump path (.json or .json.gz)")->required();
  build_kb->add_option("--out", opt.out, "output directory")->required();
  build_kb->add_option("--place-allowlist", opt.place_allowlist, "place allowlist file");
  build_kb->add_option("--threads", opt.threads, "worker threads (default: all)");
  build_kb->callback([&] { action = RunBuildKb; });

  auto *index_cmd = app.add_subcommand("index", "Alias index tools");
  index_cmd->require_subcommand(1);
  auto *index_build = index_cmd->add_subcommand("build", "Serialize an alias index");
  index_build->add_option("--alignments", opt.alignments, "alignment file")->required();
  index_build->add_option("--kind", opt.kind, "entity|property")->required();
  index_build->add_option("--out", opt.out, "index file")->required();
  index_build->callback([&] { action = RunIndexBuild; });
  auto *index_query = index_cmd->add_subcommand("query", "Query a serialized index");
  index_query->add_option("--index", opt.index_path, "index file")->required();
  index_query->add_option("--text", opt.text, "surface form")->required();
  index_query->add_option("--k", opt.k, "result count");
  index_query->callback([&] { action = RunIndexQuery; });

  auto *store_cmd = app.add_subcommand("store", "Triple store tools");
  store_cmd->require_subcommand(1);
  auto *ask = store_cmd->add_subcommand("ask", "Existence query; exit 0 if true, 1 if false");
  ask->add_option("--kb", opt.kb, "KB directory (default $FALCON_KB_DIR)");
  ask->add_option("--s", opt.s, "subject id or *");
  ask->add_option("--p", opt.p, "property id")->required();
  ask->add_option("--o", opt.o, "object id or *");
  ask->callback([&] { action = RunStoreAsk; });

  auto *pipeline_cmd = app.add_subcommand("pipeline", "Recognition pipeline");
  pipeline_cmd->require_subcommand(1);
  auto *recognize = pipeline_cmd->add_subcommand("recognize", "Print surface forms and hints");
  recognize->add_option("--text", opt.text, "input sentence")->required();
  recognize->add_option("--rules", opt.rules_path, "rule config file");
  recognize->callback([&] { action = RunRecognize; });

  auto *link = app.add_subcommand("link", "Link entities and relations in a sentence");
  link->add_option("--kb", opt.kb, "KB directory (default $FALCON_KB_DIR)");
  link->add_option("--text", opt.text, "input sentence")->required();
  link->add_flag("--keyword", opt.keyword, "treat the input as keywords");
  link->add_option("--k-entities", opt.k_entities, "entity candidates per form");
  link->add_option("--k-relations", opt.k_relations, "relation candidates per form");
  link->add_flag("--explain", opt.explain, "print the pipeline trace to stderr");
  link->callback([&] { action = RunLink; });

  auto *serve = app.add_subcommand("serve", "HTTP service");
  serve->add_option("--kb", opt.kb, "KB directory (default $FALCON_KB_DIR)");
  serve->add_option("--bind", opt.bind, "host:port");
  serve->callback([&] { action = RunServe; });

  auto *eval_cmd = app.add_subcommand("eval", "Evaluate against a gold file");
  eval_cmd->add_option("--kb", opt.kb, "KB directory (default $FALCON_KB_DIR)");
  eval_cmd->add_option("--gold", opt.gold, "gold JSON-lines file")->required();
  eval_cmd->add_option("--task", opt.task, "entity|relation|both");
  eval_cmd->add_option("--csv", opt.csv, "also write the report as CSV");
  eval_cmd->add_option("--approach", opt.approach, "approach column");
  eval_cmd->add_option("--dataset", opt.dataset, "dataset column (default: gold file stem)");
  eval_cmd->callback([&] { action = RunEval; });

  try {
    app.parse(argc, argv);
    return action(opt);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::Error &e) {
    app.exit(e);
    return kExitUsage;
  } catch (const falcon::Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
