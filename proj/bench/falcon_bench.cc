// Serial reference vs OpenMP kernel for each parallel stage.

#include <benchmark/benchmark.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <unistd.h>

#include "falcon/alias_index.h"
#include "falcon/eval.h"
#include "falcon/kb_ingest.h"
#include "falcon/linker.h"
#include "falcon/triple_store.h"

namespace falcon {
namespace {

namespace fs = std::filesystem;

std::string RandomName(std::mt19937_64 &rng) {
  static const char *kSyl[] = {"ka", "lo", "mi", "ne", "ru", "sa", "ti", "vo", "ze", "ba",
                               "de", "fi", "go", "hu", "ja", "ke", "li", "mo", "nu", "pa"};
  std::string s;
  for (int w = 1 + rng() % 3; w > 0; --w) {
    if (!s.empty()) s += ' ';
    for (int k = 2 + rng() % 2; k > 0; --k) s += kSyl[rng() % 20];
  }
  return s;
}

std::vector<kb::Alignment> Alignments(std::size_t n) {
  std::mt19937_64 rng(1);
  std::vector<kb::Alignment> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string label = RandomName(rng);
    out.push_back({WikidataId::Item(i + 1), label, label});
  }
  return out;
}

void BM_IndexBuild(benchmark::State &state) {
  auto alignments = Alignments(static_cast<std::size_t>(state.range(0)));
  bool parallel = state.range(1);
  for (auto _ : state) {
    auto copy = alignments;
    auto idx = parallel ? index::AliasIndex::Build(std::move(copy), index::IndexKind::kEntity)
                        : index::AliasIndex::BuildSerial(std::move(copy),
                                                         index::IndexKind::kEntity);
    benchmark::DoNotOptimize(idx.size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IndexBuild)
    ->ArgNames({"alignments", "parallel"})
    ->Args({200'000, 0})
    ->Args({200'000, 1})
    ->Unit(benchmark::kMillisecond);

struct RankFixture {
  store::TripleStore store;
  std::vector<linker::FormCandidates> lists;
};

RankFixture MakeRankFixture(int per_list) {
  std::mt19937_64 rng(2);
  std::vector<Triple> triples;
  for (int i = 0; i < 200'000; ++i) {
    triples.push_back({WikidataId::Item(1 + rng() % 50'000), WikidataId::Property(1 + rng() % 500),
                       WikidataId::Item(1 + rng() % 50'000)});
  }
  RankFixture f{store::TripleStore::FromTriples(std::move(triples)), {}};
  f.lists.resize(3);
  for (auto &fc : f.lists) {
    for (int i = 0; i < per_list; ++i) {
      fc.entities.push_back({WikidataId::Item(1 + rng() % 50'000), "e", 0.5, 0});
      fc.relations.push_back({WikidataId::Property(1 + rng() % 500), "r", 0.5, 0});
    }
  }
  return f;
}

void BM_RankPairs(benchmark::State &state) {
  static const RankFixture fixture = MakeRankFixture(50);
  bool parallel = state.range(0);
  for (auto _ : state) {
    auto lists = fixture.lists;
    auto stats = parallel ? linker::RankPairs(lists, fixture.store)
                          : linker::RankPairsSerial(lists, fixture.store);
    benchmark::DoNotOptimize(stats.hits);
  }
}
BENCHMARK(BM_RankPairs)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_Evaluate(benchmark::State &state) {
  static const RankFixture fixture = MakeRankFixture(20);
  std::vector<eval::GoldRecord> gold;
  for (int i = 0; i < 200; ++i) {
    gold.push_back({std::to_string(i), {WikidataId::Item(i + 1)}, {}});
  }
  // Each "question" costs one RankPairsSerial call.
  eval::LinkFn link = [&](const std::string &text) {
    auto lists = fixture.lists;
    linker::RankPairsSerial(lists, fixture.store);
    linker::LinkResult r;
    r.entities.push_back({lists[0].entities.front(), {}});
    r.entities.front().candidate.iri = WikidataId::Item(std::stoul(text) + 1);
    return r;
  };
  bool parallel = state.range(0);
  for (auto _ : state) {
    auto report = parallel ? eval::Evaluate(link, gold, eval::Task::kEntity)
                           : eval::EvaluateSerial(link, gold, eval::Task::kEntity);
    benchmark::DoNotOptimize(report.f_measure);
  }
}
BENCHMARK(BM_Evaluate)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

fs::path SyntheticDump(int records) {
  fs::path path = fs::temp_directory_path() / ("falcon_bench_dump_" + std::to_string(::getpid()) + ".json");
  std::ofstream out(path);
  std::mt19937_64 rng(3);
  out << "[\n";
  for (int i = 1; i <= records; ++i) {
    out << R"({"type": "item", "id": "Q)" << i << R"(", "labels": {"en": {"language": "en", "value": ")"
        << RandomName(rng) << R"("}}, "aliases": {"en": [{"language": "en", "value": ")"
        << RandomName(rng) << R"("}]}, "claims": {"P31": [{"mainsnak": {"snaktype": "value", )"
        << R"("property": "P31", "datavalue": {"type": "wikibase-entityid", "value": )"
        << R"({"entity-type": "item", "numeric-id": 5, "id": "Q5"}}}, "type": "statement", )"
        << R"("rank": "normal"}]}})" << (i == records ? "\n" : ",\n");
  }
  out << "]\n";
  return path;
}

struct TempDump {
  fs::path path = SyntheticDump(50'000);
  ~TempDump() { fs::remove(path); }
};

void BM_BuildKb(benchmark::State &state) {
  static const TempDump dump_file;
  const fs::path &dump = dump_file.path;
  fs::path out = fs::temp_directory_path() / ("falcon_bench_kb_" + std::to_string(::getpid()));
  kb::BuildOptions options;
  options.parallel = state.range(0);
  for (auto _ : state) {
    auto stats = kb::BuildKb(dump, out, options);
    benchmark::DoNotOptimize(stats.triple_count);
  }
  fs::remove_all(out);
}
BENCHMARK(BM_BuildKb)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace falcon

BENCHMARK_MAIN();
