#include "test_support.h"

#include <unistd.h>

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "falcon/kb_ingest.h"

namespace falcon {
namespace testing {

namespace fs = std::filesystem;

fs::path FixturePath(std::string_view name) { return fs::path(FALCON_FIXTURE_DIR) / name; }

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("falcon_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void WriteFile(const fs::path &path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string ReadFile(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fs::path &FixtureKbDir() {
  static TempDir dir;
  static const bool built = [] {
    kb::BuildKb(FixturePath("wikidata_fixture.json"), dir.path());
    return true;
  }();
  (void)built;
  return dir.path();
}

const KnowledgeBase &FixtureKb() {
  static const KnowledgeBase kb = LoadKnowledgeBase(FixtureKbDir());
  return kb;
}

}  // namespace testing
}  // namespace falcon
