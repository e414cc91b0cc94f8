#ifndef FALCON_SERVICE_H_
#define FALCON_SERVICE_H_

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "falcon/knowledge_base.h"
#include "falcon/linker.h"

namespace httplib {
class Server;
}

namespace falcon {
namespace service {

inline constexpr std::size_t kMaxBodyBytes = 16 * 1024;

// JSON body of a link response:
// {"entities_wikidata": [{"URI": ..., "surface_form": ...}],
//  "relations_wikidata": [...]}
// k, when set, truncates both lists.
std::string ResponseJson(const linker::LinkResult &result,
                         std::optional<std::size_t> k = std::nullopt);

struct HttpReply {
  int status = 200;
  std::string body;
};

// Request handling without the socket layer. Answers 503 until a KB is set.
class Service {
 public:
  explicit Service(linker::LinkOptions options = {}) : options_(options) {}

  void SetKnowledgeBase(std::shared_ptr<const KnowledgeBase> kb);
  bool ready() const;

  // POST /api/process. k_param is the raw "k" query parameter.
  HttpReply HandleProcess(std::string_view body,
                          std::optional<std::string_view> k_param = std::nullopt) const;
  // GET /healthz: KB stats.
  HttpReply HandleHealth() const;

 private:
  std::shared_ptr<const KnowledgeBase> kb() const;

  linker::LinkOptions options_;
  mutable std::mutex mu_;
  std::shared_ptr<const KnowledgeBase> kb_;
};

// "host:port" or ":port". Throws InvalidRequest on bad input.
std::pair<std::string, int> ParseBindAddress(std::string_view addr);

// HTTP front end for a Service.
class HttpServer {
 public:
  explicit HttpServer(Service &service);
  ~HttpServer();

  // Binds the listening socket; port 0 picks a free port. Returns the bound
  // port. Throws IoError when the bind fails.
  int Bind(const std::string &host, int port);
  // Accepts connections until Stop. Requires a successful Bind.
  void Run();
  void Stop();
  void WaitUntilReady() const;

 private:
  Service &service_;
  std::unique_ptr<httplib::Server> server_;
};

// Checks the KB directory, binds, loads the KB in the background (requests
// get 503 meanwhile) and serves until the process is stopped.
void Serve(const std::filesystem::path &kb_dir, std::string_view bind_addr,
           std::ostream &log);

}  // namespace service
}  // namespace falcon

#endif  // FALCON_SERVICE_H_
