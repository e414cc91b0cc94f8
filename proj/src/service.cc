#include "falcon/service.h"

#include <charconv>
#include <limits>
#include <ostream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "falcon/error.h"
#include "falcon/text.h"

namespace falcon {
namespace service {

namespace {

using ordered_json = nlohmann::ordered_json;

HttpReply ErrorReply(int status, const std::string &message) {
  ordered_json body = {{"error", message}};
  return {status, body.dump()};
}

ordered_json Items(const std::vector<linker::LinkedItem> &items, bool relation,
                   std::size_t limit) {
  ordered_json arr = ordered_json::array();
  for (std::size_t i = 0; i < items.size() && i < limit; ++i) {
    const WikidataId &id = items[i].candidate.iri;
    std::string uri = std::string(relation ? kPropertyIriPrefix : kEntityIriPrefix) +
                      id.ToString();
    arr.push_back({{"URI", uri}, {"surface_form", items[i].form.text}});
  }
  return arr;
}

}  // namespace

std::string ResponseJson(const linker::LinkResult &result, std::optional<std::size_t> k) {
  std::size_t limit = k.value_or(std::numeric_limits<std::size_t>::max());
  ordered_json body;
  body["entities_wikidata"] = Items(result.entities, false, limit);
  body["relations_wikidata"] = Items(result.relations, true, limit);
  return body.dump();
}

void Service::SetKnowledgeBase(std::shared_ptr<const KnowledgeBase> kb) {
  std::lock_guard<std::mutex> lock(mu_);
  kb_ = std::move(kb);
}

std::shared_ptr<const KnowledgeBase> Service::kb() const {
  std::lock_guard<std::mutex> lock(mu_);
  return kb_;
}

bool Service::ready() const { return kb() != nullptr; }

HttpReply Service::HandleProcess(std::string_view body,
                                 std::optional<std::string_view> k_param) const {
  std::shared_ptr<const KnowledgeBase> kb = this->kb();
  if (!kb) return ErrorReply(503, "knowledge base is loading");
  if (body.size() > kMaxBodyBytes) return ErrorReply(400, "request body exceeds 16 KiB");
  std::optional<std::size_t> k;
  if (k_param) {
    std::size_t value = 0;
    auto [end, ec] = std::from_chars(k_param->data(), k_param->data() + k_param->size(), value);
    if (ec != std::errc() || end != k_param->data() + k_param->size() || value == 0) {
      return ErrorReply(400, "k must be a positive integer");
    }
    k = value;
  }
  ordered_json request = ordered_json::parse(body, nullptr, false);
  if (request.is_discarded() || !request.is_object()) {
    return ErrorReply(400, "body must be a JSON object");
  }
  auto it = request.find("text");
  if (it == request.end() || !it->is_string() ||
      text::Trim(it->get<std::string>()).empty()) {
    return ErrorReply(400, "missing or empty \"text\"");
  }
  try {
    linker::Linker linker(*kb, options_);
    linker::LinkRequest req;
    req.text = it->get<std::string>();
    return {200, ResponseJson(linker.Link(req), k)};
  } catch (const InvalidRequest &e) {
    return ErrorReply(400, e.what());
  } catch (const std::exception &e) {
    return ErrorReply(500, e.what());
  }
}

HttpReply Service::HandleHealth() const {
  std::shared_ptr<const KnowledgeBase> kb = this->kb();
  if (!kb) return ErrorReply(503, "knowledge base is loading");
  ordered_json body = {
      {"status", "ok"},
      {"entity_alignment_count", kb->stats.entity_alignment_count},
      {"property_alignment_count", kb->stats.property_alignment_count},
      {"triple_count", kb->stats.triple_count},
      {"records_skipped", kb->stats.records_skipped},
  };
  return {200, body.dump()};
}

std::pair<std::string, int> ParseBindAddress(std::string_view addr) {
  std::size_t colon = addr.rfind(':');
  if (colon == std::string_view::npos) {
    throw InvalidRequest("bind address must be host:port");
  }
  std::string host(addr.substr(0, colon));
  if (host.empty()) host = "0.0.0.0";
  std::string_view port_text = addr.substr(colon + 1);
  int port = -1;
  auto [end, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc() || end != port_text.data() + port_text.size() || port < 0 ||
      port > 65535) {
    throw InvalidRequest("bad port in bind address '" + std::string(addr) + "'");
  }
  return {host, port};
}

HttpServer::HttpServer(Service &service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  server_->set_payload_max_length(kMaxBodyBytes + 1);
  // httplib defaults to SO_REUSEPORT, which lets a second server share the
  // port silently. A busy port must fail the bind.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  auto send = [](httplib::Response &res, const HttpReply &reply) {
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
  };
  server_->Post("/api/process", [this, send](const httplib::Request &req,
                                              httplib::Response &res) {
    std::optional<std::string_view> k;
    if (req.has_param("k")) k = req.get_param_value("k");
    send(res, service_.HandleProcess(req.body, k));
  });
  server_->Get("/healthz", [this, send](const httplib::Request &, httplib::Response &res) {
    send(res, service_.HandleHealth());
  });
  server_->set_error_handler([](const httplib::Request &, httplib::Response &res) {
    if (res.status == 413) {
      res.status = 400;
      res.set_content(R"({"error":"request body exceeds 16 KiB"})", "application/json");
    }
  });
}

HttpServer::~HttpServer() = default;

int HttpServer::Bind(const std::string &host, int port) {
  if (port == 0) {
    int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw IoError("cannot bind " + host + ":0");
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    throw IoError("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::Run() { server_->listen_after_bind(); }

void HttpServer::Stop() { server_->stop(); }

void HttpServer::WaitUntilReady() const { server_->wait_until_ready(); }

void Serve(const std::filesystem::path &kb_dir, std::string_view bind_addr,
           std::ostream &log) {
  std::string missing;
  if (!HasKbArtifacts(kb_dir, &missing)) throw IoError("missing KB file " + missing);
  auto [host, port] = ParseBindAddress(bind_addr);
  Service service;
  HttpServer server(service);
  int bound = server.Bind(host, port);
  log << "listening on " << host << ":" << bound << std::endl;
  std::thread loader([&service, &log, &server, dir = kb_dir] {
    try {
      service.SetKnowledgeBase(
          std::make_shared<const KnowledgeBase>(LoadKnowledgeBase(dir)));
      log << "knowledge base loaded from " << dir.string() << std::endl;
    } catch (const std::exception &e) {
      log << "error: " << e.what() << std::endl;
      server.WaitUntilReady();
      server.Stop();
    }
  });
  server.Run();
  loader.join();
  if (!service.ready()) throw IoError("knowledge base failed to load");
}

}  // namespace service
}  // namespace falcon
