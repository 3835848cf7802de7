#pragma once

// Minimal JSON-over-HTTP transport with bounded retries. The transport is a
// plain function so tests and offline runs can substitute it.

#include <chrono>
#include <functional>
#include <map>
#include <string>
#include <thread>

#include <httplib.h>
// <resolv.h> defines _res as a macro, which clashes with Eigen parameter names.
#ifdef _res
#undef _res
#endif

#include "ontolearn/error.hpp"

namespace ontolearn::http {

struct Response {
  int status = 0;
  std::string body;
};

struct Request {
  std::string url;
  std::string body;
  std::string bearer_token;  // empty = no Authorization header
  std::chrono::milliseconds timeout{60000};
};

// Throws ServiceError(retriable) on transport failure.
using Transport = std::function<Response(const Request&)>;

struct Url {
  std::string scheme_host_port;  // "http://host:port"
  std::string path;              // "/v1/embeddings"
};

inline Url split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint URL must include a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

inline Response httplib_transport(const Request& req) {
  const Url u = split_url(req.url);
  httplib::Client client(u.scheme_host_port);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(req.timeout);
  const auto usecs =
      std::chrono::duration_cast<std::chrono::microseconds>(req.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (!req.bearer_token.empty()) {
    headers.emplace("Authorization", "Bearer " + req.bearer_token);
  }
  auto res = client.Post(u.path, headers, req.body, "application/json");
  if (!res) {
    throw ServiceError("transport error contacting " + req.url + ": " +
                           httplib::to_string(res.error()),
                       /*retriable=*/true);
  }
  return {res->status, res->body};
}

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds backoff{200};
};

// POSTs until a 2xx arrives. Transport failures, 429 and 5xx are retried;
// other statuses fail immediately. The final error records the attempt count
// and `batch_index`.
inline Response post_with_retry(const Transport& transport, const Request& req,
                                const RetryPolicy& policy, long batch_index = -1) {
  std::string last_error;
  bool retriable = true;
  int attempt = 0;
  for (; attempt < policy.max_attempts && retriable; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(policy.backoff * attempt);
    try {
      Response r = transport(req);
      if (r.status >= 200 && r.status < 300) return r;
      retriable = r.status == 429 || r.status >= 500;
      last_error = "HTTP " + std::to_string(r.status) + " from " + req.url;
    } catch (const ServiceError& e) {
      retriable = e.retriable();
      last_error = e.what();
    }
  }
  std::string msg = last_error + " after " + std::to_string(attempt) + " attempt(s)";
  if (batch_index >= 0) msg += " (batch " + std::to_string(batch_index) + ")";
  throw ServiceError(msg, retriable, attempt, batch_index);
}

}  // namespace ontolearn::http
