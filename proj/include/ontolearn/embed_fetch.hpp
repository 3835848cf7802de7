#pragma once

// Client for an OpenAI-compatible embeddings endpoint:
//   POST {"model": m, "input": [...]}
//   ->   {"data": [{"index": i, "embedding": [...]}, ...]}

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "ontolearn/embedstore.hpp"
#include "ontolearn/http.hpp"

namespace ontolearn {

struct FetchOptions {
  std::string endpoint;
  std::string model_name;
  std::size_t batch_size = 32;
  Pooling pooling = Pooling::mean;  // recorded only; the service does the pooling
  bool normalize = true;
  // Expected row width; 0 = take it from the first row (1 if there are none).
  std::size_t dim = 0;
  std::string api_key;
  http::RetryPolicy retry;
  http::Transport transport = http::httplib_transport;
};

// Rows are keyed by `ids` (parallel to `texts`), in input order.
inline EmbeddingStore fetch_embeddings(const FetchOptions& opt,
                                       const std::vector<std::string>& ids,
                                       const std::vector<std::string>& texts) {
  if (ids.size() != texts.size()) throw ConfigError("ids and texts differ in length");
  if (opt.batch_size == 0) throw ConfigError("batch_size must be >= 1");

  std::vector<std::vector<float>> rows;
  rows.reserve(texts.size());
  for (std::size_t start = 0, batch = 0; start < texts.size();
       start += opt.batch_size, ++batch) {
    const std::size_t end = std::min(texts.size(), start + opt.batch_size);
    nlohmann::json body;
    body["model"] = opt.model_name;
    body["input"] = std::vector<std::string>(texts.begin() + start, texts.begin() + end);

    http::Request req{opt.endpoint, body.dump(), opt.api_key};
    const auto resp = http::post_with_retry(opt.transport, req, opt.retry,
                                            static_cast<long>(batch));
    const std::size_t expected = end - start;
    std::vector<std::vector<float>> got(expected);
    try {
      const auto j = nlohmann::json::parse(resp.body);
      const auto& data = j.at("data");
      if (!data.is_array() || data.size() != expected) {
        throw ServiceError("count mismatch in batch " + std::to_string(batch) +
                               ": sent " + std::to_string(expected) + ", got " +
                               std::to_string(data.is_array() ? data.size() : 0),
                           false, 1, static_cast<long>(batch));
      }
      std::vector<bool> filled(expected, false);
      for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& item = data[i];
        const std::size_t idx =
            item.contains("index") ? item.at("index").get<std::size_t>() : i;
        if (idx >= expected || filled[idx]) {
          throw ServiceError("bad or repeated index in batch " + std::to_string(batch),
                             false, 1, static_cast<long>(batch));
        }
        filled[idx] = true;
        got[idx] = item.at("embedding").get<std::vector<float>>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw ServiceError(std::string("malformed embeddings response: ") + e.what(),
                         false, 1, static_cast<long>(batch));
    }
    for (auto& r : got) rows.push_back(std::move(r));
  }

  const std::size_t dim = opt.dim ? opt.dim : (rows.empty() ? 1 : rows.front().size());
  if (dim == 0) throw ServiceError("service returned an empty embedding", false);
  for (const auto& r : rows) {
    if (r.size() != dim) {
      throw ServiceError("embedding width " + std::to_string(r.size()) + ", expected " +
                             std::to_string(dim),
                         false);
    }
  }
  EmbeddingStore store(opt.model_name, dim, opt.pooling, opt.normalize);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (opt.normalize) {
      store.append(ids[i], l2_normalize(rows[i]));
    } else {
      store.append(ids[i], rows[i]);
    }
  }
  return store;
}

}  // namespace ontolearn
