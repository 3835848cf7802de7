#pragma once

#include <stdexcept>
#include <string>

namespace ontolearn {

// Errors are grouped by who has to fix them; the CLI maps each group to an
// exit code (config = 1, data = 2, service = 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

// Transport and protocol failures talking to an embeddings or chat service.
class ServiceError : public Error {
 public:
  ServiceError(const std::string& what, bool retriable, int attempts = 0,
               long batch_index = -1)
      : Error(what),
        retriable_(retriable),
        attempts_(attempts),
        batch_index_(batch_index) {}

  bool retriable() const noexcept { return retriable_; }
  int attempts() const noexcept { return attempts_; }
  // -1 when the failure is not tied to a batch.
  long batch_index() const noexcept { return batch_index_; }

 private:
  bool retriable_;
  int attempts_;
  long batch_index_;
};

}  // namespace ontolearn
