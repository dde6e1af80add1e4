#pragma once

#include <stdexcept>
#include <string>

namespace icx {

struct ZeroMassEvent : std::runtime_error {
  explicit ZeroMassEvent(const std::string& what) : std::runtime_error(what) {}
};

struct NoExplorationNeeded : std::runtime_error {
  explicit NoExplorationNeeded(const std::string& what) : std::runtime_error(what) {}
};

struct PriorOrderViolation : std::runtime_error {
  explicit PriorOrderViolation(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownAgent : std::out_of_range {
  explicit UnknownAgent(const std::string& what) : std::out_of_range(what) {}
};

struct InfeasibleParams : std::invalid_argument {
  explicit InfeasibleParams(const std::string& what) : std::invalid_argument(what) {}
};

struct OutOfOrderArrival : std::logic_error {
  explicit OutOfOrderArrival(const std::string& what) : std::logic_error(what) {}
};

struct ReplicaExhausted : std::runtime_error {
  explicit ReplicaExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientSupport : std::runtime_error {
  explicit InsufficientSupport(const std::string& what) : std::runtime_error(what) {}
};

struct DemoFailed : std::runtime_error {
  explicit DemoFailed(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace icx
