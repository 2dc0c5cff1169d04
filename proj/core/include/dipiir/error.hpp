#pragma once

#include <stdexcept>
#include <string>

namespace dipiir {

/// Root of the toolkit's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or grid dimensions do not match what an operator expects.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameter value or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or a numerical breakdown.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Failure inside a consensus agent; the message starts with the agent label.
class AgentError : public Error {
 public:
  AgentError(std::string agent, const std::string& what)
      : Error(agent + ": " + what), agent_(std::move(agent)) {}
  const std::string& agent() const noexcept { return agent_; }

 private:
  std::string agent_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// External denoiser exited with a nonzero status.
class PluginError : public Error {
 public:
  using Error::Error;
};

class PluginTimeoutError : public PluginError {
 public:
  using PluginError::PluginError;
};

/// External denoiser produced a malformed or wrongly shaped tensor.
class ProtocolError : public PluginError {
 public:
  using PluginError::PluginError;
};

}  // namespace dipiir
