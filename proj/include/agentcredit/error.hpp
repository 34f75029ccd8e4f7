#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace agentcredit {

enum class Errc {
  // graph construction
  CycleDetected,
  MultipleSinks,
  NoSource,
  CrossLayerViolation,
  LayerPartitionInvalid,
  UnknownAgent,
  DuplicateAgent,
  TooManyAgents,
  // coalition queries
  AgentNotInCoalition,
  EndpointNotInCoalition,
  GraphTooLarge,
  // shapley
  InvalidSize,
  BadLayerIndex,
  EmptyLayer,
  ExecutorFailure,
  NonDeterminismDetected,
  // agents
  MissingExternalData,
  ForbiddenExternalAccess,
  ExecutorError,
  // cgopo
  ReflectorError,
  WindowTooShort,
  // market data and metrics
  ParseError,
  NonPositivePrice,
  DuplicateDate,
  UnsortedDates,
  TooFewReturns,
  InsufficientData,
  // cli
  ConfigError,
  IoError,
};

std::string_view errc_name(Errc code);

// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& detail);

}  // namespace agentcredit
