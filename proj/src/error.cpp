#include "agentcredit/error.hpp"

namespace agentcredit {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::MultipleSinks: return "MultipleSinks";
    case Errc::NoSource: return "NoSource";
    case Errc::CrossLayerViolation: return "CrossLayerViolation";
    case Errc::LayerPartitionInvalid: return "LayerPartitionInvalid";
    case Errc::UnknownAgent: return "UnknownAgent";
    case Errc::DuplicateAgent: return "DuplicateAgent";
    case Errc::TooManyAgents: return "TooManyAgents";
    case Errc::AgentNotInCoalition: return "AgentNotInCoalition";
    case Errc::EndpointNotInCoalition: return "EndpointNotInCoalition";
    case Errc::GraphTooLarge: return "GraphTooLarge";
    case Errc::InvalidSize: return "InvalidSize";
    case Errc::BadLayerIndex: return "BadLayerIndex";
    case Errc::EmptyLayer: return "EmptyLayer";
    case Errc::ExecutorFailure: return "ExecutorFailure";
    case Errc::NonDeterminismDetected: return "NonDeterminismDetected";
    case Errc::MissingExternalData: return "MissingExternalData";
    case Errc::ForbiddenExternalAccess: return "ForbiddenExternalAccess";
    case Errc::ExecutorError: return "ExecutorError";
    case Errc::ReflectorError: return "ReflectorError";
    case Errc::WindowTooShort: return "WindowTooShort";
    case Errc::ParseError: return "ParseError";
    case Errc::NonPositivePrice: return "NonPositivePrice";
    case Errc::DuplicateDate: return "DuplicateDate";
    case Errc::UnsortedDates: return "UnsortedDates";
    case Errc::TooFewReturns: return "TooFewReturns";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
      code_(code) {}

void fail(Errc code, const std::string& detail) { throw Error(code, detail); }

}  // namespace agentcredit
