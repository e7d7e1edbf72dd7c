#include "asmeta/error.hpp"

namespace asmeta {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::MalformedArff: return "MalformedArff";
    case Errc::InconsistentScenario: return "InconsistentScenario";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::UnknownAlgorithm: return "UnknownAlgorithm";
    case Errc::UnknownInstance: return "UnknownInstance";
    case Errc::EmptyInstanceSet: return "EmptyInstanceSet";
    case Errc::DegenerateGap: return "DegenerateGap";
    case Errc::DegenerateTraining: return "DegenerateTraining";
    case Errc::KTooLarge: return "KTooLarge";
    case Errc::AllColumnsDropped: return "AllColumnsDropped";
    case Errc::EmptyEnsemble: return "EmptyEnsemble";
    case Errc::BoostingCollapsed: return "BoostingCollapsed";
    case Errc::UnknownInstanceFeatures: return "UnknownInstanceFeatures";
    case Errc::SpecSyntax: return "SpecSyntax";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

ArffError::ArffError(std::size_t line, const std::string& reason, const std::string& source)
    : Error(Errc::MalformedArff, (source.empty() ? "line " : source + ":") + std::to_string(line) + ": " + reason),
      line_(line),
      reason_(reason) {}

}  // namespace asmeta
