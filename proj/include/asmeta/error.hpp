#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace asmeta {

enum class Errc {
  MalformedArff,
  InconsistentScenario,
  InvalidConfig,
  UnknownAlgorithm,
  UnknownInstance,
  EmptyInstanceSet,
  DegenerateGap,
  DegenerateTraining,
  KTooLarge,
  AllColumnsDropped,
  EmptyEnsemble,
  BoostingCollapsed,
  UnknownInstanceFeatures,
  SpecSyntax,
  IoError,
};

std::string_view to_string(Errc code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the harness in particular) can record typed failure cells.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// MalformedArff with the offending 1-based line number.
class ArffError : public Error {
 public:
  ArffError(std::size_t line, const std::string& reason, const std::string& source = {});

  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

}  // namespace asmeta
