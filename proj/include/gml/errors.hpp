#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gml {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
  using Error::Error;
};
struct DuplicateRegimeId : Error {
  using Error::Error;
};
struct NonComposable : Error {
  using Error::Error;
};
struct UnknownRegime : Error {
  using Error::Error;
};
struct MissingMemoryField : Error {
  using Error::Error;
};
struct InvalidParams : Error {
  using Error::Error;
};
struct InvalidAlpha : Error {
  using Error::Error;
};
struct InvalidResolution : Error {
  using Error::Error;
};
struct InconsistentProfile : Error {
  using Error::Error;
};
struct SingularDesign : Error {
  using Error::Error;
};
struct NonInjectiveRename : Error {
  using Error::Error;
};
struct NotASuperset : Error {
  using Error::Error;
};
struct OutOfRangeDelta : Error {
  using Error::Error;
};
struct PartialMap : Error {
  using Error::Error;
};
struct InvalidConfig : Error {
  using Error::Error;
};

struct InvalidScenario : Error {
  explicit InvalidScenario(const std::string& msg, std::vector<std::string> problems = {})
      : Error(msg), issues(std::move(problems)) {}
  std::vector<std::string> issues;
};

}  // namespace gml
