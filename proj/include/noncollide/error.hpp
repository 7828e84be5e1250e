#pragma once

#include <stdexcept>
#include <string>

namespace noncollide {

enum class ErrorKind {
  InvalidArgument,
  Parity,
  Unreachable,
  NotRealizable,
  RepeatedPoint,
  CapExceeded,
  NonIntersecting,
  UnknownVertex,
  CyclicGraph,
  ZeroSurvival,
  TimeOrder,
  Unsupported,
  NonConvergence,
  StepUnderflow,
  NumericalBreakdown,
  InsufficientSamples,
};

/// Domain error raised by the library. `module()` names the component that
/// rejected the input so the CLI can report it with context.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), kind_(kind), module_(std::move(module)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

}  // namespace noncollide
