#pragma once

#include <optional>

#include "noncollide/error.hpp"

namespace noncollide::testing {

template <typename F>
std::optional<ErrorKind> thrown_kind(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace noncollide::testing
