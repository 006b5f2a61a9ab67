#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace qterm {

/// Failure kinds shared by every module. Numeric guards (curvature,
/// degeneracy) are ordinary outcomes and travel in a Result; input and I/O
/// problems are thrown as Error.
enum class ErrorCode {
  NonPositiveCurvature,
  ZeroDenominator,
  Degenerate,
  LinearDependence,
  NumericalFailure,
  NonDescentDirection,
  LineSearchFailure,
  InvalidSpec,
  InvalidInput,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Value-or-error return for the numeric kernels.
template <class T>
class Result {
 public:
  Result(T value) : state_(std::move(value)) {}  // NOLINT: implicit by intent
  Result(ErrorCode code) : state_(code) {}       // NOLINT

  bool has_value() const noexcept { return state_.index() == 0; }
  explicit operator bool() const noexcept { return has_value(); }

  const T& value() const& {
    if (!has_value()) throw Error(error(), to_string(error()));
    return std::get<0>(state_);
  }
  T&& value() && {
    if (!has_value()) throw Error(error(), to_string(error()));
    return std::get<0>(std::move(state_));
  }
  const T& operator*() const& { return std::get<0>(state_); }
  const T* operator->() const { return &std::get<0>(state_); }

  ErrorCode error() const { return std::get<1>(state_); }

  T value_or(T fallback) const {
    return has_value() ? std::get<0>(state_) : fallback;
  }

 private:
  std::variant<T, ErrorCode> state_;
};

}  // namespace qterm
