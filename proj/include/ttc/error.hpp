#pragma once

#include <stdexcept>
#include <string>

namespace ttc {

// Failure kinds named by the operation contracts.
enum class Errc {
  DivisionByZero,
  InvalidInput,
  DegenerateInput,
  SingularConic,
  CurveContainsConic,
  CollinearInput,
  NotConnected,
  UnsupportedFormat,
  InconsistentTangencyData,
  TypeClassificationFailure,
  Falsified,  // a verified mathematical claim failed to hold on the data
  IOError,
  ConfigError,
  UsageError,
};

class Error : public std::runtime_error {
 public:
  Error(Errc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Errc kind() const noexcept { return kind_; }

 private:
  Errc kind_;
};

[[noreturn]] inline void fail(Errc k, const std::string& msg) { throw Error(k, msg); }

inline void check(bool ok, Errc k, const std::string& msg) {
  if (!ok) fail(k, msg);
}

}  // namespace ttc
