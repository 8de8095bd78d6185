#pragma once

#include <stdexcept>
#include <string>

namespace heftsim {

enum class ErrorCode {
  CycleDetected,
  DanglingEdge,
  EmptyDag,
  NoSupportedPe,
  WrongPhase,
  QueueFull,
  EventTooLarge,
  TooLarge,
  ParseError,
  ValidationError,
  Incomplete,
  NoCompletions,
  TooFewPoints,
  DomainMismatch,
  TimeOverflow,
  BadConfig,
};

class SimError : public std::runtime_error {
 public:
  SimError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace heftsim
