#pragma once

#include <functional>
#include <string>

#include "gramtao/value.hpp"

namespace gramtao {

enum class FailureClass { None, OracleMismatch, SutCrash, SutTimeout };

const char* failure_class_name(FailureClass c);

struct CheckOutcome {
  FailureClass cls = FailureClass::None;  // None means the check passed
  std::string actual;
};

// Judges one rendered test against its oracle. Implementations wrap an
// external SUT (see harness) or an in-process predicate in tests.
// Infrastructure trouble must be thrown (HarnessError), never encoded as a
// verdict.
using FailureChecker = std::function<CheckOutcome(const std::string& text, const SemValue& oracle)>;

}  // namespace gramtao
