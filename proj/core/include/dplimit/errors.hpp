#pragma once

#include <stdexcept>
#include <string>

namespace dplimit {

// Base for every error raised by the library. The CLI maps the concrete
// subclasses onto exit codes (2 = bad input, 3 = resource cap).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed weights, parameters out of range, unknown JSON kind.
class InvalidEvaluation : public Error {
 public:
  using Error::Error;
};

// shift() of an evaluation putting all of its mass on stage 1.
class DegenerateEvaluation : public Error {
 public:
  using Error::Error;
};

// A problem or gambling house violating its structural invariants.
class InvalidInstance : public Error {
 public:
  using Error::Error;
};

class UnknownState : public Error {
 public:
  using Error::Error;
};

// Horizon beyond a generated problem's depth cap, or expansion past a window.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class NotUncontrolled : public Error {
 public:
  using Error::Error;
};

// Oracle enumeration would exceed its leaf budget.
class ExplosionGuard : public Error {
 public:
  using Error::Error;
};

class SupportExceedsHorizon : public Error {
 public:
  using Error::Error;
};

class InvalidFamily : public Error {
 public:
  using Error::Error;
};

}  // namespace dplimit
