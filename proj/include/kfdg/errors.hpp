#pragma once

#include <stdexcept>
#include <string>

namespace kfdg {

/// Base class for solver failures that are not plain argument errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A trace was requested on a boundary face from a side that has no element.
class MissingNeighbor : public Error {
 public:
  MissingNeighbor(int face, const std::string& side)
      : Error("face " + std::to_string(face) + " has no element on side " + side),
        face_(face) {}
  int face() const { return face_; }

 private:
  int face_;
};

class UnsupportedBoundary : public Error {
 public:
  using Error::Error;
};

/// A diagnostic was called for a scheme variant where it has no meaning.
class NotApplicable : public Error {
 public:
  using Error::Error;
};

/// Non-physical gas state (rho <= 0 or internal energy <= 0).
///
/// `element` and `point` are -1 when the state was not attached to a mesh
/// location. Assembly routines rethrow with the location filled in.
class PositivityViolation : public Error {
 public:
  explicit PositivityViolation(const std::string& what, int element = -1, int point = -1)
      : Error(Describe(what, element, point)), detail_(what), element_(element), point_(point) {}

  int element() const { return element_; }
  int point() const { return point_; }
  const std::string& detail() const { return detail_; }

  PositivityViolation At(int element, int point) const {
    return PositivityViolation(detail_, element, point);
  }

 private:
  static std::string Describe(const std::string& what, int element, int point) {
    std::string msg = "positivity violation: " + what;
    if (element >= 0) msg += " (element " + std::to_string(element);
    if (element >= 0 && point >= 0) msg += ", point " + std::to_string(point);
    if (element >= 0) msg += ")";
    return msg;
  }

  std::string detail_;
  int element_;
  int point_;
};

/// Time step could not be completed (Newton stagnation, or a failing stage).
class StepFailure : public Error {
 public:
  StepFailure(const std::string& what, double residual, int stage = -1)
      : Error(what), residual_(residual), stage_(stage) {}
  double residual() const { return residual_; }
  int stage() const { return stage_; }

 private:
  double residual_;
  int stage_;
};

class ProfileError : public Error {
 public:
  using Error::Error;
};

/// Configuration validation failure; `field` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace kfdg
