#pragma once

#include <stdexcept>
#include <string>

namespace czupt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFiniteState : public Error {
 public:
  using Error::Error;
};

/// Pitch (or roll) too close to +-pi/2 for the Euler-angle kinematics.
class GimbalProximity : public Error {
 public:
  using Error::Error;
};

class EmptyMeasurementSet : public Error {
 public:
  EmptyMeasurementSet() : Error("measurement set is empty") {}
};

class NotStabilizable : public Error {
 public:
  using Error::Error;
};

class NotDetectable : public Error {
 public:
  using Error::Error;
};

class SingularInnovation : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Demanded electrical power exceeds what the pack can deliver.
class PowerInfeasible : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace czupt
