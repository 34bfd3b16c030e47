#pragma once

#include <stdexcept>
#include <string>

namespace mf {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// geometry
struct EmptySetError : Error {
  using Error::Error;
};
struct DegenerateError : Error {
  using Error::Error;
};

// tracker
struct NotInitializedError : Error {
  using Error::Error;
};
struct TargetMissingError : Error {
  using Error::Error;
};
struct DuplicateTagError : Error {
  using Error::Error;
};
struct UnknownTagError : Error {
  using Error::Error;
};
struct VioGapError : Error {
  using Error::Error;
};
struct ClockSkewError : Error {
  using Error::Error;
};
struct NegativeDelayError : Error {
  using Error::Error;
};

// scene
struct MissingRootError : Error {
  using Error::Error;
};
struct KinematicsGapError : Error {
  using Error::Error;
};

// sim / eval / io
struct ConfigError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};
struct NoEstimatesError : Error {
  using Error::Error;
};

}  // namespace mf
