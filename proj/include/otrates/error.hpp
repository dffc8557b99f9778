#pragma once

#include <stdexcept>
#include <string>

namespace otrates {

// Base class for all library errors. Subcommands map these to exit code 1
// (validation) while ContractViolation maps to exit code 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidWeights : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class SizeCapExceeded : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class OffsetTooSmall : public Error {
 public:
  using Error::Error;
};

class MassMismatch : public Error {
 public:
  using Error::Error;
};

class LayerMismatch : public Error {
 public:
  using Error::Error;
};

class EnvelopeViolation : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

class NoReference : public Error {
 public:
  using Error::Error;
};

class SolverCap : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

class CriterionNotMet : public Error {
 public:
  using Error::Error;
};

class HypothesisViolated : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A mathematical guarantee that should hold by theorem failed at runtime.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace otrates
