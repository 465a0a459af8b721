#pragma once

#include <stdexcept>
#include <string>

namespace hartree {

// Error kinds map onto CLI exit codes in verifier_cli.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// beta <= max(mu1, mu2) and similar violations of the standing hypotheses
class DomainError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class SingularInputError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConstructionError : public NumericalError {
 public:
  ConstructionError(const std::string& what, double achieved)
      : NumericalError(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hartree
