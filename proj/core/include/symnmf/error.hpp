#pragma once

#include <stdexcept>
#include <string>

namespace symnmf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix violates a precondition (negative entry, asymmetry, zero norm, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// A Gram matrix restricted to some index set is not positive definite,
/// i.e. the design matrix C of an NNLS subproblem lost full column rank.
class RankDeficiencyError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver exceeded its safety cap.
class IterationLimitError : public Error {
 public:
  using Error::Error;
};

/// File could not be read, written or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Rethrows the in-flight library error with " (context)" appended, keeping
/// its dynamic type. Must be called from inside a catch block.
[[noreturn]] inline void rethrow_with_context(const std::string& context) {
  const auto annotate = [&](const std::exception& e) { return std::string(e.what()) + " (" + context + ")"; };
  try {
    throw;
  } catch (const DimensionError& e) {
    throw DimensionError(annotate(e));
  } catch (const InvalidInputError& e) {
    throw InvalidInputError(annotate(e));
  } catch (const RankDeficiencyError& e) {
    throw RankDeficiencyError(annotate(e));
  } catch (const IterationLimitError& e) {
    throw IterationLimitError(annotate(e));
  } catch (const IoError& e) {
    throw IoError(annotate(e));
  } catch (const Error& e) {
    throw Error(annotate(e));
  }
}

}  // namespace symnmf
