#pragma once

#include <stdexcept>
#include <string>

namespace cgc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ClosureExceedsCap : Error {
  explicit ClosureExceedsCap(const std::string& what) : Error(what) {}
};
struct InvalidPermutation : Error {
  explicit InvalidPermutation(const std::string& what) : Error(what) {}
};
struct NotPrime : Error {
  explicit NotPrime(const std::string& what) : Error(what) {}
};
struct GroupMismatch : Error {
  explicit GroupMismatch(const std::string& what) : Error(what) {}
};
struct AlphabetMismatch : Error {
  explicit AlphabetMismatch(const std::string& what) : Error(what) {}
};
struct KMismatch : Error {
  explicit KMismatch(const std::string& what) : Error(what) {}
};
struct NotStabilized : Error {
  explicit NotStabilized(const std::string& what) : Error(what) {}
};
struct ConvergenceFailure : Error {
  explicit ConvergenceFailure(const std::string& what) : Error(what) {}
};
struct InsufficientData : Error {
  explicit InsufficientData(const std::string& what) : Error(what) {}
};
struct NotSelfAdjoint : Error {
  explicit NotSelfAdjoint(const std::string& what) : Error(what) {}
};
struct SupportExceedsBall : Error {
  explicit SupportExceedsBall(const std::string& what) : Error(what) {}
};
struct NotInGroupAlgebra : Error {
  explicit NotInGroupAlgebra(const std::string& what) : Error(what) {}
};
struct PropagationExceeded : Error {
  explicit PropagationExceeded(const std::string& what) : Error(what) {}
};
struct BallTooSmall : Error {
  explicit BallTooSmall(const std::string& what) : Error(what) {}
};
struct NotWithinBlocks : Error {
  explicit NotWithinBlocks(const std::string& what) : Error(what) {}
};
struct DegreeUnsupported : Error {
  explicit DegreeUnsupported(const std::string& what) : Error(what) {}
};
struct NotACocycle : Error {
  explicit NotACocycle(const std::string& what) : Error(what) {}
};
struct CapExceeded : Error {
  explicit CapExceeded(const std::string& what) : Error(what) {}
};
struct IoError : Error {
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace cgc
