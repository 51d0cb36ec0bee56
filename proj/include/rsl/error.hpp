#ifndef RSL_ERROR_HPP_
#define RSL_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace rsl {

enum class ErrorCode {
  NotPrime,
  Reducible,
  FieldMismatch,
  DivideByZero,
  Inconsistent,
  Singular,
  FieldTooSmall,
  DegenerateLambda,
  LengthMismatch,
  SelfRepair,
  WrongHelperCount,
  SingularSystem,
  WrongNodeCount,
  RankDeficient,
  BadSelector,
  MixedFields,
  BadModel,
  AsymmetricLeakage,
  CapacityZero,
  BadQuery,
  BadParams,
  PayloadTooLarge,
  UnknownNode,
  IoError,
};

const char* to_string(ErrorCode code);

// All library failures are reported through this type; callers branch on
// code() rather than on the message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rsl

#endif  // RSL_ERROR_HPP_
