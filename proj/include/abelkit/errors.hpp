#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace abelkit {

enum class ErrorCode {
  invalid_input = 1,
  singularity,
  precondition,
  blow_up,
  quadrature,
  out_of_range,
  internal_consistency,
  parse,
  io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what)
      : Error(ErrorCode::invalid_input, what) {}
};

/// Evaluation requested at (or within the exclusion radius of) a singular
/// point, or a coefficient produced a non-finite value.
class SingularityError : public Error {
 public:
  SingularityError(std::string coefficient, double where, const std::string& what)
      : Error(ErrorCode::singularity, what),
        coefficient_(std::move(coefficient)),
        where_(where) {}
  const std::string& coefficient() const noexcept { return coefficient_; }
  double where() const noexcept { return where_; }

 private:
  std::string coefficient_;
  double where_;
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error(ErrorCode::precondition, what) {}
};

/// A solution branch leaves every bounded region before the requested
/// abscissa; `critical()` is where that happens.
class BlowUpError : public Error {
 public:
  BlowUpError(double critical, const std::string& what)
      : Error(ErrorCode::blow_up, what), critical_(critical) {}
  double critical() const noexcept { return critical_; }

 private:
  double critical_;
};

class QuadratureError : public Error {
 public:
  explicit QuadratureError(const std::string& what)
      : Error(ErrorCode::quadrature, what) {}
};

class OutOfRangeError : public Error {
 public:
  OutOfRangeError(std::vector<std::size_t> admissible, const std::string& what)
      : Error(ErrorCode::out_of_range, what), admissible_(std::move(admissible)) {}
  const std::vector<std::size_t>& admissible() const noexcept { return admissible_; }

 private:
  std::vector<std::size_t> admissible_;
};

class InternalConsistencyError : public Error {
 public:
  explicit InternalConsistencyError(const std::string& what)
      : Error(ErrorCode::internal_consistency, what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& what)
      : Error(ErrorCode::parse, what), offset_(offset), expected_(std::move(expected)) {}
  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

}  // namespace abelkit
