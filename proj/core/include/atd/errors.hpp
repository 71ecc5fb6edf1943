#pragma once

#include <stdexcept>
#include <string>

namespace atd {

/// Base class for all recoverable errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define ATD_DEFINE_ERROR(Name)   \
  class Name : public Error {    \
   public:                       \
    using Error::Error;          \
  }

ATD_DEFINE_ERROR(EmptyMatrixError);
ATD_DEFINE_ERROR(NegativeEntryError);
ATD_DEFINE_ERROR(MaskViolationError);
ATD_DEFINE_ERROR(NotSquareError);
ATD_DEFINE_ERROR(DegenerateNormError);
ATD_DEFINE_ERROR(TrivialCutError);
ATD_DEFINE_ERROR(ZeroVolumeSideError);
ATD_DEFINE_ERROR(TooLargeError);
ATD_DEFINE_ERROR(TooSmallError);
ATD_DEFINE_ERROR(OutOfRangeError);
ATD_DEFINE_ERROR(AllSkippedError);
ATD_DEFINE_ERROR(EmptyListError);
ATD_DEFINE_ERROR(OneClassOnlyError);
ATD_DEFINE_ERROR(LengthMismatchError);
ATD_DEFINE_ERROR(MetricUndefinedError);
ATD_DEFINE_ERROR(BadMagicError);
ATD_DEFINE_ERROR(TruncatedPayloadError);
ATD_DEFINE_ERROR(NonFiniteValueError);
ATD_DEFINE_ERROR(MissingColumnError);
ATD_DEFINE_ERROR(ManifestUnreadableError);
ATD_DEFINE_ERROR(IoFailureError);

#undef ATD_DEFINE_ERROR

/// A query row whose attention mass sums to zero (fully masked query).
class ZeroRowDegreeError : public Error {
 public:
  explicit ZeroRowDegreeError(int row)
      : Error("zero row degree at row " + std::to_string(row)), row_(row) {}
  int row() const { return row_; }

 private:
  int row_;
};

/// A key column that no query attends to.
class ZeroColumnDegreeError : public Error {
 public:
  explicit ZeroColumnDegreeError(int col)
      : Error("zero column degree at column " + std::to_string(col)), col_(col) {}
  int col() const { return col_; }

 private:
  int col_;
};

class ConvergenceFailureError : public Error {
 public:
  explicit ConvergenceFailureError(int iterations)
      : Error("iterative SVD failed to converge after " +
              std::to_string(iterations) + " iterations"),
        iterations_(iterations) {}
  int iterations() const { return iterations_; }

 private:
  int iterations_;
};

}  // namespace atd
