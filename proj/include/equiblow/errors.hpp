#ifndef EQUIBLOW_ERRORS_HPP
#define EQUIBLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace equiblow {

/// Base class for every engine error. The CLI maps subclasses to exit codes:
/// termination-guard failures exit 2, invariance failures exit 3, everything
/// else (parse, I/O, stale reports) exits 1.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// The zero ideal (empty generator set) has no representation here.
class ZeroIdealError : public Error {
 public:
  explicit ZeroIdealError(const std::string& what) : Error(what) {}
};

/// Operands live in different polynomial rings (exponent vectors of
/// different lengths), or an arity is out of range.
class ArityError : public Error {
 public:
  explicit ArityError(const std::string& what) : Error(what) {}
};

/// An exponent exceeded the configured cap during an operation.
class ExponentOverflowError : public Error {
 public:
  explicit ExponentOverflowError(const std::string& what) : Error(what) {}
};

/// Blowup requested on a chart that already has children.
class NotLeafError : public Error {
 public:
  explicit NotLeafError(const std::string& what) : Error(what) {}
};

/// Center is not a coordinate subspace of codimension >= 2 (fewer than two
/// distinct variables, or indices out of range).
class InvalidCenterError : public Error {
 public:
  explicit InvalidCenterError(const std::string& what) : Error(what) {}
};

class ChartNotFoundError : public Error {
 public:
  explicit ChartNotFoundError(const std::string& what) : Error(what) {}
};

/// Group closure produced two elements with the same variable permutation
/// but conflicting ideal/coordinate permutations.
class InconsistentActionError : public Error {
 public:
  explicit InconsistentActionError(const std::string& what) : Error(what) {}
};

/// A group element fails to preserve the collection (or a claimed
/// permutation does not match the values).
class NotInvariantError : public Error {
 public:
  explicit NotInvariantError(const std::string& what) : Error(what) {}
};

/// A tower cannot be transported along a group element: some chart's image
/// chart does not exist, or substitutions fail to commute.
class EquivarianceBrokenError : public Error {
 public:
  explicit EquivarianceBrokenError(const std::string& what) : Error(what) {}
};

/// select_step called although every leaf pullback is already principal.
class NothingToDoError : public Error {
 public:
  explicit NothingToDoError(const std::string& what) : Error(what) {}
};

/// The step budget ran out before every leaf became principal. Carries the
/// defect trace accumulated so far, serialized one iteration per line, so
/// failures can be archived as counterexample artifacts.
class TerminationGuardError : public Error {
 public:
  TerminationGuardError(const std::string& what, std::string trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::string& trace() const { return trace_; }

 private:
  std::string trace_;
};

/// An operation's documented precondition failed (e.g. conductor requested
/// with a non-principal stage ideal).
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(what) {}
};

/// Report/problem hash mismatch during verification.
class StaleReportError : public Error {
 public:
  explicit StaleReportError(const std::string& what) : Error(what) {}
};

/// Problem-file diagnostics carry a JSON path ("ideals[0][1]") and a stable
/// machine-readable code alongside the human message.
class ParseError : public Error {
 public:
  ParseError(std::string path, std::string code, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)),
        code_(std::move(code)) {}
  const std::string& path() const { return path_; }
  const std::string& code() const { return code_; }

 private:
  std::string path_;
  std::string code_;
};

}  // namespace equiblow

#endif  // EQUIBLOW_ERRORS_HPP
