#ifndef CORRCOLIM_ERRORS_HPP
#define CORRCOLIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace corrcolim {

enum class ErrorKind {
  InvalidBlock,
  ShapeError,
  NotAnExpectation,
  DegenerateAction,
  NotPositive,
  CompositionError,
  InvalidDiagram,
  NotACone,
  NotSurjective,
  NotEvaluable,
  NotSaturated,
  DecompositionFailed,
  InvalidAssignment,
  ParseError,
  NameError,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg);
  ErrorKind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace corrcolim

#endif
