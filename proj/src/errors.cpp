#include "corrcolim/errors.hpp"

namespace corrcolim {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidBlock: return "InvalidBlock";
    case ErrorKind::ShapeError: return "ShapeError";
    case ErrorKind::NotAnExpectation: return "NotAnExpectation";
    case ErrorKind::DegenerateAction: return "DegenerateAction";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::CompositionError: return "CompositionError";
    case ErrorKind::InvalidDiagram: return "InvalidDiagram";
    case ErrorKind::NotACone: return "NotACone";
    case ErrorKind::NotSurjective: return "NotSurjective";
    case ErrorKind::NotEvaluable: return "NotEvaluable";
    case ErrorKind::NotSaturated: return "NotSaturated";
    case ErrorKind::DecompositionFailed: return "DecompositionFailed";
    case ErrorKind::InvalidAssignment: return "InvalidAssignment";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NameError: return "NameError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& msg)
    : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind), detail_(msg) {}

}  // namespace corrcolim
