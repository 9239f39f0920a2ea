#pragma once

#include <stdexcept>
#include <string>

namespace cliffordlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define CLIFFORDLAB_ERROR(Name)                                   \
  struct Name : Error {                                           \
    explicit Name(const std::string& what = #Name) : Error(what) {} \
  }

CLIFFORDLAB_ERROR(DivisionByZero);
CLIFFORDLAB_ERROR(MixedRings);
CLIFFORDLAB_ERROR(InconsistentBinding);
CLIFFORDLAB_ERROR(NonSquare);
CLIFFORDLAB_ERROR(DimMismatch);
CLIFFORDLAB_ERROR(NotInvertible);
CLIFFORDLAB_ERROR(DegenerateMetric);
CLIFFORDLAB_ERROR(OutOfRange);
CLIFFORDLAB_ERROR(NonlinearInParams);
CLIFFORDLAB_ERROR(UnsupportedSystem);
CLIFFORDLAB_ERROR(NotInSpan);
CLIFFORDLAB_ERROR(NoSolution);
CLIFFORDLAB_ERROR(UnsupportedSignature);
CLIFFORDLAB_ERROR(NotRepresentable);
CLIFFORDLAB_ERROR(NotSymmetric);
CLIFFORDLAB_ERROR(SignatureUnavailable);
CLIFFORDLAB_ERROR(NotAnEigenvalue);
CLIFFORDLAB_ERROR(NotAVector);
CLIFFORDLAB_ERROR(OutOfBall);
CLIFFORDLAB_ERROR(ZeroAxis);
CLIFFORDLAB_ERROR(BadShape);
CLIFFORDLAB_ERROR(ParseError);

#undef CLIFFORDLAB_ERROR

}  // namespace cliffordlab
