#pragma once

#include <stdexcept>
#include <string>

namespace cohomolab {

class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define COHOMOLAB_ERROR(Name)                                                 \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& what) : Error(#Name, what) {}        \
    };

// exactalg
COHOMOLAB_ERROR(ContainmentViolation)
COHOMOLAB_ERROR(NotWellDefined)
COHOMOLAB_ERROR(DimensionMismatch)
// complexes
COHOMOLAB_ERROR(InvalidComplex)
COHOMOLAB_ERROR(NotChainMap)
COHOMOLAB_ERROR(NotASphere)
// simplicial
COHOMOLAB_ERROR(NotFaceClosed)
COHOMOLAB_ERROR(NotASubcomplex)
COHOMOLAB_ERROR(NotSimplicial)
COHOMOLAB_ERROR(UnsupportedKind)
COHOMOLAB_ERROR(AlreadyOrientable)
// spectral
COHOMOLAB_ERROR(FiltrationNotPreserved)
COHOMOLAB_ERROR(OutOfRange)
COHOMOLAB_ERROR(PageMismatch)
COHOMOLAB_ERROR(AxiomViolation)
COHOMOLAB_ERROR(InsufficientData)
COHOMOLAB_ERROR(NotADoubleComplex)
// cechgeom
COHOMOLAB_ERROR(ChartIncompatible)
COHOMOLAB_ERROR(NotClosed)
COHOMOLAB_ERROR(NotATrivialization)
COHOMOLAB_ERROR(BidegreeMismatch)
COHOMOLAB_ERROR(NotACocycle)
COHOMOLAB_ERROR(GluingMismatch)
COHOMOLAB_ERROR(NotConstantCoboundary)
// clifford
COHOMOLAB_ERROR(SignatureMismatch)
COHOMOLAB_ERROR(OddDimension)
COHOMOLAB_ERROR(NotInPin)
COHOMOLAB_ERROR(IndexOrder)
// io
COHOMOLAB_ERROR(ParseError)

#undef COHOMOLAB_ERROR

} // namespace cohomolab
