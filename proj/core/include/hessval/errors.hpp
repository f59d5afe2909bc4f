#pragma once

#include <stdexcept>
#include <string>

namespace hessval {

// One exception type per failure mode of the public API.  All of them
// derive from Error so callers can catch the whole family at once.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define HESSVAL_DEFINE_ERROR(Name)                              \
    struct Name : Error {                                       \
        explicit Name(const std::string& msg) : Error(msg) {}   \
    }

HESSVAL_DEFINE_ERROR(DimensionMismatch);
HESSVAL_DEFINE_ERROR(NotDifferentiable);
HESSVAL_DEFINE_ERROR(UnboundedResult);
HESSVAL_DEFINE_ERROR(NonpositiveScale);
HESSVAL_DEFINE_ERROR(NonConvexMin);
HESSVAL_DEFINE_ERROR(EmptyDomain);
HESSVAL_DEFINE_ERROR(UnboundedDomain);
HESSVAL_DEFINE_ERROR(UnsupportedVariant);
HESSVAL_DEFINE_ERROR(IndexOutOfRange);
HESSVAL_DEFINE_ERROR(DegenerateFit);
HESSVAL_DEFINE_ERROR(NonAlignedSubspaces);
HESSVAL_DEFINE_ERROR(OriginSingularity);
HESSVAL_DEFINE_ERROR(ClassViolation);
HESSVAL_DEFINE_ERROR(NonSmoothXi);
HESSVAL_DEFINE_ERROR(SingularHessian);
HESSVAL_DEFINE_ERROR(IllConditionedVandermonde);
HESSVAL_DEFINE_ERROR(NonRadial);
HESSVAL_DEFINE_ERROR(UsageError);

#undef HESSVAL_DEFINE_ERROR

}  // namespace hessval
