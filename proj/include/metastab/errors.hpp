#pragma once

#include <stdexcept>
#include <string>

namespace metastab {

/// Base class for all library errors. `kind()` is a stable machine-readable tag
/// used by the CLI when reporting structured errors.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define METASTAB_DEFINE_ERROR(Name)                                         \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& what) : Error(#Name, what) {}      \
    }

METASTAB_DEFINE_ERROR(NoConvergence);
METASTAB_DEFINE_ERROR(DegenerateHessian);
METASTAB_DEFINE_ERROR(WrongKind);
METASTAB_DEFINE_ERROR(ShapeMismatch);
METASTAB_DEFINE_ERROR(NonFinite);
METASTAB_DEFINE_ERROR(SingularSystem);
METASTAB_DEFINE_ERROR(OverlappingSets);
METASTAB_DEFINE_ERROR(DomainError);
METASTAB_DEFINE_ERROR(DegeneratePath);
METASTAB_DEFINE_ERROR(OutOfRange);
METASTAB_DEFINE_ERROR(InsufficientData);
METASTAB_DEFINE_ERROR(InvalidArgument);
/// Every replica of a hitting-time batch reached t_max without hitting.
METASTAB_DEFINE_ERROR(AllCensored);

#undef METASTAB_DEFINE_ERROR

}  // namespace metastab
