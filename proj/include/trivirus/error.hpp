#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trivirus {

enum class ErrorCode {
    NonPositiveHealingRate,
    NegativeInfectionRate,
    DimensionMismatch,
    UnsupportedVirusCount,
    NegativeEntry,
    NotIrreducible,
    NotMetzler,
    NotSymmetric,
    NoConvergence,
    SubThresholdSystem,
    EigvecMismatch,
    ParameterOutOfRange,
    NotAnEquilibrium,
    SingularJacobian,
    ConstructionMismatch,
    CertificateInvalid,
    CertificateMismatch,
    InitialStateOutsideDomain,
    StepFailure,
    EmptyTrajectory,
    SchemaError,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. The code is stable and is what the
/// CLI maps onto exit codes and what reports record.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
    if (!condition) throw Error(code, what);
}

} // namespace trivirus
