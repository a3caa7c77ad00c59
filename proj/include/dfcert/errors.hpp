#pragma once

#include <stdexcept>
#include <string>

namespace dfcert {

// Every failure the library can raise, by name. The CLI maps these to exit codes.
enum class Errc {
    NegativeEntry,
    ZeroSum,
    DimensionTooSmall,
    BadDelta,
    NonPositiveWeight,
    WeightSumNotOne,
    StarGraphDetected,
    CornerPoint,
    NotAFixedPoint,
    StepTooLarge,
    NotSymmetric,
    NoConvergence,
    AsymmetryDetected,
    SingularMatrix,
    SingularNewtonMatrix,
    SpectralGapTooSmall,
    LeftDomain,
    NotInBasin,
    TailTooShort,
    NotStronglyConnected,
    InvalidMatrix,
    ConsistencyCheckFailed,
    InvalidArgument,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace dfcert
