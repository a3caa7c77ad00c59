#include "dfcert/errors.hpp"

namespace dfcert {

const char* errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::NegativeEntry: return "NegativeEntry";
        case Errc::ZeroSum: return "ZeroSum";
        case Errc::DimensionTooSmall: return "DimensionTooSmall";
        case Errc::BadDelta: return "BadDelta";
        case Errc::NonPositiveWeight: return "NonPositiveWeight";
        case Errc::WeightSumNotOne: return "WeightSumNotOne";
        case Errc::StarGraphDetected: return "StarGraphDetected";
        case Errc::CornerPoint: return "CornerPoint";
        case Errc::NotAFixedPoint: return "NotAFixedPoint";
        case Errc::StepTooLarge: return "StepTooLarge";
        case Errc::NotSymmetric: return "NotSymmetric";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::AsymmetryDetected: return "AsymmetryDetected";
        case Errc::SingularMatrix: return "SingularMatrix";
        case Errc::SingularNewtonMatrix: return "SingularNewtonMatrix";
        case Errc::SpectralGapTooSmall: return "SpectralGapTooSmall";
        case Errc::LeftDomain: return "LeftDomain";
        case Errc::NotInBasin: return "NotInBasin";
        case Errc::TailTooShort: return "TailTooShort";
        case Errc::NotStronglyConnected: return "NotStronglyConnected";
        case Errc::InvalidMatrix: return "InvalidMatrix";
        case Errc::ConsistencyCheckFailed: return "ConsistencyCheckFailed";
        case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "UnknownError";
}

} // namespace dfcert
