#pragma once
#include <stdexcept>
#include <string>

namespace curvecp {

enum class Errc {
    StaticDrudeDivergence,
    NegativeFrequency,
    UnknownMaterial,
    ZeroTemperature,
    PECUnsupportedSector,
    SingularResolvent,
    QuadratureNonConvergence,
    PatternViolation,
    CacheWriteFailure,
    GridTooCoarse,
    OverflowDomain,
    NonConvergentMultipoleSum,
    TableCoverage,
    ConfigError,
};

inline const char* errc_name(Errc c) {
    switch (c) {
    case Errc::StaticDrudeDivergence: return "StaticDrudeDivergence";
    case Errc::NegativeFrequency: return "NegativeFrequency";
    case Errc::UnknownMaterial: return "UnknownMaterial";
    case Errc::ZeroTemperature: return "ZeroTemperature";
    case Errc::PECUnsupportedSector: return "PECUnsupportedSector";
    case Errc::SingularResolvent: return "SingularResolvent";
    case Errc::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case Errc::PatternViolation: return "PatternViolation";
    case Errc::CacheWriteFailure: return "CacheWriteFailure";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::OverflowDomain: return "OverflowDomain";
    case Errc::NonConvergentMultipoleSum: return "NonConvergentMultipoleSum";
    case Errc::TableCoverage: return "TableCoverage";
    case Errc::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

} // namespace curvecp
