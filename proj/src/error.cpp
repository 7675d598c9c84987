#include "seisreg/error.hpp"

namespace seisreg {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::TruncatedFile: return "TruncatedFile";
    case ErrorKind::UnsupportedFormatCode: return "UnsupportedFormatCode";
    case ErrorKind::InconsistentTraceLength: return "InconsistentTraceLength";
    case ErrorKind::DuplicateTrace: return "DuplicateTrace";
    case ErrorKind::EmptyVolume: return "EmptyVolume";
    case ErrorKind::MissingSection: return "MissingSection";
    case ErrorKind::VersionUnsupported: return "VersionUnsupported";
    case ErrorKind::RaggedRow: return "RaggedRow";
    case ErrorKind::MalformedLas: return "MalformedLas";
    case ErrorKind::MalformedVolume: return "MalformedVolume";
    case ErrorKind::InvalidVelocityProfile: return "InvalidVelocityProfile";
    case ErrorKind::DepthOutOfRange: return "DepthOutOfRange";
    case ErrorKind::TargetOutsideSpan: return "TargetOutsideSpan";
    case ErrorKind::DownsampleRequested: return "DownsampleRequested";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::DegenerateRange: return "DegenerateRange";
    case ErrorKind::TooFewPatterns: return "TooFewPatterns";
    case ErrorKind::TooShort: return "TooShort";
    case ErrorKind::ZeroPower: return "ZeroPower";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::DegenerateMarginal: return "DegenerateMarginal";
    case ErrorKind::ConstantActual: return "ConstantActual";
    case ErrorKind::BandTooNarrow: return "BandTooNarrow";
    case ErrorKind::TooManyLevels: return "TooManyLevels";
    case ErrorKind::SpecMismatch: return "SpecMismatch";
    case ErrorKind::UnknownWavelet: return "UnknownWavelet";
    case ErrorKind::TooFewExtrema: return "TooFewExtrema";
    case ErrorKind::P1OutOfRange: return "P1OutOfRange";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::DivergedNonFinite: return "DivergedNonFinite";
    case ErrorKind::GeometryMismatch: return "GeometryMismatch";
    case ErrorKind::EmptyNeighborhood: return "EmptyNeighborhood";
    case ErrorKind::SpanTooLarge: return "SpanTooLarge";
    case ErrorKind::ProvenanceOverlap: return "ProvenanceOverlap";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

ErrorCategory category(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidParameter:
    case ErrorKind::UnknownWavelet:
    case ErrorKind::P1OutOfRange:
    case ErrorKind::SpanTooLarge:
    case ErrorKind::TooManyLevels:
    case ErrorKind::BandTooNarrow:
      return ErrorCategory::config;
    case ErrorKind::DivergedNonFinite:
      return ErrorCategory::numeric;
    default:
      return ErrorCategory::data;
  }
}

}  // namespace seisreg
