#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace seisreg {

/// Every named failure the library can raise. Callers switch on kind(),
/// the CLI maps category() onto its exit code.
enum class ErrorKind {
  // formats
  TruncatedFile,
  UnsupportedFormatCode,
  InconsistentTraceLength,
  DuplicateTrace,
  EmptyVolume,
  MissingSection,
  VersionUnsupported,
  RaggedRow,
  MalformedLas,
  MalformedVolume,
  // resample
  InvalidVelocityProfile,
  DepthOutOfRange,
  TargetOutsideSpan,
  DownsampleRequested,
  ZeroVariance,
  DegenerateRange,
  TooFewPatterns,
  // metrics
  TooShort,
  ZeroPower,
  LengthMismatch,
  DegenerateMarginal,
  ConstantActual,
  // ftreg / waveletreg / emdreg
  BandTooNarrow,
  TooManyLevels,
  SpecMismatch,
  UnknownWavelet,
  TooFewExtrema,
  P1OutOfRange,
  // mlp
  DimensionMismatch,
  InvalidParameter,
  DivergedNonFinite,
  // volpost
  GeometryMismatch,
  EmptyNeighborhood,
  // pipeline
  SpanTooLarge,
  ProvenanceOverlap,
  ConfigError,
  IoError,
};

enum class ErrorCategory { config, data, numeric };

std::string_view to_string(ErrorKind kind);
ErrorCategory category(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace seisreg
