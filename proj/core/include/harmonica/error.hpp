#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace harmonica {

/// Failure categories raised by the library. Per-file pipeline failures are
/// reported by name, so every enumerator has a stable string form.
enum class Errc {
  // midi ingestion
  MalformedHeader,
  MalformedTrack,
  UnsupportedFormat,
  SmpteTimingUnsupported,
  NoTimeSignature,
  InvalidTimeSignature,
  ZeroUnit,
  // key finding
  EmptyPiece,
  ZeroVariance,
  AlreadyTransposed,
  // corpus
  MalformedRow,
  DuplicatePath,
  InconsistentComposer,
  MixedTranspositionMode,
  CacheFormatMismatch,
  StaleParameters,
  // statistics
  EmptyTable,
  DomainError,
  InvalidYears,
  DegenerateX,
  TooFewPoints,
  ZeroSigmaC,
  NonPositiveValue,
  TooFewTailPoints,
  // synthesis
  BadGamma,
  InvalidSpec,
  UnrepresentableDuration,
  AmbiguousOverlap,
  // pipeline
  EmptyCorpus,
  Io,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace harmonica
