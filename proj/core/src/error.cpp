#include "harmonica/error.hpp"

namespace harmonica {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::MalformedTrack: return "MalformedTrack";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::SmpteTimingUnsupported: return "SmpteTimingUnsupported";
    case Errc::NoTimeSignature: return "NoTimeSignature";
    case Errc::InvalidTimeSignature: return "InvalidTimeSignature";
    case Errc::ZeroUnit: return "ZeroUnit";
    case Errc::EmptyPiece: return "EmptyPiece";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::AlreadyTransposed: return "AlreadyTransposed";
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::DuplicatePath: return "DuplicatePath";
    case Errc::InconsistentComposer: return "InconsistentComposer";
    case Errc::MixedTranspositionMode: return "MixedTranspositionMode";
    case Errc::CacheFormatMismatch: return "CacheFormatMismatch";
    case Errc::StaleParameters: return "StaleParameters";
    case Errc::EmptyTable: return "EmptyTable";
    case Errc::DomainError: return "DomainError";
    case Errc::InvalidYears: return "InvalidYears";
    case Errc::DegenerateX: return "DegenerateX";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::ZeroSigmaC: return "ZeroSigmaC";
    case Errc::NonPositiveValue: return "NonPositiveValue";
    case Errc::TooFewTailPoints: return "TooFewTailPoints";
    case Errc::BadGamma: return "BadGamma";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::UnrepresentableDuration: return "UnrepresentableDuration";
    case Errc::AmbiguousOverlap: return "AmbiguousOverlap";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace harmonica
