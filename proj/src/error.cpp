#include "pianoaug/error.hpp"

namespace pianoaug {

std::string_view to_string(Errc code) {
    switch (code) {
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::TruncatedTrack: return "TruncatedTrack";
    case Errc::MalformedTrack: return "MalformedTrack";
    case Errc::UnpairedNoteOn: return "UnpairedNoteOn";
    case Errc::UnsupportedEncoding: return "UnsupportedEncoding";
    case Errc::MalformedRiff: return "MalformedRiff";
    case Errc::SampleRateMismatch: return "SampleRateMismatch";
    case Errc::BandAboveNyquist: return "BandAboveNyquist";
    case Errc::SilentSignal: return "SilentSignal";
    case Errc::SilentNoise: return "SilentNoise";
    case Errc::SilentImpulseResponse: return "SilentImpulseResponse";
    case Errc::EmptyBank: return "EmptyBank";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::WeightsDoNotSumToOne: return "WeightsDoNotSumToOne";
    case Errc::TooFewEvents: return "TooFewEvents";
    case Errc::InvalidMode: return "InvalidMode";
    case Errc::ConfigError: return "ConfigError";
    case Errc::DatasetMissing: return "DatasetMissing";
    case Errc::TranscriberFailed: return "TranscriberFailed";
    case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace pianoaug
