#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pianoaug {

enum class Errc {
    MalformedHeader,
    TruncatedTrack,
    MalformedTrack,
    UnpairedNoteOn,
    UnsupportedEncoding,
    MalformedRiff,
    SampleRateMismatch,
    BandAboveNyquist,
    SilentSignal,
    SilentNoise,
    SilentImpulseResponse,
    EmptyBank,
    InvalidArgument,
    EmptyCorpus,
    WeightsDoNotSumToOne,
    TooFewEvents,
    InvalidMode,
    ConfigError,
    DatasetMissing,
    TranscriberFailed,
    IoError,
};

std::string_view to_string(Errc code);

/// Single exception type for the toolkit; `code()` identifies the failure class.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace pianoaug
