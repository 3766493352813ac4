#pragma once

#include "pianoaug/notes.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pianoaug::capture {

struct ClockModel {
    double nominal_rate = 48000.0;  // Hz
    double ppm_error = 0.0;         // true rate = nominal * (1 + ppm / 1e6)
    double jitter_std_s = 0.0;

    void validate() const;
};

enum class Strategy { WallClock, SampleClock };

enum class Boundary { On, Off };

struct ScheduledEvent {
    Boundary boundary = Boundary::On;
    int pitch = 0;
    double ideal_time_s = 0.0;
    std::int64_t realized_sample_index = 0;
};

/// Place every note-on/off on the recording timeline.
///
/// Sample-clock playback counts device samples, so the index is
/// round((t + jitter) * nominal). Wall-clock playback fires at wall time t,
/// when the drifting device has produced round((t + jitter) * nominal * (1 + ppm/1e6))
/// samples. Jitter is one Gaussian draw per event in time order, shared by
/// both strategies for a given seed.
std::vector<ScheduledEvent> schedule(const NoteSequence& seq, const ClockModel& clock, Strategy strategy,
                                     std::uint64_t seed = 0);

struct DriftStats {
    double max_abs_error_s = 0.0;
    double slope_s_per_s = 0.0;  // least-squares fit of error against ideal time
};

/// Throws TooFewEvents with fewer than two events.
DriftStats measure_drift(const std::vector<ScheduledEvent>& events, double nominal_rate);

std::string to_string(Strategy s);

}  // namespace pianoaug::capture
