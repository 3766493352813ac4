#include "pianoaug/capture_sim.hpp"

#include "pianoaug/error.hpp"
#include "pianoaug/random.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace pianoaug::capture {

void ClockModel::validate() const {
    if (!(nominal_rate > 0.0)) throw Error(Errc::InvalidArgument, "nominal rate must be > 0");
    if (!(std::fabs(ppm_error) < 10000.0)) throw Error(Errc::InvalidArgument, fmt::format("ppm error {} out of range", ppm_error));
    if (!(jitter_std_s >= 0.0)) throw Error(Errc::InvalidArgument, "jitter must be >= 0");
}

std::string to_string(Strategy s) { return s == Strategy::WallClock ? "wall_clock" : "sample_clock"; }

std::vector<ScheduledEvent> schedule(const NoteSequence& seq, const ClockModel& clock, Strategy strategy,
                                     std::uint64_t seed) {
    clock.validate();
    std::vector<ScheduledEvent> events;
    events.reserve(seq.notes.size() * 2);
    for (const auto& n : seq.notes) {
        events.push_back({Boundary::On, n.pitch, n.onset, 0});
        events.push_back({Boundary::Off, n.pitch, n.offset, 0});
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const auto& a, const auto& b) { return a.ideal_time_s < b.ideal_time_s; });

    const double rate = strategy == Strategy::SampleClock ? clock.nominal_rate
                                                          : clock.nominal_rate * (1.0 + clock.ppm_error * 1e-6);
    Rng rng(seed);
    for (auto& ev : events) {
        const double jitter = clock.jitter_std_s > 0.0 ? clock.jitter_std_s * rng.normal() : 0.0;
        const auto idx = std::llround((ev.ideal_time_s + jitter) * rate);
        ev.realized_sample_index = std::max<std::int64_t>(0, idx);
    }
    return events;
}

DriftStats measure_drift(const std::vector<ScheduledEvent>& events, double nominal_rate) {
    if (events.size() < 2) throw Error(Errc::TooFewEvents, fmt::format("{} events; need at least 2", events.size()));
    const auto n = static_cast<double>(events.size());
    double mean_t = 0.0, mean_e = 0.0, max_abs = 0.0;
    std::vector<double> err(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        err[i] = static_cast<double>(events[i].realized_sample_index) / nominal_rate - events[i].ideal_time_s;
        max_abs = std::max(max_abs, std::fabs(err[i]));
        mean_t += events[i].ideal_time_s;
        mean_e += err[i];
    }
    mean_t /= n;
    mean_e /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const double dt = events[i].ideal_time_s - mean_t;
        sxy += dt * (err[i] - mean_e);
        sxx += dt * dt;
    }
    return {max_abs, sxx > 0.0 ? sxy / sxx : 0.0};
}

}  // namespace pianoaug::capture
