#include "pianoaug/augment.hpp"

#include "pianoaug/random.hpp"

#include "json.hpp"

#include <fmt/format.h>

namespace pianoaug::augment {

using nlohmann::json;

std::string_view to_string(Stage stage) {
    switch (stage) {
    case Stage::Eq1: return "eq1";
    case Stage::Noise: return "noise";
    case Stage::Pitch: return "pitch";
    case Stage::Eq2: return "eq2";
    case Stage::Reverb: return "reverb";
    }
    return "?";
}

void AugmentConfig::validate() const {
    for (std::size_t i = 0; i < kStageCount; ++i) {
        const double p = stage_probability[i];
        if (!(p >= 0.0 && p <= 1.0))
            throw Error(Errc::InvalidArgument, fmt::format("stage {} probability {} outside [0, 1]", to_string(kStageOrder[i]), p));
    }
    auto check = [](const Range& r, std::string_view name) {
        if (!(r.low <= r.high) || !std::isfinite(r.low) || !std::isfinite(r.high))
            throw Error(Errc::InvalidArgument, fmt::format("{} range [{}, {}] is inverted", name, r.low, r.high));
    };
    check(eq_gain_db, "EQ gain");
    check(snr_db, "SNR");
    check(pitch_cents, "pitch");
}

bool AppliedLog::applied(Stage s) const {
    switch (s) {
    case Stage::Eq1: return eq1.applied;
    case Stage::Noise: return noise.applied;
    case Stage::Pitch: return pitch.applied;
    case Stage::Eq2: return eq2.applied;
    case Stage::Reverb: return reverb.applied;
    }
    return false;
}

AppliedLog draw_log(const AugmentConfig& config, const Banks& banks, std::uint64_t seed) {
    config.validate();
    Rng rng(seed);
    AppliedLog log;
    log.seed = seed;

    auto flag = [&](Stage s) { return rng.uniform() < config.probability(s); };
    auto require = [&](Stage s, std::size_t n) {
        if (n == 0 && config.probability(s) > 0.0)
            throw Error(Errc::EmptyBank, fmt::format("stage {} enabled with an empty bank", to_string(s)));
    };
    auto draw_index = [&](std::size_t n) { return n > 0 ? rng.index(n) : (rng.uniform(), std::size_t{0}); };
    auto draw_eq = [&](Stage s, EqDraw& d) {
        d.applied = flag(s);
        for (auto& g : d.gains_db) g = rng.uniform(config.eq_gain_db.low, config.eq_gain_db.high);
    };

    draw_eq(Stage::Eq1, log.eq1);

    require(Stage::Noise, banks.noise.clips.size());
    log.noise.applied = flag(Stage::Noise);
    log.noise.clip_index = draw_index(banks.noise.clips.size());
    log.noise.snr_db = rng.uniform(config.snr_db.low, config.snr_db.high);
    log.noise.offset_seed = rng.next_u64();

    log.pitch.applied = flag(Stage::Pitch);
    log.pitch.cents = rng.uniform(config.pitch_cents.low, config.pitch_cents.high);

    draw_eq(Stage::Eq2, log.eq2);

    require(Stage::Reverb, banks.ir.impulse_responses.size());
    log.reverb.applied = flag(Stage::Reverb);
    log.reverb.ir_index = draw_index(banks.ir.impulse_responses.size());
    return log;
}

AudioClip replay(const AudioClip& clip, const AppliedLog& log, const Banks& banks) {
    AudioClip x = clip;
    auto run = [&](Stage s, auto&& fn) {
        if (!log.applied(s)) return;
        try {
            x = fn(x);
        } catch (const StageError&) {
            throw;
        } catch (const Error& e) {
            throw StageError(s, e);
        }
    };

    run(Stage::Eq1, [&](const AudioClip& in) { return apply_eq(in, log.eq1.gains_db); });
    run(Stage::Noise, [&](const AudioClip& in) {
        if (log.noise.clip_index >= banks.noise.clips.size())
            throw Error(Errc::EmptyBank, fmt::format("noise clip {} not in bank", log.noise.clip_index));
        const auto& noise = banks.noise.clips[log.noise.clip_index];
        if (noise.sample_rate != in.sample_rate)
            return add_noise(in, audio::resample(noise, in.sample_rate), log.noise.snr_db, log.noise.offset_seed);
        return add_noise(in, noise, log.noise.snr_db, log.noise.offset_seed);
    });
    run(Stage::Pitch, [&](const AudioClip& in) { return pitch_shift(in, log.pitch.cents); });
    run(Stage::Eq2, [&](const AudioClip& in) { return apply_eq(in, log.eq2.gains_db); });
    run(Stage::Reverb, [&](const AudioClip& in) {
        if (log.reverb.ir_index >= banks.ir.impulse_responses.size())
            throw Error(Errc::EmptyBank, fmt::format("impulse response {} not in bank", log.reverb.ir_index));
        const auto& ir = banks.ir.impulse_responses[log.reverb.ir_index];
        if (ir.sample_rate != in.sample_rate) return apply_reverb(in, audio::resample(ir, in.sample_rate));
        return apply_reverb(in, ir);
    });
    return x;
}

std::pair<AudioClip, AppliedLog> augment_chain(const AudioClip& clip, const AugmentConfig& config, const Banks& banks,
                                               std::uint64_t seed) {
    auto log = draw_log(config, banks, seed);
    auto out = replay(clip, log, banks);
    return {std::move(out), std::move(log)};
}

namespace {

json eq_json(const EqDraw& d) { return {{"applied", d.applied}, {"gains_db", d.gains_db}}; }

EqDraw eq_from(const json& j) {
    EqDraw d;
    d.applied = j.at("applied").get<bool>();
    d.gains_db = j.at("gains_db").get<EqGains>();
    return d;
}

}  // namespace

std::string log_to_json(const AppliedLog& log) {
    json j;
    j["seed"] = log.seed;
    j["order"] = {"eq1", "noise", "pitch", "eq2", "reverb"};
    j["eq1"] = eq_json(log.eq1);
    j["noise"] = {{"applied", log.noise.applied},
                  {"clip_index", log.noise.clip_index},
                  {"snr_db", log.noise.snr_db},
                  {"offset_seed", log.noise.offset_seed}};
    j["pitch"] = {{"applied", log.pitch.applied}, {"cents", log.pitch.cents}};
    j["eq2"] = eq_json(log.eq2);
    j["reverb"] = {{"applied", log.reverb.applied}, {"ir_index", log.reverb.ir_index}};
    return j.dump(2);
}

AppliedLog log_from_json(std::string_view text) {
    try {
        const auto j = json::parse(text);
        AppliedLog log;
        log.seed = j.at("seed").get<std::uint64_t>();
        log.eq1 = eq_from(j.at("eq1"));
        const auto& n = j.at("noise");
        log.noise = {n.at("applied").get<bool>(), n.at("clip_index").get<std::size_t>(), n.at("snr_db").get<double>(),
                     n.at("offset_seed").get<std::uint64_t>()};
        log.pitch = {j.at("pitch").at("applied").get<bool>(), j.at("pitch").at("cents").get<double>()};
        log.eq2 = eq_from(j.at("eq2"));
        log.reverb = {j.at("reverb").at("applied").get<bool>(), j.at("reverb").at("ir_index").get<std::size_t>()};
        return log;
    } catch (const json::exception& e) {
        throw Error(Errc::ConfigError, fmt::format("applied log: {}", e.what()));
    }
}

}  // namespace pianoaug::augment
