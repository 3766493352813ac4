// pianoaug command-line front end.

#include "pianoaug/audio.hpp"
#include "pianoaug/augment.hpp"
#include "pianoaug/capture_sim.hpp"
#include "pianoaug/dataset.hpp"
#include "pianoaug/error.hpp"
#include "pianoaug/eval.hpp"
#include "pianoaug/harness.hpp"
#include "pianoaug/midi.hpp"
#include "pianoaug/random.hpp"
#include "pianoaug/synth.hpp"

#include "CLI11.hpp"

#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace pianoaug;

namespace {

enum Exit { kOk = 0, kConfig = 1, kDataset = 2, kAllFailed = 3 };

int exit_code_for(const Error& e) {
    switch (e.code()) {
    case Errc::DatasetMissing:
    case Errc::EmptyCorpus: return kDataset;
    default: return kConfig;
    }
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw Error(Errc::IoError, fmt::format("cannot open {}", p.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw Error(Errc::IoError, fmt::format("cannot write {}", p.string()));
    out << text;
}

audio::Encoding encoding_from(const std::string& s) {
    if (s == "pcm16") return audio::Encoding::Pcm16;
    if (s == "pcm24") return audio::Encoding::Pcm24;
    if (s == "float32") return audio::Encoding::Float32;
    throw Error(Errc::UnsupportedEncoding, s);
}

const synth::TimbrePreset& preset_named(const std::vector<synth::TimbrePreset>& presets, const std::string& name) {
    for (const auto& p : presets)
        if (p.name == name) return p;
    throw Error(Errc::InvalidArgument, fmt::format("unknown preset '{}'", name));
}

std::vector<fs::path> wavs_in(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".wav") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

// ------------------------------------------------------------------ augment

struct AugmentArgs {
    std::string input, output, replay, encoding = "float32";
    std::string noise_dir, ir_dir;
    double probability = 0.5;
    double noise_segment = 10.0;
    std::uint64_t seed = 0;
    int sample_rate = kDefaultSampleRate;
};

int cmd_augment(const AugmentArgs& a) {
    augment::AugmentConfig cfg;
    cfg.stage_probability.fill(a.probability);
    cfg.noise_dir = a.noise_dir;
    cfg.ir_dir = a.ir_dir;
    if (a.noise_dir.empty()) cfg.probability(augment::Stage::Noise) = 0.0;
    if (a.ir_dir.empty()) cfg.probability(augment::Stage::Reverb) = 0.0;
    cfg.validate();

    augment::Banks banks;
    if (!a.noise_dir.empty()) banks.noise = augment::load_noise_bank(a.noise_dir, a.sample_rate, a.noise_segment);
    if (!a.ir_dir.empty()) banks.ir = augment::load_ir_bank(a.ir_dir, a.sample_rate);
    const auto enc = encoding_from(a.encoding);

    auto one = [&](const fs::path& in, const fs::path& out, std::uint64_t seed) {
        const auto clip = audio::resample(audio::read_wav_file(in), a.sample_rate);
        augment::AppliedLog log;
        AudioClip result;
        if (!a.replay.empty()) {
            log = augment::log_from_json(slurp(a.replay));
            result = augment::replay(clip, log, banks);
        } else {
            std::tie(result, log) = augment::augment_chain(clip, cfg, banks, seed);
        }
        if (out.has_parent_path()) fs::create_directories(out.parent_path());
        audio::write_wav_file(out, result, enc);
        spit(fs::path(out).replace_extension(".json"), augment::log_to_json(log) + "\n");
    };

    if (fs::is_directory(a.input)) {
        for (const auto& in : wavs_in(a.input)) {
            const auto stem = in.stem().string();
            one(in, fs::path(a.output) / in.filename(), derive_seed(a.seed, stem));
        }
    } else {
        one(a.input, a.output, a.seed);
    }
    return kOk;
}

// ------------------------------------------------------------------ eval

int cmd_eval(const std::string& ref, const std::string& est, double tol, const std::string& agg) {
    const auto mode = agg == "micro" ? eval::Aggregation::Micro : eval::Aggregation::Macro;
    if (agg != "micro" && agg != "macro") throw Error(Errc::ConfigError, fmt::format("unknown aggregation '{}'", agg));
    std::vector<std::pair<std::string, eval::Metrics>> rows;
    if (fs::is_directory(ref)) {
        std::vector<fs::path> refs;
        for (const auto& e : fs::directory_iterator(ref))
            if (e.path().extension() == ".mid" || e.path().extension() == ".midi") refs.push_back(e.path());
        std::sort(refs.begin(), refs.end());
        for (const auto& r : refs) {
            auto e = fs::path(est) / r.filename();
            if (!fs::exists(e)) throw Error(Errc::DatasetMissing, fmt::format("no estimate for {}", r.filename().string()));
            rows.emplace_back(r.stem().string(), eval::evaluate(midi::read_midi_file(r).notes, midi::read_midi_file(e).notes, tol));
        }
    } else {
        rows.emplace_back(fs::path(ref).stem().string(),
                          eval::evaluate(midi::read_midi_file(ref).notes, midi::read_midi_file(est).notes, tol));
    }
    std::vector<eval::Metrics> all;
    fmt::print("file,precision,recall,f1,n_ref,n_est,n_match\n");
    for (const auto& [id, m] : rows) {
        fmt::print("{},{:.6f},{:.6f},{:.6f},{},{},{}\n", id, m.precision, m.recall, m.f1, m.n_ref, m.n_est, m.n_match);
        all.push_back(m);
    }
    const auto t = eval::aggregate(all, mode);
    fmt::print("{},{:.6f},{:.6f},{:.6f},{},{},{}\n", agg, t.precision, t.recall, t.f1, t.n_ref, t.n_est, t.n_match);
    return kOk;
}

// ------------------------------------------------------------------ dataset

int cmd_dataset_build(const std::string& root, const std::string& source, const std::string& split,
                      const std::string& out_dir, double window_s, double hop_s, std::uint64_t seed, int sr,
                      bool random_offset) {
    const auto pairs = dataset::list_pairs(root, source, split);
    if (pairs.empty()) throw Error(Errc::DatasetMissing, "no pairs found");
    dataset::WindowOptions opts{window_s, hop_s, std::nullopt};
    std::vector<dataset::ManifestRecord> manifest;
    fs::create_directories(fs::path(out_dir) / "audio");
    fs::create_directories(fs::path(out_dir) / "midi");
    for (const auto& p : pairs) {
        if (random_offset) opts.random_offset_seed = derive_seed(seed, p.id + "/offset");
        const auto clip = audio::resample(audio::read_wav_file(p.audio), sr);
        const auto labels = midi::read_midi_file(p.midi).notes;
        const auto windows = dataset::build_examples(clip, labels, opts, source, p.id);
        for (std::size_t i = 0; i < windows.size(); ++i) {
            const auto& w = windows[i];
            const auto name = fmt::format("{}_{:04d}", p.id, i);
            audio::write_wav_file(fs::path(out_dir) / "audio" / (name + ".wav"), w.audio);
            midi::write_midi_file(fs::path(out_dir) / "midi" / (name + ".mid"), w.labels);
            manifest.push_back({source, name, w.start, w.length, w.padded, derive_seed(seed, name)});
        }
    }
    dataset::write_manifest(fs::path(out_dir) / "manifest.jsonl", manifest);
    fmt::print("{} windows from {} files\n", manifest.size(), pairs.size());
    return kOk;
}

int cmd_dataset_sample(std::size_t n, std::uint64_t seed, std::vector<double> weights) {
    if (weights.empty()) weights = dataset::mixed_source_weights();
    dataset::SourceSampler sampler(weights, seed);
    std::vector<std::size_t> counts(weights.size());
    for (std::size_t i = 0; i < n; ++i) ++counts[sampler.draw()];
    fmt::print("source,weight,count,fraction\n");
    for (std::size_t i = 0; i < counts.size(); ++i)
        fmt::print("{},{:.6f},{},{:.6f}\n", i, weights[i], counts[i], static_cast<double>(counts[i]) / static_cast<double>(n));
    return kOk;
}

// ------------------------------------------------------------------ synth

int cmd_synth_render(const std::string& midi_path, const std::string& out, const std::string& preset, int sr,
                     const std::string& presets_file) {
    if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
    const auto presets = presets_file.empty() ? synth::default_presets() : harness::parse_presets(slurp(presets_file));
    const auto seq = midi::read_midi_file(midi_path).notes;
    audio::write_wav_file(out, synth::render(seq, preset_named(presets, preset), sr));
    return kOk;
}

int cmd_synth_corpus(const std::string& root, const std::string& source, const std::string& split, int count,
                     double duration, double density, const std::string& preset, std::uint64_t seed, int sr) {
    const auto& p = preset_named(synth::default_presets(), preset);
    const auto dir = fs::path(root) / source / split;
    fs::create_directories(dir / "audio");
    fs::create_directories(dir / "midi");
    for (int i = 0; i < count; ++i) {
        const auto id = fmt::format("piece_{:03d}", i);
        const auto seq = synth::random_piece(derive_seed(seed, id), duration, density);
        midi::write_midi_file(dir / "midi" / (id + ".mid"), seq);
        // render what a transcriber would be scored against
        const auto ref = midi::read_midi_file(dir / "midi" / (id + ".mid")).notes;
        audio::write_wav_file(dir / "audio" / (id + ".wav"), synth::render(ref, p, sr), audio::Encoding::Pcm16);
    }
    return kOk;
}

int cmd_synth_banks(const std::string& noise_dir, const std::string& ir_dir, int count, double seconds,
                    std::uint64_t seed, int sr) {
    constexpr synth::NoiseColor colors[] = {synth::NoiseColor::White, synth::NoiseColor::Pink, synth::NoiseColor::Brown};
    if (!noise_dir.empty()) {
        fs::create_directories(noise_dir);
        for (int i = 0; i < count; ++i)
            audio::write_wav_file(fs::path(noise_dir) / fmt::format("noise_{:03d}.wav", i),
                                  synth::noise_clip(colors[i % 3], seconds, derive_seed(seed, fmt::format("noise{}", i)), sr));
    }
    if (!ir_dir.empty()) {
        fs::create_directories(ir_dir);
        for (int i = 0; i < count; ++i) {
            const double rt60 = 0.2 + 1.3 * i / std::max(1, count - 1);
            audio::write_wav_file(fs::path(ir_dir) / fmt::format("room_{:03d}.wav", i),
                                  synth::room_ir(rt60, derive_seed(seed, fmt::format("ir{}", i)), sr));
        }
    }
    return kOk;
}

// ------------------------------------------------------------------ capture-sim

int cmd_capture(const std::string& midi_path, double random_s, double ppm, double jitter, double rate,
                std::uint64_t seed, const std::string& events_csv) {
    const auto seq = midi_path.empty() ? synth::random_piece(seed, random_s) : midi::read_midi_file(midi_path).notes;
    capture::ClockModel clock{rate, ppm, jitter};
    clock.validate();
    fmt::print("strategy,events,max_abs_error_s,slope_s_per_s\n");
    std::string detail = "strategy,boundary,pitch,ideal_time_s,realized_sample_index,error_s\n";
    for (auto s : {capture::Strategy::WallClock, capture::Strategy::SampleClock}) {
        const auto ev = capture::schedule(seq, clock, s, seed);
        const auto d = capture::measure_drift(ev, rate);
        fmt::print("{},{},{:.9e},{:.9e}\n", capture::to_string(s), ev.size(), d.max_abs_error_s, d.slope_s_per_s);
        for (const auto& e : ev)
            detail += fmt::format("{},{},{},{:.9f},{},{:.9e}\n", capture::to_string(s),
                                  e.boundary == capture::Boundary::On ? "on" : "off", e.pitch, e.ideal_time_s,
                                  e.realized_sample_index, static_cast<double>(e.realized_sample_index) / rate - e.ideal_time_s);
    }
    if (!events_csv.empty()) spit(events_csv, detail);
    return kOk;
}

// ------------------------------------------------------------------ experiment

int cmd_experiment_run(const std::string& config_path, int workers, const std::string& output, bool persist) {
    auto cfg = harness::load_config(config_path);
    if (workers > 0) cfg.workers = workers;
    if (!output.empty()) cfg.output_dir = output;
    if (persist) cfg.persist_audio = true;
    const auto out = harness::run_experiment(cfg);
    std::cout << harness::emit_table(out.table, harness::TableFormat::Markdown);
    std::size_t failed = 0;
    for (const auto& f : out.files)
        if (!f.ok) {
            ++failed;
            fmt::print(stderr, "{}/{}/{}: {}\n", f.condition, f.dataset, f.file_id, f.message);
        }
    if (failed) fmt::print(stderr, "{} of {} files failed\n", failed, out.files.size());
    return out.all_failed() ? kAllFailed : kOk;
}

int cmd_experiment_report(const std::string& dir, const std::string& format, bool recompute) {
    const auto fmt_ = format == "csv" ? harness::TableFormat::Csv : harness::TableFormat::Markdown;
    if (format != "csv" && format != "markdown") throw Error(Errc::ConfigError, fmt::format("unknown format '{}'", format));
    const auto table = recompute ? harness::recompute_table(dir) : harness::parse_table_csv(slurp(fs::path(dir) / "table.csv"));
    std::cout << harness::emit_table(table, fmt_);
    return kOk;
}

// ------------------------------------------------------------------ oracle transcriber

int cmd_oracle(const std::string& audio_in, const std::string& ref, const std::string& out, double drop_p,
               double spurious, double jitter, std::uint64_t seed, const std::string& label) {
    if (!audio_in.empty()) audio::read_wav_file(audio_in);  // fail like a real model on unreadable input
    auto seq = midi::read_midi_file(ref).notes;
    if (drop_p > 0 || spurious > 0 || jitter > 0) {
        const auto s = label.empty() ? seed : derive_seed(seed, label);
        seq = perturb(seq, {drop_p, spurious, jitter, s});
    }
    if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
    midi::write_midi_file(out, seq);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Augmentation and evaluation toolkit for piano transcription"};
    app.set_version_flag("--version", std::string(harness::kToolkitVersion));
    app.require_subcommand(1);

    AugmentArgs aug;
    auto* augment_cmd = app.add_subcommand("augment", "Run the augmentation chain on a WAV file or a directory of WAVs");
    augment_cmd->add_option("-i,--input", aug.input, "WAV file or directory")->required();
    augment_cmd->add_option("-o,--output", aug.output, "output WAV file or directory")->required();
    augment_cmd->add_option("--noise-dir", aug.noise_dir);
    augment_cmd->add_option("--ir-dir", aug.ir_dir);
    augment_cmd->add_option("-p,--probability", aug.probability, "per-stage apply probability")->capture_default_str();
    augment_cmd->add_option("--noise-segment", aug.noise_segment, "noise bank segment length, s")->capture_default_str();
    augment_cmd->add_option("-s,--seed", aug.seed)->capture_default_str();
    augment_cmd->add_option("--sample-rate", aug.sample_rate)->capture_default_str();
    augment_cmd->add_option("--replay", aug.replay, "re-apply a JSON log instead of drawing");
    augment_cmd->add_option("--encoding", aug.encoding, "float32, pcm16 or pcm24")->capture_default_str();

    std::string ref, est, aggregation = "macro";
    double tol = eval::kDefaultOnsetTolerance;
    auto* eval_cmd = app.add_subcommand("eval", "Note-onset precision/recall/F1 of MIDI files or directories");
    eval_cmd->add_option("--ref", ref)->required();
    eval_cmd->add_option("--est", est)->required();
    eval_cmd->add_option("--tolerance", tol, "onset tolerance, s")->capture_default_str();
    eval_cmd->add_option("--aggregation", aggregation, "macro or micro")->capture_default_str();

    auto* dataset_cmd = app.add_subcommand("dataset", "Training example windows and source sampling");
    dataset_cmd->require_subcommand(1);
    std::string ds_root, ds_source, ds_split = "train", ds_out;
    double win = 10.0, hop = 10.0;
    std::uint64_t ds_seed = 0;
    int ds_sr = kDefaultSampleRate;
    bool ds_random_offset = false;
    auto* build_cmd = dataset_cmd->add_subcommand("build", "Cut paired audio/MIDI into windows with a manifest");
    build_cmd->add_option("--root", ds_root)->required();
    build_cmd->add_option("--source", ds_source)->required();
    build_cmd->add_option("--split", ds_split)->capture_default_str();
    build_cmd->add_option("-o,--output", ds_out)->required();
    build_cmd->add_option("--window", win)->capture_default_str();
    build_cmd->add_option("--hop", hop)->capture_default_str();
    build_cmd->add_option("--seed", ds_seed)->capture_default_str();
    build_cmd->add_option("--sample-rate", ds_sr)->capture_default_str();
    build_cmd->add_flag("--random-offset", ds_random_offset, "start the first window at a seeded offset");
    std::size_t n_draws = 120000;
    std::vector<double> weights;
    auto* sample_cmd = dataset_cmd->add_subcommand("sample", "Tally draws from the source sampler");
    sample_cmd->add_option("-n,--count", n_draws)->capture_default_str();
    sample_cmd->add_option("--seed", ds_seed)->capture_default_str();
    sample_cmd->add_option("--weights", weights, "defaults to the mixed 1/4, 1/4, 6 x 1/12 scheme");

    auto* synth_cmd = app.add_subcommand("synth", "Render fixtures");
    synth_cmd->require_subcommand(1);
    std::string sy_midi, sy_out, sy_preset = "bright-grand", sy_presets_file;
    int sy_sr = kDefaultSampleRate;
    auto* render_cmd = synth_cmd->add_subcommand("render", "Render a MIDI file with a timbre preset");
    render_cmd->add_option("--midi", sy_midi)->required();
    render_cmd->add_option("-o,--output", sy_out)->required();
    render_cmd->add_option("--preset", sy_preset)->capture_default_str();
    render_cmd->add_option("--presets", sy_presets_file, "TOML file with [[presets]] tables");
    render_cmd->add_option("--sample-rate", sy_sr)->capture_default_str();
    std::string co_root, co_source = "synth", co_split = "test";
    int co_count = 20;
    double co_duration = 30.0, co_density = 6.0;
    std::uint64_t co_seed = 0;
    auto* corpus_cmd = synth_cmd->add_subcommand("corpus", "Random pieces laid out as <root>/<source>/<split>/{audio,midi}");
    corpus_cmd->add_option("--root", co_root)->required();
    corpus_cmd->add_option("--source", co_source)->capture_default_str();
    corpus_cmd->add_option("--split", co_split)->capture_default_str();
    corpus_cmd->add_option("-n,--count", co_count)->capture_default_str();
    corpus_cmd->add_option("--duration", co_duration)->capture_default_str();
    corpus_cmd->add_option("--density", co_density, "notes per second")->capture_default_str();
    corpus_cmd->add_option("--preset", sy_preset)->capture_default_str();
    corpus_cmd->add_option("--seed", co_seed)->capture_default_str();
    corpus_cmd->add_option("--sample-rate", sy_sr)->capture_default_str();
    std::string bk_noise, bk_ir;
    int bk_count = 6;
    double bk_seconds = 10.0;
    auto* banks_cmd = synth_cmd->add_subcommand("banks", "Synthetic noise clips and room impulse responses");
    banks_cmd->add_option("--noise-dir", bk_noise);
    banks_cmd->add_option("--ir-dir", bk_ir);
    banks_cmd->add_option("-n,--count", bk_count)->capture_default_str();
    banks_cmd->add_option("--seconds", bk_seconds, "noise clip length")->capture_default_str();
    banks_cmd->add_option("--seed", co_seed)->capture_default_str();
    banks_cmd->add_option("--sample-rate", sy_sr)->capture_default_str();

    std::string cs_midi, cs_events;
    double cs_random = 600.0, cs_ppm = 100.0, cs_jitter = 0.0, cs_rate = 48000.0;
    std::uint64_t cs_seed = 0;
    auto* capture_cmd = app.add_subcommand("capture-sim", "Drift of wall-clock vs sample-clock playback scheduling");
    capture_cmd->add_option("--midi", cs_midi, "schedule this file instead of a random piece");
    capture_cmd->add_option("--duration", cs_random, "random piece length, s")->capture_default_str();
    capture_cmd->add_option("--ppm", cs_ppm)->capture_default_str();
    capture_cmd->add_option("--jitter", cs_jitter, "per-event jitter std, s")->capture_default_str();
    capture_cmd->add_option("--rate", cs_rate, "nominal device rate, Hz")->capture_default_str();
    capture_cmd->add_option("--seed", cs_seed)->capture_default_str();
    capture_cmd->add_option("--events", cs_events, "also write per-event CSV here");

    auto* exp_cmd = app.add_subcommand("experiment", "Degradation, single, ablation and full experiments");
    exp_cmd->require_subcommand(1);
    std::string ex_config, ex_output, ex_format = "markdown";
    int ex_workers = 0;
    bool ex_persist = false, ex_recompute = false;
    auto* run_cmd = exp_cmd->add_subcommand("run", "Run every condition x dataset x file");
    run_cmd->add_option("-c,--config", ex_config)->required();
    run_cmd->add_option("-j,--workers", ex_workers, "override the config worker count");
    run_cmd->add_option("-o,--output", ex_output, "override the config output directory");
    run_cmd->add_flag("--persist-audio", ex_persist);
    auto* report_cmd = exp_cmd->add_subcommand("report", "Print the table of a finished run");
    report_cmd->add_option("-d,--dir", ex_output)->required();
    report_cmd->add_option("--format", ex_format, "markdown or csv")->capture_default_str();
    report_cmd->add_flag("--recompute", ex_recompute, "re-score persisted transcriptions");

    std::string or_audio, or_ref, or_out, or_label;
    double or_drop = 0.0, or_spurious = 0.0, or_jitter = 0.0;
    std::uint64_t or_seed = 0;
    auto* oracle_cmd = app.add_subcommand("transcribe-oracle", "Stand-in transcriber: copies or corrupts the reference MIDI");
    oracle_cmd->add_option("--audio", or_audio, "input WAV; only checked for readability");
    oracle_cmd->add_option("--ref", or_ref)->required();
    oracle_cmd->add_option("-o,--output", or_out)->required();
    oracle_cmd->add_option("--drop-p", or_drop)->capture_default_str();
    oracle_cmd->add_option("--spurious-rate", or_spurious)->capture_default_str();
    oracle_cmd->add_option("--jitter", or_jitter)->capture_default_str();
    oracle_cmd->add_option("--seed", or_seed)->capture_default_str();
    oracle_cmd->add_option("--seed-label", or_label, "mixed into the seed, e.g. the file id");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfig;
    }

    try {
        if (*augment_cmd) return cmd_augment(aug);
        if (*eval_cmd) return cmd_eval(ref, est, tol, aggregation);
        if (*build_cmd) return cmd_dataset_build(ds_root, ds_source, ds_split, ds_out, win, hop, ds_seed, ds_sr, ds_random_offset);
        if (*sample_cmd) return cmd_dataset_sample(n_draws, ds_seed, weights);
        if (*render_cmd) return cmd_synth_render(sy_midi, sy_out, sy_preset, sy_sr, sy_presets_file);
        if (*corpus_cmd)
            return cmd_synth_corpus(co_root, co_source, co_split, co_count, co_duration, co_density, sy_preset, co_seed, sy_sr);
        if (*banks_cmd) return cmd_synth_banks(bk_noise, bk_ir, bk_count, bk_seconds, co_seed, sy_sr);
        if (*capture_cmd) return cmd_capture(cs_midi, cs_random, cs_ppm, cs_jitter, cs_rate, cs_seed, cs_events);
        if (*run_cmd) return cmd_experiment_run(ex_config, ex_workers, ex_output, ex_persist);
        if (*report_cmd) return cmd_experiment_report(ex_output, ex_format, ex_recompute);
        if (*oracle_cmd) return cmd_oracle(or_audio, or_ref, or_out, or_drop, or_spurious, or_jitter, or_seed, or_label);
    } catch (const Error& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kConfig;
    }
    return kOk;
}
