#include "pianoaug/harness.hpp"

#include "pianoaug/dataset.hpp"
#include "pianoaug/error.hpp"
#include "pianoaug/midi.hpp"
#include "pianoaug/subprocess.hpp"

#include "json.hpp"

#include <atomic>
#include <fmt/format.h>
#include <fstream>
#include <sstream>
#include <thread>

namespace pianoaug::harness {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_json_line(const FileResult& r) {
    json j{{"condition", r.condition},
           {"dataset", r.dataset},
           {"file_id", r.file_id},
           {"ok", r.ok},
           {"message", r.message},
           {"seed", r.seed},
           {"transcription", r.transcription},
           {"precision", r.metrics.precision},
           {"recall", r.metrics.recall},
           {"f1", r.metrics.f1},
           {"n_ref", r.metrics.n_ref},
           {"n_est", r.metrics.n_est},
           {"n_match", r.metrics.n_match}};
    j["applied"] = r.applied ? json::parse(augment::log_to_json(*r.applied)) : json(nullptr);
    return j.dump();
}

FileResult file_result_from_json_line(const std::string& line) {
    try {
        const auto j = json::parse(line);
        FileResult r;
        r.condition = j.at("condition").get<std::string>();
        r.dataset = j.at("dataset").get<std::string>();
        r.file_id = j.at("file_id").get<std::string>();
        r.ok = j.at("ok").get<bool>();
        r.message = j.at("message").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.transcription = j.at("transcription").get<std::string>();
        r.metrics = {j.at("precision").get<double>(), j.at("recall").get<double>(),   j.at("f1").get<double>(),
                     j.at("n_ref").get<std::size_t>(), j.at("n_est").get<std::size_t>(), j.at("n_match").get<std::size_t>()};
        if (!j.at("applied").is_null()) r.applied = augment::log_from_json(j.at("applied").dump());
        return r;
    } catch (const json::exception& e) {
        throw Error(Errc::ConfigError, fmt::format("results line: {}", e.what()));
    }
}

bool RunOutput::all_failed() const {
    return !files.empty() && std::none_of(files.begin(), files.end(), [](const FileResult& f) { return f.ok; });
}

namespace {

struct Task {
    const Condition* condition;
    const DatasetSpec* dataset;
    const dataset::FilePair* pair;
    const NoteSequence* reference;
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::IoError, fmt::format("cannot write {}", path.string()));
    out << text;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, fmt::format("cannot open {}", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool needs(const std::vector<Condition>& conds, augment::Stage s) {
    return std::any_of(conds.begin(), conds.end(), [&](const Condition& c) {
        return c.test_time && c.stages[static_cast<std::size_t>(s)];
    });
}

FileResult run_one(const ExperimentConfig& config, const augment::Banks& banks, const Task& task) {
    const auto& cond = *task.condition;
    const auto& ds = *task.dataset;
    FileResult r;
    r.condition = cond.name;
    r.dataset = ds.name;
    r.file_id = task.pair->id;
    r.seed = file_seed(config.seed, cond.name, ds.name, task.pair->id);

    const auto slug = condition_slug(cond.name);
    const fs::path audio_dir = config.output_dir / "audio" / slug / ds.name;
    const fs::path trans_rel = fs::path("transcriptions") / slug / ds.name / (task.pair->id + ".mid");
    const fs::path trans = config.output_dir / trans_rel;
    const fs::path log_dir = config.output_dir / "logs" / slug / ds.name;
    fs::create_directories(audio_dir);
    fs::create_directories(trans.parent_path());
    fs::create_directories(log_dir);
    const fs::path wav = audio_dir / (task.pair->id + ".wav");

    try {
        auto clip = audio::resample(audio::read_wav_file(task.pair->audio), config.sample_rate);
        const bool any = std::any_of(cond.stages.begin(), cond.stages.end(), [](bool b) { return b; });
        if (cond.test_time && any) {
            auto [out, log] = augment::augment_chain(clip, condition_augment_config(config, cond), banks, r.seed);
            clip = std::move(out);
            r.applied = log;
        }
        audio::write_wav_file(wav, clip, audio::Encoding::Float32);
        if (config.persist_audio && r.applied) write_text(fs::path(wav).replace_extension(".json"), augment::log_to_json(*r.applied));
    } catch (const Error& e) {
        r.message = fmt::format("augmentation failed: {}", e.what());
        return r;
    }

    fs::remove(trans);
    const auto& cmd = config.transcriber_for(cond.name);
    const auto command = cmd.render({{"input_wav", wav.string()},
                                     {"output_mid", trans.string()},
                                     {"file_id", task.pair->id},
                                     {"dataset", ds.name},
                                     {"condition", cond.name},
                                     {"ref_mid", task.pair->midi.string()}});
    const auto proc = run_shell(command, cmd.timeout_s, log_dir / (task.pair->id + ".log"));
    if (!config.persist_audio) fs::remove(wav);
    if (!proc.ok()) {
        r.message = proc.timed_out ? fmt::format("TranscriberFailed: timed out after {} s", cmd.timeout_s)
                                   : fmt::format("TranscriberFailed: exit code {}", proc.exit_code);
        return r;
    }
    try {
        const auto est = midi::read_midi_file(trans);
        r.metrics = eval::evaluate(*task.reference, est.notes, config.onset_tolerance);
        r.transcription = trans_rel.generic_string();
        r.ok = true;
    } catch (const Error& e) {
        r.message = fmt::format("TranscriberFailed: unreadable output: {}", e.what());
    }
    return r;
}

}  // namespace

RunOutput run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto conditions = gen_conditions(config);

    std::vector<std::vector<dataset::FilePair>> pairs;
    std::vector<std::vector<NoteSequence>> refs;
    for (const auto& ds : config.datasets) {
        auto p = dataset::list_pairs(ds.root, ds.source, ds.split);
        if (p.empty())
            throw Error(Errc::DatasetMissing, fmt::format("dataset {} has no audio/midi pairs under {}", ds.name,
                                                          (ds.root / ds.source / ds.split).string()));
        std::vector<NoteSequence> r;
        for (const auto& fp : p) {
            try {
                r.push_back(midi::read_midi_file(fp.midi).notes);
            } catch (const Error& e) {
                throw Error(Errc::DatasetMissing, fmt::format("reference {}: {}", fp.midi.string(), e.what()));
            }
        }
        pairs.push_back(std::move(p));
        refs.push_back(std::move(r));
    }

    augment::Banks banks;
    try {
        if (needs(conditions, augment::Stage::Noise))
            banks.noise = augment::load_noise_bank(config.augment.noise_dir, config.sample_rate, config.noise_segment_seconds);
        if (needs(conditions, augment::Stage::Reverb))
            banks.ir = augment::load_ir_bank(config.augment.ir_dir, config.sample_rate);
    } catch (const Error& e) {
        throw Error(Errc::ConfigError, e.what());
    }
    if (needs(conditions, augment::Stage::Noise) && banks.noise.clips.empty())
        throw Error(Errc::ConfigError, "background noise condition needs a non-empty noise bank");
    if (needs(conditions, augment::Stage::Reverb) && banks.ir.impulse_responses.empty())
        throw Error(Errc::ConfigError, "reverb condition needs a non-empty impulse-response bank");

    fs::create_directories(config.output_dir);
    write_text(config.output_dir / "config.json", config_to_json(config));
    if (config.mode != Mode::Degradation) {
        const auto dir = config.output_dir / "training_configs";
        fs::create_directories(dir);
        for (const auto& c : conditions) {
            const auto aug = condition_augment_config(config, c);
            json j{{"condition", c.name},
                   {"stage_order", {"eq1", "noise", "pitch", "eq2", "reverb"}},
                   {"stage_probability", aug.stage_probability},
                   {"eq_gain_range_db", {aug.eq_gain_db.low, aug.eq_gain_db.high}},
                   {"snr_range_db", {aug.snr_db.low, aug.snr_db.high}},
                   {"pitch_range_cents", {aug.pitch_cents.low, aug.pitch_cents.high}},
                   {"noise_dir", aug.noise_dir.string()},
                   {"ir_dir", aug.ir_dir.string()}};
            write_text(dir / (condition_slug(c.name) + ".json"), j.dump(2) + "\n");
        }
    }

    std::vector<Task> tasks;
    for (const auto& c : conditions)
        for (std::size_t d = 0; d < config.datasets.size(); ++d)
            for (std::size_t f = 0; f < pairs[d].size(); ++f) tasks.push_back({&c, &config.datasets[d], &pairs[d][f], &refs[d][f]});

    std::vector<FileResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) results[i] = run_one(config, banks, tasks[i]);
    };
    {
        std::vector<std::jthread> pool;
        const auto n = std::min<std::size_t>(static_cast<std::size_t>(config.workers), tasks.size());
        for (std::size_t i = 1; i < n; ++i) pool.emplace_back(worker);
        worker();
    }

    RunOutput out{assemble_table(config, conditions, results), std::move(results)};
    std::string lines;
    for (const auto& r : out.files) lines += to_json_line(r) + "\n";
    write_text(config.output_dir / "results.jsonl", lines);
    write_text(config.output_dir / "table.csv", emit_table(out.table, TableFormat::Csv));
    write_text(config.output_dir / "table.md", emit_table(out.table, TableFormat::Markdown));
    return out;
}

ResultTable recompute_table(const fs::path& output_dir) {
    auto config = config_from_json(read_text(output_dir / "config.json"));
    config.output_dir = output_dir;
    const auto conditions = gen_conditions(config);

    std::map<std::pair<std::string, std::string>, fs::path> ref_paths;
    for (const auto& ds : config.datasets)
        for (const auto& fp : dataset::list_pairs(ds.root, ds.source, ds.split)) ref_paths[{ds.name, fp.id}] = fp.midi;

    std::vector<FileResult> files;
    std::istringstream in(read_text(output_dir / "results.jsonl"));
    for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        auto r = file_result_from_json_line(line);
        if (r.ok) {
            auto it = ref_paths.find({r.dataset, r.file_id});
            if (it == ref_paths.end())
                throw Error(Errc::DatasetMissing, fmt::format("reference for {}/{} not found", r.dataset, r.file_id));
            const auto ref = midi::read_midi_file(it->second);
            const auto est = midi::read_midi_file(output_dir / r.transcription);
            r.metrics = eval::evaluate(ref.notes, est.notes, config.onset_tolerance);
        }
        files.push_back(std::move(r));
    }
    return assemble_table(config, conditions, files);
}

}  // namespace pianoaug::harness
