#include "pianoaug/harness.hpp"

#include "pianoaug/error.hpp"
#include "pianoaug/random.hpp"
#include "pianoaug/subprocess.hpp"

#include "json.hpp"
#include "toml.hpp"

#include <cctype>
#include <cstdlib>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

namespace pianoaug::harness {

using nlohmann::json;

std::string_view to_string(Mode m) {
    switch (m) {
    case Mode::Degradation: return "degradation";
    case Mode::Single: return "single";
    case Mode::Ablation: return "ablation";
    case Mode::Full: return "full";
    }
    return "?";
}

Mode mode_from_string(std::string_view s) {
    for (auto m : {Mode::Degradation, Mode::Single, Mode::Ablation, Mode::Full})
        if (to_string(m) == s) return m;
    throw Error(Errc::InvalidMode, fmt::format("unknown mode '{}'", s));
}

void TranscriberCmd::validate() const {
    for (const char* p : {"{input_wav}", "{output_mid}"})
        if (command.find(p) == std::string::npos)
            throw Error(Errc::ConfigError, fmt::format("transcriber command lacks {} placeholder: {}", p, command));
    if (!(timeout_s > 0.0)) throw Error(Errc::ConfigError, "transcriber timeout must be > 0");
}

std::string TranscriberCmd::render(const std::map<std::string, std::string>& values) const {
    std::string out;
    out.reserve(command.size() + 64);
    for (std::size_t i = 0; i < command.size();) {
        if (command[i] == '{') {
            const auto close = command.find('}', i);
            if (close != std::string::npos) {
                const auto key = command.substr(i + 1, close - i - 1);
                auto it = values.find(key);
                if (it != values.end()) {
                    out += shell_quote(it->second);
                    i = close + 1;
                    continue;
                }
            }
        }
        out += command[i++];
    }
    return out;
}

const TranscriberCmd& ExperimentConfig::transcriber_for(const std::string& condition) const {
    auto it = condition_transcribers.find(condition);
    return it != condition_transcribers.end() ? it->second : transcriber;
}

void ExperimentConfig::validate() const {
    try {
        augment.validate();
    } catch (const Error& e) {
        throw Error(Errc::ConfigError, e.what());
    }
    transcriber.validate();
    for (const auto& [name, cmd] : condition_transcribers) cmd.validate();
    if (datasets.empty()) throw Error(Errc::ConfigError, "no datasets configured");
    for (const auto& d : datasets)
        if (d.name.empty() || d.source.empty()) throw Error(Errc::ConfigError, "dataset entries need name and source");
    if (!(onset_tolerance > 0.0)) throw Error(Errc::ConfigError, "onset_tolerance must be > 0");
    if (sample_rate <= 0) throw Error(Errc::ConfigError, "sample_rate must be > 0");
    if (workers < 1) throw Error(Errc::ConfigError, "workers must be >= 1");
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    if (p.empty()) return {};
    std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

augment::Range range_of(const toml::node_view<const toml::node>& node, augment::Range fallback, std::string_view key) {
    if (!node) return fallback;
    const auto* arr = node.as_array();
    if (!arr || arr->size() != 2) throw Error(Errc::ConfigError, fmt::format("{} must be a two-element array", key));
    auto lo = (*arr)[0].value<double>();
    auto hi = (*arr)[1].value<double>();
    if (!lo || !hi) throw Error(Errc::ConfigError, fmt::format("{} must hold numbers", key));
    return {*lo, *hi};
}

std::string env_key(const std::string& name) {
    std::string key = "PIANOAUG_DATASET_ROOT_";
    for (unsigned char c : name) key += std::isalnum(c) ? static_cast<char>(std::toupper(c)) : '_';
    return key;
}

synth::TimbrePreset preset_from(const toml::table& t) {
    synth::TimbrePreset p;
    p.name = t["name"].value_or(p.name);
    p.partial_count = t["partial_count"].value_or(p.partial_count);
    p.partial_amplitude_rolloff = t["partial_amplitude_rolloff"].value_or(p.partial_amplitude_rolloff);
    p.inharmonicity_coefficient = t["inharmonicity_coefficient"].value_or(p.inharmonicity_coefficient);
    p.decay_time_s = t["decay_time_s"].value_or(p.decay_time_s);
    p.attack_time_s = t["attack_time_s"].value_or(p.attack_time_s);
    try {
        p.validate();
    } catch (const Error& e) {
        throw Error(Errc::ConfigError, e.what());
    }
    return p;
}

std::vector<synth::TimbrePreset> presets_from(const toml::table& root) {
    std::vector<synth::TimbrePreset> out;
    if (const auto* arr = root["presets"].as_array()) {
        for (const auto& node : *arr) {
            const auto* t = node.as_table();
            if (!t) throw Error(Errc::ConfigError, "[[presets]] entries must be tables");
            out.push_back(preset_from(*t));
        }
    }
    return out;
}

toml::table parse_toml(std::string_view text) {
    try {
        return toml::parse(text);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << e.description() << " at " << e.source().begin;
        throw Error(Errc::ConfigError, msg.str());
    }
}

}  // namespace

std::vector<synth::TimbrePreset> parse_presets(std::string_view toml_text) { return presets_from(parse_toml(toml_text)); }

ExperimentConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir) {
    const auto root = parse_toml(toml_text);
    ExperimentConfig c;

    c.mode = mode_from_string(root["mode"].value_or(std::string("degradation")));
    c.seed = static_cast<std::uint64_t>(root["seed"].value_or(std::int64_t{0}));
    c.onset_tolerance = root["onset_tolerance"].value_or(c.onset_tolerance);
    const auto agg = root["aggregation"].value_or(std::string("macro"));
    if (agg != "macro" && agg != "micro") throw Error(Errc::ConfigError, fmt::format("aggregation '{}'", agg));
    c.aggregation = agg == "micro" ? eval::Aggregation::Micro : eval::Aggregation::Macro;
    c.sample_rate = static_cast<int>(root["sample_rate"].value_or(std::int64_t{c.sample_rate}));
    c.workers = static_cast<int>(root["workers"].value_or(std::int64_t{c.workers}));
    c.persist_audio = root["persist_audio"].value_or(false);
    c.output_dir = resolve(base_dir, root["output_dir"].value_or(std::string("results")));

    if (const auto* st = root["stages"].as_table()) {
        c.groups_enabled = {(*st)["background"].value_or(true), (*st)["eq"].value_or(true),
                            (*st)["pitch_shift"].value_or(true), (*st)["reverb"].value_or(true)};
    }

    const auto aug = root["augment"];
    if (auto p = aug["stage_probability"]; p.is_number()) {
        c.augment.stage_probability.fill(p.value<double>().value());
    } else if (const auto* t = p.as_table()) {
        for (auto s : augment::kStageOrder)
            c.augment.probability(s) = (*t)[augment::to_string(s)].value_or(c.augment.probability(s));
    }
    c.augment.eq_gain_db = range_of(aug["eq_gain_range_db"], c.augment.eq_gain_db, "eq_gain_range_db");
    c.augment.snr_db = range_of(aug["snr_range_db"], c.augment.snr_db, "snr_range_db");
    c.augment.pitch_cents = range_of(aug["pitch_range_cents"], c.augment.pitch_cents, "pitch_range_cents");
    c.augment.noise_dir = resolve(base_dir, aug["noise_dir"].value_or(std::string()));
    c.augment.ir_dir = resolve(base_dir, aug["ir_dir"].value_or(std::string()));
    c.noise_segment_seconds = aug["noise_segment_seconds"].value_or(c.noise_segment_seconds);

    const auto tr = root["transcriber"];
    c.transcriber.command = tr["command"].value_or(std::string());
    c.transcriber.timeout_s = tr["timeout"].value_or(c.transcriber.timeout_s);
    if (const auto* per = tr["conditions"].as_table()) {
        for (const auto& [key, node] : *per) {
            auto cmd = node.value<std::string>();
            if (!cmd) throw Error(Errc::ConfigError, fmt::format("transcriber.conditions.{} must be a string", key.str()));
            c.condition_transcribers[std::string(key.str())] = {*cmd, c.transcriber.timeout_s};
        }
    }

    const char* global_root = std::getenv("PIANOAUG_DATASET_ROOT");
    if (const auto* arr = root["datasets"].as_array()) {
        for (const auto& node : *arr) {
            const auto* t = node.as_table();
            if (!t) throw Error(Errc::ConfigError, "[[datasets]] entries must be tables");
            DatasetSpec d;
            d.name = (*t)["name"].value_or(std::string());
            d.source = (*t)["source"].value_or(d.name);
            d.split = (*t)["split"].value_or(d.split);
            d.root = resolve(base_dir, (*t)["root"].value_or(std::string(".")));
            if (global_root) d.root = global_root;
            if (const char* v = std::getenv(env_key(d.name).c_str())) d.root = v;
            c.datasets.push_back(std::move(d));
        }
    }
    c.presets = presets_from(root);
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ConfigError, fmt::format("cannot open config {}", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

std::string config_to_json(const ExperimentConfig& c) {
    json j;
    j["mode"] = to_string(c.mode);
    j["groups_enabled"] = c.groups_enabled;
    j["augment"] = {{"stage_probability", c.augment.stage_probability},
                    {"eq_gain_range_db", {c.augment.eq_gain_db.low, c.augment.eq_gain_db.high}},
                    {"snr_range_db", {c.augment.snr_db.low, c.augment.snr_db.high}},
                    {"pitch_range_cents", {c.augment.pitch_cents.low, c.augment.pitch_cents.high}},
                    {"noise_dir", c.augment.noise_dir.string()},
                    {"ir_dir", c.augment.ir_dir.string()},
                    {"noise_segment_seconds", c.noise_segment_seconds}};
    j["datasets"] = json::array();
    for (const auto& d : c.datasets)
        j["datasets"].push_back({{"name", d.name}, {"root", d.root.string()}, {"source", d.source}, {"split", d.split}});
    j["transcriber"] = {{"command", c.transcriber.command}, {"timeout", c.transcriber.timeout_s}};
    j["condition_transcribers"] = json::object();
    for (const auto& [k, v] : c.condition_transcribers) j["condition_transcribers"][k] = {{"command", v.command}, {"timeout", v.timeout_s}};
    j["onset_tolerance"] = c.onset_tolerance;
    j["aggregation"] = c.aggregation == eval::Aggregation::Micro ? "micro" : "macro";
    j["seed"] = c.seed;
    j["sample_rate"] = c.sample_rate;
    j["workers"] = c.workers;
    j["persist_audio"] = c.persist_audio;
    j["output_dir"] = c.output_dir.string();
    return j.dump(2);
}

ExperimentConfig config_from_json(std::string_view text) {
    try {
        const auto j = json::parse(text);
        ExperimentConfig c;
        c.mode = mode_from_string(j.at("mode").get<std::string>());
        c.groups_enabled = j.at("groups_enabled").get<std::array<bool, kGroupCount>>();
        const auto& a = j.at("augment");
        c.augment.stage_probability = a.at("stage_probability").get<std::array<double, augment::kStageCount>>();
        auto rng = [](const json& r) { return augment::Range{r.at(0).get<double>(), r.at(1).get<double>()}; };
        c.augment.eq_gain_db = rng(a.at("eq_gain_range_db"));
        c.augment.snr_db = rng(a.at("snr_range_db"));
        c.augment.pitch_cents = rng(a.at("pitch_range_cents"));
        c.augment.noise_dir = a.at("noise_dir").get<std::string>();
        c.augment.ir_dir = a.at("ir_dir").get<std::string>();
        c.noise_segment_seconds = a.at("noise_segment_seconds").get<double>();
        for (const auto& d : j.at("datasets"))
            c.datasets.push_back({d.at("name").get<std::string>(), d.at("root").get<std::string>(),
                                  d.at("source").get<std::string>(), d.at("split").get<std::string>()});
        c.transcriber = {j.at("transcriber").at("command").get<std::string>(), j.at("transcriber").at("timeout").get<double>()};
        for (const auto& [k, v] : j.at("condition_transcribers").items())
            c.condition_transcribers[k] = {v.at("command").get<std::string>(), v.at("timeout").get<double>()};
        c.onset_tolerance = j.at("onset_tolerance").get<double>();
        c.aggregation = j.at("aggregation").get<std::string>() == "micro" ? eval::Aggregation::Micro : eval::Aggregation::Macro;
        c.seed = j.at("seed").get<std::uint64_t>();
        c.sample_rate = j.at("sample_rate").get<int>();
        c.workers = j.at("workers").get<int>();
        c.persist_audio = j.at("persist_audio").get<bool>();
        c.output_dir = j.at("output_dir").get<std::string>();
        return c;
    } catch (const json::exception& e) {
        throw Error(Errc::ConfigError, fmt::format("config json: {}", e.what()));
    }
}

std::string config_hash(const ExperimentConfig& config) {
    // Execution details (workers, output location) do not change results.
    auto j = json::parse(config_to_json(config));
    j.erase("workers");
    j.erase("output_dir");
    j.erase("persist_audio");
    return fmt::format("{:016x}", fnv1a64(j.dump()));
}

}  // namespace pianoaug::harness
