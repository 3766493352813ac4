#pragma once

#include "pianoaug/augment.hpp"
#include "pianoaug/eval.hpp"
#include "pianoaug/synth.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pianoaug::harness {

constexpr std::string_view kToolkitVersion = "0.1.0";

enum class Mode { Degradation, Single, Ablation, Full };

std::string_view to_string(Mode m);
Mode mode_from_string(std::string_view s);  // throws InvalidMode

/// User-facing augmentation groups. EQ drives both EQ stages of the chain.
enum class Group { Background, Eq, PitchShift, Reverb };
constexpr std::size_t kGroupCount = 4;

struct TranscriberCmd {
    /// Shell command. Required placeholders: {input_wav} and {output_mid}.
    /// Optional: {file_id}, {dataset}, {condition}, {ref_mid}.
    std::string command;
    double timeout_s = 600.0;

    void validate() const;  // throws ConfigError
    std::string render(const std::map<std::string, std::string>& values) const;
};

struct DatasetSpec {
    std::string name;
    std::filesystem::path root;
    std::string source;
    std::string split = "test";
};

struct ExperimentConfig {
    Mode mode = Mode::Degradation;
    std::array<bool, kGroupCount> groups_enabled{true, true, true, true};
    augment::AugmentConfig augment;
    double noise_segment_seconds = 10.0;
    std::vector<DatasetSpec> datasets;
    TranscriberCmd transcriber;
    std::map<std::string, TranscriberCmd> condition_transcribers;  // by condition name
    double onset_tolerance = eval::kDefaultOnsetTolerance;
    eval::Aggregation aggregation = eval::Aggregation::Macro;
    std::uint64_t seed = 0;
    int sample_rate = kDefaultSampleRate;
    int workers = 1;
    bool persist_audio = false;
    std::filesystem::path output_dir = "results";
    std::vector<synth::TimbrePreset> presets;

    const TranscriberCmd& transcriber_for(const std::string& condition) const;
    void validate() const;  // throws ConfigError
};

/// Parse the TOML form. Relative paths resolve against `base_dir`. Dataset
/// roots may be overridden by PIANOAUG_DATASET_ROOT_<NAME> (name upper-cased,
/// other characters mapped to '_') or, for all datasets, PIANOAUG_DATASET_ROOT.
ExperimentConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(std::string_view text);
std::string config_hash(const ExperimentConfig& config);

std::vector<synth::TimbrePreset> parse_presets(std::string_view toml_text);

struct Condition {
    std::string name;
    std::array<bool, augment::kStageCount> stages{};  // chain stages switched on
    /// Degradation conditions augment the test audio; the others describe a
    /// training recipe and are evaluated on clean audio.
    bool test_time = false;
};

/// Row sets: degradation -> No Augmentation, Background Noise, EQ, Pitch Shift,
/// Reverb; single -> No Augmentation, Background, Pitch Shift, Reverb, EQ;
/// ablation -> Full Augmentation, Skip Background, Skip Pitch Shift,
/// Skip Reverb, Skip EQ; full -> Full Augmentation. Disabled groups drop out.
/// Throws InvalidMode when no group is enabled.
std::vector<Condition> gen_conditions(const ExperimentConfig& config);

/// Chain settings for a condition: probability 1 for test-time stages, the
/// configured probability for training recipes, 0 for stages switched off.
augment::AugmentConfig condition_augment_config(const ExperimentConfig& config, const Condition& condition);

std::uint64_t file_seed(std::uint64_t master, const std::string& condition, const std::string& dataset,
                        const std::string& file_id);

struct FileResult {
    std::string condition;
    std::string dataset;
    std::string file_id;
    bool ok = false;
    std::string message;
    eval::Metrics metrics;
    std::uint64_t seed = 0;
    std::optional<augment::AppliedLog> applied;
    std::string transcription;  // path relative to the output dir
};

std::string to_json_line(const FileResult& r);
FileResult file_result_from_json_line(const std::string& line);

struct Cell {
    eval::Metrics macro;
    eval::Metrics micro;
    std::size_t n_files = 0;
    std::size_t n_failed = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
};

struct ResultRow {
    std::string condition;
    std::vector<Cell> cells;  // one per dataset, table order

    friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct ResultTable {
    Mode mode = Mode::Degradation;
    eval::Aggregation aggregation = eval::Aggregation::Macro;
    std::vector<std::string> datasets;
    std::vector<ResultRow> rows;
    std::map<std::string, std::string> metadata;

    friend bool operator==(const ResultTable&, const ResultTable&) = default;
};

/// Ordered fold of per-file results into the table; independent of the order
/// in which files finished.
ResultTable assemble_table(const ExperimentConfig& config, const std::vector<Condition>& conditions,
                           const std::vector<FileResult>& files);

struct RunOutput {
    ResultTable table;
    std::vector<FileResult> files;
    bool all_failed() const;
};

/// Runs every condition x dataset x file, writes results.jsonl, table.csv,
/// table.md, config.json and (non-degradation modes) training_configs/ under
/// `config.output_dir`. Transcriber failures are recorded per file.
/// Throws DatasetMissing, ConfigError.
RunOutput run_experiment(const ExperimentConfig& config);

/// Re-scores the persisted transcriptions of a finished run against the
/// references and rebuilds its table.
ResultTable recompute_table(const std::filesystem::path& output_dir);

enum class TableFormat { Csv, Markdown };

std::string emit_table(const ResultTable& table, TableFormat format);
ResultTable parse_table_csv(std::string_view csv);

/// "85.5 (+3.1)": value and signed delta against the baseline, both already
/// in percent. A delta that is not strictly positive prints with '-'.
std::string delta_cell(double value, double baseline);

std::string condition_slug(const std::string& name);

}  // namespace pianoaug::harness
