#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pianoaug/error.hpp"
#include "pianoaug/harness.hpp"
#include "pianoaug/midi.hpp"
#include "pianoaug/synth.hpp"
#include "support.hpp"

#include <cstdlib>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

using namespace pianoaug;
using namespace pianoaug::harness;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> names(const std::vector<Condition>& cs) {
    std::vector<std::string> out;
    for (const auto& c : cs) out.push_back(c.name);
    return out;
}

int stages_on(const Condition& c) { return static_cast<int>(std::count(c.stages.begin(), c.stages.end(), true)); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Small corpus: <root>/synth/test/{audio,midi}, plus fixture banks.
struct Corpus {
    testing::TempDir dir{"harness"};
    explicit Corpus(int files = 3, double seconds = 4.0) {
        const auto base = dir.path / "data" / "synth" / "test";
        fs::create_directories(base / "audio");
        fs::create_directories(base / "midi");
        for (int i = 0; i < files; ++i) {
            const auto id = fmt::format("p{}", i);
            const auto seq = synth::random_piece(static_cast<std::uint64_t>(i), seconds, 5.0);
            midi::write_midi_file(base / "midi" / (id + ".mid"), seq);
            audio::write_wav_file(base / "audio" / (id + ".wav"), synth::render(seq, synth::default_presets()[0]));
        }
        fs::create_directories(dir.path / "noise");
        fs::create_directories(dir.path / "ir");
        audio::write_wav_file(dir.path / "noise" / "n.wav", synth::noise_clip(synth::NoiseColor::Pink, 3.0, 1));
        audio::write_wav_file(dir.path / "ir" / "r.wav", synth::room_ir(0.3, 1));
    }

    ExperimentConfig config(Mode mode, const std::string& oracle_args = "") const {
        ExperimentConfig c;
        c.mode = mode;
        c.datasets = {{"synth", dir.path / "data", "synth", "test"}};
        c.augment.noise_dir = dir.path / "noise";
        c.augment.ir_dir = dir.path / "ir";
        c.transcriber.command = std::string(PIANOAUG_CLI) + " transcribe-oracle --audio {input_wav} --ref {ref_mid} -o {output_mid} " + oracle_args;
        c.transcriber.timeout_s = 60;
        c.output_dir = dir.path / "out";
        c.seed = 3;
        c.workers = 3;
        return c;
    }
};

}  // namespace

TEST_CASE("condition sets") {
    ExperimentConfig c;
    c.mode = Mode::Degradation;
    CHECK(names(gen_conditions(c)) == std::vector<std::string>{"No Augmentation", "Background Noise", "EQ", "Pitch Shift", "Reverb"});
    c.mode = Mode::Single;
    CHECK(names(gen_conditions(c)) == std::vector<std::string>{"No Augmentation", "Background", "Pitch Shift", "Reverb", "EQ"});
    c.mode = Mode::Ablation;
    CHECK(names(gen_conditions(c)) ==
          std::vector<std::string>{"Full Augmentation", "Skip Background", "Skip Pitch Shift", "Skip Reverb", "Skip EQ"});
    c.mode = Mode::Full;
    CHECK(names(gen_conditions(c)) == std::vector<std::string>{"Full Augmentation"});
}

TEST_CASE("single enables one group, ablation removes one") {
    ExperimentConfig c;
    c.mode = Mode::Single;
    const auto single = gen_conditions(c);
    CHECK(stages_on(single[0]) == 0);
    for (std::size_t i = 1; i < single.size(); ++i) CHECK(stages_on(single[i]) == (single[i].name == "EQ" ? 2 : 1));
    c.mode = Mode::Ablation;
    const auto abl = gen_conditions(c);
    CHECK(stages_on(abl[0]) == 5);
    for (std::size_t i = 1; i < abl.size(); ++i) CHECK(stages_on(abl[i]) == (abl[i].name == "Skip EQ" ? 3 : 4));
    for (const auto& x : abl) CHECK_FALSE(x.test_time);
    c.mode = Mode::Degradation;
    for (const auto& x : gen_conditions(c)) CHECK(x.test_time);
}

TEST_CASE("disabled groups drop out") {
    ExperimentConfig c;
    c.mode = Mode::Degradation;
    c.groups_enabled = {true, false, true, false};
    CHECK(names(gen_conditions(c)) == std::vector<std::string>{"No Augmentation", "Background Noise", "Pitch Shift"});
    c.groups_enabled = {false, false, false, false};
    c.mode = Mode::Single;
    try {
        gen_conditions(c);
        FAIL("expected InvalidMode");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InvalidMode);
    }
    CHECK_THROWS_AS(mode_from_string("tableV"), Error);
}

TEST_CASE("condition chain settings") {
    ExperimentConfig c;
    c.mode = Mode::Degradation;
    const auto conds = gen_conditions(c);
    const auto eq = condition_augment_config(c, conds[2]);
    CHECK(eq.stage_probability == std::array<double, 5>{1, 0, 0, 1, 0});
    const auto none = condition_augment_config(c, conds[0]);
    CHECK(none.stage_probability == std::array<double, 5>{0, 0, 0, 0, 0});
    c.mode = Mode::Ablation;
    const auto skip_pitch = condition_augment_config(c, gen_conditions(c)[2]);
    CHECK(skip_pitch.stage_probability == std::array<double, 5>{0.5, 0.5, 0, 0.5, 0.5});
}

TEST_CASE("full pipeline with zero probabilities equals no augmentation") {
    ExperimentConfig c;
    c.mode = Mode::Ablation;
    c.augment.stage_probability.fill(0.0);
    const auto full = condition_augment_config(c, gen_conditions(c)[0]);
    const auto x = synth::render(synth::random_piece(1, 3.0), synth::default_presets()[1]);
    augment::Banks banks;
    banks.noise.clips = {synth::noise_clip(synth::NoiseColor::White, 1.0, 1)};
    banks.ir.impulse_responses = {synth::room_ir(0.2, 1)};
    CHECK(augment::augment_chain(x, full, banks, file_seed(c.seed, "Full Augmentation", "d", "f")).first == x);
}

TEST_CASE("seeds are isolated per condition") {
    CHECK(file_seed(1, "EQ", "maps", "a") == file_seed(1, "EQ", "maps", "a"));
    CHECK(file_seed(1, "EQ", "maps", "a") != file_seed(1, "Reverb", "maps", "a"));
    CHECK(file_seed(1, "EQ", "maps", "a") != file_seed(1, "EQ", "maps", "b"));
    CHECK(file_seed(1, "EQ", "maps", "a") != file_seed(2, "EQ", "maps", "a"));
    // toggling another group leaves this condition's draws alone
    ExperimentConfig a, b;
    b.groups_enabled[0] = false;
    auto find = [](const std::vector<Condition>& cs, const std::string& n) {
        return *std::find_if(cs.begin(), cs.end(), [&](auto& c) { return c.name == n; });
    };
    const auto ca = condition_augment_config(a, find(gen_conditions(a), "Pitch Shift"));
    const auto cb = condition_augment_config(b, find(gen_conditions(b), "Pitch Shift"));
    CHECK(ca.stage_probability == cb.stage_probability);
}

TEST_CASE("transcriber command template") {
    TranscriberCmd t{"model --in {input_wav} --out {output_mid} --tag {condition}", 10};
    CHECK_NOTHROW(t.validate());
    CHECK(t.render({{"input_wav", "a b.wav"}, {"output_mid", "o'x.mid"}, {"condition", "EQ"}}) ==
          "model --in 'a b.wav' --out 'o'\\''x.mid' --tag 'EQ'");
    CHECK_THROWS_AS((TranscriberCmd{"model {input_wav}", 10}.validate()), Error);
    CHECK_THROWS_AS((TranscriberCmd{"model {input_wav} {output_mid}", 0}.validate()), Error);
}

TEST_CASE("delta cells") {
    CHECK(delta_cell(85.5, 82.4) == "85.5 (+3.1)");
    CHECK(delta_cell(86.4, 86.4) == "86.4 (-0.0)");
    CHECK(delta_cell(80.0, 82.45) == "80.0 (-2.5)");
}

TEST_CASE("toml config") {
    testing::TempDir dir("toml");
    const std::string text = R"(
mode = "ablation"
seed = 42
onset_tolerance = 0.05
aggregation = "micro"
workers = 4
output_dir = "out"

[stages]
reverb = false

[augment]
stage_probability = { noise = 0.25 }
eq_gain_range_db = [-6.0, 6.0]
snr_range_db = [10, 20]
noise_dir = "banks/noise"
ir_dir = "/abs/ir"

[transcriber]
command = "run {input_wav} {output_mid}"
timeout = 120

[transcriber.conditions]
"Skip EQ" = "other {input_wav} {output_mid}"

[[datasets]]
name = "maps"
root = "corpora"
split = "test"

[[datasets]]
name = "maestro-v3"
root = "/data/m"
source = "maestro"
)";
    const auto c = parse_config(text, dir.path);
    CHECK(c.mode == Mode::Ablation);
    CHECK(c.seed == 42);
    CHECK(c.aggregation == eval::Aggregation::Micro);
    CHECK(c.workers == 4);
    CHECK(c.output_dir == dir.path / "out");
    CHECK(c.groups_enabled == std::array<bool, 4>{true, true, true, false});
    CHECK(c.augment.stage_probability == std::array<double, 5>{0.5, 0.25, 0.5, 0.5, 0.5});
    CHECK(c.augment.eq_gain_db.low == -6.0);
    CHECK(c.augment.snr_db.high == 20.0);
    CHECK(c.augment.noise_dir == dir.path / "banks/noise");
    CHECK(c.augment.ir_dir == "/abs/ir");
    CHECK(c.transcriber.timeout_s == 120);
    CHECK(c.transcriber_for("Skip EQ").command == "other {input_wav} {output_mid}");
    CHECK(c.transcriber_for("Skip Reverb").command == "run {input_wav} {output_mid}");
    REQUIRE(c.datasets.size() == 2);
    CHECK(c.datasets[0].source == "maps");
    CHECK(c.datasets[0].root == dir.path / "corpora");
    CHECK(c.datasets[1].source == "maestro");

    setenv("PIANOAUG_DATASET_ROOT_MAESTRO_V3", "/elsewhere", 1);
    CHECK(parse_config(text, dir.path).datasets[1].root == "/elsewhere");
    unsetenv("PIANOAUG_DATASET_ROOT_MAESTRO_V3");
    setenv("PIANOAUG_DATASET_ROOT", "/shared", 1);
    CHECK(parse_config(text, dir.path).datasets[0].root == "/shared");
    unsetenv("PIANOAUG_DATASET_ROOT");

    const auto back = config_from_json(config_to_json(c));
    CHECK(config_to_json(back) == config_to_json(c));
    CHECK(config_hash(back) == config_hash(c));
    auto busier = c;
    busier.workers = 16;
    busier.output_dir = "/tmp/x";
    CHECK(config_hash(busier) == config_hash(c));
    busier.seed = 43;
    CHECK(config_hash(busier) != config_hash(c));
}

TEST_CASE("config errors") {
    auto code = [](const std::string& t) {
        try {
            parse_config(t);
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::IoError;
    };
    const std::string ok = "[transcriber]\ncommand = \"x {input_wav} {output_mid}\"\n[[datasets]]\nname = \"d\"\n";
    CHECK(code(ok) == Errc::IoError);  // parses fine
    CHECK(code("mode = [") == Errc::ConfigError);
    CHECK(code("aggregation = \"median\"\n" + ok) == Errc::ConfigError);
    CHECK(code("[transcriber]\ncommand = \"x\"\n[[datasets]]\nname = \"d\"\n") == Errc::ConfigError);
    CHECK(code("[transcriber]\ncommand = \"x {input_wav} {output_mid}\"\n") == Errc::ConfigError);
    CHECK(code("[augment]\nsnr_range_db = [1]\n" + ok) == Errc::ConfigError);
    CHECK(code("mode = \"sideways\"\n" + ok) == Errc::InvalidMode);
}

TEST_CASE("presets from toml") {
    const auto ps = parse_presets(R"(
[[presets]]
name = "glass"
partial_count = 6
inharmonicity_coefficient = 0.0005
)");
    REQUIRE(ps.size() == 1);
    CHECK(ps[0].name == "glass");
    CHECK(ps[0].partial_count == 6);
    CHECK(ps[0].inharmonicity_coefficient == 0.0005);
}

TEST_CASE("table round trip through csv") {
    ResultTable t;
    t.mode = Mode::Single;
    t.datasets = {"maps", "maestro"};
    // shaped like assemble_table output: mode in the metadata, counts shared
    t.metadata = {{"seed", "1"}, {"config_hash", "abc"}, {"mode", "single"}, {"aggregation", "macro"}};
    int k = 0;
    for (const char* n : {"No Augmentation", "Pitch Shift"}) {
        ResultRow r{n, {}};
        ++k;
        for (int d = 0; d < 2; ++d) {
            Cell c;
            c.macro = eval::metrics_from_counts(100 + d, 90, 70 + 5 * k + d);
            c.micro = c.macro;
            c.micro.f1 = 1.0 / 3.0;
            c.n_files = 4;
            c.n_failed = static_cast<std::size_t>(d);
            r.cells.push_back(c);
        }
        t.rows.push_back(r);
    }
    CHECK(parse_table_csv(emit_table(t, TableFormat::Csv)) == t);

    const auto md = emit_table(t, TableFormat::Markdown);
    CHECK(md.find("| Condition | maps | maestro |") != std::string::npos);
    CHECK(md.find("| Pitch Shift | ") != std::string::npos);
    CHECK(md.find("(+") != std::string::npos);
}

TEST_CASE("identity transcriber scores 100 everywhere") {
    Corpus corpus;
    auto cfg = corpus.config(Mode::Degradation);
    const auto out = run_experiment(cfg);
    REQUIRE(out.table.rows.size() == 5);
    CHECK(out.files.size() == 15);
    for (const auto& f : out.files) CHECK_MESSAGE(f.ok, f.message);
    for (const auto& r : out.table.rows) {
        CHECK(r.cells[0].macro.f1 == 1.0);
        CHECK(r.cells[0].n_files == 3);
    }
    // test-time conditions carry their logs, the clean row does not
    for (const auto& f : out.files) CHECK(f.applied.has_value() == (f.condition != "No Augmentation"));
    for (const char* name : {"results.jsonl", "table.csv", "table.md", "config.json"}) CHECK(fs::exists(cfg.output_dir / name));
    CHECK(slurp(cfg.output_dir / "table.md").find("| Reverb | 100.0 |") != std::string::npos);
    CHECK_FALSE(fs::exists(cfg.output_dir / "audio" / "reverb" / "synth" / "p0.wav"));

    // same inputs, same table; worker count does not matter
    cfg.workers = 1;
    cfg.output_dir = corpus.dir.path / "out_again";
    CHECK(run_experiment(cfg).table == out.table);
    CHECK(recompute_table(cfg.output_dir) == out.table);
    CHECK(parse_table_csv(slurp(cfg.output_dir / "table.csv")) == out.table);
}

TEST_CASE("perturbing transcriber is scored like its corruption") {
    Corpus corpus(3, 20.0);
    auto cfg = corpus.config(Mode::Degradation, "--drop-p 0.2 --seed-label {file_id}");
    cfg.groups_enabled = {false, false, true, false};
    const auto out = run_experiment(cfg);
    REQUIRE(out.table.rows.size() == 2);
    const auto& m = out.table.rows[0].cells[0].micro;
    CHECK(m.precision == 1.0);
    CHECK(m.recall == doctest::Approx(0.8).epsilon(0.1));
    CHECK(recompute_table(cfg.output_dir) == out.table);
}

TEST_CASE("failures are recorded per file") {
    Corpus corpus;
    auto cfg = corpus.config(Mode::Degradation);
    cfg.groups_enabled = {false, true, false, false};
    // fails for one file only
    cfg.transcriber.command = "case {file_id} in *p1*) exit 3;; esac; " + cfg.transcriber.command;
    auto out = run_experiment(cfg);
    std::size_t failed = 0;
    for (const auto& f : out.files)
        if (!f.ok) {
            ++failed;
            CHECK(f.file_id == "p1");
            CHECK(f.message.find("TranscriberFailed") != std::string::npos);
        }
    CHECK(failed == 2);
    CHECK_FALSE(out.all_failed());
    CHECK(out.table.rows[0].cells[0].n_failed == 1);
    CHECK(recompute_table(cfg.output_dir) == out.table);

    cfg.transcriber = {"sleep 5; true {input_wav} {output_mid}", 0.3};
    cfg.output_dir = corpus.dir.path / "timeouts";
    out = run_experiment(cfg);
    CHECK(out.all_failed());
    CHECK(out.files[0].message.find("timed out") != std::string::npos);
    CHECK(emit_table(out.table, TableFormat::Markdown).find("n/a") != std::string::npos);
}

TEST_CASE("persisted audio and logs") {
    Corpus corpus(1);
    auto cfg = corpus.config(Mode::Degradation);
    cfg.groups_enabled = {true, false, false, false};
    cfg.persist_audio = true;
    const auto out = run_experiment(cfg);
    const auto wav = cfg.output_dir / "audio" / condition_slug("Background Noise") / "synth" / "p0.wav";
    REQUIRE(fs::exists(wav));
    const auto log = augment::log_from_json(slurp(fs::path(wav).replace_extension(".json")));
    CHECK(log.applied(augment::Stage::Noise));
    CHECK_FALSE(log.applied(augment::Stage::Reverb));
    CHECK(out.files[1].applied == log);
}

TEST_CASE("training recipes are written for non-degradation modes") {
    Corpus corpus(1);
    auto cfg = corpus.config(Mode::Ablation);
    const auto out = run_experiment(cfg);
    CHECK(out.table.rows.size() == 5);
    for (const auto& r : out.table.rows) CHECK(r.cells[0].macro.f1 == 1.0);
    CHECK(fs::exists(cfg.output_dir / "training_configs" / (condition_slug("Skip Reverb") + ".json")));
    CHECK(emit_table(out.table, TableFormat::Markdown).find("100.0 (-0.0)") != std::string::npos);
}

TEST_CASE("missing dataset") {
    Corpus corpus(1);
    auto cfg = corpus.config(Mode::Degradation);
    cfg.datasets[0].split = "validation";
    try {
        run_experiment(cfg);
        FAIL("expected DatasetMissing");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::DatasetMissing);
    }
}
