#include "pianoaug/harness.hpp"

#include "pianoaug/error.hpp"
#include "pianoaug/random.hpp"

#include <algorithm>
#include <cctype>

namespace pianoaug::harness {

namespace {

using augment::Stage;

struct GroupInfo {
    Group group;
    const char* degradation_label;
    const char* single_label;
    const char* skip_label;
};

constexpr std::array<GroupInfo, kGroupCount> kGroups{{
    {Group::Background, "Background Noise", "Background", "Skip Background"},
    {Group::Eq, "EQ", "EQ", "Skip EQ"},
    {Group::PitchShift, "Pitch Shift", "Pitch Shift", "Skip Pitch Shift"},
    {Group::Reverb, "Reverb", "Reverb", "Skip Reverb"},
}};

// Table row orders differ between the degradation table and the other two.
constexpr std::array<Group, kGroupCount> kDegradationOrder{Group::Background, Group::Eq, Group::PitchShift, Group::Reverb};
constexpr std::array<Group, kGroupCount> kTrainingOrder{Group::Background, Group::PitchShift, Group::Reverb, Group::Eq};

const GroupInfo& info(Group g) { return kGroups[static_cast<std::size_t>(g)]; }

void set_group(std::array<bool, augment::kStageCount>& stages, Group g, bool on) {
    auto set = [&](Stage s) { stages[static_cast<std::size_t>(s)] = on; };
    switch (g) {
    case Group::Background: set(Stage::Noise); break;
    case Group::Eq:
        set(Stage::Eq1);
        set(Stage::Eq2);
        break;
    case Group::PitchShift: set(Stage::Pitch); break;
    case Group::Reverb: set(Stage::Reverb); break;
    }
}

}  // namespace

std::vector<Condition> gen_conditions(const ExperimentConfig& config) {
    const auto& en = config.groups_enabled;
    auto enabled = [&](Group g) { return en[static_cast<std::size_t>(g)]; };
    if (std::none_of(en.begin(), en.end(), [](bool b) { return b; }))
        throw Error(Errc::InvalidMode, std::string(to_string(config.mode)) + " mode needs at least one enabled augmentation");

    std::array<bool, augment::kStageCount> all{};
    for (auto g : kDegradationOrder)
        if (enabled(g)) set_group(all, g, true);

    std::vector<Condition> out;
    switch (config.mode) {
    case Mode::Degradation:
        out.push_back({"No Augmentation", {}, true});
        for (auto g : kDegradationOrder) {
            if (!enabled(g)) continue;
            Condition c{info(g).degradation_label, {}, true};
            set_group(c.stages, g, true);
            out.push_back(c);
        }
        break;
    case Mode::Single:
        out.push_back({"No Augmentation", {}, false});
        for (auto g : kTrainingOrder) {
            if (!enabled(g)) continue;
            Condition c{info(g).single_label, {}, false};
            set_group(c.stages, g, true);
            out.push_back(c);
        }
        break;
    case Mode::Ablation:
        out.push_back({"Full Augmentation", all, false});
        for (auto g : kTrainingOrder) {
            if (!enabled(g)) continue;
            Condition c{info(g).skip_label, all, false};
            set_group(c.stages, g, false);
            out.push_back(c);
        }
        break;
    case Mode::Full:
        out.push_back({"Full Augmentation", all, false});
        break;
    }
    return out;
}

augment::AugmentConfig condition_augment_config(const ExperimentConfig& config, const Condition& condition) {
    auto cfg = config.augment;
    for (std::size_t i = 0; i < augment::kStageCount; ++i) {
        if (!condition.stages[i])
            cfg.stage_probability[i] = 0.0;
        else if (condition.test_time)
            cfg.stage_probability[i] = 1.0;
    }
    return cfg;
}

std::uint64_t file_seed(std::uint64_t master, const std::string& condition, const std::string& dataset,
                        const std::string& file_id) {
    return derive_seed(derive_seed(derive_seed(master, condition), dataset), file_id);
}

std::string condition_slug(const std::string& name) {
    std::string out;
    for (unsigned char c : name) {
        if (std::isalnum(c))
            out += static_cast<char>(std::tolower(c));
        else if (!out.empty() && out.back() != '-')
            out += '-';
    }
    while (!out.empty() && out.back() == '-') out.pop_back();
    return out;
}

}  // namespace pianoaug::harness
