#include "pianoaug/harness.hpp"

#include "pianoaug/error.hpp"

#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <sstream>

namespace pianoaug::harness {

namespace {

constexpr std::array<std::string_view, 11> kCsvFields{
    "precision", "recall", "f1", "micro_precision", "micro_recall", "micro_f1",
    "n_ref",     "n_est",  "n_match", "n_files", "n_failed"};

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::vector<std::string> csv_split(std::string_view line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

double to_double(const std::string& s) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw Error(Errc::ConfigError, fmt::format("bad number '{}' in table", s));
    return v;
}

std::size_t to_count(const std::string& s) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw Error(Errc::ConfigError, fmt::format("bad count '{}' in table", s));
    return v;
}

const eval::Metrics& shown(const ResultTable& t, const Cell& c) {
    return t.aggregation == eval::Aggregation::Micro ? c.micro : c.macro;
}

}  // namespace

std::string delta_cell(double value, double baseline) {
    const double d = value - baseline;
    return fmt::format("{:.1f} ({}{:.1f})", value, d > 0.0 ? '+' : '-', std::fabs(d));
}

ResultTable assemble_table(const ExperimentConfig& config, const std::vector<Condition>& conditions,
                           const std::vector<FileResult>& files) {
    ResultTable t;
    t.mode = config.mode;
    t.aggregation = config.aggregation;
    for (const auto& d : config.datasets) t.datasets.push_back(d.name);
    t.metadata = {
        {"mode", std::string(to_string(config.mode))},
        {"seed", std::to_string(config.seed)},
        {"config_hash", config_hash(config)},
        {"toolkit_version", std::string(kToolkitVersion)},
        {"aggregation", config.aggregation == eval::Aggregation::Micro ? "micro" : "macro"},
        {"onset_tolerance_s", fmt::format("{}", config.onset_tolerance)},
    };
    if (config.mode == Mode::Degradation)
        t.metadata["assumption"] = "test-time augmentation parameters drawn per file from the condition seed";

    for (const auto& cond : conditions) {
        ResultRow row{cond.name, {}};
        for (const auto& ds : t.datasets) {
            std::vector<eval::Metrics> ok;
            Cell cell;
            for (const auto& f : files) {
                if (f.condition != cond.name || f.dataset != ds) continue;
                ++cell.n_files;
                if (f.ok)
                    ok.push_back(f.metrics);
                else
                    ++cell.n_failed;
            }
            if (!ok.empty()) {
                cell.macro = eval::aggregate(ok, eval::Aggregation::Macro);
                cell.micro = eval::aggregate(ok, eval::Aggregation::Micro);
            }
            row.cells.push_back(cell);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string emit_table(const ResultTable& t, TableFormat format) {
    if (t.rows.empty()) throw Error(Errc::InvalidArgument, "cannot emit an empty table");
    std::string out;
    if (format == TableFormat::Csv) {
        for (const auto& [k, v] : t.metadata) out += fmt::format("# {}={}\n", k, v);
        out += "condition";
        for (const auto& ds : t.datasets)
            for (auto f : kCsvFields) out += fmt::format(",{}", csv_escape(fmt::format("{}.{}", ds, f)));
        out += '\n';
        for (const auto& row : t.rows) {
            out += csv_escape(row.condition);
            for (const auto& c : row.cells) {
                out += fmt::format(",{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{},{},{},{}", c.macro.precision,
                                   c.macro.recall, c.macro.f1, c.micro.precision, c.micro.recall, c.micro.f1, c.macro.n_ref,
                                   c.macro.n_est, c.macro.n_match, c.n_files, c.n_failed);
            }
            out += '\n';
        }
        return out;
    }

    const bool deltas = t.mode == Mode::Single || t.mode == Mode::Ablation;
    const bool full_prf = t.mode == Mode::Full;
    const auto agg = t.aggregation == eval::Aggregation::Micro ? "micro" : "macro";
    out += fmt::format("Note-onset {} ({}), mode {}, seed {}\n\n", full_prf ? "P / R / F1" : "F1", agg, to_string(t.mode),
                       t.metadata.count("seed") ? t.metadata.at("seed") : "?");
    out += "| Condition |";
    std::string rule = "|---|";
    for (const auto& ds : t.datasets) {
        if (full_prf) {
            out += fmt::format(" {} P | {} R | {} F1 |", ds, ds, ds);
            rule += "---:|---:|---:|";
        } else {
            out += fmt::format(" {} |", ds);
            rule += "---:|";
        }
    }
    out += "\n" + rule + "\n";
    const auto& base = t.rows.front();
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        out += fmt::format("| {} |", row.condition);
        for (std::size_t d = 0; d < row.cells.size(); ++d) {
            const auto& c = row.cells[d];
            if (c.n_files == c.n_failed) {
                out += full_prf ? " n/a | n/a | n/a |" : " n/a |";
                continue;
            }
            const auto& m = shown(t, c);
            if (full_prf) {
                out += fmt::format(" {:.1f} | {:.1f} | {:.1f} |", 100 * m.precision, 100 * m.recall, 100 * m.f1);
            } else if (deltas && r > 0 && base.cells[d].n_files > base.cells[d].n_failed) {
                out += fmt::format(" {} |", delta_cell(100 * m.f1, 100 * shown(t, base.cells[d]).f1));
            } else {
                out += fmt::format(" {:.1f} |", 100 * m.f1);
            }
        }
        out += '\n';
    }
    return out;
}

ResultTable parse_table_csv(std::string_view csv) {
    ResultTable t;
    std::istringstream in{std::string(csv)};
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.starts_with("# ")) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            t.metadata[line.substr(2, eq - 2)] = line.substr(eq + 1);
            continue;
        }
        const auto fields = csv_split(line);
        if (!header_seen) {
            header_seen = true;
            if (fields.empty() || fields[0] != "condition" || (fields.size() - 1) % kCsvFields.size() != 0)
                throw Error(Errc::ConfigError, "unexpected table header");
            for (std::size_t i = 1; i < fields.size(); i += kCsvFields.size()) {
                const auto& col = fields[i];
                t.datasets.push_back(col.substr(0, col.rfind('.')));
            }
            continue;
        }
        if (fields.size() != 1 + t.datasets.size() * kCsvFields.size())
            throw Error(Errc::ConfigError, fmt::format("row has {} fields", fields.size()));
        ResultRow row{fields[0], {}};
        for (std::size_t d = 0; d < t.datasets.size(); ++d) {
            const auto* f = &fields[1 + d * kCsvFields.size()];
            Cell c;
            c.macro = {to_double(f[0]), to_double(f[1]), to_double(f[2]), to_count(f[6]), to_count(f[7]), to_count(f[8])};
            c.micro = {to_double(f[3]), to_double(f[4]), to_double(f[5]), c.macro.n_ref, c.macro.n_est, c.macro.n_match};
            c.n_files = to_count(f[9]);
            c.n_failed = to_count(f[10]);
            row.cells.push_back(c);
        }
        t.rows.push_back(std::move(row));
    }
    if (auto it = t.metadata.find("mode"); it != t.metadata.end()) t.mode = mode_from_string(it->second);
    if (auto it = t.metadata.find("aggregation"); it != t.metadata.end())
        t.aggregation = it->second == "micro" ? eval::Aggregation::Micro : eval::Aggregation::Macro;
    return t;
}

}  // namespace pianoaug::harness
