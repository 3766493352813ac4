#pragma once

#include "pianoaug/notes.hpp"

#include <span>
#include <utility>
#include <vector>

namespace pianoaug::eval {

constexpr double kDefaultOnsetTolerance = 0.050;

/// Onset distances are compared with this slack so that a difference that
/// is exactly the tolerance in decimal still counts as inside.
constexpr double kToleranceSlack = 1e-9;

struct MatchResult {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (ref, est), sorted by ref
    std::vector<std::size_t> unmatched_ref;
    std::vector<std::size_t> unmatched_est;
    double onset_tolerance_s = kDefaultOnsetTolerance;
    std::size_t n_ref = 0;
    std::size_t n_est = 0;
};

/// Maximum-cardinality matching (Hopcroft-Karp) over pairs with equal pitch
/// and |onset difference| <= tolerance. Offsets and velocities are ignored.
MatchResult match_notes(const NoteSequence& ref, const NoteSequence& est, double onset_tol = kDefaultOnsetTolerance);

/// Precision, recall and F1 in [0, 1] plus the counts they came from.
struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t n_ref = 0;
    std::size_t n_est = 0;
    std::size_t n_match = 0;

    friend bool operator==(const Metrics&, const Metrics&) = default;
};

double f1_score(double precision, double recall);

/// Counts to metrics. Both sides empty scores (1, 1, 1); a zero denominator
/// otherwise gives 0 for that ratio.
Metrics metrics_from_counts(std::size_t n_ref, std::size_t n_est, std::size_t n_match);
Metrics prf(const MatchResult& match);

enum class Aggregation { Macro, Micro };

/// Macro averages per-file P, R, F1 (counts are summed); micro recomputes
/// from the summed counts. Throws EmptyCorpus.
Metrics aggregate(std::span<const Metrics> per_file, Aggregation mode = Aggregation::Macro);

Metrics evaluate(const NoteSequence& ref, const NoteSequence& est, double onset_tol = kDefaultOnsetTolerance);

}  // namespace pianoaug::eval
