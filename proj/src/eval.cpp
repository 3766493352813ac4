#include "pianoaug/eval.hpp"

#include "pianoaug/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace pianoaug::eval {

namespace {

// Hopcroft-Karp over a left-to-right adjacency list.
class BipartiteMatcher {
public:
    BipartiteMatcher(const std::vector<std::vector<std::size_t>>& adj, std::size_t n_right)
        : adj_(adj), match_l_(adj.size(), kNone), match_r_(n_right, kNone), dist_(adj.size()) {}

    void run() {
        while (bfs()) {
            for (std::size_t u = 0; u < adj_.size(); ++u)
                if (match_l_[u] == kNone) dfs(u);
        }
    }

    const std::vector<std::size_t>& left_matches() const { return match_l_; }
    const std::vector<std::size_t>& right_matches() const { return match_r_; }

    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

private:
    bool bfs() {
        std::queue<std::size_t> q;
        bool found = false;
        for (std::size_t u = 0; u < adj_.size(); ++u) {
            if (match_l_[u] == kNone) {
                dist_[u] = 0;
                q.push(u);
            } else {
                dist_[u] = kInf;
            }
        }
        while (!q.empty()) {
            const auto u = q.front();
            q.pop();
            for (auto v : adj_[u]) {
                const auto w = match_r_[v];
                if (w == kNone) {
                    found = true;
                } else if (dist_[w] == kInf) {
                    dist_[w] = dist_[u] + 1;
                    q.push(w);
                }
            }
        }
        return found;
    }

    bool dfs(std::size_t u) {
        for (auto v : adj_[u]) {
            const auto w = match_r_[v];
            if (w == kNone || (dist_[w] == dist_[u] + 1 && dfs(w))) {
                match_l_[u] = v;
                match_r_[v] = u;
                return true;
            }
        }
        dist_[u] = kInf;
        return false;
    }

    static constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
    const std::vector<std::vector<std::size_t>>& adj_;
    std::vector<std::size_t> match_l_;
    std::vector<std::size_t> match_r_;
    std::vector<std::size_t> dist_;
};

}  // namespace

MatchResult match_notes(const NoteSequence& ref, const NoteSequence& est, double onset_tol) {
    if (!(onset_tol > 0.0)) throw Error(Errc::InvalidArgument, "onset tolerance must be > 0");
    const auto& r = ref.notes;
    const auto& e = est.notes;

    // Estimated notes sorted by (pitch, onset) for windowed lookup.
    std::vector<std::size_t> order(e.size());
    for (std::size_t j = 0; j < e.size(); ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) {
        if (e[a].pitch != e[b].pitch) return e[a].pitch < e[b].pitch;
        return e[a].onset < e[b].onset;
    });

    const double reach = onset_tol + kToleranceSlack;
    std::vector<std::vector<std::size_t>> adj(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        auto lo = std::lower_bound(order.begin(), order.end(), i, [&](std::size_t j, std::size_t ri) {
            if (e[j].pitch != r[ri].pitch) return e[j].pitch < r[ri].pitch;
            return e[j].onset < r[ri].onset - reach;
        });
        for (auto it = lo; it != order.end() && e[*it].pitch == r[i].pitch; ++it) {
            const double d = std::fabs(e[*it].onset - r[i].onset);
            if (e[*it].onset > r[i].onset + reach) break;
            if (d <= reach) adj[i].push_back(*it);
        }
    }

    BipartiteMatcher matcher(adj, e.size());
    matcher.run();

    MatchResult out;
    out.onset_tolerance_s = onset_tol;
    out.n_ref = r.size();
    out.n_est = e.size();
    const auto& ml = matcher.left_matches();
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (ml[i] == BipartiteMatcher::kNone)
            out.unmatched_ref.push_back(i);
        else
            out.pairs.emplace_back(i, ml[i]);
    }
    const auto& mr = matcher.right_matches();
    for (std::size_t j = 0; j < e.size(); ++j)
        if (mr[j] == BipartiteMatcher::kNone) out.unmatched_est.push_back(j);
    return out;
}

double f1_score(double precision, double recall) {
    return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

Metrics metrics_from_counts(std::size_t n_ref, std::size_t n_est, std::size_t n_match) {
    Metrics m{0.0, 0.0, 0.0, n_ref, n_est, n_match};
    if (n_ref == 0 && n_est == 0) {
        m.precision = m.recall = m.f1 = 1.0;
        return m;
    }
    m.precision = n_est > 0 ? static_cast<double>(n_match) / static_cast<double>(n_est) : 0.0;
    m.recall = n_ref > 0 ? static_cast<double>(n_match) / static_cast<double>(n_ref) : 0.0;
    m.f1 = f1_score(m.precision, m.recall);
    return m;
}

Metrics prf(const MatchResult& match) { return metrics_from_counts(match.n_ref, match.n_est, match.pairs.size()); }

Metrics aggregate(std::span<const Metrics> per_file, Aggregation mode) {
    if (per_file.empty()) throw Error(Errc::EmptyCorpus, "no per-file metrics to aggregate");
    std::size_t n_ref = 0, n_est = 0, n_match = 0;
    double p = 0.0, r = 0.0, f = 0.0;
    for (const auto& m : per_file) {
        n_ref += m.n_ref;
        n_est += m.n_est;
        n_match += m.n_match;
        p += m.precision;
        r += m.recall;
        f += m.f1;
    }
    if (mode == Aggregation::Micro) return metrics_from_counts(n_ref, n_est, n_match);
    const auto n = static_cast<double>(per_file.size());
    return {p / n, r / n, f / n, n_ref, n_est, n_match};
}

Metrics evaluate(const NoteSequence& ref, const NoteSequence& est, double onset_tol) {
    return prf(match_notes(ref, est, onset_tol));
}

}  // namespace pianoaug::eval
