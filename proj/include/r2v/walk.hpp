#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "r2v/graph.hpp"
#include "r2v/rng.hpp"

namespace r2v {

enum class Exploitation { FirstOrder, Vrrw, DrrwKl, DrrwJs };
enum class Exploration { None, EpsilonGreedy, Ucb };

std::string to_string(Exploitation e);
std::string to_string(Exploration e);
Exploitation parse_exploitation(std::string_view name);
Exploration parse_exploration(std::string_view name);

struct WalkConfig {
    Exploitation exploitation = Exploitation::DrrwJs;
    Exploration exploration = Exploration::Ucb;
    double epsilon = 0.5;            // used by epsilon-greedy only
    std::uint32_t walks_per_node = 80;  // R
    std::uint32_t walk_length = 40;     // L, total nodes per path
    std::uint64_t seed = 1;
    unsigned workers = 1;

    void validate() const;
};

// One in-progress walk. Tracks the path and full-path visit counts (start
// node included). The occupation vector derives from appended steps only —
// the occurrence at position 0 carries no reinforcement mass, so a fresh walk
// starts from a uniform occupation vector.
class WalkState {
public:
    WalkState(NodeId start, std::size_t node_count) : node_count_(node_count) {
        reset(start);
    }

    void reset(NodeId start) {
        path_.clear();
        counts_.clear();
        start_ = start;
        path_.push_back(start);
        counts_[start] = 1;
    }

    void append(NodeId v) {
        path_.push_back(v);
        ++counts_[v];
    }

    NodeId start() const { return start_; }
    NodeId current() const { return path_.back(); }
    std::size_t step() const { return path_.size() - 1; }  // n
    std::size_t node_count() const { return node_count_; }
    const std::vector<NodeId>& path() const { return path_; }
    const std::unordered_map<NodeId, std::uint32_t>& visit_counts() const { return counts_; }

    // Occurrences of v in the path (start position included).
    std::uint32_t path_count(NodeId v) const {
        auto it = counts_.find(v);
        return it == counts_.end() ? 0 : it->second;
    }

private:
    std::vector<NodeId> path_;
    std::unordered_map<NodeId, std::uint32_t> counts_;
    NodeId start_ = 0;
    std::size_t node_count_ = 0;
};

// Local time: 1 + number of occurrences of v in the path.
inline std::uint32_t local_time(const WalkState& s, NodeId v) {
    return 1 + s.path_count(v);
}

// Numerator of the occupation vector: 1 + occurrences among appended steps.
// The start position carries no reinforcement mass, so the vector sums to 1
// with denominator n + N.
inline std::uint32_t occupation_mass(const WalkState& s, NodeId v) {
    std::uint32_t c = s.path_count(v);
    if (v == s.start() && c > 0) --c;
    return 1 + c;
}

inline double occupation_weight(const WalkState& s, NodeId v) {
    return double(occupation_mass(s, v)) / double(s.step() + s.node_count());
}

// KL divergence between the occupation vector and the one after hypothetically
// appending a node of mass `mass_x`, collapsed to a two-term closed form.
inline double drrw_kl_divergence(std::size_t step, std::size_t node_count,
                                 std::uint32_t mass_x) {
    const double d = double(step + node_count);
    const double zx = double(mass_x);
    return std::log((d + 1.0) / d) + (zx / d) * std::log(zx / (zx + 1.0));
}

// Jensen-Shannon divergence for the same pair of vectors. All components
// other than x share two constant ratios, so both sums collapse.
inline double drrw_js_divergence(std::size_t step, std::size_t node_count,
                                 std::uint32_t mass_x) {
    const double d = double(step + node_count);
    const double a = d + 1.0;
    const double zx = double(mass_x);
    const double wx = zx / d;
    const double vx = (zx + 1.0) / a;
    const double mx2 = zx * (a + d) + d;  // 2*a*d times the mixture weight of x
    double js = (1.0 - wx) * std::log(2.0 * a / (a + d)) +
                wx * std::log(2.0 * a * zx / mx2);
    js += (1.0 - vx) * std::log(2.0 * d / (a + d)) +
          vx * std::log(2.0 * d * (zx + 1.0) / mx2);
    return 0.5 * js;
}

// Exploitation scores Q_x(n) = 1 - divergence.
inline double drrw_kl_score(const WalkState& s, NodeId x) {
    return 1.0 - drrw_kl_divergence(s.step(), s.node_count(), occupation_mass(s, x));
}
inline double drrw_js_score(const WalkState& s, NodeId x) {
    return 1.0 - drrw_js_divergence(s.step(), s.node_count(), occupation_mass(s, x));
}

// UCB1-style exploration bonus sqrt(log Z(n,u) / Z(n,x)).
inline double ucb_bonus(std::uint32_t start_local_time, std::uint32_t candidate_local_time) {
    return std::sqrt(std::log(double(start_local_time)) / double(candidate_local_time));
}
inline double ucb_bonus(const WalkState& s, NodeId x) {
    return ucb_bonus(local_time(s, s.start()), local_time(s, x));
}

// Dense divergences over explicit probability vectors (diagnostic/test
// surface; the walk itself uses the closed forms above).
double kl_divergence(std::span<const double> p, std::span<const double> q);
double js_divergence(std::span<const double> p, std::span<const double> q);

// Softmax with max-score subtraction; sums to 1, all entries positive.
std::vector<double> transition_distribution(std::span<const double> scores);

// VRRW transition (local time proportional) over neighbors of the current
// node in adjacency order. Empty result signals a dead end.
std::vector<double> vrrw_transition(const WalkState& s, const Graph& g);

// The exact per-neighbor distribution sample_next draws from, in adjacency
// order. Exploitation-only DRRW is greedy: uniform over the argmax set.
std::vector<double> transition_probabilities(const WalkState& s, const Graph& g,
                                             const WalkConfig& cfg);

// Draws the next node without appending it; nullopt signals a dead end.
std::optional<NodeId> sample_next(const WalkState& s, const Graph& g,
                                  const WalkConfig& cfg, Rng& rng);

struct WalkResult {
    std::vector<NodeId> path;
    bool truncated = false;
};

// Path of cfg.walk_length nodes starting at u (start plus L-1 sampled steps);
// shorter only when a dead end truncates it.
WalkResult generate_walk(const Graph& g, NodeId start, const WalkConfig& cfg, Rng& rng);

// Walk corpus stored as concatenated paths.
struct Corpus {
    std::vector<NodeId> tokens;
    std::vector<std::uint64_t> offsets{0};
    std::size_t truncated = 0;

    std::size_t path_count() const { return offsets.size() - 1; }
    std::span<const NodeId> path(std::size_t i) const {
        return {tokens.data() + offsets[i], offsets[i + 1] - offsets[i]};
    }
    void add_path(std::span<const NodeId> path) {
        tokens.insert(tokens.end(), path.begin(), path.end());
        offsets.push_back(tokens.size());
    }
};

// R passes over a per-pass shuffle of all nodes; every walk runs on its own
// RNG stream derived from (seed, pass, start node), so the corpus does not
// depend on the worker count.
Corpus generate_corpus(const Graph& g, const WalkConfig& cfg);

void write_corpus(const Corpus& corpus, const Graph& g, std::ostream& out,
                  const std::string& header_comment = {});
Corpus read_corpus(std::istream& in, const Graph& g);
std::uint64_t corpus_checksum(const Corpus& corpus);

// Distinct-node statistics for the trailing `window` steps at each checkpoint.
struct WindowStats {
    std::size_t checkpoint = 0;
    std::size_t distinct = 0;
    // (node, occurrences) sorted by descending count, then node id.
    std::vector<std::pair<NodeId, std::uint32_t>> frequencies;
};

struct StuckDiagnostic {
    std::vector<WindowStats> windows;
    std::vector<std::string> notices;  // skipped checkpoints
};

StuckDiagnostic stuck_diagnostic(std::span<const NodeId> path, std::size_t window,
                                 std::span<const std::size_t> checkpoints);

void write_diagnostic_csv(const StuckDiagnostic& diag, const Graph& g, std::ostream& out,
                          const std::string& header_comment = {});

}  // namespace r2v
