#include "r2v/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace r2v {

std::string to_string(Exploitation e) {
    switch (e) {
        case Exploitation::FirstOrder: return "first-order";
        case Exploitation::Vrrw: return "vrrw";
        case Exploitation::DrrwKl: return "drrw-kl";
        case Exploitation::DrrwJs: return "drrw-js";
    }
    return "?";
}

std::string to_string(Exploration e) {
    switch (e) {
        case Exploration::None: return "none";
        case Exploration::EpsilonGreedy: return "epsilon-greedy";
        case Exploration::Ucb: return "ucb";
    }
    return "?";
}

Exploitation parse_exploitation(std::string_view name) {
    if (name == "first-order") return Exploitation::FirstOrder;
    if (name == "vrrw") return Exploitation::Vrrw;
    if (name == "drrw-kl") return Exploitation::DrrwKl;
    if (name == "drrw-js") return Exploitation::DrrwJs;
    throw std::runtime_error("unknown exploitation mode: " + std::string(name));
}

Exploration parse_exploration(std::string_view name) {
    if (name == "none") return Exploration::None;
    if (name == "epsilon-greedy") return Exploration::EpsilonGreedy;
    if (name == "ucb") return Exploration::Ucb;
    throw std::runtime_error("unknown exploration mode: " + std::string(name));
}

void WalkConfig::validate() const {
    if (walk_length < 2) throw std::runtime_error("walk length must be at least 2");
    if (walks_per_node < 1) throw std::runtime_error("walks per node must be at least 1");
    if (exploration == Exploration::EpsilonGreedy &&
        !(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw std::runtime_error("epsilon must lie in [0, 1] for epsilon-greedy");
    }
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::runtime_error("kl_divergence: size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
        sum += p[i] * std::log(p[i] / q[i]);
    }
    return sum;
}

double js_divergence(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::runtime_error("js_divergence: size mismatch");
    std::vector<double> m(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) m[i] = 0.5 * (p[i] + q[i]);
    return 0.5 * kl_divergence(p, m) + 0.5 * kl_divergence(q, m);
}

std::vector<double> transition_distribution(std::span<const double> scores) {
    if (scores.empty()) throw std::runtime_error("transition_distribution: no scores");
    const double max_score = *std::max_element(scores.begin(), scores.end());
    std::vector<double> out(scores.size());
    double total = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] = std::exp(scores[i] - max_score);
        total += out[i];
    }
    for (double& v : out) v /= total;
    return out;
}

std::vector<double> vrrw_transition(const WalkState& s, const Graph& g) {
    auto nb = g.neighbors(s.current());
    std::vector<double> out(nb.size());
    if (nb.empty()) return out;
    double total = 0.0;
    for (std::size_t i = 0; i < nb.size(); ++i) {
        out[i] = double(local_time(s, nb[i]));
        total += out[i];
    }
    for (double& v : out) v /= total;
    return out;
}

namespace {

double exploit_divergence(Exploitation mode, std::size_t step, std::size_t node_count,
                          std::uint32_t mass) {
    return mode == Exploitation::DrrwKl ? drrw_kl_divergence(step, node_count, mass)
                                        : drrw_js_divergence(step, node_count, mass);
}

// Exploitation-only distribution over the neighbors: VRRW samples
// proportionally to local time; DRRW picks an argmax of Q uniformly at
// random. Q is strictly increasing in the occupation mass, so the argmax set
// is exactly the set of maximum-mass neighbors.
std::vector<double> exploit_distribution(const WalkState& s, std::span<const NodeId> nb,
                                         Exploitation mode) {
    std::vector<double> out(nb.size());
    if (mode == Exploitation::Vrrw) {
        double total = 0.0;
        for (std::size_t i = 0; i < nb.size(); ++i) {
            out[i] = double(local_time(s, nb[i]));
            total += out[i];
        }
        for (double& v : out) v /= total;
        return out;
    }
    std::uint32_t max_mass = 0;
    std::size_t ties = 0;
    for (NodeId v : nb) {
        const std::uint32_t mass = occupation_mass(s, v);
        if (mass > max_mass) {
            max_mass = mass;
            ties = 1;
        } else if (mass == max_mass) {
            ++ties;
        }
    }
    for (std::size_t i = 0; i < nb.size(); ++i) {
        out[i] = occupation_mass(s, nb[i]) == max_mass ? 1.0 / double(ties) : 0.0;
    }
    return out;
}

std::vector<double> ucb_scores(const WalkState& s, std::span<const NodeId> nb,
                               Exploitation mode) {
    const std::uint32_t start_z = local_time(s, s.start());
    std::vector<double> scores(nb.size());
    if (mode == Exploitation::Vrrw) {
        double z_total = 0.0;
        for (NodeId v : nb) z_total += double(local_time(s, v));
        for (std::size_t i = 0; i < nb.size(); ++i) {
            const std::uint32_t z = local_time(s, nb[i]);
            scores[i] = double(z) / z_total + ucb_bonus(start_z, z);
        }
        return scores;
    }
    for (std::size_t i = 0; i < nb.size(); ++i) {
        const double q =
            1.0 - exploit_divergence(mode, s.step(), s.node_count(), occupation_mass(s, nb[i]));
        scores[i] = q + ucb_bonus(start_z, local_time(s, nb[i]));
    }
    return scores;
}

}  // namespace

std::vector<double> transition_probabilities(const WalkState& s, const Graph& g,
                                             const WalkConfig& cfg) {
    auto nb = g.neighbors(s.current());
    const std::size_t deg = nb.size();
    std::vector<double> out(deg);
    if (deg == 0) return out;

    if (cfg.exploitation == Exploitation::FirstOrder) {
        std::fill(out.begin(), out.end(), 1.0 / double(deg));
        return out;
    }
    if (cfg.exploration == Exploration::Ucb) {
        return transition_distribution(ucb_scores(s, nb, cfg.exploitation));
    }
    out = exploit_distribution(s, nb, cfg.exploitation);
    if (cfg.exploration == Exploration::EpsilonGreedy) {
        const double uniform = 1.0 / double(deg);
        for (double& v : out) v = cfg.epsilon * uniform + (1.0 - cfg.epsilon) * v;
    }
    return out;
}

namespace {

struct VisitedNeighbor {
    NodeId node;
    std::uint32_t path_count;
};

// Neighbors that occur in the path, found either by scanning the adjacency
// list or, for high-degree nodes, by probing the (at most path-sized) visit
// map against the sorted adjacency list. This is the "two groups" split: all
// never-visited neighbors share one score.
void collect_visited(const WalkState& s, std::span<const NodeId> nb,
                     std::vector<VisitedNeighbor>& visited, bool& scanned_neighbors) {
    visited.clear();
    const auto& counts = s.visit_counts();
    scanned_neighbors = counts.size() * 8 >= nb.size();
    if (scanned_neighbors) {
        for (NodeId v : nb) {
            auto it = counts.find(v);
            if (it != counts.end()) visited.push_back({v, it->second});
        }
        return;
    }
    for (const auto& [v, c] : counts) {
        if (std::binary_search(nb.begin(), nb.end(), v)) visited.push_back({v, c});
    }
    std::sort(visited.begin(), visited.end(),
              [](const VisitedNeighbor& a, const VisitedNeighbor& b) { return a.node < b.node; });
}

NodeId pick_unvisited(const WalkState& s, std::span<const NodeId> nb,
                      const std::vector<VisitedNeighbor>& visited, bool scanned_neighbors,
                      Rng& rng) {
    const std::size_t unvisited = nb.size() - visited.size();
    if (scanned_neighbors) {
        std::size_t rank = rng.index(unvisited);
        for (NodeId v : nb) {
            if (s.path_count(v) != 0) continue;
            if (rank == 0) return v;
            --rank;
        }
    }
    // Few visited neighbors relative to the degree: rejection terminates fast.
    for (;;) {
        NodeId v = nb[rng.index(nb.size())];
        auto it = std::lower_bound(
            visited.begin(), visited.end(), v,
            [](const VisitedNeighbor& a, NodeId b) { return a.node < b; });
        if (it == visited.end() || it->node != v) return v;
    }
}

NodeId sample_exploit(const WalkState& s, std::span<const NodeId> nb,
                      const std::vector<VisitedNeighbor>& visited, bool scanned_neighbors,
                      Exploitation mode, Rng& rng) {
    const std::size_t unvisited = nb.size() - visited.size();
    if (mode == Exploitation::Vrrw) {
        std::uint64_t visited_total = 0;
        for (const auto& vn : visited) visited_total += 1 + vn.path_count;
        const std::uint64_t total = visited_total + unvisited;
        std::uint64_t r = rng.below(total);
        if (r < visited_total) {
            for (const auto& vn : visited) {
                const std::uint64_t w = 1 + vn.path_count;
                if (r < w) return vn.node;
                r -= w;
            }
        }
        return pick_unvisited(s, nb, visited, scanned_neighbors, rng);
    }

    // Greedy DRRW: maximum occupation mass wins; ties resolved uniformly.
    std::uint32_t max_mass = unvisited > 0 ? 1 : 0;
    for (const auto& vn : visited) {
        max_mass = std::max(max_mass, occupation_mass(s, vn.node));
    }
    std::size_t tie_count = max_mass == 1 ? unvisited : 0;
    for (const auto& vn : visited) {
        if (occupation_mass(s, vn.node) == max_mass) ++tie_count;
    }
    std::size_t r = rng.index(tie_count);
    for (const auto& vn : visited) {
        if (occupation_mass(s, vn.node) != max_mass) continue;
        if (r == 0) return vn.node;
        --r;
    }
    return pick_unvisited(s, nb, visited, scanned_neighbors, rng);
}

NodeId sample_ucb(const WalkState& s, std::span<const NodeId> nb,
                  const std::vector<VisitedNeighbor>& visited, bool scanned_neighbors,
                  Exploitation mode, Rng& rng) {
    const std::size_t unvisited = nb.size() - visited.size();
    const std::uint32_t start_z = local_time(s, s.start());

    double z_total = 0.0;
    if (mode == Exploitation::Vrrw) {
        z_total = double(unvisited);
        for (const auto& vn : visited) z_total += double(1 + vn.path_count);
    }
    auto score_of = [&](std::uint32_t z_loc, std::uint32_t mass) {
        const double q = mode == Exploitation::Vrrw
                             ? double(z_loc) / z_total
                             : 1.0 - exploit_divergence(mode, s.step(), s.node_count(), mass);
        return q + ucb_bonus(start_z, z_loc);
    };

    std::vector<double> scores(visited.size());
    double max_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < visited.size(); ++i) {
        scores[i] = score_of(1 + visited[i].path_count, occupation_mass(s, visited[i].node));
        max_score = std::max(max_score, scores[i]);
    }
    const double shared = unvisited > 0 ? score_of(1, 1) : 0.0;
    if (unvisited > 0) max_score = std::max(max_score, shared);

    double visited_weight = 0.0;
    for (double& sc : scores) {
        sc = std::exp(sc - max_score);
        visited_weight += sc;
    }
    const double group_weight =
        unvisited > 0 ? double(unvisited) * std::exp(shared - max_score) : 0.0;

    double r = rng.unit() * (visited_weight + group_weight);
    for (std::size_t i = 0; i < visited.size(); ++i) {
        if (r < scores[i]) return visited[i].node;
        r -= scores[i];
    }
    if (unvisited == 0) return visited.back().node;  // numeric tail
    return pick_unvisited(s, nb, visited, scanned_neighbors, rng);
}

std::optional<NodeId> sample_next_impl(const WalkState& s, const Graph& g,
                                       const WalkConfig& cfg, Rng& rng,
                                       std::vector<VisitedNeighbor>& scratch) {
    auto nb = g.neighbors(s.current());
    if (nb.empty()) return std::nullopt;
    if (cfg.exploitation == Exploitation::FirstOrder) return nb[rng.index(nb.size())];
    if (cfg.exploration == Exploration::EpsilonGreedy && rng.unit() < cfg.epsilon) {
        return nb[rng.index(nb.size())];
    }

    bool scanned_neighbors = false;
    collect_visited(s, nb, scratch, scanned_neighbors);
    if (cfg.exploration == Exploration::Ucb) {
        return sample_ucb(s, nb, scratch, scanned_neighbors, cfg.exploitation, rng);
    }
    return sample_exploit(s, nb, scratch, scanned_neighbors, cfg.exploitation, rng);
}

void extend_walk(WalkState& state, const Graph& g, const WalkConfig& cfg, Rng& rng,
                 std::vector<VisitedNeighbor>& scratch, bool& truncated) {
    truncated = false;
    while (state.path().size() < cfg.walk_length) {
        auto next = sample_next_impl(state, g, cfg, rng, scratch);
        if (!next) {
            truncated = true;
            return;
        }
        state.append(*next);
    }
}

}  // namespace

std::optional<NodeId> sample_next(const WalkState& s, const Graph& g,
                                  const WalkConfig& cfg, Rng& rng) {
    std::vector<VisitedNeighbor> scratch;
    return sample_next_impl(s, g, cfg, rng, scratch);
}

WalkResult generate_walk(const Graph& g, NodeId start, const WalkConfig& cfg, Rng& rng) {
    if (start >= g.node_count()) throw std::runtime_error("walk start node out of range");
    WalkState state(start, g.node_count());
    std::vector<VisitedNeighbor> scratch;
    WalkResult result;
    extend_walk(state, g, cfg, rng, scratch, result.truncated);
    result.path = state.path();
    return result;
}

Corpus generate_corpus(const Graph& g, const WalkConfig& cfg) {
    cfg.validate();
    const std::size_t n = g.node_count();
    const std::size_t walk_length = cfg.walk_length;

    Corpus corpus;
    corpus.tokens.reserve(std::size_t(cfg.walks_per_node) * n * walk_length);
    corpus.offsets.reserve(std::size_t(cfg.walks_per_node) * n + 1);

    std::vector<NodeId> order(n);
    std::vector<NodeId> buffer(n * walk_length);
    std::vector<std::uint32_t> lengths(n);

    auto run_range = [&](std::uint32_t pass, std::size_t lo, std::size_t hi) {
        WalkState state(0, n);
        std::vector<VisitedNeighbor> scratch;
        for (std::size_t i = lo; i < hi; ++i) {
            const NodeId start = order[i];
            Rng rng(derive_seed(cfg.seed, stream::kWalk, pass, start));
            state.reset(start);
            bool truncated = false;
            extend_walk(state, g, cfg, rng, scratch, truncated);
            lengths[i] = static_cast<std::uint32_t>(state.path().size());
            std::copy(state.path().begin(), state.path().end(),
                      buffer.begin() + i * walk_length);
        }
    };

    for (std::uint32_t pass = 0; pass < cfg.walks_per_node; ++pass) {
        std::iota(order.begin(), order.end(), NodeId{0});
        Rng shuffle_rng(derive_seed(cfg.seed, stream::kPass, pass));
        shuffle_rng.shuffle(order);

        const unsigned workers = std::max(1u, cfg.workers);
        if (workers == 1 || n < 2 * workers) {
            run_range(pass, 0, n);
        } else {
            std::vector<std::thread> threads;
            const std::size_t chunk = (n + workers - 1) / workers;
            for (unsigned w = 0; w < workers; ++w) {
                const std::size_t lo = w * chunk;
                const std::size_t hi = std::min(n, lo + chunk);
                if (lo >= hi) break;
                threads.emplace_back(run_range, pass, lo, hi);
            }
            for (auto& t : threads) t.join();
        }

        for (std::size_t i = 0; i < n; ++i) {
            corpus.add_path({buffer.data() + i * walk_length, lengths[i]});
            if (lengths[i] < walk_length) ++corpus.truncated;
        }
    }
    return corpus;
}

void write_corpus(const Corpus& corpus, const Graph& g, std::ostream& out,
                  const std::string& header_comment) {
    if (!header_comment.empty()) {
        std::istringstream lines(header_comment);
        std::string line;
        while (std::getline(lines, line)) out << "# " << line << '\n';
    }
    for (std::size_t i = 0; i < corpus.path_count(); ++i) {
        auto path = corpus.path(i);
        for (std::size_t j = 0; j < path.size(); ++j) {
            if (j) out << ' ';
            out << g.token(path[j]);
        }
        out << '\n';
    }
}

Corpus read_corpus(std::istream& in, const Graph& g) {
    Corpus corpus;
    std::string line;
    std::string token;
    std::size_t line_no = 0;
    std::vector<NodeId> path;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        path.clear();
        std::istringstream ls(line);
        while (ls >> token) {
            auto id = g.index_of(token);
            if (!id) {
                throw std::runtime_error("corpus line " + std::to_string(line_no) +
                                         ": node '" + token + "' is not in the graph");
            }
            path.push_back(*id);
        }
        if (!path.empty()) corpus.add_path(path);
    }
    return corpus;
}

std::uint64_t corpus_checksum(const Corpus& corpus) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 1099511628211ULL;
        }
    };
    for (std::size_t i = 0; i < corpus.path_count(); ++i) {
        auto path = corpus.path(i);
        mix(path.size());
        for (NodeId v : path) mix(v);
    }
    return h;
}

StuckDiagnostic stuck_diagnostic(std::span<const NodeId> path, std::size_t window,
                                 std::span<const std::size_t> checkpoints) {
    if (window == 0) throw std::runtime_error("diagnostic window must be positive");
    if (window > path.size()) {
        throw std::runtime_error("diagnostic window exceeds path length");
    }
    StuckDiagnostic diag;
    const std::size_t last_step = path.size() - 1;
    for (std::size_t checkpoint : checkpoints) {
        if (checkpoint > last_step) {
            diag.notices.push_back("checkpoint " + std::to_string(checkpoint) +
                                   " skipped: walk has only " + std::to_string(last_step) +
                                   " steps");
            continue;
        }
        WindowStats stats;
        stats.checkpoint = checkpoint;
        const std::size_t begin = checkpoint + 1 >= window ? checkpoint + 1 - window : 0;
        std::unordered_map<NodeId, std::uint32_t> freq;
        for (std::size_t s = begin; s <= checkpoint; ++s) ++freq[path[s]];
        stats.distinct = freq.size();
        stats.frequencies.assign(freq.begin(), freq.end());
        std::sort(stats.frequencies.begin(), stats.frequencies.end(),
                  [](const auto& a, const auto& b) {
                      return a.second != b.second ? a.second > b.second : a.first < b.first;
                  });
        diag.windows.push_back(std::move(stats));
    }
    return diag;
}

void write_diagnostic_csv(const StuckDiagnostic& diag, const Graph& g, std::ostream& out,
                          const std::string& header_comment) {
    if (!header_comment.empty()) {
        std::istringstream lines(header_comment);
        std::string line;
        while (std::getline(lines, line)) out << "# " << line << '\n';
    }
    out << "checkpoint_step,distinct_nodes,node_frequencies\n";
    for (const auto& w : diag.windows) {
        out << w.checkpoint << ',' << w.distinct << ',';
        for (std::size_t i = 0; i < w.frequencies.size(); ++i) {
            if (i) out << ' ';
            out << g.token(w.frequencies[i].first) << ':' << w.frequencies[i].second;
        }
        out << '\n';
    }
    for (const auto& notice : diag.notices) out << "# " << notice << '\n';
}

}  // namespace r2v
