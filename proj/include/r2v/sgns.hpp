#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "r2v/rng.hpp"
#include "r2v/walk.hpp"

namespace r2v {

struct SgnsConfig {
    std::uint32_t dim = 64;       // d
    std::uint32_t window = 10;    // C
    std::uint32_t negatives = 5;  // K
    double noise_exponent = 0.75;
    std::uint32_t epochs = 5;
    double lr_initial = 0.025;
    double lr_final = 1e-4;
    std::uint64_t seed = 1;
    unsigned workers = 1;

    void validate() const;
};

// Input vectors z plus context vectors z'; the persisted embedding is the
// input matrix.
struct EmbeddingMatrix {
    std::size_t node_count = 0;
    std::size_t dim = 0;
    std::vector<float> input;
    std::vector<float> context;

    std::span<float> input_row(NodeId v) { return {input.data() + v * dim, dim}; }
    std::span<const float> input_row(NodeId v) const {
        return {input.data() + v * dim, dim};
    }
    std::span<float> context_row(NodeId v) { return {context.data() + v * dim, dim}; }
    std::span<const float> context_row(NodeId v) const {
        return {context.data() + v * dim, dim};
    }
};

// All ordered (anchor, context) pairs within distance <= window inside one
// path; no pairs cross paths. Materializing version for small corpora; the
// trainer streams the same order.
std::vector<std::pair<NodeId, NodeId>> extract_pairs(const Corpus& corpus,
                                                     std::uint32_t window);
std::uint64_t count_pairs(const Corpus& corpus, std::uint32_t window);

template <class Sink>
void for_each_pair(std::span<const NodeId> path, std::uint32_t window, Sink&& sink) {
    const std::size_t len = path.size();
    for (std::size_t i = 0; i < len; ++i) {
        const std::size_t lo = i >= window ? i - window : 0;
        const std::size_t hi = std::min(len - 1, i + window);
        for (std::size_t j = lo; j <= hi; ++j) {
            if (j != i) sink(path[i], path[j]);
        }
    }
}

template <class T>
T sgns_sigmoid(T x) {
    if (x > T(35)) return T(1);
    if (x < T(-35)) return T(0);
    return T(1) / (T(1) + std::exp(-x));
}

// Linear decay from lr_initial to exactly lr_final at the last update.
inline double sgns_learning_rate(std::uint64_t step, std::uint64_t total_updates,
                                 double lr_initial, double lr_final) {
    if (total_updates <= 1) return lr_initial;
    const double slope = (lr_final - lr_initial) / double(total_updates - 1);
    return std::max(lr_final, lr_initial + slope * double(step));
}

// SGNS loss for one positive pair and its negatives:
//   -log sigmoid(a.p) - sum_k log sigmoid(-a.n_k)
// `negatives` holds the K negative context vectors flattened row-major.
double sgns_pair_loss(std::span<const double> anchor, std::span<const double> positive,
                      std::span<const double> negatives);

// Analytic gradient of sgns_pair_loss with respect to every vector involved;
// the trainer applies the same coefficients (sigmoid(s) - label) in float.
void sgns_pair_gradient(std::span<const double> anchor, std::span<const double> positive,
                        std::span<const double> negatives, std::span<double> grad_anchor,
                        std::span<double> grad_positive, std::span<double> grad_negatives);

// Full-softmax conditional probability over input vectors; for toy-scale
// verification only, never part of the training loop.
double skipgram_probability(const EmbeddingMatrix& emb, NodeId t, NodeId x);

struct TrainReport {
    EmbeddingMatrix embeddings;
    // Mean loss over a frozen pair sample, measured after each epoch.
    std::vector<double> epoch_sample_loss;
    std::uint64_t pairs_processed = 0;
    double final_lr = 0.0;
};

// SGD over the pair stream with unigram^exponent negative sampling. A single
// worker is bit-reproducible for a fixed seed; more workers run asynchronous
// updates and give up bit determinism.
TrainReport train(const Corpus& corpus, std::size_t vocab_size, const SgnsConfig& cfg);

// word2vec text format: "N d" header, then one line per node with the
// external token and d values. Round-trips within 1e-6 per component.
void save_embeddings(const EmbeddingMatrix& emb, std::span<const std::string> tokens,
                     std::ostream& out);

struct LoadedEmbeddings {
    EmbeddingMatrix embeddings;  // context vectors zero-filled
    std::vector<std::string> tokens;
};
LoadedEmbeddings load_embeddings(std::istream& in);

}  // namespace r2v
