#pragma once

#include <cstdint>
#include <istream>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "r2v/edge_split.hpp"
#include "r2v/graph.hpp"
#include "r2v/sgns.hpp"

namespace r2v {

enum class EdgeFeatureOp { Average, Hadamard, WeightedL1, WeightedL2 };

std::string to_string(EdgeFeatureOp op);
EdgeFeatureOp parse_edge_feature_op(std::string_view name);
inline constexpr EdgeFeatureOp kAllEdgeFeatureOps[] = {
    EdgeFeatureOp::Average, EdgeFeatureOp::Hadamard, EdgeFeatureOp::WeightedL1,
    EdgeFeatureOp::WeightedL2};

// Componentwise edge feature from two node vectors of equal dimension.
void edge_feature(EdgeFeatureOp op, std::span<const float> u, std::span<const float> v,
                  std::span<double> out);

struct LogRegConfig {
    double l2 = 1.0;  // coefficient of 0.5*||w||^2 against the summed log-loss
    double tol = 1e-6;
    std::size_t max_iter = 1000;
};

struct LogRegModel {
    std::vector<double> weights;
    double bias = 0.0;
    double gradient_norm = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    bool converged = false;
    // Objective value per accepted iterate; non-increasing.
    std::vector<double> loss_trace;

    double margin(std::span<const double> x) const;
    double probability(std::span<const double> x) const;
};

// L2-regularized logistic regression minimized by accelerated gradient
// descent with backtracking line search; stops when the gradient norm drops
// below tol or the iteration cap is reached. Deterministic given its inputs.
LogRegModel fit_logreg(std::span<const double> features, std::span<const int> labels,
                       std::size_t dim, const LogRegConfig& cfg = {});

// Mann-Whitney AUC via a single sort with average ranks for ties.
double auc(std::span<const double> scores, std::span<const int> labels);

struct F1Counts {
    std::size_t tp = 0, fp = 0, fn = 0;
};
double f1_score(const F1Counts& c);  // 0 when tp+fp+fn == 0
double micro_f1(std::span<const F1Counts> per_label);
double macro_f1(std::span<const F1Counts> per_label);

// Multi-label ground truth; entries sorted by node, label lists sorted.
struct LabeledNodes {
    std::vector<std::pair<NodeId, std::vector<std::uint32_t>>> entries;
    std::uint32_t label_universe = 0;
};

LabeledNodes make_labeled_nodes(
    std::vector<std::pair<NodeId, std::vector<std::uint32_t>>> entries);

// One line per node: node token then its label ids.
LabeledNodes load_labels(std::istream& in, const Graph& g);

struct NodeClassificationResult {
    double micro_f1 = 0.0;
    double macro_f1 = 0.0;
    std::size_t train_count = 0;
    std::size_t test_count = 0;
    // Labels with no positive (or no negative) training nodes; never/always
    // ranked and reported rather than fitted.
    std::vector<std::uint32_t> degenerate_labels;
};

// Seed-keyed uniform node split, one-vs-rest logistic regression per label,
// top-ell prediction with ell = the node's true label count.
NodeClassificationResult node_classification_eval(const EmbeddingMatrix& emb,
                                                  const LabeledNodes& labels,
                                                  double train_fraction,
                                                  std::uint64_t seed,
                                                  const LogRegConfig& cfg = {});

struct LinkPredictionResult {
    double auc = 0.0;
    std::size_t train_positive = 0;
    std::size_t train_negative = 0;
};

// Trains on residual edges plus freshly sampled non-edges (disjoint from the
// split's test negatives), then scores the held-out positives and negatives.
LinkPredictionResult link_prediction_eval(const EmbeddingMatrix& emb,
                                          const EdgeSplit& split, EdgeFeatureOp op,
                                          std::uint64_t seed,
                                          const LogRegConfig& cfg = {});

}  // namespace r2v
