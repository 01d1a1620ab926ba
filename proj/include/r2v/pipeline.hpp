#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "r2v/eval.hpp"
#include "r2v/walk.hpp"

namespace r2v {

struct PipelineConfig {
    WalkConfig walk;
    SgnsConfig sgns;
    LogRegConfig logreg;

    // Propagates one master seed to every stage stream.
    void reseed(std::uint64_t seed) {
        walk.seed = seed;
        sgns.seed = seed;
    }
    void set_workers(unsigned workers) {
        walk.workers = workers;
        sgns.workers = workers;
    }
};

// Corpus generation plus SGNS training.
EmbeddingMatrix embed_graph(const Graph& g, const WalkConfig& walk, const SgnsConfig& sgns);

struct LinkPredictionRun {
    std::vector<std::pair<EdgeFeatureOp, double>> auc;  // one entry per operator
    double achieved_fraction = 0.0;
    std::string split_warning;
};

// Full link-prediction protocol: split, walk the residual graph, train, then
// evaluate each operator. `seed` drives the split, the walks, the trainer and
// the classifier negatives.
LinkPredictionRun run_link_prediction(const Graph& g, double fraction,
                                      std::span<const EdgeFeatureOp> ops,
                                      PipelineConfig cfg, std::uint64_t seed);

// Same, but on an existing split (embeddings trained on its residual graph).
LinkPredictionRun run_link_prediction(const EdgeSplit& split,
                                      std::span<const EdgeFeatureOp> ops,
                                      PipelineConfig cfg, std::uint64_t seed);

struct NodeClassificationRun {
    double micro_f1 = 0.0;
    double macro_f1 = 0.0;
};

NodeClassificationRun run_node_classification(const Graph& g, const LabeledNodes& labels,
                                              double train_fraction, PipelineConfig cfg,
                                              std::uint64_t seed);

// Result rows shared by the evaluation commands and sweeps.
struct ResultRow {
    std::string dataset;
    std::string exploitation;
    std::string exploration;
    double epsilon = 0.0;
    std::string scope;   // operator name or train/split fraction
    std::string metric;  // "auc", "micro_f1", "macro_f1"
    double value = 0.0;  // percentage, one decimal when printed
    std::uint64_t seed = 0;
};

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows,
                       const std::string& header_comment = {});

struct SweepVariant {
    Exploitation exploitation;
    Exploration exploration;
    double epsilon = 0.5;
};

// Runs the full pipeline once per variant with a shared master seed.
std::vector<ResultRow> sweep_node_classification(const Graph& g, const LabeledNodes& labels,
                                                 double train_fraction,
                                                 std::span<const SweepVariant> grid,
                                                 PipelineConfig base, std::uint64_t seed,
                                                 const std::string& dataset);

std::vector<ResultRow> sweep_link_prediction(const Graph& g, double fraction,
                                             std::span<const EdgeFeatureOp> ops,
                                             std::span<const SweepVariant> grid,
                                             PipelineConfig base, std::uint64_t seed,
                                             const std::string& dataset);

}  // namespace r2v
