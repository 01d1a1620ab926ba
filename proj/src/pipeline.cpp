#include "r2v/pipeline.hpp"

#include <iomanip>
#include <sstream>

namespace r2v {

EmbeddingMatrix embed_graph(const Graph& g, const WalkConfig& walk, const SgnsConfig& sgns) {
    const Corpus corpus = generate_corpus(g, walk);
    return train(corpus, g.node_count(), sgns).embeddings;
}

LinkPredictionRun run_link_prediction(const EdgeSplit& split,
                                      std::span<const EdgeFeatureOp> ops,
                                      PipelineConfig cfg, std::uint64_t seed) {
    cfg.reseed(seed);
    const EmbeddingMatrix emb = embed_graph(split.residual, cfg.walk, cfg.sgns);

    LinkPredictionRun run;
    run.achieved_fraction = split.achieved_fraction;
    run.split_warning = split.warning;
    for (EdgeFeatureOp op : ops) {
        run.auc.emplace_back(op, link_prediction_eval(emb, split, op, seed, cfg.logreg).auc);
    }
    return run;
}

LinkPredictionRun run_link_prediction(const Graph& g, double fraction,
                                      std::span<const EdgeFeatureOp> ops,
                                      PipelineConfig cfg, std::uint64_t seed) {
    return run_link_prediction(split_edges(g, fraction, seed), ops, cfg, seed);
}

NodeClassificationRun run_node_classification(const Graph& g, const LabeledNodes& labels,
                                              double train_fraction, PipelineConfig cfg,
                                              std::uint64_t seed) {
    cfg.reseed(seed);
    const EmbeddingMatrix emb = embed_graph(g, cfg.walk, cfg.sgns);
    const auto result = node_classification_eval(emb, labels, train_fraction, seed, cfg.logreg);
    return {result.micro_f1, result.macro_f1};
}

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows,
                       const std::string& header_comment) {
    if (!header_comment.empty()) {
        std::istringstream lines(header_comment);
        std::string line;
        while (std::getline(lines, line)) out << "# " << line << '\n';
    }
    out << "dataset,exploitation,exploration,epsilon,operator_or_split,metric,value,seed\n";
    for (const auto& row : rows) {
        out << row.dataset << ',' << row.exploitation << ',' << row.exploration << ','
            << row.epsilon << ',' << row.scope << ',' << row.metric << ',' << std::fixed
            << std::setprecision(1) << row.value << std::defaultfloat << ',' << row.seed
            << '\n';
    }
}

namespace {

ResultRow make_row(const std::string& dataset, const SweepVariant& variant,
                   const std::string& scope, const std::string& metric, double value,
                   std::uint64_t seed) {
    ResultRow row;
    row.dataset = dataset;
    row.exploitation = to_string(variant.exploitation);
    row.exploration = to_string(variant.exploration);
    row.epsilon = variant.epsilon;
    row.scope = scope;
    row.metric = metric;
    row.value = value;
    row.seed = seed;
    return row;
}

PipelineConfig apply_variant(PipelineConfig base, const SweepVariant& variant) {
    base.walk.exploitation = variant.exploitation;
    base.walk.exploration = variant.exploration;
    base.walk.epsilon = variant.epsilon;
    return base;
}

}  // namespace

std::vector<ResultRow> sweep_node_classification(const Graph& g, const LabeledNodes& labels,
                                                 double train_fraction,
                                                 std::span<const SweepVariant> grid,
                                                 PipelineConfig base, std::uint64_t seed,
                                                 const std::string& dataset) {
    std::vector<ResultRow> rows;
    const std::string scope = "train=" + std::to_string(train_fraction);
    for (const auto& variant : grid) {
        const auto run = run_node_classification(g, labels, train_fraction,
                                                 apply_variant(base, variant), seed);
        rows.push_back(make_row(dataset, variant, scope, "micro_f1", 100.0 * run.micro_f1, seed));
        rows.push_back(make_row(dataset, variant, scope, "macro_f1", 100.0 * run.macro_f1, seed));
    }
    return rows;
}

std::vector<ResultRow> sweep_link_prediction(const Graph& g, double fraction,
                                             std::span<const EdgeFeatureOp> ops,
                                             std::span<const SweepVariant> grid,
                                             PipelineConfig base, std::uint64_t seed,
                                             const std::string& dataset) {
    std::vector<ResultRow> rows;
    // One split shared across the whole grid keeps the comparison fair.
    const EdgeSplit split = split_edges(g, fraction, seed);
    for (const auto& variant : grid) {
        const auto run = run_link_prediction(split, ops, apply_variant(base, variant), seed);
        for (const auto& [op, value] : run.auc) {
            rows.push_back(make_row(dataset, variant, to_string(op), "auc", 100.0 * value, seed));
        }
    }
    return rows;
}

}  // namespace r2v
