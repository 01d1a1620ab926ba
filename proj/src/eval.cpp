#include "r2v/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace r2v {

std::string to_string(EdgeFeatureOp op) {
    switch (op) {
        case EdgeFeatureOp::Average: return "average";
        case EdgeFeatureOp::Hadamard: return "hadamard";
        case EdgeFeatureOp::WeightedL1: return "weighted-l1";
        case EdgeFeatureOp::WeightedL2: return "weighted-l2";
    }
    return "?";
}

EdgeFeatureOp parse_edge_feature_op(std::string_view name) {
    if (name == "average") return EdgeFeatureOp::Average;
    if (name == "hadamard") return EdgeFeatureOp::Hadamard;
    if (name == "weighted-l1") return EdgeFeatureOp::WeightedL1;
    if (name == "weighted-l2") return EdgeFeatureOp::WeightedL2;
    throw std::runtime_error("unknown edge feature operator: " + std::string(name));
}

void edge_feature(EdgeFeatureOp op, std::span<const float> u, std::span<const float> v,
                  std::span<double> out) {
    if (u.size() != v.size() || out.size() != u.size()) {
        throw std::runtime_error("edge_feature: dimension mismatch");
    }
    switch (op) {
        case EdgeFeatureOp::Average:
            for (std::size_t i = 0; i < u.size(); ++i) out[i] = 0.5 * (double(u[i]) + v[i]);
            break;
        case EdgeFeatureOp::Hadamard:
            for (std::size_t i = 0; i < u.size(); ++i) out[i] = double(u[i]) * v[i];
            break;
        case EdgeFeatureOp::WeightedL1:
            for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::abs(double(u[i]) - v[i]);
            break;
        case EdgeFeatureOp::WeightedL2:
            for (std::size_t i = 0; i < u.size(); ++i) {
                const double d = double(u[i]) - v[i];
                out[i] = d * d;
            }
            break;
    }
}

namespace {

double stable_logloss(double margin, int label) {
    // -log sigmoid(m) for label 1, -log sigmoid(-m) for label 0.
    const double z = label == 1 ? -margin : margin;
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double x) {
    if (x > 35.0) return 1.0;
    if (x < -35.0) return 0.0;
    return 1.0 / (1.0 + std::exp(-x));
}

struct Objective {
    std::span<const double> x;
    std::span<const int> y;
    std::size_t n, d;
    double l2;

    double value(std::span<const double> w, double b) const {
        double f = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = x.data() + i * d;
            double m = b;
            for (std::size_t j = 0; j < d; ++j) m += w[j] * row[j];
            f += stable_logloss(m, y[i]);
        }
        double wn = 0.0;
        for (double v : w) wn += v * v;
        return f + 0.5 * l2 * wn;
    }

    // Returns the objective value; fills the gradient.
    double value_grad(std::span<const double> w, double b, std::span<double> gw,
                      double& gb) const {
        std::fill(gw.begin(), gw.end(), 0.0);
        gb = 0.0;
        double f = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = x.data() + i * d;
            double m = b;
            for (std::size_t j = 0; j < d; ++j) m += w[j] * row[j];
            f += stable_logloss(m, y[i]);
            const double coeff = sigmoid(m) - double(y[i]);
            for (std::size_t j = 0; j < d; ++j) gw[j] += coeff * row[j];
            gb += coeff;
        }
        double wn = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            gw[j] += l2 * w[j];
            wn += w[j] * w[j];
        }
        return f + 0.5 * l2 * wn;
    }
};

double norm2(std::span<const double> w, double b) {
    double s = b * b;
    for (double v : w) s += v * v;
    return std::sqrt(s);
}

}  // namespace

double LogRegModel::margin(std::span<const double> x) const {
    double m = bias;
    for (std::size_t j = 0; j < weights.size(); ++j) m += weights[j] * x[j];
    return m;
}

double LogRegModel::probability(std::span<const double> x) const {
    return sigmoid(margin(x));
}

LogRegModel fit_logreg(std::span<const double> features, std::span<const int> labels,
                       std::size_t dim, const LogRegConfig& cfg) {
    const std::size_t n = labels.size();
    if (n == 0 || dim == 0) throw std::runtime_error("fit_logreg: empty problem");
    if (features.size() != n * dim) {
        throw std::runtime_error("fit_logreg: feature matrix shape mismatch");
    }
    const bool has_pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
    const bool has_neg = std::find(labels.begin(), labels.end(), 0) != labels.end();
    if (!has_pos || !has_neg) {
        throw std::runtime_error("fit_logreg: every example has label " +
                                 std::string(has_pos ? "1" : "0"));
    }

    const Objective obj{features, labels, n, dim, cfg.l2};

    // Accelerated gradient descent (Nesterov momentum with gradient restart)
    // plus backtracking on the smoothness estimate.
    std::vector<double> xw(dim, 0.0), yw(dim, 0.0), next(dim, 0.0), grad(dim, 0.0);
    double xb = 0.0, yb = 0.0, next_b = 0.0, grad_b = 0.0;
    double momentum_t = 1.0;

    double lipschitz = cfg.l2;
    for (std::size_t i = 0; i < n; ++i) {
        double row_sq = 1.0;  // bias column
        const double* row = features.data() + i * dim;
        for (std::size_t j = 0; j < dim; ++j) row_sq += row[j] * row[j];
        lipschitz += 0.25 * row_sq;
    }
    double step = 1.0 / std::max(lipschitz, 1e-12);

    LogRegModel model;
    double fx = obj.value(xw, xb);
    model.loss_trace.push_back(fx);
    for (std::size_t iter = 0; iter < cfg.max_iter; ++iter) {
        const double fy = obj.value_grad(yw, yb, grad, grad_b);
        const double gn = norm2(grad, grad_b);
        if (gn <= cfg.tol) {
            model.weights = yw;
            model.bias = yb;
            model.gradient_norm = gn;
            model.iterations = iter;
            model.converged = true;
            return model;
        }

        step *= 1.3;  // optimistic growth, trimmed by the backtracking below
        auto backtrack = [&](const std::vector<double>& from_w, double from_b,
                             double f_from, double grad_norm) {
            double fnext = 0.0;
            for (int halvings = 0; halvings < 64; ++halvings) {
                for (std::size_t j = 0; j < dim; ++j) next[j] = from_w[j] - step * grad[j];
                next_b = from_b - step * grad_b;
                fnext = obj.value(next, next_b);
                if (fnext <= f_from - 0.5 * step * grad_norm * grad_norm) break;
                step *= 0.5;
            }
            return fnext;
        };
        double fnext = backtrack(yw, yb, fy, gn);

        // Momentum can overshoot; when it would raise the objective, restart
        // with a plain descent step from the last iterate so the recorded
        // loss trace stays non-increasing.
        if (fnext > fx) {
            obj.value_grad(xw, xb, grad, grad_b);
            const double gx = norm2(grad, grad_b);
            if (gx <= cfg.tol) {
                model.weights = xw;
                model.bias = xb;
                model.gradient_norm = gx;
                model.iterations = iter;
                model.converged = true;
                return model;
            }
            fnext = backtrack(xw, xb, fx, gx);
            momentum_t = 1.0;
        } else {
            // Gradient restart keeps the momentum sequence well behaved.
            double travel_dot = (next_b - xb) * grad_b;
            for (std::size_t j = 0; j < dim; ++j) travel_dot += (next[j] - xw[j]) * grad[j];
            if (travel_dot > 0.0) momentum_t = 1.0;
        }

        const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum_t * momentum_t));
        const double beta = (momentum_t - 1.0) / momentum_next;
        for (std::size_t j = 0; j < dim; ++j) {
            yw[j] = next[j] + beta * (next[j] - xw[j]);
            xw[j] = next[j];
        }
        yb = next_b + beta * (next_b - xb);
        xb = next_b;
        momentum_t = momentum_next;
        fx = fnext;
        model.loss_trace.push_back(fx);
        model.iterations = iter + 1;
    }

    // Iteration cap reached: report the gradient at the final iterate.
    const double f_final [[maybe_unused]] = obj.value_grad(xw, xb, grad, grad_b);
    model.weights = xw;
    model.bias = xb;
    model.gradient_norm = norm2(grad, grad_b);
    model.converged = model.gradient_norm <= cfg.tol;
    return model;
}

double auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw std::runtime_error("auc: size mismatch");
    const std::size_t n = scores.size();
    std::size_t positives = 0;
    for (int y : labels) positives += y == 1;
    const std::size_t negatives = n - positives;
    if (positives == 0 || negatives == 0) {
        throw std::runtime_error("auc: both classes must be present");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * double(i + 1 + j);  // ranks are 1-based
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]] == 1) rank_sum_pos += avg_rank;
        }
        i = j;
    }
    const double p = double(positives), q = double(negatives);
    return (rank_sum_pos - 0.5 * p * (p + 1.0)) / (p * q);
}

double f1_score(const F1Counts& c) {
    const double denom = double(2 * c.tp + c.fp + c.fn);
    return denom == 0.0 ? 0.0 : 2.0 * double(c.tp) / denom;
}

double micro_f1(std::span<const F1Counts> per_label) {
    F1Counts total;
    for (const auto& c : per_label) {
        total.tp += c.tp;
        total.fp += c.fp;
        total.fn += c.fn;
    }
    return f1_score(total);
}

double macro_f1(std::span<const F1Counts> per_label) {
    if (per_label.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& c : per_label) sum += f1_score(c);
    return sum / double(per_label.size());
}

LabeledNodes make_labeled_nodes(
    std::vector<std::pair<NodeId, std::vector<std::uint32_t>>> entries) {
    LabeledNodes out;
    out.entries = std::move(entries);
    std::sort(out.entries.begin(), out.entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < out.entries.size(); ++i) {
        if (out.entries[i].first == out.entries[i - 1].first) {
            throw std::runtime_error("duplicate label entry for node " +
                                     std::to_string(out.entries[i].first));
        }
    }
    for (auto& [node, labels] : out.entries) {
        if (labels.empty()) {
            throw std::runtime_error("node " + std::to_string(node) + " has no labels");
        }
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
        out.label_universe = std::max(out.label_universe, labels.back() + 1);
    }
    return out;
}

LabeledNodes load_labels(std::istream& in, const Graph& g) {
    std::vector<std::pair<NodeId, std::vector<std::uint32_t>>> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string token;
        if (!(ls >> token)) continue;
        NodeId node;
        try {
            node = g.require_index(token);
        } catch (const std::exception&) {
            throw std::runtime_error("label file line " + std::to_string(line_no) +
                                     ": node '" + token + "' is not in the graph");
        }
        std::vector<std::uint32_t> labels;
        long long value = 0;
        while (ls >> value) {
            if (value < 0) {
                throw std::runtime_error("label file line " + std::to_string(line_no) +
                                         ": negative label id");
            }
            labels.push_back(static_cast<std::uint32_t>(value));
        }
        if (!ls.eof()) {
            throw std::runtime_error("label file line " + std::to_string(line_no) +
                                     ": malformed label id");
        }
        if (labels.empty()) {
            throw std::runtime_error("label file line " + std::to_string(line_no) +
                                     ": node has no labels");
        }
        entries.emplace_back(node, std::move(labels));
    }
    if (entries.empty()) throw std::runtime_error("label file contains no entries");
    return make_labeled_nodes(std::move(entries));
}

NodeClassificationResult node_classification_eval(const EmbeddingMatrix& emb,
                                                  const LabeledNodes& labels,
                                                  double train_fraction,
                                                  std::uint64_t seed,
                                                  const LogRegConfig& cfg) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::runtime_error("train fraction must lie in (0, 1)");
    }
    const std::size_t count = labels.entries.size();
    if (count < 2) throw std::runtime_error("need at least two labeled nodes");
    for (const auto& [node, _] : labels.entries) {
        if (node >= emb.node_count) {
            throw std::runtime_error("embeddings missing labeled node " +
                                     std::to_string(node));
        }
    }

    // Membership is keyed per node, so the split is invariant to the order in
    // which labeled nodes were supplied.
    const std::uint64_t split_seed = derive_seed(seed, stream::kEval);
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const std::uint64_t ka = splitmix64(split_seed ^ (labels.entries[a].first + 1));
        const std::uint64_t kb = splitmix64(split_seed ^ (labels.entries[b].first + 1));
        if (ka != kb) return ka < kb;
        return labels.entries[a].first < labels.entries[b].first;
    });
    std::size_t train_count = static_cast<std::size_t>(train_fraction * double(count));
    if (train_count == 0 || train_count >= count) {
        throw std::runtime_error("train fraction leaves an empty train or test set");
    }
    std::vector<std::size_t> train_idx(order.begin(), order.begin() + train_count);
    std::vector<std::size_t> test_idx(order.begin() + train_count, order.end());
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());

    const std::size_t d = emb.dim;
    std::vector<double> train_features(train_count * d);
    for (std::size_t i = 0; i < train_count; ++i) {
        auto row = emb.input_row(labels.entries[train_idx[i]].first);
        for (std::size_t j = 0; j < d; ++j) train_features[i * d + j] = row[j];
    }

    NodeClassificationResult result;
    result.train_count = train_count;
    result.test_count = test_idx.size();

    const std::uint32_t universe = labels.label_universe;
    constexpr double kInf = std::numeric_limits<double>::infinity();
    // scores[label][test node]
    std::vector<std::vector<double>> scores(universe,
                                            std::vector<double>(test_idx.size(), -kInf));
    std::vector<int> ys(train_count);

    auto has_label = [](const std::vector<std::uint32_t>& ls, std::uint32_t l) {
        return std::binary_search(ls.begin(), ls.end(), l);
    };

    for (std::uint32_t label = 0; label < universe; ++label) {
        std::size_t positives = 0;
        for (std::size_t i = 0; i < train_count; ++i) {
            ys[i] = has_label(labels.entries[train_idx[i]].second, label) ? 1 : 0;
            positives += ys[i];
        }
        if (positives == 0 || positives == train_count) {
            result.degenerate_labels.push_back(label);
            if (positives == train_count) {
                std::fill(scores[label].begin(), scores[label].end(), kInf);
            }
            continue;
        }
        const LogRegModel model = fit_logreg(train_features, ys, d, cfg);
        std::vector<double> x(d);
        for (std::size_t i = 0; i < test_idx.size(); ++i) {
            auto row = emb.input_row(labels.entries[test_idx[i]].first);
            for (std::size_t j = 0; j < d; ++j) x[j] = row[j];
            scores[label][i] = model.margin(x);
        }
    }

    // Top-ell decisions per test node, ell = its true label count.
    std::vector<F1Counts> counts(universe);
    std::vector<std::uint32_t> ranked(universe);
    for (std::size_t i = 0; i < test_idx.size(); ++i) {
        const auto& truth = labels.entries[test_idx[i]].second;
        const std::size_t ell = truth.size();
        std::iota(ranked.begin(), ranked.end(), 0u);
        std::partial_sort(ranked.begin(), ranked.begin() + std::min<std::size_t>(ell, universe),
                          ranked.end(), [&](std::uint32_t a, std::uint32_t b) {
                              if (scores[a][i] != scores[b][i]) return scores[a][i] > scores[b][i];
                              return a < b;
                          });
        std::vector<bool> predicted(universe, false);
        for (std::size_t k = 0; k < std::min<std::size_t>(ell, universe); ++k) {
            predicted[ranked[k]] = true;
        }
        for (std::uint32_t label = 0; label < universe; ++label) {
            const bool truth_has = has_label(truth, label);
            if (predicted[label] && truth_has) ++counts[label].tp;
            else if (predicted[label]) ++counts[label].fp;
            else if (truth_has) ++counts[label].fn;
        }
    }

    result.micro_f1 = micro_f1(counts);
    result.macro_f1 = macro_f1(counts);
    return result;
}

LinkPredictionResult link_prediction_eval(const EmbeddingMatrix& emb,
                                          const EdgeSplit& split, EdgeFeatureOp op,
                                          std::uint64_t seed, const LogRegConfig& cfg) {
    const Graph& residual = split.residual;
    if (emb.node_count != residual.node_count()) {
        throw std::runtime_error("embeddings do not cover every node of the split graph");
    }
    if (emb.dim == 0) throw std::runtime_error("embeddings have zero dimension");

    const auto train_pos = residual.undirected_edges();
    const std::size_t n = residual.node_count();

    // Fresh classifier negatives, disjoint from held-out pairs on both sides.
    std::unordered_set<std::uint64_t> exclude;
    exclude.reserve(2 * (split.test_negative.size() + train_pos.size()));
    for (const auto& [u, v] : split.test_negative) exclude.insert(pair_key(u, v, n));
    Rng rng(derive_seed(seed, stream::kEval, static_cast<std::uint64_t>(op)));
    const auto train_neg =
        sample_non_edges(residual, split.test_positive, train_pos.size(), rng, exclude);

    const std::size_t d = emb.dim;
    const std::size_t total = train_pos.size() + train_neg.size();
    std::vector<double> features(total * d);
    std::vector<int> ys(total);
    std::size_t row = 0;
    auto add_example = [&](NodeId u, NodeId v, int label) {
        edge_feature(op, emb.input_row(u), emb.input_row(v),
                     {features.data() + row * d, d});
        ys[row] = label;
        ++row;
    };
    for (const auto& [u, v] : train_pos) add_example(u, v, 1);
    for (const auto& [u, v] : train_neg) add_example(u, v, 0);

    const LogRegModel model = fit_logreg(features, ys, d, cfg);

    std::vector<double> scores;
    std::vector<int> labels_out;
    scores.reserve(split.test_positive.size() + split.test_negative.size());
    std::vector<double> x(d);
    auto score_pair = [&](NodeId u, NodeId v, int label) {
        edge_feature(op, emb.input_row(u), emb.input_row(v), x);
        scores.push_back(model.margin(x));
        labels_out.push_back(label);
    };
    for (const auto& [u, v] : split.test_positive) score_pair(u, v, 1);
    for (const auto& [u, v] : split.test_negative) score_pair(u, v, 0);

    LinkPredictionResult result;
    result.train_positive = train_pos.size();
    result.train_negative = train_neg.size();
    result.auc = auc(scores, labels_out);
    return result;
}

}  // namespace r2v
