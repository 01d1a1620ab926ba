#include "r2v/sgns.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace r2v {

void SgnsConfig::validate() const {
    if (dim < 1) throw std::runtime_error("embedding dimension must be at least 1");
    if (window < 1) throw std::runtime_error("window size must be at least 1");
    if (negatives < 1) throw std::runtime_error("negative sample count must be at least 1");
    if (epochs < 1) throw std::runtime_error("epoch count must be at least 1");
    if (!(lr_initial > 0.0) || !(lr_final > 0.0)) {
        throw std::runtime_error("learning rates must be positive");
    }
    if (lr_final > lr_initial) {
        throw std::runtime_error("final learning rate must not exceed the initial rate");
    }
    if (noise_exponent < 0.0) throw std::runtime_error("noise exponent must be nonnegative");
}

std::vector<std::pair<NodeId, NodeId>> extract_pairs(const Corpus& corpus,
                                                     std::uint32_t window) {
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (std::size_t p = 0; p < corpus.path_count(); ++p) {
        for_each_pair(corpus.path(p), window,
                      [&](NodeId a, NodeId c) { pairs.emplace_back(a, c); });
    }
    return pairs;
}

std::uint64_t count_pairs(const Corpus& corpus, std::uint32_t window) {
    std::uint64_t total = 0;
    const std::uint64_t w = window;
    for (std::size_t p = 0; p < corpus.path_count(); ++p) {
        const std::uint64_t len = corpus.path(p).size();
        for (std::uint64_t i = 0; i < len; ++i) {
            total += std::min(i, w) + std::min(len - 1 - i, w);
        }
    }
    return total;
}

namespace {

double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Unrolled float dot for the SGD hot loop; four independent accumulators keep
// the reduction pipelined without -ffast-math.
float dot_f(const float* __restrict a, const float* __restrict b, std::size_t d) {
    float s0 = 0.0f, s1 = 0.0f, s2 = 0.0f, s3 = 0.0f;
    std::size_t i = 0;
    for (; i + 4 <= d; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    float s = (s0 + s1) + (s2 + s3);
    for (; i < d; ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

double sgns_pair_loss(std::span<const double> anchor, std::span<const double> positive,
                      std::span<const double> negatives) {
    const std::size_t d = anchor.size();
    double loss = softplus(-dot(anchor, positive));
    for (std::size_t k = 0; k * d < negatives.size(); ++k) {
        loss += softplus(dot(anchor, negatives.subspan(k * d, d)));
    }
    return loss;
}

void sgns_pair_gradient(std::span<const double> anchor, std::span<const double> positive,
                        std::span<const double> negatives, std::span<double> grad_anchor,
                        std::span<double> grad_positive, std::span<double> grad_negatives) {
    const std::size_t d = anchor.size();
    std::fill(grad_anchor.begin(), grad_anchor.end(), 0.0);

    const double coeff_pos = sgns_sigmoid(dot(anchor, positive)) - 1.0;
    for (std::size_t i = 0; i < d; ++i) {
        grad_anchor[i] += coeff_pos * positive[i];
        grad_positive[i] = coeff_pos * anchor[i];
    }
    for (std::size_t k = 0; k * d < negatives.size(); ++k) {
        auto neg = negatives.subspan(k * d, d);
        auto grad = grad_negatives.subspan(k * d, d);
        const double coeff = sgns_sigmoid(dot(anchor, neg));
        for (std::size_t i = 0; i < d; ++i) {
            grad_anchor[i] += coeff * neg[i];
            grad[i] = coeff * anchor[i];
        }
    }
}

double skipgram_probability(const EmbeddingMatrix& emb, NodeId t, NodeId x) {
    if (t >= emb.node_count || x >= emb.node_count) {
        throw std::runtime_error("skipgram_probability: node out of range");
    }
    std::vector<double> logits(emb.node_count);
    auto zt = emb.input_row(t);
    for (NodeId k = 0; k < emb.node_count; ++k) {
        auto zk = emb.input_row(k);
        double s = 0.0;
        for (std::size_t i = 0; i < emb.dim; ++i) s += double(zt[i]) * double(zk[i]);
        logits[k] = s;
    }
    const double max_logit = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (double& v : logits) {
        v = std::exp(v - max_logit);
        total += v;
    }
    return logits[x] / total;
}

namespace {

// Vose alias table for O(1) categorical sampling; deterministic build.
class AliasTable {
public:
    explicit AliasTable(std::span<const double> weights) {
        const std::size_t n = weights.size();
        prob_.resize(n);
        alias_.resize(n);
        double total = 0.0;
        for (double w : weights) total += w;
        if (!(total > 0.0)) throw std::runtime_error("noise distribution has zero mass");

        std::vector<double> scaled(n);
        std::vector<std::uint32_t> small, large;
        for (std::size_t i = 0; i < n; ++i) {
            scaled[i] = weights[i] * double(n) / total;
            (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
        }
        while (!small.empty() && !large.empty()) {
            const std::uint32_t s = small.back();
            const std::uint32_t l = large.back();
            small.pop_back();
            large.pop_back();
            prob_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] -= 1.0 - scaled[s];
            (scaled[l] < 1.0 ? small : large).push_back(l);
        }
        for (std::uint32_t i : large) prob_[i] = 1.0;
        for (std::uint32_t i : small) prob_[i] = 1.0;
    }

    NodeId sample(Rng& rng) const {
        const std::size_t i = rng.index(prob_.size());
        return rng.unit() < prob_[i] ? static_cast<NodeId>(i) : static_cast<NodeId>(alias_[i]);
    }

private:
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;
};

struct MonitorSample {
    std::vector<NodeId> anchors;
    std::vector<NodeId> contexts;
    std::vector<NodeId> negatives;  // negatives per pair, flattened
};

double monitor_loss(const EmbeddingMatrix& emb, const MonitorSample& sample,
                    std::uint32_t k) {
    if (sample.anchors.empty()) return 0.0;
    double total = 0.0;
    const std::size_t d = emb.dim;
    for (std::size_t p = 0; p < sample.anchors.size(); ++p) {
        auto za = emb.input_row(sample.anchors[p]);
        auto zc = emb.context_row(sample.contexts[p]);
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) s += double(za[i]) * double(zc[i]);
        double loss = softplus(-s);
        for (std::uint32_t j = 0; j < k; ++j) {
            auto zn = emb.context_row(sample.negatives[p * k + j]);
            double sn = 0.0;
            for (std::size_t i = 0; i < d; ++i) sn += double(za[i]) * double(zn[i]);
            loss += softplus(sn);
        }
        total += loss;
    }
    return total / double(sample.anchors.size());
}

class Trainer {
public:
    Trainer(const Corpus& corpus, std::size_t vocab, const SgnsConfig& cfg,
            const AliasTable& noise)
        : corpus_(corpus), cfg_(cfg), noise_(noise) {
        emb_.node_count = vocab;
        emb_.dim = cfg.dim;
        emb_.input.resize(vocab * cfg.dim);
        emb_.context.assign(vocab * cfg.dim, 0.0f);

        Rng init_rng(derive_seed(cfg.seed, stream::kInit));
        const float scale = 0.5f / float(cfg.dim);
        for (float& v : emb_.input) {
            v = (2.0f * float(init_rng.unit()) - 1.0f) * scale;
        }

        pairs_per_epoch_ = count_pairs(corpus, cfg.window);
        total_updates_ = pairs_per_epoch_ * cfg.epochs;
        lr_slope_ = total_updates_ <= 1
                        ? 0.0
                        : (cfg.lr_final - cfg.lr_initial) / double(total_updates_ - 1);
    }

    std::uint64_t pairs_per_epoch() const { return pairs_per_epoch_; }

    double lr_at(std::uint64_t t) const {
        // Same curve as sgns_learning_rate with the slope hoisted out.
        return std::max(cfg_.lr_final, cfg_.lr_initial + lr_slope_ * double(t));
    }

    NodeId draw_negative(Rng& rng, NodeId positive) const {
        NodeId neg = noise_.sample(rng);
        for (int attempt = 0; neg == positive && attempt < 16; ++attempt) {
            neg = noise_.sample(rng);
        }
        return neg;
    }

    void update(NodeId anchor, NodeId context, float lr, Rng& rng,
                std::vector<float>& acc) {
        const std::size_t d = emb_.dim;
        float* __restrict za = emb_.input.data() + std::size_t(anchor) * d;
        float* __restrict accp = acc.data();
        std::fill(acc.begin(), acc.end(), 0.0f);

        auto apply = [&](NodeId target, float label) {
            float* __restrict zc = emb_.context.data() + std::size_t(target) * d;
            const float s = dot_f(za, zc, d);
            const float g = (label - sgns_sigmoid(s)) * lr;
            for (std::size_t i = 0; i < d; ++i) accp[i] += g * zc[i];
            for (std::size_t i = 0; i < d; ++i) zc[i] += g * za[i];
        };

        apply(context, 1.0f);
        for (std::uint32_t k = 0; k < cfg_.negatives; ++k) {
            apply(draw_negative(rng, context), 0.0f);
        }
        for (std::size_t i = 0; i < d; ++i) za[i] += accp[i];
    }

    // Sequential pass over [path_lo, path_hi); `t` is the global update index
    // the range starts at.
    std::uint64_t run_range(std::uint32_t epoch, unsigned worker, std::size_t path_lo,
                            std::size_t path_hi, std::uint64_t t) {
        Rng rng(derive_seed(cfg_.seed, stream::kTrain, epoch, worker));
        std::vector<float> acc(emb_.dim);
        for (std::size_t p = path_lo; p < path_hi; ++p) {
            auto path = corpus_.path(p);
            const std::size_t len = path.size();
            for (std::size_t i = 0; i < len; ++i) {
                const std::size_t lo = i >= cfg_.window ? i - cfg_.window : 0;
                const std::size_t hi = std::min(len - 1, i + std::size_t(cfg_.window));
                for (std::size_t j = lo; j <= hi; ++j) {
                    if (j == i) continue;
                    update(path[i], path[j], float(lr_at(t)), rng, acc);
                    ++t;
                }
            }
        }
        return t;
    }

    EmbeddingMatrix& embeddings() { return emb_; }
    std::uint64_t total_updates() const { return total_updates_; }

private:
    const Corpus& corpus_;
    const SgnsConfig& cfg_;
    const AliasTable& noise_;
    EmbeddingMatrix emb_;
    std::uint64_t pairs_per_epoch_ = 0;
    std::uint64_t total_updates_ = 0;
    double lr_slope_ = 0.0;
};

}  // namespace

TrainReport train(const Corpus& corpus, std::size_t vocab_size, const SgnsConfig& cfg) {
    cfg.validate();
    if (corpus.path_count() == 0) throw std::runtime_error("training corpus is empty");

    std::vector<std::uint64_t> counts(vocab_size, 0);
    for (NodeId token : corpus.tokens) {
        if (token >= vocab_size) {
            throw std::runtime_error("corpus node " + std::to_string(token) +
                                     " is outside the graph vocabulary");
        }
        ++counts[token];
    }

    std::vector<double> noise_weights(vocab_size);
    for (std::size_t i = 0; i < vocab_size; ++i) {
        noise_weights[i] = counts[i] == 0
                               ? 0.0
                               : std::pow(double(counts[i]), cfg.noise_exponent);
    }
    const AliasTable noise(noise_weights);

    Trainer trainer(corpus, vocab_size, cfg, noise);
    if (trainer.pairs_per_epoch() == 0) {
        throw std::runtime_error("corpus yields no training pairs");
    }

    // Frozen monitor sample: leading pairs in stream order with negatives from
    // a dedicated stream; reports the per-epoch mean loss on a fixed target.
    MonitorSample sample;
    {
        Rng mon_rng(derive_seed(cfg.seed, stream::kMonitor));
        const std::size_t cap =
            std::min<std::uint64_t>(trainer.pairs_per_epoch(), 10000);
        for (std::size_t p = 0; p < corpus.path_count() && sample.anchors.size() < cap; ++p) {
            for_each_pair(corpus.path(p), cfg.window, [&](NodeId a, NodeId c) {
                if (sample.anchors.size() >= cap) return;
                sample.anchors.push_back(a);
                sample.contexts.push_back(c);
                for (std::uint32_t k = 0; k < cfg.negatives; ++k) {
                    sample.negatives.push_back(trainer.draw_negative(mon_rng, c));
                }
            });
        }
    }

    TrainReport report;
    const std::size_t paths = corpus.path_count();
    const unsigned workers = std::max(1u, cfg.workers);

    // Prefix of pair counts per path, so concurrent workers know where their
    // chunk sits in the global learning-rate schedule.
    std::vector<std::uint64_t> pair_prefix(paths + 1, 0);
    for (std::size_t p = 0; p < paths; ++p) {
        const std::uint64_t len = corpus.path(p).size();
        std::uint64_t pairs = 0;
        for (std::uint64_t i = 0; i < len; ++i) {
            pairs += std::min<std::uint64_t>(i, cfg.window) +
                     std::min<std::uint64_t>(len - 1 - i, cfg.window);
        }
        pair_prefix[p + 1] = pair_prefix[p] + pairs;
    }

    std::uint64_t t = 0;
    for (std::uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (workers == 1 || paths < 2 * workers) {
            t = trainer.run_range(epoch, 0, 0, paths, t);
        } else {
            // Asynchronous updates over disjoint path chunks.
            std::vector<std::thread> threads;
            const std::size_t chunk = (paths + workers - 1) / workers;
            for (unsigned w = 0; w < workers; ++w) {
                const std::size_t lo = w * chunk;
                const std::size_t hi = std::min(paths, lo + chunk);
                if (lo >= hi) break;
                const std::uint64_t start_t = t + pair_prefix[lo];
                threads.emplace_back([&trainer, epoch, w, lo, hi, start_t] {
                    trainer.run_range(epoch, w, lo, hi, start_t);
                });
            }
            for (auto& th : threads) th.join();
            t += trainer.pairs_per_epoch();
        }
        report.epoch_sample_loss.push_back(
            monitor_loss(trainer.embeddings(), sample, cfg.negatives));
    }

    report.pairs_processed = trainer.total_updates();
    report.final_lr = trainer.lr_at(trainer.total_updates() - 1);
    report.embeddings = std::move(trainer.embeddings());
    return report;
}

void save_embeddings(const EmbeddingMatrix& emb, std::span<const std::string> tokens,
                     std::ostream& out) {
    if (tokens.size() != emb.node_count) {
        throw std::runtime_error("token table does not match embedding rows");
    }
    out << emb.node_count << ' ' << emb.dim << '\n';
    char buf[32];
    for (NodeId v = 0; v < emb.node_count; ++v) {
        out << tokens[v];
        auto row = emb.input_row(v);
        for (float x : row) {
            std::snprintf(buf, sizeof(buf), " %.6f", double(x));
            out << buf;
        }
        out << '\n';
    }
}

LoadedEmbeddings load_embeddings(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("embedding file is empty");
    std::istringstream header(line);
    std::size_t n = 0, d = 0;
    std::string extra;
    if (!(header >> n >> d) || (header >> extra) || n == 0 || d == 0) {
        throw std::runtime_error("embedding file has a malformed header");
    }

    LoadedEmbeddings loaded;
    loaded.embeddings.node_count = n;
    loaded.embeddings.dim = d;
    loaded.embeddings.input.resize(n * d);
    loaded.embeddings.context.assign(n * d, 0.0f);
    loaded.tokens.reserve(n);

    std::size_t row = 0;
    while (row < n) {
        if (!std::getline(in, line)) {
            throw std::runtime_error("embedding file ends after " + std::to_string(row) +
                                     " of " + std::to_string(n) + " rows");
        }
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string token;
        if (!(ls >> token)) continue;
        loaded.tokens.push_back(token);
        for (std::size_t i = 0; i < d; ++i) {
            double value = 0.0;
            if (!(ls >> value)) {
                throw std::runtime_error("embedding row " + std::to_string(row + 1) +
                                         ": expected " + std::to_string(d) + " values");
            }
            loaded.embeddings.input[row * d + i] = float(value);
        }
        double trailing = 0.0;
        if (ls >> trailing) {
            throw std::runtime_error("embedding row " + std::to_string(row + 1) +
                                     ": more than " + std::to_string(d) + " values");
        }
        ++row;
    }
    return loaded;
}

}  // namespace r2v
