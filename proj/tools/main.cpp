#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "r2v/eval.hpp"
#include "r2v/pipeline.hpp"

using json = nlohmann::json;
using namespace r2v;

namespace {

struct Options {
    std::string input;
    std::string labels_path;
    std::string corpus_path;
    std::string split_manifest;
    std::string embeddings_path;
    std::string output;
    std::string manifest_path;
    bool directed = false;

    std::string exploitation = "drrw-js";
    std::string exploration = "ucb";
    double epsilon = 0.5;
    std::uint32_t walks_per_node = 80;
    std::uint32_t walk_length = 40;

    std::uint32_t dim = 64;
    std::uint32_t window = 10;
    std::uint32_t negatives = 5;
    double noise_exponent = 0.75;
    std::uint32_t epochs = 5;
    double lr = 0.025;
    double lr_final = 1e-4;

    double fraction = 0.5;
    double train_fraction = 0.5;
    std::string operators = "all";

    std::string task;
    std::string epsilon_grid;
    std::string variants;

    std::size_t steps = 10000;
    std::size_t diag_window = 100;
    std::string checkpoints = "100,1000,10000";
    std::string start_token;

    std::string save_split;
    std::string save_corpus;
    std::string save_embeddings;

    std::uint64_t seed = 1;
    unsigned workers = 1;

    WalkConfig walk_config() const {
        WalkConfig cfg;
        cfg.exploitation = parse_exploitation(exploitation);
        cfg.exploration = parse_exploration(exploration);
        cfg.epsilon = epsilon;
        cfg.walks_per_node = walks_per_node;
        cfg.walk_length = walk_length;
        cfg.seed = seed;
        cfg.workers = workers;
        return cfg;
    }

    SgnsConfig sgns_config() const {
        SgnsConfig cfg;
        cfg.dim = dim;
        cfg.window = window;
        cfg.negatives = negatives;
        cfg.noise_exponent = noise_exponent;
        cfg.epochs = epochs;
        cfg.lr_initial = lr;
        cfg.lr_final = lr_final;
        cfg.seed = seed;
        cfg.workers = workers;
        return cfg;
    }

    PipelineConfig pipeline_config() const {
        PipelineConfig cfg;
        cfg.walk = walk_config();
        cfg.sgns = sgns_config();
        return cfg;
    }
};

json config_json(const Options& o) {
    return json{{"input", o.input},
                {"labels", o.labels_path},
                {"directed", o.directed},
                {"exploitation", o.exploitation},
                {"exploration", o.exploration},
                {"epsilon", o.epsilon},
                {"walks_per_node", o.walks_per_node},
                {"walk_length", o.walk_length},
                {"dim", o.dim},
                {"window", o.window},
                {"negatives", o.negatives},
                {"noise_exponent", o.noise_exponent},
                {"epochs", o.epochs},
                {"lr", o.lr},
                {"lr_final", o.lr_final},
                {"fraction", o.fraction},
                {"train_fraction", o.train_fraction},
                {"operators", o.operators},
                {"seed", o.seed},
                {"workers", o.workers}};
}

std::string config_echo(const Options& o, const std::string& command) {
    std::ostringstream out;
    out << "reinforce2vec " << command << "\nseed=" << o.seed
        << " exploitation=" << o.exploitation << " exploration=" << o.exploration
        << " epsilon=" << o.epsilon << " R=" << o.walks_per_node << " L=" << o.walk_length
        << " C=" << o.window << " d=" << o.dim << " K=" << o.negatives
        << " epochs=" << o.epochs << " workers=" << o.workers;
    return out.str();
}

void write_manifest(const Options& o, const std::string& command, json extras,
                    double seconds) {
    std::string path = o.manifest_path;
    if (path.empty()) {
        if (o.output.empty()) return;
        path = o.output + ".manifest.json";
    }
    json manifest{{"command", command},
                  {"seed", o.seed},
                  {"config", config_json(o)},
                  {"timing_seconds", seconds},
                  {"output", o.output}};
    manifest.update(extras);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << manifest.dump(2) << '\n';
}

// `--config manifest.json` preloads option defaults from a previous run, so a
// manifest is enough to reproduce it; explicit flags still win.
void apply_config_file(Options& o, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config: " + path);
    json manifest = json::parse(in);
    const json& c = manifest.contains("config") ? manifest.at("config") : manifest;
    auto load = [&](const char* key, auto& field) {
        if (c.contains(key)) field = c.at(key).template get<std::decay_t<decltype(field)>>();
    };
    load("input", o.input);
    load("labels", o.labels_path);
    load("directed", o.directed);
    load("exploitation", o.exploitation);
    load("exploration", o.exploration);
    load("epsilon", o.epsilon);
    load("walks_per_node", o.walks_per_node);
    load("walk_length", o.walk_length);
    load("dim", o.dim);
    load("window", o.window);
    load("negatives", o.negatives);
    load("noise_exponent", o.noise_exponent);
    load("epochs", o.epochs);
    load("lr", o.lr);
    load("lr_final", o.lr_final);
    load("fraction", o.fraction);
    load("train_fraction", o.train_fraction);
    load("operators", o.operators);
    load("seed", o.seed);
    load("workers", o.workers);
}

Graph load_graph(const Options& o) {
    std::ifstream in(o.input);
    if (!in) throw std::runtime_error("cannot open edge list: " + o.input);
    return Graph::parse_edge_list(in, o.directed);
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write output: " + path);
    return out;
}

std::vector<EdgeFeatureOp> parse_operators(const std::string& spec) {
    std::vector<EdgeFeatureOp> ops;
    if (spec == "all" || spec.empty()) {
        ops.assign(std::begin(kAllEdgeFeatureOps), std::end(kAllEdgeFeatureOps));
        return ops;
    }
    std::istringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) ops.push_back(parse_edge_feature_op(item));
    if (ops.empty()) throw std::runtime_error("no edge operators selected");
    return ops;
}

std::vector<std::size_t> parse_size_list(const std::string& spec) {
    std::vector<std::size_t> out;
    std::istringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
    return out;
}

std::vector<double> parse_double_list(const std::string& spec) {
    std::vector<double> out;
    std::istringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::string dataset_name(const std::string& path) {
    const auto slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    const auto dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

// Loads a word2vec-format embedding file and reindexes it by the graph's
// dense ids; every graph node must be present.
EmbeddingMatrix load_embeddings_for_graph(const std::string& path, const Graph& g) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open embeddings: " + path);
    LoadedEmbeddings loaded = load_embeddings(in);

    EmbeddingMatrix emb;
    emb.node_count = g.node_count();
    emb.dim = loaded.embeddings.dim;
    emb.input.assign(emb.node_count * emb.dim, 0.0f);
    emb.context.assign(emb.node_count * emb.dim, 0.0f);
    std::vector<bool> seen(g.node_count(), false);
    for (std::size_t row = 0; row < loaded.tokens.size(); ++row) {
        auto id = g.index_of(loaded.tokens[row]);
        if (!id) continue;  // extra rows are harmless
        seen[*id] = true;
        auto src = loaded.embeddings.input_row(static_cast<NodeId>(row));
        std::copy(src.begin(), src.end(), emb.input.begin() + *id * emb.dim);
    }
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!seen[v]) {
            throw std::runtime_error("embeddings missing node '" + g.token(v) + "'");
        }
    }
    return emb;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_walk(const Options& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const Graph g = load_graph(o);
    const Corpus corpus = generate_corpus(g, o.walk_config());
    auto out = open_output(o.output);
    write_corpus(corpus, g, out, config_echo(o, "walk"));
    const std::uint64_t checksum = corpus_checksum(corpus);
    write_manifest(o, "walk",
                   json{{"paths", corpus.path_count()},
                        {"truncated_walks", corpus.truncated},
                        {"corpus_checksum", checksum},
                        {"nodes", g.node_count()},
                        {"edges", g.edge_count()}},
                   seconds_since(t0));
    std::cout << "wrote " << corpus.path_count() << " walks (" << corpus.truncated
              << " truncated), checksum " << checksum << "\n";
    return 0;
}

int cmd_embed(const Options& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const Graph g = load_graph(o);
    Corpus corpus;
    if (!o.corpus_path.empty()) {
        std::ifstream in(o.corpus_path);
        if (!in) throw std::runtime_error("cannot open corpus: " + o.corpus_path);
        corpus = read_corpus(in, g);
    } else {
        corpus = generate_corpus(g, o.walk_config());
    }
    const TrainReport report = train(corpus, g.node_count(), o.sgns_config());
    auto out = open_output(o.output);
    save_embeddings(report.embeddings, g.tokens(), out);
    write_manifest(o, "embed",
                   json{{"nodes", g.node_count()},
                        {"dim", o.dim},
                        {"pairs_processed", report.pairs_processed},
                        {"final_lr", report.final_lr},
                        {"epoch_sample_loss", report.epoch_sample_loss}},
                   seconds_since(t0));
    std::cout << "wrote embeddings for " << g.node_count() << " nodes (d=" << o.dim << ")\n";
    return 0;
}

int cmd_eval_lp(const Options& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const Graph g = load_graph(o);

    EdgeSplit split;
    if (!o.split_manifest.empty()) {
        std::ifstream in(o.split_manifest);
        if (!in) throw std::runtime_error("cannot open split manifest: " + o.split_manifest);
        split = load_split_manifest(in, g);
    } else {
        split = split_edges(g, o.fraction, o.seed);
    }
    if (!split.warning.empty()) {
        std::cerr << "warning: " << split.warning << "\n";
    }
    if (!o.save_split.empty()) {
        auto out = open_output(o.save_split);
        write_split_manifest(split, out);
    }

    PipelineConfig cfg = o.pipeline_config();
    cfg.reseed(o.seed);
    EmbeddingMatrix emb;
    if (!o.embeddings_path.empty()) {
        emb = load_embeddings_for_graph(o.embeddings_path, split.residual);
    } else {
        const Corpus corpus = generate_corpus(split.residual, cfg.walk);
        if (!o.save_corpus.empty()) {
            auto out = open_output(o.save_corpus);
            write_corpus(corpus, split.residual, out, config_echo(o, "eval-lp"));
        }
        emb = train(corpus, split.residual.node_count(), cfg.sgns).embeddings;
        if (!o.save_embeddings.empty()) {
            auto out = open_output(o.save_embeddings);
            save_embeddings(emb, split.residual.tokens(), out);
        }
    }

    const std::string dataset = dataset_name(o.input);
    std::vector<ResultRow> rows;
    for (EdgeFeatureOp op : parse_operators(o.operators)) {
        const auto result = link_prediction_eval(emb, split, op, o.seed);
        ResultRow row;
        row.dataset = dataset;
        row.exploitation = o.exploitation;
        row.exploration = o.exploration;
        row.epsilon = o.epsilon;
        row.scope = to_string(op);
        row.metric = "auc";
        row.value = 100.0 * result.auc;
        row.seed = o.seed;
        rows.push_back(row);
        std::cout << to_string(op) << " auc " << std::fixed << std::setprecision(1)
                  << row.value << std::defaultfloat << "\n";
    }
    auto out = open_output(o.output);
    write_results_csv(out, rows, config_echo(o, "eval-lp"));
    write_manifest(o, "eval-lp",
                   json{{"achieved_fraction", split.achieved_fraction},
                        {"test_positive", split.test_positive.size()},
                        {"test_negative", split.test_negative.size()},
                        {"split_warning", split.warning}},
                   seconds_since(t0));
    return 0;
}

int cmd_eval_nc(const Options& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const Graph g = load_graph(o);
    std::ifstream label_in(o.labels_path);
    if (!label_in) throw std::runtime_error("cannot open labels: " + o.labels_path);
    const LabeledNodes labels = load_labels(label_in, g);

    EmbeddingMatrix emb;
    if (!o.embeddings_path.empty()) {
        emb = load_embeddings_for_graph(o.embeddings_path, g);
    } else {
        PipelineConfig cfg = o.pipeline_config();
        cfg.reseed(o.seed);
        emb = embed_graph(g, cfg.walk, cfg.sgns);
        if (!o.save_embeddings.empty()) {
            auto out = open_output(o.save_embeddings);
            save_embeddings(emb, g.tokens(), out);
        }
    }

    const auto result = node_classification_eval(emb, labels, o.train_fraction, o.seed);
    const std::string dataset = dataset_name(o.input);
    std::vector<ResultRow> rows;
    for (const auto& [metric, value] :
         {std::pair<std::string, double>{"micro_f1", result.micro_f1},
          {"macro_f1", result.macro_f1}}) {
        ResultRow row;
        row.dataset = dataset;
        row.exploitation = o.exploitation;
        row.exploration = o.exploration;
        row.epsilon = o.epsilon;
        row.scope = "train=" + std::to_string(o.train_fraction);
        row.metric = metric;
        row.value = 100.0 * value;
        row.seed = o.seed;
        rows.push_back(row);
    }
    auto out = open_output(o.output);
    write_results_csv(out, rows, config_echo(o, "eval-nc"));
    write_manifest(o, "eval-nc",
                   json{{"labeled_nodes", labels.entries.size()},
                        {"label_universe", labels.label_universe},
                        {"train_count", result.train_count},
                        {"test_count", result.test_count},
                        {"degenerate_labels", result.degenerate_labels}},
                   seconds_since(t0));
    std::cout << "micro_f1 " << std::fixed << std::setprecision(1) << 100.0 * result.micro_f1
              << " macro_f1 " << 100.0 * result.macro_f1 << std::defaultfloat << "\n";
    return 0;
}

int cmd_diagnose(const Options& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const Graph g = load_graph(o);

    WalkConfig cfg = o.walk_config();
    cfg.walk_length = static_cast<std::uint32_t>(o.steps + 1);
    NodeId start;
    if (!o.start_token.empty()) {
        start = g.require_index(o.start_token);
    } else {
        Rng pick(derive_seed(o.seed, stream::kEval));
        start = static_cast<NodeId>(pick.below(g.node_count()));
    }
    Rng rng(derive_seed(o.seed, stream::kWalk, 0, start));
    const WalkResult walk = generate_walk(g, start, cfg, rng);

    const auto checkpoints = parse_size_list(o.checkpoints);
    const auto diag = stuck_diagnostic(walk.path, o.diag_window, checkpoints);
    auto out = open_output(o.output);
    write_diagnostic_csv(diag, g, out,
                         config_echo(o, "diagnose") + "\nstart=" + g.token(start) +
                             " steps=" + std::to_string(o.steps) +
                             " window=" + std::to_string(o.diag_window));
    write_manifest(o, "diagnose",
                   json{{"start", g.token(start)},
                        {"steps", o.steps},
                        {"window", o.diag_window},
                        {"truncated", walk.truncated}},
                   seconds_since(t0));
    for (const auto& w : diag.windows) {
        std::cout << "step " << w.checkpoint << ": " << w.distinct << " distinct nodes\n";
    }
    for (const auto& notice : diag.notices) std::cout << notice << "\n";
    return 0;
}

std::vector<SweepVariant> build_grid(const Options& o) {
    std::vector<SweepVariant> grid;
    if (!o.variants.empty()) {
        std::istringstream ss(o.variants);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) {
                throw std::runtime_error("variant must look like exploitation:exploration");
            }
            grid.push_back({parse_exploitation(item.substr(0, colon)),
                            parse_exploration(item.substr(colon + 1)), o.epsilon});
        }
        return grid;
    }
    if (!o.epsilon_grid.empty()) {
        for (double eps : parse_double_list(o.epsilon_grid)) {
            grid.push_back({parse_exploitation(o.exploitation),
                            Exploration::EpsilonGreedy, eps});
        }
        return grid;
    }
    for (Exploitation ex : {Exploitation::Vrrw, Exploitation::DrrwKl, Exploitation::DrrwJs}) {
        for (Exploration er :
             {Exploration::None, Exploration::EpsilonGreedy, Exploration::Ucb}) {
            grid.push_back({ex, er, o.epsilon});
        }
    }
    return grid;
}

int cmd_sweep(const Options& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const Graph g = load_graph(o);
    const auto grid = build_grid(o);
    const std::string dataset = dataset_name(o.input);
    PipelineConfig base = o.pipeline_config();

    std::vector<ResultRow> rows;
    if (o.task == "nc") {
        if (o.labels_path.empty()) throw std::runtime_error("sweep nc requires --labels");
        std::ifstream label_in(o.labels_path);
        if (!label_in) throw std::runtime_error("cannot open labels: " + o.labels_path);
        const LabeledNodes labels = load_labels(label_in, g);
        rows = sweep_node_classification(g, labels, o.train_fraction, grid, base, o.seed,
                                         dataset);
    } else if (o.task == "lp") {
        rows = sweep_link_prediction(g, o.fraction, parse_operators(o.operators), grid,
                                     base, o.seed, dataset);
    } else {
        throw std::runtime_error("sweep task must be nc or lp");
    }

    auto out = open_output(o.output);
    write_results_csv(out, rows, config_echo(o, "sweep"));
    write_manifest(o, "sweep",
                   json{{"task", o.task}, {"grid_size", grid.size()},
                        {"rows", rows.size()}},
                   seconds_since(t0));
    std::cout << "wrote " << rows.size() << " result rows for " << grid.size()
              << " variants\n";
    return 0;
}

void add_walk_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--exploitation", o.exploitation,
                    "first-order | vrrw | drrw-kl | drrw-js");
    cmd->add_option("--exploration", o.exploration, "none | epsilon-greedy | ucb");
    cmd->add_option("--epsilon", o.epsilon, "random-neighbor probability for epsilon-greedy");
    cmd->add_option("--walks-per-node,-R", o.walks_per_node, "walks started per node");
    cmd->add_option("--walk-length,-L", o.walk_length, "total nodes per walk");
}

void add_sgns_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--dim,-d", o.dim, "embedding dimension");
    cmd->add_option("--window,-C", o.window, "skip-gram window size");
    cmd->add_option("--negatives,-K", o.negatives, "negative samples per pair");
    cmd->add_option("--noise-exponent", o.noise_exponent, "unigram distribution exponent");
    cmd->add_option("--epochs", o.epochs, "training epochs");
    cmd->add_option("--lr", o.lr, "initial learning rate");
    cmd->add_option("--lr-final", o.lr_final, "final learning rate");
}

void add_common_flags(CLI::App* cmd, Options& o, std::string& config_path) {
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--workers", o.workers, "worker threads (1 = fully deterministic)");
    cmd->add_option("--manifest", o.manifest_path, "run manifest path");
    cmd->add_option("--config", config_path, "load defaults from a manifest JSON")
        ->check(CLI::ExistingFile);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reinforced random-walk network embedding toolkit"};
    app.require_subcommand(1);
    Options o;
    std::string config_path;

    // --config is applied before the real parse so explicit flags override it.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string_view(argv[i]) == "--config") {
            try {
                apply_config_file(o, argv[i + 1]);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 1;
            }
        }
    }

    auto* walk = app.add_subcommand("walk", "generate a reinforced random-walk corpus");
    walk->add_option("--input,-i", o.input, "edge list file")->required();
    walk->add_flag("--directed", o.directed, "treat edges as directed");
    walk->add_option("--output,-o", o.output, "corpus file")->required();
    add_walk_flags(walk, o);
    add_common_flags(walk, o, config_path);

    auto* embed = app.add_subcommand("embed", "train embeddings from walks");
    embed->add_option("--input,-i", o.input, "edge list file")->required();
    embed->add_flag("--directed", o.directed, "treat edges as directed");
    embed->add_option("--corpus", o.corpus_path, "existing corpus (otherwise walks run in-process)");
    embed->add_option("--output,-o", o.output, "embedding file")->required();
    add_walk_flags(embed, o);
    add_sgns_flags(embed, o);
    add_common_flags(embed, o, config_path);

    auto* lp = app.add_subcommand("eval-lp", "link prediction protocol");
    lp->add_option("--input,-i", o.input, "edge list file")->required();
    lp->add_option("--fraction", o.fraction, "held-out edge fraction");
    lp->add_option("--split-manifest", o.split_manifest, "reuse an existing split");
    lp->add_option("--embeddings", o.embeddings_path,
                   "score precomputed embeddings instead of training");
    lp->add_option("--save-split", o.save_split, "write the split manifest");
    lp->add_option("--save-corpus", o.save_corpus, "write the residual-graph corpus");
    lp->add_option("--save-embeddings", o.save_embeddings, "write the trained embeddings");
    lp->add_option("--operators", o.operators, "all or comma list of edge operators");
    lp->add_option("--output,-o", o.output, "results CSV")->required();
    add_walk_flags(lp, o);
    add_sgns_flags(lp, o);
    add_common_flags(lp, o, config_path);

    auto* nc = app.add_subcommand("eval-nc", "node classification protocol");
    nc->add_option("--input,-i", o.input, "edge list file")->required();
    nc->add_option("--labels", o.labels_path, "label file")->required();
    nc->add_option("--train-fraction", o.train_fraction, "labeled-node train fraction");
    nc->add_option("--embeddings", o.embeddings_path, "use precomputed embeddings");
    nc->add_option("--save-embeddings", o.save_embeddings, "write the trained embeddings");
    nc->add_option("--output,-o", o.output, "results CSV")->required();
    add_walk_flags(nc, o);
    add_sgns_flags(nc, o);
    add_common_flags(nc, o, config_path);

    auto* diag = app.add_subcommand("diagnose", "stuck-set diagnostics for one long walk");
    diag->add_option("--input,-i", o.input, "edge list file")->required();
    diag->add_option("--steps", o.steps, "walk steps");
    diag->add_option("--window", o.diag_window, "trailing window size");
    diag->add_option("--checkpoints", o.checkpoints, "comma list of checkpoint steps");
    diag->add_option("--start", o.start_token, "start node token (default: seeded random)");
    diag->add_option("--output,-o", o.output, "diagnostic CSV")->required();
    add_walk_flags(diag, o);
    add_common_flags(diag, o, config_path);

    auto* sweep = app.add_subcommand("sweep", "run a variant or epsilon grid");
    sweep->add_option("--input,-i", o.input, "edge list file")->required();
    sweep->add_option("--task", o.task, "nc or lp")->required();
    sweep->add_option("--labels", o.labels_path, "label file (nc)");
    sweep->add_option("--fraction", o.fraction, "held-out edge fraction (lp)");
    sweep->add_option("--train-fraction", o.train_fraction, "labeled-node train fraction (nc)");
    sweep->add_option("--operators", o.operators, "edge operators (lp)");
    sweep->add_option("--epsilon-grid", o.epsilon_grid,
                      "comma list of epsilon values (epsilon-greedy sweep)");
    sweep->add_option("--variants", o.variants,
                      "comma list of exploitation:exploration variants");
    sweep->add_option("--output,-o", o.output, "results CSV")->required();
    add_walk_flags(sweep, o);
    add_sgns_flags(sweep, o);
    add_common_flags(sweep, o, config_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (walk->parsed()) return cmd_walk(o);
        if (embed->parsed()) return cmd_embed(o);
        if (lp->parsed()) return cmd_eval_lp(o);
        if (nc->parsed()) return cmd_eval_nc(o);
        if (diag->parsed()) return cmd_diagnose(o);
        if (sweep->parsed()) return cmd_sweep(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
