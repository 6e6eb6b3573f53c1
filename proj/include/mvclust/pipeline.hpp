#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <mvclust/anchors.hpp>
#include <mvclust/dataset.hpp>
#include <mvclust/embedding.hpp>
#include <mvclust/filter.hpp>
#include <mvclust/graph.hpp>
#include <mvclust/kmeans.hpp>
#include <mvclust/metrics.hpp>
#include <mvclust/subspace.hpp>

namespace mvc {

enum class PipelineMode { automatic, feature, graph };

inline std::string to_string(PipelineMode m) {
    switch (m) {
        case PipelineMode::feature: return "feature";
        case PipelineMode::graph: return "graph";
        default: return "auto";
    }
}

inline PipelineMode parse_mode(const std::string& s) {
    if (s == "auto")
        return PipelineMode::automatic;
    if (s == "feature")
        return PipelineMode::feature;
    if (s == "graph")
        return PipelineMode::graph;
    throw std::invalid_argument("unknown mode: " + s);
}

/// Pipeline parameters. k, mu, alpha are optional so that unset values
/// can pick up the mode-specific defaults:
///   feature mode: k=1, mu=0.1,  alpha=1
///   graph mode:   k=2, mu=0.5,  alpha=20
struct PipelineConfig {
    std::string data_dir;               // or
    std::optional<SyntheticSpec> synth;

    PipelineMode mode = PipelineMode::automatic;
    std::optional<int> k;
    std::optional<double> mu;
    std::optional<double> alpha;
    int anchors = 100;
    double gamma = 2.0;
    std::optional<int> clusters;
    int knn = 5;
    std::uint64_t seed = 0;
    int restarts = 10;
    bool standardize = false;
    bool normalize_z = false;
    bool normalize_q = false;
    bool symmetrize_graphs = false;
    bool export_embedding = false;
    bool dump_zbar = false;
    std::string out_dir;

    // sweep grids, keyed by parameter name: k, mu, alpha, anchors, gamma, knn
    std::map<std::string, std::vector<double>> grids;
};

/// Fully resolved parameters actually used by a run.
struct ResolvedParams {
    std::string mode;
    int k = 0;
    double mu = 0.0;
    double alpha = 0.0;
    int anchors = 0;
    double gamma = 0.0;
    int knn = 0;
    int clusters = 0;
    std::uint64_t seed = 0;
    int restarts = 0;
    bool standardize = false;
    bool normalize_z = false;
    bool normalize_q = false;
};

inline void to_json(nlohmann::json& j, const ResolvedParams& p) {
    j = {{"mode", p.mode},         {"k", p.k},
         {"mu", p.mu},             {"alpha", p.alpha},
         {"anchors", p.anchors},   {"gamma", p.gamma},
         {"knn", p.knn},           {"clusters", p.clusters},
         {"seed", p.seed},         {"restarts", p.restarts},
         {"standardize", p.standardize}, {"normalize_z", p.normalize_z},
         {"normalize_q", p.normalize_q}};
}

struct StageTimings {
    double filtering = 0.0;  // includes graph construction in feature mode
    double anchors = 0.0;
    double subspace = 0.0;
    double embedding = 0.0;
    double kmeans = 0.0;

    double total() const { return filtering + anchors + subspace + embedding + kmeans; }
};

inline void to_json(nlohmann::json& j, const StageTimings& t) {
    j = {{"filtering", t.filtering}, {"anchors", t.anchors},   {"subspace", t.subspace},
         {"embedding", t.embedding}, {"kmeans", t.kmeans},     {"total", t.total()}};
}

struct RunReport {
    ResolvedParams params;
    StageTimings timings;
    std::optional<MetricsReport> metrics;
    std::vector<int> labels;
    int n = 0;
    std::optional<Matrix> embedding;  // only when export requested
    std::optional<Matrix> zbar;       // only when dump requested
};

namespace detail {

class StageClock {
public:
    StageClock() : start_(std::chrono::steady_clock::now()) {}
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - start_).count();
        start_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point start_;
};

template <typename F>
auto with_stage(const std::string& stage, F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        throw std::runtime_error("during " + stage + ": " + e.what());
    }
}

inline Matrix standardize_columns(const Matrix& x) {
    Matrix out = x;
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
        const double mean = out.col(j).mean();
        out.col(j).array() -= mean;
        const double var = out.col(j).squaredNorm() / static_cast<double>(out.rows());
        if (var > 0.0)
            out.col(j) /= std::sqrt(var);
    }
    return out;
}

}  // namespace detail

inline ResolvedParams resolve_params(const PipelineConfig& cfg, const MultiViewDataset& data) {
    PipelineMode mode = cfg.mode;
    if (mode == PipelineMode::automatic)
        mode = data.has_graphs() ? PipelineMode::graph : PipelineMode::feature;
    if (mode == PipelineMode::graph)
        require(data.has_graphs(), "graph mode requested but the dataset has no graphs");

    const bool graph = mode == PipelineMode::graph;
    ResolvedParams p;
    p.mode = to_string(mode);
    p.k = cfg.k.value_or(graph ? 2 : 1);
    p.mu = cfg.mu.value_or(graph ? 0.5 : 0.1);
    p.alpha = cfg.alpha.value_or(graph ? 20.0 : 1.0);
    p.anchors = cfg.anchors;
    p.gamma = cfg.gamma;
    p.knn = cfg.knn;
    p.seed = cfg.seed;
    p.restarts = cfg.restarts;
    p.standardize = cfg.standardize;
    p.normalize_z = cfg.normalize_z;
    p.normalize_q = cfg.normalize_q;

    if (cfg.clusters)
        p.clusters = *cfg.clusters;
    else if (data.g > 0)
        p.clusters = data.g;
    else
        throw std::invalid_argument(
            "cluster count unknown: dataset has no labels and --clusters not set");
    require(p.clusters >= 1 && p.clusters <= data.n, "invalid cluster count");
    require(p.anchors >= 1 && p.anchors <= data.n, "anchor count must be in [1, n]");
    return p;
}

/// One end-to-end run. Feature branch: neighbor graphs per view ->
/// filter -> per-view K-means anchors -> ridge similarities -> embedding
/// -> K-means. Graph branch: filter with the provided graphs -> shared
/// degree-sampled anchors -> ridge similarities -> embedding -> K-means.
/// Deterministic given (dataset, config, seed): anchors use stream 1 of
/// the seed, the final K-means uses stream 2.
inline RunReport run_pipeline(const MultiViewDataset& data, const PipelineConfig& cfg) {
    data.validate();
    const ResolvedParams p = resolve_params(cfg, data);
    const bool graph_mode = p.mode == "graph";

    FilterConfig fcfg{p.mu, p.k};
    fcfg.validate();
    if (fcfg.mu_above_stability_threshold())
        warn("mu = " + std::to_string(p.mu) +
             " > 0.5: the filter response may flip sign on high graph frequencies");

    RunReport report;
    report.params = p;
    report.n = data.n;

    std::vector<Matrix> views = data.views;
    if (p.standardize)
        for (auto& x : views)
            x = detail::standardize_columns(x);

    detail::StageClock clock;

    // -- filtering (feature mode first builds a neighbor graph per view)
    FilteredViews filtered = detail::with_stage("filtering", [&] {
        std::vector<NormalizedOperator> ops;
        ops.reserve(views.size());
        if (graph_mode) {
            for (const auto& a : data.graphs)
                ops.emplace_back(a);
        } else {
            for (const auto& x : views)
                ops.emplace_back(build_probabilistic_neighbor_graph(x, p.knn));
        }
        return filter_all_views(views, ops, fcfg);
    });
    report.timings.filtering = clock.lap();

    // -- anchors
    AnchorSet anchor_set = detail::with_stage("anchor selection", [&] {
        if (graph_mode) {
            const Vector prob = importance_probabilities(data.graphs, p.gamma);
            const auto ind = sample_without_replacement(prob, p.anchors, stream_seed(p.seed, 1));
            return build_anchor_matrices(filtered, ind);
        }
        return anchors_by_kmeans(filtered, p.anchors, stream_seed(p.seed, 1), p.restarts);
    });
    report.timings.anchors = clock.lap();

    // -- per-view similarities
    ConcatenatedSimilarity zbar = detail::with_stage("subspace solve", [&] {
        return concat_views(solve_all_views(filtered, anchor_set, p.alpha));
    });
    if (p.normalize_z)
        for (Eigen::Index j = 0; j < zbar.cols(); ++j) {
            const double norm = zbar.col(j).norm();
            if (norm > 0.0)
                zbar.col(j) /= norm;
        }
    report.timings.subspace = clock.lap();

    // -- spectral embedding
    SpectralEmbedding emb = detail::with_stage("embedding", [&] {
        return spectral_embed(zbar, p.clusters);
    });
    if (p.normalize_q)
        for (Eigen::Index i = 0; i < emb.q.rows(); ++i) {
            const double norm = emb.q.row(i).norm();
            if (norm > 0.0)
                emb.q.row(i) /= norm;
        }
    report.timings.embedding = clock.lap();

    // -- final K-means
    const Partition part = detail::with_stage("kmeans", [&] {
        return cluster_embedding(emb, p.clusters, stream_seed(p.seed, 2), p.restarts);
    });
    report.timings.kmeans = clock.lap();

    report.labels = part.labels;
    if (data.has_labels())
        report.metrics = evaluate(data.labels, part.labels);
    if (cfg.export_embedding)
        report.embedding = emb.q;
    if (cfg.dump_zbar)
        report.zbar = zbar;
    return report;
}

/// Load (or synthesize) the configured dataset.
inline MultiViewDataset acquire_dataset(const PipelineConfig& cfg) {
    if (cfg.synth)
        return generate_synthetic(*cfg.synth);
    require(!cfg.data_dir.empty(), "no dataset: set a data directory or a synthetic spec");
    return load_dataset(cfg.data_dir, cfg.symmetrize_graphs);
}

inline RunReport run_pipeline(const PipelineConfig& cfg) {
    return run_pipeline(acquire_dataset(cfg), cfg);
}

namespace detail {

inline void write_matrix_csv(const std::string& path, const Matrix& x) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            if (j)
                out << ",";
            out << format_double(x(i, j));
        }
        out << "\n";
    }
}

}  // namespace detail

/// Persist a run: labels.csv always, metrics.json iff ground truth was
/// available, report.json with the resolved config and stage timings,
/// plus the optional matrix exports.
inline void write_run_outputs(const RunReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const fs::path root(out_dir);

    write_labels_csv((root / "labels.csv").string(), report.labels);

    if (report.metrics) {
        std::ofstream out(root / "metrics.json");
        out << nlohmann::json(*report.metrics).dump(2) << "\n";
    }

    nlohmann::json rj;
    rj["config"] = report.params;
    rj["timings"] = report.timings;
    rj["n"] = report.n;
    if (report.metrics)
        rj["metrics"] = *report.metrics;
    std::ofstream out(root / "report.json");
    out << rj.dump(2) << "\n";

    if (report.embedding)
        detail::write_matrix_csv((root / "embedding.csv").string(), *report.embedding);
    if (report.zbar)
        detail::write_matrix_csv((root / "zbar.csv").string(), *report.zbar);
}

// ---------------------------------------------------------------------------
// parameter sweeps

struct SweepCell {
    int index = 0;
    ResolvedParams params;
    std::optional<MetricsReport> metrics;
    std::string error;
};

/// Cartesian product over the configured grids (canonical parameter
/// order k, mu, alpha, anchors, gamma, knn; the last grid varies
/// fastest). Cell i runs with seed base_seed + i. Per-cell failures are
/// recorded in the row and the sweep continues.
inline std::vector<SweepCell> sweep(const MultiViewDataset& data, const PipelineConfig& cfg) {
    static const std::vector<std::string> order = {"k", "mu", "alpha", "anchors", "gamma", "knn"};
    std::vector<std::pair<std::string, std::vector<double>>> grids;
    for (const auto& name : order) {
        const auto it = cfg.grids.find(name);
        if (it == cfg.grids.end())
            continue;
        require(!it->second.empty(), "sweep: empty grid for " + name);
        grids.emplace_back(name, it->second);
    }
    for (const auto& [name, values] : cfg.grids)
        require(std::find(order.begin(), order.end(), name) != order.end(),
                "sweep: unknown parameter " + name);
    require(!grids.empty(), "no sweep parameters");

    std::size_t cells = 1;
    for (const auto& [name, values] : grids)
        cells *= values.size();

    std::vector<SweepCell> rows;
    rows.reserve(cells);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        PipelineConfig run_cfg = cfg;
        std::size_t rem = cell;
        for (auto it = grids.rbegin(); it != grids.rend(); ++it) {
            const double value = it->second[rem % it->second.size()];
            rem /= it->second.size();
            const std::string& name = it->first;
            if (name == "k")
                run_cfg.k = static_cast<int>(value);
            else if (name == "mu")
                run_cfg.mu = value;
            else if (name == "alpha")
                run_cfg.alpha = value;
            else if (name == "anchors")
                run_cfg.anchors = static_cast<int>(value);
            else if (name == "gamma")
                run_cfg.gamma = value;
            else if (name == "knn")
                run_cfg.knn = static_cast<int>(value);
        }
        run_cfg.seed = cfg.seed + cell;

        SweepCell row;
        row.index = static_cast<int>(cell);
        try {
            const RunReport report = run_pipeline(data, run_cfg);
            row.params = report.params;
            row.metrics = report.metrics;
        } catch (const std::exception& e) {
            row.params = ResolvedParams{};
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Long-format CSV for external plotting.
inline void write_sweep_csv(const std::string& path, const std::vector<SweepCell>& rows) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << "run,mode,k,mu,alpha,anchors,gamma,knn,seed,acc,nmi,purity,f1,ari,error\n";
    for (const auto& row : rows) {
        out << row.index << "," << row.params.mode << "," << row.params.k << ","
            << detail::format_double(row.params.mu) << ","
            << detail::format_double(row.params.alpha) << "," << row.params.anchors << ","
            << detail::format_double(row.params.gamma) << "," << row.params.knn << ","
            << row.params.seed << ",";
        if (row.metrics) {
            out << detail::format_double(row.metrics->acc) << ","
                << detail::format_double(row.metrics->nmi) << ","
                << detail::format_double(row.metrics->purity) << ","
                << detail::format_double(row.metrics->f1) << ","
                << detail::format_double(row.metrics->ari) << ",";
        } else {
            out << ",,,,,";
        }
        out << "\"" << row.error << "\"\n";
    }
}

// ---------------------------------------------------------------------------
// scaling benchmark

struct BenchRow {
    int n = 0;
    double seconds = 0.0;
};

/// Wall-clock of run_pipeline on synthetic graph-mode data at each size.
/// Edge probabilities are scaled by base.n / n so the expected degree
/// stays constant across sizes (the sparse regime the linear-cost model
/// assumes); dataset generation is excluded from the timing.
inline std::vector<BenchRow> bench_scaling(const std::vector<int>& sizes,
                                           const SyntheticSpec& base,
                                           const PipelineConfig& cfg) {
    require(!sizes.empty(), "bench: no sizes");
    require(std::is_sorted(sizes.begin(), sizes.end()), "bench: sizes must be ascending");
    const int ref = base.n > 0 ? base.n : sizes.front();

    std::vector<BenchRow> rows;
    for (int n : sizes) {
        SyntheticSpec spec = base;
        spec.n = n;
        const double scale = static_cast<double>(ref) / n;
        spec.p_in = std::min(1.0, base.p_in * scale);
        spec.p_out = std::min(1.0, base.p_out * scale);
        require(spec.p_in > spec.p_out, "bench: degenerate scaled probabilities");
        const MultiViewDataset data = generate_synthetic(spec);

        PipelineConfig run_cfg = cfg;
        run_cfg.mode = PipelineMode::graph;
        detail::StageClock clock;
        run_pipeline(data, run_cfg);
        rows.push_back({n, clock.lap()});
    }
    return rows;
}

inline void write_bench_csv(const std::string& path, const std::vector<BenchRow>& rows) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << "n,seconds\n";
    for (const auto& row : rows)
        out << row.n << "," << detail::format_double(row.seconds) << "\n";
}

// ---------------------------------------------------------------------------
// config (de)serialization: JSON file <-> PipelineConfig

inline void from_json(const nlohmann::json& j, PipelineConfig& cfg) {
    if (j.contains("data"))
        cfg.data_dir = j["data"].get<std::string>();
    if (j.contains("synth"))
        cfg.synth = j["synth"].get<SyntheticSpec>();
    if (j.contains("mode"))
        cfg.mode = parse_mode(j["mode"].get<std::string>());
    if (j.contains("k"))
        cfg.k = j["k"].get<int>();
    if (j.contains("mu"))
        cfg.mu = j["mu"].get<double>();
    if (j.contains("alpha"))
        cfg.alpha = j["alpha"].get<double>();
    if (j.contains("anchors"))
        cfg.anchors = j["anchors"].get<int>();
    if (j.contains("gamma"))
        cfg.gamma = j["gamma"].get<double>();
    if (j.contains("clusters"))
        cfg.clusters = j["clusters"].get<int>();
    if (j.contains("knn"))
        cfg.knn = j["knn"].get<int>();
    if (j.contains("seed"))
        cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("restarts"))
        cfg.restarts = j["restarts"].get<int>();
    if (j.contains("standardize"))
        cfg.standardize = j["standardize"].get<bool>();
    if (j.contains("normalize_z"))
        cfg.normalize_z = j["normalize_z"].get<bool>();
    if (j.contains("normalize_q"))
        cfg.normalize_q = j["normalize_q"].get<bool>();
    if (j.contains("symmetrize_graphs"))
        cfg.symmetrize_graphs = j["symmetrize_graphs"].get<bool>();
    if (j.contains("out"))
        cfg.out_dir = j["out"].get<std::string>();
    if (j.contains("grids"))
        for (const auto& [name, values] : j["grids"].items())
            cfg.grids[name] = values.get<std::vector<double>>();
}

}  // namespace mvc
