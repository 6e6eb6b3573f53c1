// Command-line driver: run / sweep / bench / synth subcommands around the
// mvclust pipeline.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <mvclust/mvclust.hpp>

namespace {

struct CliOptions {
    std::string config_file;
    std::string data_dir;
    std::string synth_spec_file;
    std::string mode = "auto";
    int k = 0;
    double mu = 0.0;
    double alpha = 0.0;
    int anchors = 100;
    double gamma = 2.0;
    int clusters = 0;
    int knn = 5;
    std::uint64_t seed = 0;
    int restarts = 10;
    bool standardize = false;
    bool normalize_z = false;
    bool normalize_q = false;
    bool symmetrize_graphs = false;
    bool export_embedding = false;
    bool dump_z = false;
    std::string out_dir = "out";

    std::vector<double> grid_k, grid_mu, grid_alpha, grid_anchors, grid_gamma, grid_knn;
    std::vector<int> bench_sizes;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--config", opt.config_file, "JSON config file (flags win on conflict)");
    cmd->add_option("--data", opt.data_dir, "dataset directory with manifest.json");
    cmd->add_option("--synth", opt.synth_spec_file, "synthetic spec JSON file");
    cmd->add_option("--mode", opt.mode, "auto|feature|graph")
        ->check(CLI::IsMember({"auto", "feature", "graph"}));
    cmd->add_option("--k", opt.k, "filter order");
    cmd->add_option("--mu", opt.mu, "filter balance parameter");
    cmd->add_option("--alpha", opt.alpha, "similarity trade-off parameter");
    cmd->add_option("--anchors", opt.anchors, "anchor count m");
    cmd->add_option("--gamma", opt.gamma, "importance-sampling exponent");
    cmd->add_option("--clusters", opt.clusters, "cluster count g");
    cmd->add_option("--knn", opt.knn, "neighbor count for feature-mode graph construction");
    cmd->add_option("--seed", opt.seed, "random seed");
    cmd->add_option("--restarts", opt.restarts, "K-means restarts");
    cmd->add_flag("--standardize", opt.standardize, "per-feature standardization");
    cmd->add_flag("--normalize-z", opt.normalize_z, "unit-normalize Z-bar columns before the SVD");
    cmd->add_flag("--normalize-q", opt.normalize_q, "unit-normalize Q rows before K-means");
    cmd->add_flag("--symmetrize-graphs", opt.symmetrize_graphs,
                  "accept asymmetric graph files as (W + W^T)/2");
    cmd->add_option("--out", opt.out_dir, "output directory");
}

mvc::PipelineConfig build_config(const CLI::App* cmd, const CliOptions& opt) {
    mvc::PipelineConfig cfg;
    if (!opt.config_file.empty()) {
        std::ifstream in(opt.config_file);
        if (!in)
            throw std::runtime_error("cannot read config file: " + opt.config_file);
        nlohmann::json j;
        in >> j;
        cfg = j.get<mvc::PipelineConfig>();
    }

    const auto given = [&](const std::string& flag) {
        const CLI::Option* o = cmd->get_option_no_throw(flag);
        return o != nullptr && o->count() > 0;
    };
    if (given("--data"))
        cfg.data_dir = opt.data_dir;
    if (given("--synth")) {
        std::ifstream in(opt.synth_spec_file);
        if (!in)
            throw std::runtime_error("cannot read synthetic spec: " + opt.synth_spec_file);
        nlohmann::json j;
        in >> j;
        cfg.synth = j.get<mvc::SyntheticSpec>();
    }
    if (given("--mode"))
        cfg.mode = mvc::parse_mode(opt.mode);
    if (given("--k"))
        cfg.k = opt.k;
    if (given("--mu"))
        cfg.mu = opt.mu;
    if (given("--alpha"))
        cfg.alpha = opt.alpha;
    if (given("--anchors"))
        cfg.anchors = opt.anchors;
    if (given("--gamma"))
        cfg.gamma = opt.gamma;
    if (given("--clusters"))
        cfg.clusters = opt.clusters;
    if (given("--knn"))
        cfg.knn = opt.knn;
    if (given("--seed"))
        cfg.seed = opt.seed;
    if (given("--restarts"))
        cfg.restarts = opt.restarts;
    if (opt.standardize)
        cfg.standardize = true;
    if (opt.normalize_z)
        cfg.normalize_z = true;
    if (opt.normalize_q)
        cfg.normalize_q = true;
    if (opt.symmetrize_graphs)
        cfg.symmetrize_graphs = true;
    if (given("--out"))
        cfg.out_dir = opt.out_dir;
    if (cfg.out_dir.empty())
        cfg.out_dir = opt.out_dir;

    const auto grid = [&](const std::string& flag, const std::vector<double>& values,
                          const std::string& name) {
        if (given(flag))
            cfg.grids[name] = values;
    };
    grid("--grid-k", opt.grid_k, "k");
    grid("--grid-mu", opt.grid_mu, "mu");
    grid("--grid-alpha", opt.grid_alpha, "alpha");
    grid("--grid-anchors", opt.grid_anchors, "anchors");
    grid("--grid-gamma", opt.grid_gamma, "gamma");
    grid("--grid-knn", opt.grid_knn, "knn");
    return cfg;
}

// feature-mode reports are conventionally percentages, graph-mode ones
// raw fractions
void print_metrics(const mvc::MetricsReport& m, const std::string& mode) {
    if (mode == "feature") {
        std::printf("ACC %.2f  NMI %.2f  PUR %.2f  F1 %.2f  ARI %.2f  (x100, n=%d)\n",
                    100.0 * m.acc, 100.0 * m.nmi, 100.0 * m.purity, 100.0 * m.f1, 100.0 * m.ari,
                    m.n);
    } else {
        std::printf("ACC %.4f  NMI %.4f  PUR %.4f  F1 %.4f  ARI %.4f  (n=%d)\n", m.acc, m.nmi,
                    m.purity, m.f1, m.ari, m.n);
    }
}

int cmd_run(const CLI::App* cmd, const CliOptions& opt) {
    mvc::PipelineConfig cfg = build_config(cmd, opt);
    cfg.export_embedding = opt.export_embedding;
    cfg.dump_zbar = opt.dump_z;

    const mvc::MultiViewDataset data = mvc::acquire_dataset(cfg);
    const mvc::RunReport report = mvc::run_pipeline(data, cfg);

    std::printf("mode=%s n=%d g=%d k=%d mu=%g alpha=%g m=%d gamma=%g seed=%llu\n",
                report.params.mode.c_str(), report.n, report.params.clusters, report.params.k,
                report.params.mu, report.params.alpha, report.params.anchors, report.params.gamma,
                static_cast<unsigned long long>(report.params.seed));
    std::printf("timings [s]: filtering %.3f  anchors %.3f  subspace %.3f  embedding %.3f  "
                "kmeans %.3f  (total %.3f)\n",
                report.timings.filtering, report.timings.anchors, report.timings.subspace,
                report.timings.embedding, report.timings.kmeans, report.timings.total());
    if (report.metrics)
        print_metrics(*report.metrics, report.params.mode);

    mvc::write_run_outputs(report, cfg.out_dir);
    std::printf("wrote %s/labels.csv\n", cfg.out_dir.c_str());
    return 0;
}

int cmd_sweep(const CLI::App* cmd, const CliOptions& opt) {
    const mvc::PipelineConfig cfg = build_config(cmd, opt);
    const mvc::MultiViewDataset data = mvc::acquire_dataset(cfg);
    const auto rows = mvc::sweep(data, cfg);

    std::filesystem::create_directories(cfg.out_dir);
    const std::string path = cfg.out_dir + "/sweep.csv";
    mvc::write_sweep_csv(path, rows);

    int failures = 0;
    for (const auto& row : rows)
        if (!row.error.empty())
            ++failures;
    std::printf("sweep: %zu cells (%d failed) -> %s\n", rows.size(), failures, path.c_str());
    return 0;
}

int cmd_bench(const CLI::App* cmd, const CliOptions& opt) {
    mvc::PipelineConfig cfg = build_config(cmd, opt);
    if (!cfg.synth)
        throw std::runtime_error("bench needs a synthetic base spec (--synth)");
    if (opt.bench_sizes.empty())
        throw std::runtime_error("bench needs --sizes");

    const auto rows = mvc::bench_scaling(opt.bench_sizes, *cfg.synth, cfg);
    std::filesystem::create_directories(cfg.out_dir);
    const std::string path = cfg.out_dir + "/bench.csv";
    mvc::write_bench_csv(path, rows);
    for (const auto& row : rows)
        std::printf("n=%d  %.3f s\n", row.n, row.seconds);
    std::printf("wrote %s\n", path.c_str());
    return 0;
}

int cmd_synth(const CLI::App* cmd, const CliOptions& opt, const mvc::SyntheticSpec& flag_spec) {
    mvc::SyntheticSpec spec = flag_spec;
    if (!opt.synth_spec_file.empty()) {
        std::ifstream in(opt.synth_spec_file);
        if (!in)
            throw std::runtime_error("cannot read synthetic spec: " + opt.synth_spec_file);
        nlohmann::json j;
        in >> j;
        spec = j.get<mvc::SyntheticSpec>();
        // explicit flags still win
        if (cmd->count("--n"))
            spec.n = flag_spec.n;
        if (cmd->count("--views"))
            spec.v = flag_spec.v;
        if (cmd->count("--clusters"))
            spec.g = flag_spec.g;
        if (cmd->count("--dim"))
            spec.d = flag_spec.d;
        if (cmd->count("--separation"))
            spec.separation = flag_spec.separation;
        if (cmd->count("--p-in"))
            spec.p_in = flag_spec.p_in;
        if (cmd->count("--p-out"))
            spec.p_out = flag_spec.p_out;
        if (cmd->count("--seed"))
            spec.seed = flag_spec.seed;
    }
    const mvc::MultiViewDataset data = mvc::generate_synthetic(spec);
    mvc::save_dataset(data, opt.out_dir);
    std::printf("wrote synthetic dataset (n=%d v=%d g=%d) to %s\n", data.n, data.v, data.g,
                opt.out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scalable multi-view clustering with graph filtering and anchor similarities"};
    app.require_subcommand(1);

    CliOptions opt;

    CLI::App* run = app.add_subcommand("run", "run the clustering pipeline once");
    add_common_options(run, opt);
    run->add_flag("--export-embedding", opt.export_embedding, "write embedding.csv");
    run->add_flag("--dump-z", opt.dump_z, "write zbar.csv (large)");

    CLI::App* sweep = app.add_subcommand("sweep", "grid sweep, one pipeline run per cell");
    add_common_options(sweep, opt);
    sweep->add_option("--grid-k", opt.grid_k, "filter order grid")->delimiter(',');
    sweep->add_option("--grid-mu", opt.grid_mu, "mu grid")->delimiter(',');
    sweep->add_option("--grid-alpha", opt.grid_alpha, "alpha grid")->delimiter(',');
    sweep->add_option("--grid-anchors", opt.grid_anchors, "anchor count grid")->delimiter(',');
    sweep->add_option("--grid-gamma", opt.grid_gamma, "gamma grid")->delimiter(',');
    sweep->add_option("--grid-knn", opt.grid_knn, "knn grid")->delimiter(',');

    CLI::App* bench = app.add_subcommand("bench", "timing across synthetic sizes");
    add_common_options(bench, opt);
    bench->add_option("--sizes", opt.bench_sizes, "ascending sample counts")
        ->delimiter(',')
        ->required();

    mvc::SyntheticSpec flag_spec;
    CLI::App* synth = app.add_subcommand("synth", "emit a synthetic dataset to disk");
    synth->add_option("--spec", opt.synth_spec_file, "synthetic spec JSON file");
    synth->add_option("--n", flag_spec.n, "sample count");
    synth->add_option("--views", flag_spec.v, "view count");
    synth->add_option("--clusters", flag_spec.g, "cluster count");
    synth->add_option("--dim", flag_spec.d, "per-view feature dimension");
    synth->add_option("--separation", flag_spec.separation, "center separation in sigmas");
    synth->add_option("--p-in", flag_spec.p_in, "within-cluster edge probability");
    synth->add_option("--p-out", flag_spec.p_out, "between-cluster edge probability");
    synth->add_option("--seed", flag_spec.seed, "random seed");
    synth->add_option("--out", opt.out_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(run, opt);
        if (sweep->parsed())
            return cmd_sweep(sweep, opt);
        if (bench->parsed())
            return cmd_bench(bench, opt);
        if (synth->parsed())
            return cmd_synth(synth, opt, flag_spec);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
