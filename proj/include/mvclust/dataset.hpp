#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <mvclust/common.hpp>
#include <mvclust/graph.hpp>

namespace mvc {

/// n samples described by v feature matrices, optionally v adjacency
/// graphs over the same nodes, optionally ground-truth labels.
struct MultiViewDataset {
    int n = 0;
    int v = 0;
    int g = 0;  // cluster count; 0 when unknown
    std::vector<Matrix> views;
    std::vector<SparseGraph> graphs;  // empty, or exactly v graphs
    std::vector<int> labels;          // empty, or exactly n labels in [0, g)

    bool has_graphs() const { return !graphs.empty(); }
    bool has_labels() const { return !labels.empty(); }

    void validate() const {
        require(v >= 1 && static_cast<int>(views.size()) == v, "dataset: need v >= 1 views");
        for (const auto& x : views) {
            require(static_cast<int>(x.rows()) == n, "dataset: row-count mismatch across views");
            require(x.cols() >= 1, "dataset: view with zero features");
            require_finite(x, "dataset view");
        }
        if (has_graphs()) {
            require(static_cast<int>(graphs.size()) == v, "dataset: graph count must equal view count");
            for (const auto& a : graphs) {
                require(a.size() == n, "dataset: graph node count mismatch");
                a.validate();
            }
        }
        if (has_labels()) {
            require(static_cast<int>(labels.size()) == n, "dataset: label count mismatch");
            require(g >= 1, "dataset: labels present but cluster count unknown");
            std::vector<int> counts(g, 0);
            for (int l : labels) {
                require(l >= 0 && l < g, "dataset: label out of range");
                ++counts[l];
            }
            for (int c = 0; c < g; ++c)
                require(counts[c] > 0, "dataset: empty class " + std::to_string(c));
        }
    }
};

/// Recipe for a desk-scale dataset: per view, Gaussian blobs around g
/// well-separated centers plus a planted-partition graph aligned with
/// the same labels. Fully determined by the seed.
struct SyntheticSpec {
    int n = 0;
    int v = 1;
    int g = 2;
    int d = 2;
    double separation = 6.0;  // minimum center distance, in within-cluster sigmas
    double p_in = 0.1;
    double p_out = 0.01;
    std::uint64_t seed = 0;

    void validate() const {
        require(n >= 1 && v >= 1 && g >= 1 && d >= 1, "synthetic spec: n, v, g, d must be positive");
        require(g <= n, "synthetic spec: g > n");
        require(separation > 0.0, "synthetic spec: separation must be positive");
        require(p_in > p_out && p_out >= 0.0 && p_in <= 1.0,
                "synthetic spec: need p_in > p_out >= 0");
    }
};

inline void to_json(nlohmann::json& j, const SyntheticSpec& s) {
    j = {{"n", s.n},           {"v", s.v},     {"g", s.g},         {"d", s.d},
         {"separation", s.separation}, {"p_in", s.p_in}, {"p_out", s.p_out}, {"seed", s.seed}};
}

inline void from_json(const nlohmann::json& j, SyntheticSpec& s) {
    j.at("n").get_to(s.n);
    s.v = j.value("v", 1);
    j.at("g").get_to(s.g);
    s.d = j.value("d", 2);
    s.separation = j.value("separation", 6.0);
    s.p_in = j.value("p_in", 0.1);
    s.p_out = j.value("p_out", 0.01);
    s.seed = j.value("seed", std::uint64_t{0});
}

namespace detail {

inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline double parse_double(const std::string& tok, const std::string& where) {
    if (tok.empty())
        throw std::runtime_error(where + ": empty field");
    char* end = nullptr;
    const double x = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || (end && *end != '\0' && !std::isspace(*end)))
        throw std::runtime_error(where + ": invalid number '" + tok + "'");
    return x;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ','))
        out.push_back(field);
    return out;
}

inline std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r')
        s.pop_back();
    return s;
}

}  // namespace detail

/// Dense view file: header row "f0,f1,...", one sample per row.
inline Matrix read_view_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("missing view file: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(path + ": empty file");
    const int d = static_cast<int>(detail::split_csv_line(detail::strip_cr(line)).size());
    require(d >= 1, path + ": no columns");

    std::vector<double> values;
    int rows = 0;
    while (std::getline(in, line)) {
        line = detail::strip_cr(line);
        if (line.empty())
            continue;
        const auto fields = detail::split_csv_line(line);
        if (static_cast<int>(fields.size()) != d)
            throw std::runtime_error(path + ": ragged row " + std::to_string(rows + 1));
        for (const auto& f : fields) {
            const double x = detail::parse_double(f, path);
            if (!std::isfinite(x))
                throw std::runtime_error(path + ": non-finite feature values");
            values.push_back(x);
        }
        ++rows;
    }
    Matrix x(rows, d);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < d; ++j)
            x(i, j) = values[static_cast<std::size_t>(i) * d + j];
    return x;
}

inline void write_view_csv(const std::string& path, const Matrix& x) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    for (int j = 0; j < x.cols(); ++j)
        out << (j ? ",f" : "f") << j;
    out << "\n";
    for (int i = 0; i < x.rows(); ++i) {
        for (int j = 0; j < x.cols(); ++j) {
            if (j)
                out << ",";
            out << detail::format_double(x(i, j));
        }
        out << "\n";
    }
}

/// Matrix Market `coordinate real symmetric` reader (1-based indices).
/// `general` files are accepted only if exactly symmetric, unless
/// `symmetrize` is set, in which case W <- (W + W^T)/2.
inline SparseGraph read_graph_mtx(const std::string& path, bool symmetrize = false) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("missing graph file: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(path + ": empty file");
    line = detail::strip_cr(line);

    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || object != "matrix" || format != "coordinate")
        throw std::runtime_error(path + ": not a coordinate Matrix Market file");
    if (field != "real" && field != "integer" && field != "pattern")
        throw std::runtime_error(path + ": unsupported field type " + field);
    if (symmetry != "symmetric" && symmetry != "general")
        throw std::runtime_error(path + ": unsupported symmetry " + symmetry);
    const bool pattern = field == "pattern";
    const bool symmetric = symmetry == "symmetric";

    do {
        if (!std::getline(in, line))
            throw std::runtime_error(path + ": missing size line");
        line = detail::strip_cr(line);
    } while (line.empty() || line[0] == '%');

    std::istringstream size_line(line);
    long rows = 0, cols = 0, nnz = 0;
    size_line >> rows >> cols >> nnz;
    if (rows <= 0 || rows != cols)
        throw std::runtime_error(path + ": graph must be square");

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(nnz));
    for (long e = 0; e < nnz; ++e) {
        do {
            if (!std::getline(in, line))
                throw std::runtime_error(path + ": truncated entry list");
            line = detail::strip_cr(line);
        } while (line.empty() || line[0] == '%');
        std::istringstream entry(line);
        long i = 0, j = 0;
        double w = 1.0;
        entry >> i >> j;
        if (!pattern)
            entry >> w;
        if (entry.fail() || i < 1 || j < 1 || i > rows || j > rows)
            throw std::runtime_error(path + ": bad entry '" + line + "'");
        if (!std::isfinite(w))
            throw std::runtime_error(path + ": non-finite weight");
        if (w < 0.0)
            throw std::runtime_error(path + ": negative weight");
        trips.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1), w);
        if (symmetric && i != j)
            trips.emplace_back(static_cast<int>(j - 1), static_cast<int>(i - 1), w);
    }

    SpMatrix a(static_cast<int>(rows), static_cast<int>(rows));
    // duplicate coordinates are summed by setFromTriplets; catch them by
    // comparing counts
    a.setFromTriplets(trips.begin(), trips.end());
    if (a.nonZeros() != static_cast<Eigen::Index>(trips.size()))
        throw std::runtime_error(path + ": duplicate entries");

    if (!symmetric) {
        SpMatrix at = SpMatrix(a.transpose());
        SpMatrix diff = a - at;
        double asym = 0.0;
        for (int k = 0; k < diff.outerSize(); ++k)
            for (SpMatrix::InnerIterator it(diff, k); it; ++it)
                asym = std::max(asym, std::abs(it.value()));
        if (asym != 0.0) {
            if (!symmetrize)
                throw std::runtime_error(path + ": asymmetric graph file (pass symmetrize to accept)");
            a = 0.5 * (a + at);
        }
    }
    return SparseGraph::from_matrix(a);
}

inline void write_graph_mtx(const std::string& path, const SparseGraph& g) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << g.size() << " " << g.size() << " " << g.nnz() << "\n";
    // lower triangle, 1-based
    for (const auto& e : g.entries())
        out << e.col + 1 << " " << e.row + 1 << " " << detail::format_double(e.weight) << "\n";
}

inline std::vector<int> read_labels_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("missing label file: " + path);
    std::vector<int> labels;
    std::string line;
    while (std::getline(in, line)) {
        line = detail::strip_cr(line);
        if (line.empty())
            continue;
        labels.push_back(static_cast<int>(detail::parse_double(line, path)));
    }
    return labels;
}

inline void write_labels_csv(const std::string& path, const std::vector<int>& labels) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    for (int l : labels)
        out << l << "\n";
}

/// Load a dataset directory: manifest.json naming the view files,
/// optional graph files, optional label file, optional cluster count.
inline MultiViewDataset load_dataset(const std::string& dir, bool symmetrize_graphs = false) {
    namespace fs = std::filesystem;
    const fs::path root(dir);
    const fs::path manifest_path = root / "manifest.json";
    if (!fs::exists(manifest_path))
        throw std::runtime_error("missing manifest: " + manifest_path.string());

    nlohmann::json manifest;
    {
        std::ifstream in(manifest_path);
        in >> manifest;
    }
    if (!manifest.contains("views") || !manifest["views"].is_array() || manifest["views"].empty())
        throw std::runtime_error(manifest_path.string() + ": manifest must name at least one view");

    MultiViewDataset data;
    for (const auto& name : manifest["views"]) {
        const fs::path p = root / name.get<std::string>();
        if (!fs::exists(p))
            throw std::runtime_error("missing view file: " + p.string());
        data.views.push_back(read_view_csv(p.string()));
    }
    data.v = static_cast<int>(data.views.size());
    data.n = static_cast<int>(data.views.front().rows());

    if (manifest.contains("graphs")) {
        for (const auto& name : manifest["graphs"]) {
            const fs::path p = root / name.get<std::string>();
            if (!fs::exists(p))
                throw std::runtime_error("missing graph file: " + p.string());
            data.graphs.push_back(read_graph_mtx(p.string(), symmetrize_graphs));
        }
    }
    if (manifest.contains("labels")) {
        const fs::path p = root / manifest["labels"].get<std::string>();
        if (!fs::exists(p))
            throw std::runtime_error("missing label file: " + p.string());
        data.labels = read_labels_csv(p.string());
    }
    if (manifest.contains("clusters"))
        data.g = manifest["clusters"].get<int>();
    else if (data.has_labels())
        data.g = *std::max_element(data.labels.begin(), data.labels.end()) + 1;

    data.validate();
    return data;
}

/// Write a dataset in the manifest + CSV + Matrix Market layout that
/// load_dataset() reads back.
inline void save_dataset(const MultiViewDataset& data, const std::string& dir) {
    namespace fs = std::filesystem;
    data.validate();
    fs::create_directories(dir);
    const fs::path root(dir);

    nlohmann::json manifest;
    manifest["views"] = nlohmann::json::array();
    for (int i = 0; i < data.v; ++i) {
        const std::string name = "view_" + std::to_string(i) + ".csv";
        write_view_csv((root / name).string(), data.views[i]);
        manifest["views"].push_back(name);
    }
    if (data.has_graphs()) {
        manifest["graphs"] = nlohmann::json::array();
        for (int i = 0; i < data.v; ++i) {
            const std::string name = "graph_" + std::to_string(i) + ".mtx";
            write_graph_mtx((root / name).string(), data.graphs[i]);
            manifest["graphs"].push_back(name);
        }
    }
    if (data.has_labels()) {
        write_labels_csv((root / "labels.csv").string(), data.labels);
        manifest["labels"] = "labels.csv";
    }
    if (data.g > 0)
        manifest["clusters"] = data.g;

    std::ofstream out(root / "manifest.json");
    out << manifest.dump(2) << "\n";
}

/// Deterministic synthetic generator. Labels are assigned round-robin
/// (i mod g), so clusters are as even as possible. Per view, centers are
/// redrawn until all pairwise distances reach `separation` (unit
/// within-cluster sigma). Planted-partition edges have weight 1, no self
/// loops; any isolated node is rewired to one random same-cluster node.
inline MultiViewDataset generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    MultiViewDataset data;
    data.n = spec.n;
    data.v = spec.v;
    data.g = spec.g;
    data.labels.resize(spec.n);
    for (int i = 0; i < spec.n; ++i)
        data.labels[i] = i % spec.g;

    std::vector<std::vector<int>> members(spec.g);
    for (int i = 0; i < spec.n; ++i)
        members[data.labels[i]].push_back(i);

    for (int view = 0; view < spec.v; ++view) {
        Rng rng(stream_seed(spec.seed, 1000 + view));
        Matrix centers(spec.g, spec.d);
        double scale = spec.separation;
        for (int c = 0; c < spec.g; ++c) {
            for (int attempt = 0;; ++attempt) {
                for (int j = 0; j < spec.d; ++j)
                    centers(c, j) = scale * rng.normal();
                bool ok = true;
                for (int prev = 0; prev < c && ok; ++prev)
                    ok = (centers.row(c) - centers.row(prev)).norm() >= spec.separation;
                if (ok)
                    break;
                if (attempt > 0 && attempt % 64 == 0)
                    scale *= 1.25;  // escape crowded draws
            }
        }
        Matrix x(spec.n, spec.d);
        for (int i = 0; i < spec.n; ++i)
            for (int j = 0; j < spec.d; ++j)
                x(i, j) = centers(data.labels[i], j) + rng.normal();
        data.views.push_back(std::move(x));
    }

    for (int view = 0; view < spec.v; ++view) {
        Rng rng(stream_seed(spec.seed, 2000 + view));
        SparseGraph graph(spec.n);
        std::vector<int> degree(spec.n, 0);
        for (int i = 0; i < spec.n; ++i) {
            for (int j = i + 1; j < spec.n; ++j) {
                const double p = data.labels[i] == data.labels[j] ? spec.p_in : spec.p_out;
                if (rng.uniform() < p) {
                    graph.add_edge(i, j, 1.0);
                    ++degree[i];
                    ++degree[j];
                }
            }
        }
        for (int i = 0; i < spec.n; ++i) {
            if (degree[i] > 0)
                continue;
            const auto& cluster = members[data.labels[i]];
            std::vector<int> candidates;
            for (int j : cluster)
                if (j != i)
                    candidates.push_back(j);
            if (candidates.empty())  // singleton cluster: fall back to any other node
                for (int j = 0; j < spec.n; ++j)
                    if (j != i)
                        candidates.push_back(j);
            const int j = candidates[rng.uniform_int(static_cast<int>(candidates.size()))];
            graph.add_edge(i, j, 1.0);
            ++degree[i];
            ++degree[j];
        }
        data.graphs.push_back(std::move(graph));
    }

    data.validate();
    return data;
}

}  // namespace mvc
