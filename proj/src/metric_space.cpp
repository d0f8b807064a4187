#include "fadapt/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <utility>

namespace fadapt {

std::string to_string(GraphKind kind) {
    switch (kind) {
        case GraphKind::generic: return "generic";
        case GraphKind::tree: return "tree";
        case GraphKind::phylogenetic_tree: return "phylogenetic_tree";
        case GraphKind::grid: return "grid";
        case GraphKind::complete: return "complete";
        case GraphKind::embedding_metric: return "embedding_metric";
    }
    return "generic";
}

GraphKind graph_kind_from_string(const std::string& name) {
    if (name == "generic") return GraphKind::generic;
    if (name == "tree") return GraphKind::tree;
    if (name == "phylogenetic_tree" || name == "phylo") return GraphKind::phylogenetic_tree;
    if (name == "grid") return GraphKind::grid;
    if (name == "complete") return GraphKind::complete;
    if (name == "embedding_metric") return GraphKind::embedding_metric;
    throw ValidationError("unknown graph kind '" + name + "'");
}

namespace {

std::vector<std::vector<VertexId>> build_adjacency(std::size_t n, const std::vector<Edge>& edges) {
    std::vector<std::vector<VertexId>> adj(n);
    for (const auto& e : edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
}

std::vector<VertexId> all_vertices(std::size_t n) {
    std::vector<VertexId> v(n);
    std::iota(v.begin(), v.end(), VertexId{0});
    return v;
}

std::vector<VertexId> degree_one(const std::vector<std::vector<VertexId>>& adj) {
    std::vector<VertexId> out;
    for (std::size_t v = 0; v < adj.size(); ++v)
        if (adj[v].size() == 1 || adj.size() == 1) out.push_back(static_cast<VertexId>(v));
    return out;
}

std::vector<Edge> lattice_edges(std::size_t rows, std::size_t cols) {
    std::vector<Edge> edges;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const auto id = static_cast<VertexId>(r * cols + c);
            if (c + 1 < cols) edges.push_back({id, id + 1, 1.0});
            if (r + 1 < rows) edges.push_back({id, static_cast<VertexId>(id + cols), 1.0});
        }
    }
    return edges;
}

bool edge_less(const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
}

}  // namespace

LabelGraph LabelGraph::create(std::size_t num_vertices, std::vector<Edge> edges, GraphKind kind,
                              std::optional<std::vector<VertexId>> labels, GridShape grid) {
    if (num_vertices == 0) throw ValidationError("graph has no vertices");
    const bool allow_zero = kind == GraphKind::embedding_metric;

    for (auto& e : edges) {
        if (e.u >= num_vertices || e.v >= num_vertices) {
            std::ostringstream os;
            os << "edge (" << e.u << "," << e.v << ") references a vertex >= " << num_vertices;
            throw ValidationError(os.str());
        }
        if (e.u == e.v) throw ValidationError("self-loop on vertex " + std::to_string(e.u));
        if (!std::isfinite(e.weight) || e.weight < 0.0 || (e.weight == 0.0 && !allow_zero)) {
            std::ostringstream os;
            os << "edge (" << e.u << "," << e.v << ") has non-positive weight " << e.weight;
            throw ValidationError(os.str());
        }
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(), edge_less);
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v) {
            std::ostringstream os;
            os << "duplicate edge (" << edges[i].u << "," << edges[i].v << ")";
            throw ValidationError(os.str());
        }
    }

    LabelGraph g;
    g.adjacency_ = build_adjacency(num_vertices, edges);
    g.weighted_ = std::any_of(edges.begin(), edges.end(), [](const Edge& e) { return e.weight != 1.0; });
    g.edges_ = std::move(edges);
    g.kind_ = kind;

    // connectivity from vertex 0
    std::vector<char> seen(num_vertices, 0);
    std::vector<VertexId> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const VertexId v = stack.back();
        stack.pop_back();
        for (VertexId w : g.adjacency_[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    if (reached != num_vertices) {
        const auto missing = static_cast<std::size_t>(std::find(seen.begin(), seen.end(), 0) - seen.begin());
        throw ValidationError("graph is disconnected: vertex " + std::to_string(missing) +
                              " is unreachable from vertex 0");
    }

    const std::size_t n = num_vertices;
    const std::size_t m = g.edges_.size();
    switch (kind) {
        case GraphKind::tree:
        case GraphKind::phylogenetic_tree:
            if (m != n - 1)
                throw ValidationError("tree must have " + std::to_string(n - 1) + " edges, found " +
                                      std::to_string(m));
            break;
        case GraphKind::complete:
        case GraphKind::embedding_metric:
            if (m != n * (n - 1) / 2)
                throw ValidationError("complete graph on " + std::to_string(n) + " vertices needs " +
                                      std::to_string(n * (n - 1) / 2) + " edges, found " +
                                      std::to_string(m));
            if (kind == GraphKind::complete && g.weighted_)
                throw ValidationError("complete graph must be unweighted");
            break;
        case GraphKind::grid: {
            if (grid.rows * grid.cols != n)
                throw ValidationError("grid shape does not match the vertex count");
            auto expected = lattice_edges(grid.rows, grid.cols);
            std::sort(expected.begin(), expected.end(), edge_less);
            const bool same = expected.size() == m &&
                              std::equal(expected.begin(), expected.end(), g.edges_.begin(),
                                         [](const Edge& a, const Edge& b) {
                                             return a.u == b.u && a.v == b.v && b.weight == 1.0;
                                         });
            if (!same) throw ValidationError("edges do not form an unweighted row-major grid lattice");
            g.grid_ = grid;
            break;
        }
        case GraphKind::generic:
            break;
    }

    if (kind == GraphKind::phylogenetic_tree) {
        if (n < 2) throw ValidationError("phylogenetic tree needs at least two leaves");
        auto leaves = degree_one(g.adjacency_);
        if (labels) {
            auto given = *labels;
            std::sort(given.begin(), given.end());
            if (given != leaves)
                throw ValidationError("labels of a phylogenetic tree must be exactly its leaves");
        }
        g.labels_ = std::move(leaves);
    } else {
        if (labels) {
            auto given = *labels;
            std::sort(given.begin(), given.end());
            if (given != all_vertices(n))
                throw ValidationError("a label subset is only allowed for phylogenetic trees (labels = leaves)");
        }
        g.labels_ = all_vertices(n);
    }
    g.label_index_.assign(n, -1);
    for (std::size_t i = 0; i < g.labels_.size(); ++i) g.label_index_[g.labels_[i]] = static_cast<std::int64_t>(i);
    return g;
}

LabelGraph LabelGraph::infer(std::size_t num_vertices, std::vector<Edge> edges,
                             std::optional<std::vector<VertexId>> labels) {
    const std::size_t n = num_vertices;
    const std::size_t m = edges.size();
    const bool unweighted = std::all_of(edges.begin(), edges.end(), [](const Edge& e) { return e.weight == 1.0; });
    // acyclic + connected <=> tree; connectivity is validated by create()
    const bool tree_like = n > 0 && m + 1 == n;
    if (labels) {
        auto given = *labels;
        std::sort(given.begin(), given.end());
        if (given != all_vertices(n)) {
            if (!tree_like)
                throw ValidationError("a label subset is only allowed for phylogenetic trees (labels = leaves)");
            return create(n, std::move(edges), GraphKind::phylogenetic_tree, std::move(labels));
        }
    }
    if (tree_like) return create(n, std::move(edges), GraphKind::tree);
    if (unweighted && n > 0 && m == n * (n - 1) / 2) return create(n, std::move(edges), GraphKind::complete);
    return create(n, std::move(edges), GraphKind::generic);
}

std::vector<VertexId> LabelGraph::leaves() const { return degree_one(adjacency_); }

// -----------------------------
// Distances
// -----------------------------

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> values) : n_(n), d_(std::move(values)) {
    if (d_.size() != n * n) throw std::invalid_argument("DistanceMatrix: size mismatch");
    diameter_ = d_.empty() ? 0.0 : *std::max_element(d_.begin(), d_.end());
}

std::vector<VertexId> PathOracle::path(VertexId u, VertexId v) const {
    std::vector<VertexId> out;
    VertexId x = v;
    out.push_back(x);
    while (x != u) {
        x = pred_.at(static_cast<std::size_t>(u) * n_ + x);
        if (x == kNone) throw std::logic_error("PathOracle: no path");
        out.push_back(x);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

AllPairs all_pairs_distances(const LabelGraph& graph) {
    const std::size_t n = graph.num_vertices();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n * n, inf);
    std::vector<VertexId> pred(n * n, PathOracle::kNone);

    if (!graph.is_weighted()) {
        std::vector<VertexId> queue(n);
        for (std::size_t s = 0; s < n; ++s) {
            double* row = dist.data() + s * n;
            VertexId* prow = pred.data() + s * n;
            std::size_t head = 0, tail = 0;
            row[s] = 0.0;
            queue[tail++] = static_cast<VertexId>(s);
            while (head < tail) {
                const VertexId v = queue[head++];
                for (VertexId w : graph.neighbors(v)) {
                    if (row[w] == inf) {
                        row[w] = row[v] + 1.0;
                        prow[w] = v;
                        queue[tail++] = w;
                    }
                }
            }
        }
    } else {
        // weight lookup per adjacency entry
        std::vector<std::vector<double>> wadj(n);
        for (std::size_t v = 0; v < n; ++v) wadj[v].resize(graph.degree(static_cast<VertexId>(v)));
        for (const auto& e : graph.edges()) {
            auto nu = graph.neighbors(e.u);
            auto nv = graph.neighbors(e.v);
            wadj[e.u][static_cast<std::size_t>(std::lower_bound(nu.begin(), nu.end(), e.v) - nu.begin())] = e.weight;
            wadj[e.v][static_cast<std::size_t>(std::lower_bound(nv.begin(), nv.end(), e.u) - nv.begin())] = e.weight;
        }
        using Item = std::pair<double, VertexId>;
        for (std::size_t s = 0; s < n; ++s) {
            double* row = dist.data() + s * n;
            VertexId* prow = pred.data() + s * n;
            std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
            row[s] = 0.0;
            heap.emplace(0.0, static_cast<VertexId>(s));
            while (!heap.empty()) {
                auto [dv, v] = heap.top();
                heap.pop();
                if (dv > row[v]) continue;
                auto nbrs = graph.neighbors(v);
                for (std::size_t i = 0; i < nbrs.size(); ++i) {
                    const VertexId w = nbrs[i];
                    const double cand = dv + wadj[v][i];
                    if (cand < row[w]) {
                        row[w] = cand;
                        prow[w] = v;
                        heap.emplace(cand, w);
                    }
                }
            }
        }
        // summation order differs between the two directions
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) dist[j * n + i] = dist[i * n + j];
    }
    return {DistanceMatrix(n, std::move(dist)), PathOracle(n, std::move(pred))};
}

MetricSpace::MetricSpace(LabelGraph graph) : graph_(std::move(graph)) {
    auto ap = all_pairs_distances(graph_);
    dist_ = std::move(ap.distances);
    paths_ = std::move(ap.paths);
}

MetricSpace::MetricSpace(LabelGraph graph, DistanceMatrix distances, PathOracle paths)
    : graph_(std::move(graph)), dist_(std::move(distances)), paths_(std::move(paths)) {
    if (dist_.size() != graph_.num_vertices())
        throw std::invalid_argument("MetricSpace: distance matrix does not match the graph");
}

// -----------------------------
// Constructors
// -----------------------------

LabelGraph make_grid(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) throw ValidationError("grid dimensions must be >= 1");
    return LabelGraph::create(rows * cols, lattice_edges(rows, cols), GraphKind::grid, std::nullopt,
                              GridShape{rows, cols});
}

LabelGraph make_complete(std::size_t n) {
    if (n == 0) throw ValidationError("complete graph needs at least one vertex");
    std::vector<Edge> edges;
    edges.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(j), 1.0});
    return LabelGraph::create(n, std::move(edges), GraphKind::complete);
}

EmbeddingMetric metric_from_embeddings(const std::vector<std::vector<double>>& vectors) {
    const std::size_t n = vectors.size();
    if (n < 2) throw ValidationError("embedding metric needs at least two classes");
    const std::size_t dim = vectors.front().size();
    if (dim == 0) throw ValidationError("embedding vectors are empty");
    for (std::size_t i = 0; i < n; ++i) {
        if (vectors[i].size() != dim)
            throw ValidationError("embedding row " + std::to_string(i) + " has dimension " +
                                  std::to_string(vectors[i].size()) + ", expected " + std::to_string(dim));
        for (double x : vectors[i])
            if (!std::isfinite(x)) throw ValidationError("embedding row " + std::to_string(i) + " is not finite");
    }

    std::vector<double> dist(n * n, 0.0);
    std::vector<VertexId> pred(n * n, PathOracle::kNone);
    std::vector<Edge> edges;
    std::vector<std::string> warnings;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                const double diff = vectors[i][k] - vectors[j][k];
                s += diff * diff;
            }
            const double d = std::sqrt(s);
            dist[i * n + j] = dist[j * n + i] = d;
            pred[i * n + j] = static_cast<VertexId>(i);
            pred[j * n + i] = static_cast<VertexId>(j);
            edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(j), d});
            if (d == 0.0)
                warnings.push_back("classes " + std::to_string(i) + " and " + std::to_string(j) +
                                   " have identical embeddings (distance 0)");
        }
    }
    auto graph = LabelGraph::create(n, std::move(edges), GraphKind::embedding_metric);
    return {MetricSpace(std::move(graph), DistanceMatrix(n, std::move(dist)), PathOracle(n, std::move(pred))),
            std::move(warnings)};
}

namespace {

std::vector<Edge> random_tree_edges(std::size_t n, Rng& rng) {
    std::vector<Edge> edges;
    if (n <= 1) return edges;
    if (n == 2) return {Edge{0, 1, 1.0}};
    // Prüfer decoding gives a uniform labelled tree
    std::vector<VertexId> code(n - 2);
    for (auto& c : code) c = static_cast<VertexId>(rng.below(n));
    std::vector<std::size_t> degree(n, 1);
    for (VertexId c : code) ++degree[c];
    std::priority_queue<VertexId, std::vector<VertexId>, std::greater<>> leaves;
    for (std::size_t v = 0; v < n; ++v)
        if (degree[v] == 1) leaves.push(static_cast<VertexId>(v));
    for (VertexId c : code) {
        const VertexId leaf = leaves.top();
        leaves.pop();
        edges.push_back({leaf, c, 1.0});
        if (--degree[c] == 1) leaves.push(c);
    }
    const VertexId a = leaves.top();
    leaves.pop();
    const VertexId b = leaves.top();
    edges.push_back({a, b, 1.0});
    return edges;
}

// Rooted binary tree grown by splitting a uniformly chosen leaf.
std::pair<std::size_t, std::vector<Edge>> random_phylo_edges(std::size_t n_leaves, Rng& rng) {
    std::vector<Edge> edges{{0, 1, 1.0}, {0, 2, 1.0}};
    std::vector<VertexId> leaves{1, 2};
    VertexId next = 3;
    while (leaves.size() < n_leaves) {
        const auto i = static_cast<std::size_t>(rng.below(leaves.size()));
        const VertexId parent = leaves[i];
        edges.push_back({parent, next, 1.0});
        edges.push_back({parent, next + 1, 1.0});
        leaves[i] = next;
        leaves.push_back(next + 1);
        next += 2;
    }
    return {next, std::move(edges)};
}

std::vector<Edge> watts_strogatz_edges(std::size_t n, std::size_t k, double p, Rng& rng) {
    std::vector<std::set<VertexId>> adj(n);
    auto add = [&](VertexId a, VertexId b) {
        adj[a].insert(b);
        adj[b].insert(a);
    };
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t j = 1; j <= k / 2; ++j) add(static_cast<VertexId>(u), static_cast<VertexId>((u + j) % n));
    for (std::size_t j = 1; j <= k / 2; ++j) {
        for (std::size_t u = 0; u < n; ++u) {
            const auto v = static_cast<VertexId>((u + j) % n);
            if (!rng.bernoulli(p)) continue;
            if (adj[u].size() >= n - 1) continue;
            VertexId w;
            do {
                w = static_cast<VertexId>(rng.below(n));
            } while (w == u || adj[u].count(w));
            if (!adj[u].count(v)) continue;
            adj[u].erase(v);
            adj[v].erase(static_cast<VertexId>(u));
            add(static_cast<VertexId>(u), w);
        }
    }
    std::vector<Edge> edges;
    for (std::size_t u = 0; u < n; ++u)
        for (VertexId v : adj[u])
            if (v > u) edges.push_back({static_cast<VertexId>(u), v, 1.0});
    return edges;
}

std::vector<Edge> erdos_renyi_edges(std::size_t n, double p, Rng& rng) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.bernoulli(p)) edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(j), 1.0});
    return edges;
}

std::vector<Edge> barabasi_albert_edges(std::size_t n, std::size_t m, Rng& rng) {
    // seed graph: star on m+1 vertices
    std::vector<Edge> edges;
    std::vector<VertexId> repeated;
    for (std::size_t i = 1; i <= m; ++i) {
        edges.push_back({0, static_cast<VertexId>(i), 1.0});
        repeated.push_back(0);
        repeated.push_back(static_cast<VertexId>(i));
    }
    for (std::size_t source = m + 1; source < n; ++source) {
        std::set<VertexId> targets;
        while (targets.size() < m) targets.insert(repeated[rng.below(repeated.size())]);
        for (VertexId t : targets) {
            edges.push_back({t, static_cast<VertexId>(source), 1.0});
            repeated.push_back(t);
            repeated.push_back(static_cast<VertexId>(source));
        }
    }
    return edges;
}

bool is_connected(std::size_t n, const std::vector<Edge>& edges) {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::size_t components = n;
    for (const auto& e : edges) {
        const auto a = find(e.u), b = find(e.v);
        if (a != b) {
            parent[a] = b;
            --components;
        }
    }
    return components == 1;
}

}  // namespace

LabelGraph generate_random(const RandomGraphParams& params, std::uint64_t seed) {
    const std::size_t n = params.n;
    Rng rng(seed, "generate");
    switch (params.family) {
        case RandomFamily::tree:
            if (n < 1) throw ValidationError("random tree needs n >= 1");
            return LabelGraph::create(n, random_tree_edges(n, rng), GraphKind::tree);
        case RandomFamily::phylo_tree: {
            if (n < 2) throw ValidationError("random phylogenetic tree needs at least 2 leaves");
            auto [count, edges] = random_phylo_edges(n, rng);
            return LabelGraph::create(count, std::move(edges), GraphKind::phylogenetic_tree);
        }
        case RandomFamily::watts_strogatz:
            if (params.k < 2 || params.k % 2 != 0 || params.k >= n)
                throw ValidationError("Watts-Strogatz needs an even k with 2 <= k < n");
            if (params.p < 0.0 || params.p > 1.0) throw ValidationError("rewiring probability must lie in [0,1]");
            break;
        case RandomFamily::erdos_renyi:
            if (n < 1) throw ValidationError("Erdos-Renyi needs n >= 1");
            if (params.p < 0.0 || params.p > 1.0) throw ValidationError("edge probability must lie in [0,1]");
            break;
        case RandomFamily::barabasi_albert:
            if (params.m < 1 || params.m >= n) throw ValidationError("Barabasi-Albert needs 1 <= m < n");
            return LabelGraph::infer(n, barabasi_albert_edges(n, params.m, rng));
    }
    for (std::size_t attempt = 0; attempt <= params.max_retries; ++attempt) {
        auto edges = params.family == RandomFamily::watts_strogatz ? watts_strogatz_edges(n, params.k, params.p, rng)
                                                                   : erdos_renyi_edges(n, params.p, rng);
        if (is_connected(n, edges)) return LabelGraph::infer(n, std::move(edges));
    }
    throw ValidationError("no connected graph after " + std::to_string(params.max_retries + 1) +
                          " draws; increase p or the retry budget");
}

// -----------------------------
// Summarization
// -----------------------------

namespace {

// Fenwick tree over alive flags for k-th alive lookup.
class AliveIndex {
public:
    explicit AliveIndex(std::size_t n) : tree_(n + 1, 0), n_(n) {
        for (std::size_t i = 0; i < n; ++i) add(i, 1);
    }
    void add(std::size_t i, int delta) {
        for (std::size_t x = i + 1; x <= n_; x += x & (~x + 1)) tree_[x] += delta;
    }
    // 0-based index of the k-th (0-based) alive entry
    std::size_t kth(std::size_t k) const {
        std::size_t pos = 0;
        std::size_t step = 1;
        while (step * 2 <= n_) step *= 2;
        long long remaining = static_cast<long long>(k) + 1;
        for (; step > 0; step /= 2) {
            if (pos + step <= n_ && tree_[pos + step] < remaining) {
                pos += step;
                remaining -= tree_[pos];
            }
        }
        return pos;
    }

private:
    std::vector<long long> tree_;
    std::size_t n_;
};

}  // namespace

Summary summarize_graph(const LabelGraph& graph, std::size_t target, std::uint64_t seed) {
    if (target < 1) throw ValidationError("summarization target must be >= 1");
    const std::size_t n = graph.num_vertices();
    std::vector<std::set<VertexId>> adj(n);
    for (std::size_t v = 0; v < n; ++v) {
        auto nb = graph.neighbors(static_cast<VertexId>(v));
        adj[v].insert(nb.begin(), nb.end());
    }
    std::vector<VertexId> owner(n);
    std::iota(owner.begin(), owner.end(), VertexId{0});
    std::vector<std::vector<VertexId>> members(n);
    for (std::size_t v = 0; v < n; ++v) members[v] = {static_cast<VertexId>(v)};

    AliveIndex alive(n);
    std::size_t alive_count = n;
    Rng rng(seed, "summarize");
    while (alive_count > target) {
        const auto s = static_cast<VertexId>(alive.kth(rng.below(alive_count)));
        if (adj[s].empty()) break;
        const std::vector<VertexId> absorbed(adj[s].begin(), adj[s].end());
        for (VertexId t : absorbed) {
            for (VertexId u : adj[t]) {
                adj[u].erase(t);
                if (u != s) {
                    adj[u].insert(s);
                    adj[s].insert(u);
                }
            }
            adj[t].clear();
            auto& mt = members[t];
            members[s].insert(members[s].end(), mt.begin(), mt.end());
            mt.clear();
            alive.add(t, -1);
            --alive_count;
        }
    }

    // number supernodes by their smallest original vertex
    std::vector<std::pair<VertexId, VertexId>> order;  // (min member, representative)
    for (std::size_t v = 0; v < n; ++v)
        if (!members[v].empty())
            order.emplace_back(*std::min_element(members[v].begin(), members[v].end()), static_cast<VertexId>(v));
    std::sort(order.begin(), order.end());
    std::vector<VertexId> rep_id(n, PathOracle::kNone);
    for (std::size_t i = 0; i < order.size(); ++i) rep_id[order[i].second] = static_cast<VertexId>(i);

    std::vector<VertexId> mapping(n);
    std::vector<Edge> edges;
    for (const auto& [_, rep] : order) {
        for (VertexId v : members[rep]) mapping[v] = rep_id[rep];
        for (VertexId u : adj[rep])
            if (rep_id[rep] < rep_id[u]) edges.push_back({rep_id[rep], rep_id[u], 1.0});
    }
    return {LabelGraph::infer(order.size(), std::move(edges)), std::move(mapping)};
}

LabelGraph minimum_spanning_tree(const LabelGraph& graph) {
    auto edges = graph.edges();
    std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.weight, a.u, a.v) < std::tie(b.weight, b.u, b.v);
    });
    const std::size_t n = graph.num_vertices();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<Edge> kept;
    for (const auto& e : edges) {
        const auto a = find(e.u), b = find(e.v);
        if (a == b) continue;
        parent[a] = b;
        kept.push_back(e);
    }
    return LabelGraph::create(n, std::move(kept), GraphKind::tree);
}

}  // namespace fadapt
