#pragma once
// Label metric spaces: the label graph, its all-pairs shortest-path metric,
// and the generators / summarizers that produce graphs.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fadapt/common.hpp"

namespace fadapt {

struct Edge {
    VertexId u = 0;
    VertexId v = 0;
    double weight = 1.0;
};

enum class GraphKind { generic, tree, phylogenetic_tree, grid, complete, embedding_metric };

std::string to_string(GraphKind kind);
GraphKind graph_kind_from_string(const std::string& name);

struct GridShape {
    std::size_t rows = 0;
    std::size_t cols = 0;
};

// Undirected, connected, positively weighted graph over dense vertex ids
// 0..N_v-1, with the designated label set Y.
//
// Invariants (checked by the factories):
//   - connected, no self-loops, no duplicate edges, weights > 0
//     (embedding metrics may carry 0 for duplicate vectors)
//   - tree => |E| = N_v - 1
//   - phylogenetic_tree => tree and Y = degree-1 vertices
//   - grid(m,n) => exactly the 4-neighbour lattice on row-major ids
//   - complete => |E| = N_v(N_v-1)/2
//   - Y = all vertices unless phylogenetic_tree
class LabelGraph {
public:
    // Validates the edge set against `kind` and throws ValidationError.
    static LabelGraph create(std::size_t num_vertices, std::vector<Edge> edges, GraphKind kind,
                             std::optional<std::vector<VertexId>> labels = std::nullopt,
                             GridShape grid = {});

    // Infers the kind: tree when acyclic; phylogenetic when acyclic and
    // `labels` lists exactly the leaves; complete when every pair is joined.
    static LabelGraph infer(std::size_t num_vertices, std::vector<Edge> edges,
                            std::optional<std::vector<VertexId>> labels = std::nullopt);

    std::size_t num_vertices() const noexcept { return adjacency_.size(); }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    std::size_t num_labels() const noexcept { return labels_.size(); }

    const std::vector<Edge>& edges() const noexcept { return edges_; }
    // Sorted ascending.
    const std::vector<VertexId>& labels() const noexcept { return labels_; }
    std::span<const VertexId> neighbors(VertexId v) const { return adjacency_.at(v); }
    std::size_t degree(VertexId v) const { return adjacency_.at(v).size(); }

    GraphKind kind() const noexcept { return kind_; }
    GridShape grid_shape() const noexcept { return grid_; }
    bool is_weighted() const noexcept { return weighted_; }

    bool is_label(VertexId v) const { return v < label_index_.size() && label_index_[v] >= 0; }
    // Position of v in labels(), or -1.
    std::int64_t label_index(VertexId v) const {
        return v < label_index_.size() ? label_index_[v] : -1;
    }

    // Degree-1 vertices, ascending (a lone vertex counts as a leaf).
    std::vector<VertexId> leaves() const;

private:
    LabelGraph() = default;

    std::vector<Edge> edges_;
    std::vector<std::vector<VertexId>> adjacency_;  // neighbour ids ascending
    std::vector<VertexId> labels_;
    std::vector<std::int64_t> label_index_;
    GraphKind kind_ = GraphKind::generic;
    GridShape grid_;
    bool weighted_ = false;
};

// Symmetric N_v x N_v shortest-path lengths.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    DistanceMatrix(std::size_t n, std::vector<double> values);

    std::size_t size() const noexcept { return n_; }
    double operator()(VertexId u, VertexId v) const { return d_[static_cast<std::size_t>(u) * n_ + v]; }
    double diameter() const noexcept { return diameter_; }

private:
    std::size_t n_ = 0;
    std::vector<double> d_;
    double diameter_ = 0.0;
};

// One shortest-path tree per source; reconstructs a shortest path Γ(u, v).
class PathOracle {
public:
    static constexpr VertexId kNone = static_cast<VertexId>(-1);

    PathOracle() = default;
    PathOracle(std::size_t n, std::vector<VertexId> predecessors)
        : n_(n), pred_(std::move(predecessors)) {}

    // Vertex sequence from u to v inclusive.
    std::vector<VertexId> path(VertexId u, VertexId v) const;

private:
    std::size_t n_ = 0;
    std::vector<VertexId> pred_;  // pred_[source * n + v]
};

// A label graph together with its metric. Immutable once built.
class MetricSpace {
public:
    // Runs all_pairs_distances.
    explicit MetricSpace(LabelGraph graph);
    MetricSpace(LabelGraph graph, DistanceMatrix distances, PathOracle paths);

    const LabelGraph& graph() const noexcept { return graph_; }
    const DistanceMatrix& distances() const noexcept { return dist_; }
    const PathOracle& paths() const noexcept { return paths_; }

    double d(VertexId u, VertexId v) const { return dist_(u, v); }
    double diameter() const noexcept { return dist_.diameter(); }
    const std::vector<VertexId>& labels() const noexcept { return graph_.labels(); }
    std::size_t num_labels() const noexcept { return graph_.num_labels(); }

private:
    LabelGraph graph_;
    DistanceMatrix dist_;
    PathOracle paths_;
};

struct AllPairs {
    DistanceMatrix distances;
    PathOracle paths;
};

// BFS per source on unweighted graphs, binary-heap Dijkstra otherwise.
AllPairs all_pairs_distances(const LabelGraph& graph);

// -----------------------------
// Constructors / generators
// -----------------------------

LabelGraph make_grid(std::size_t rows, std::size_t cols);
LabelGraph make_complete(std::size_t n);

struct EmbeddingMetric {
    MetricSpace space;
    // One message per pair of identical vectors (distance 0).
    std::vector<std::string> warnings;
};

// Complete graph with Euclidean weights, used directly as the metric.
EmbeddingMetric metric_from_embeddings(const std::vector<std::vector<double>>& vectors);

enum class RandomFamily { tree, phylo_tree, watts_strogatz, erdos_renyi, barabasi_albert };

struct RandomGraphParams {
    RandomFamily family = RandomFamily::tree;
    // Vertex count; leaf count for phylo_tree.
    std::size_t n = 0;
    std::size_t k = 4;      // Watts-Strogatz ring degree (even)
    double p = 0.1;         // rewiring (WS) or edge (ER) probability
    std::size_t m = 2;      // Barabasi-Albert edges per new vertex
    std::size_t max_retries = 100;
};

// Connected random graph, resampling disconnected draws. Deterministic in seed.
LabelGraph generate_random(const RandomGraphParams& params, std::uint64_t seed);

struct Summary {
    LabelGraph graph;
    std::vector<VertexId> mapping;  // original vertex -> supernode
};

// Repeatedly picks a random (super)node and absorbs its 1-hop neighbourhood
// until at most `target` supernodes remain. Quotient edges have weight 1.
Summary summarize_graph(const LabelGraph& graph, std::size_t target, std::uint64_t seed);

// Kruskal; equal weights broken by (min endpoint, max endpoint).
LabelGraph minimum_spanning_tree(const LabelGraph& graph);

}  // namespace fadapt
