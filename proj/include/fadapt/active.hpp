#pragma once
// Choosing which class to observe next.
//
// On a tree the locus of Λ is the subtree spanned by Λ, so adding y grows it
// by the path from y to that subtree. The active rule picks the unobserved y
// farthest from the subtree's inner boundary along a path that leaves the
// locus immediately; the passive rule draws uniformly.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fadapt/frechet.hpp"
#include "fadapt/metric_space.hpp"

namespace fadapt {

// Raised when the current locus already covers every label.
class SelectionComplete : public std::runtime_error {
public:
    SelectionComplete() : std::runtime_error("selection complete: the locus already covers every label") {}
};

enum class Policy { active, passive };

std::string to_string(Policy policy);
Policy policy_from_string(const std::string& name);

// Vertex set of ∪_{i,j} Γ(λ_i, λ_j), ascending. Tree spaces only.
std::vector<VertexId> tree_locus(const MetricSpace& space, const ObservedSet& observed);

// Locus vertices with at least one neighbour outside the locus, ascending.
std::vector<VertexId> inner_boundary(const LabelGraph& graph, const std::vector<VertexId>& locus);

struct SelectionState {
    ObservedSet observed;
    std::vector<VertexId> locus;           // ascending
    std::vector<VertexId> inner_boundary;  // ascending
    std::size_t round = 0;

    static SelectionState initial(const MetricSpace& space, ObservedSet observed);
    bool complete(const MetricSpace& space) const { return locus.size() == space.num_labels(); }
};

struct Selection {
    VertexId vertex = 0;
    std::optional<VertexId> boundary_anchor;  // b of the chosen (y, b); active only
    std::size_t path_length = 0;              // edges on Γ(y, b); active only
    SelectionState state;                     // after adding `vertex`
};

// Maximizes the hop length of Γ(y, b) over y outside the locus and b on the
// inner boundary, with Γ(y, b) \ {b} outside the locus. Ties: longer path,
// then smaller y, then smaller b. Throws SelectionComplete.
Selection next_class_active(const MetricSpace& space, const SelectionState& state);

// Uniform draw from Y \ Λ. Throws SelectionComplete when Λ = Y.
Selection next_class_passive(const MetricSpace& space, const SelectionState& state, std::uint64_t seed);

struct TrajectoryPoint {
    std::size_t round = 0;
    std::size_t num_observed = 0;
    std::size_t locus_size = 0;
};

struct Trajectory {
    Policy policy = Policy::active;
    std::uint64_t seed = 0;
    std::size_t trial = 0;
    std::vector<TrajectoryPoint> points;  // rounds + 1 entries, round 0 first
};

// Once nothing is left to select, later rounds repeat the last point.
Trajectory run_selection(const MetricSpace& space, const ObservedSet& initial, std::size_t rounds, Policy policy,
                         std::uint64_t seed);

struct GibbsSample {
    ObservedSet observed;
    VertexId centroid = 0;
    // Total normalized probability at each draw (1 up to rounding).
    std::vector<double> step_mass;
};

// K distinct labels drawn without replacement with P(λ) ∝ exp(-θ d(λ, λ_c)),
// λ_c the canonical uniform-weight Fréchet mean of Y.
GibbsSample gibbs_sample_classes(const MetricSpace& space, std::size_t count, double theta, std::uint64_t seed);

// Uniform-weight Fréchet mean over all labels, canonical element.
VertexId metric_centroid(const MetricSpace& space);

}  // namespace fadapt
