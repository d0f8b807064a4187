#pragma once
// Loci of the Fréchet mean and locus covers.
//
// The locus Π(Λ) is the set of labels that are a Fréchet mean of Λ for some
// weight vector. It is computed by sweeping a discretized weight grid with
// `resolution` steps per coordinate: over every pair of anchors (pairwise
// sweep, weights x:y with x, y <= resolution) or over the full K-dimensional
// grid (general sweep, exponential in K). The pairwise sweep is exact when
// the locus is pairwise decomposable, as on trees and grids. Leaf-labelled
// trees usually are, but not always; see test_locus.cpp.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fadapt/frechet.hpp"
#include "fadapt/metric_space.hpp"

namespace fadapt {

enum class LocusMethod { pairwise, general };

std::string to_string(LocusMethod method);

inline constexpr double kDefaultSweepBudget = 1e8;

struct Locus {
    std::vector<VertexId> members;               // ascending
    std::vector<std::vector<double>> witnesses;  // parallel to members, one weight per anchor
    LocusMethod method = LocusMethod::pairwise;
    std::size_t resolution = 1;
    // Set when the metric is not integer-valued, where the grid argument
    // behind the default resolution does not apply, and for pairwise sweeps
    // with three or more anchors outside trees and grids.
    bool lower_bound = false;

    std::size_t size() const noexcept { return members.size(); }
    bool contains(VertexId v) const;
    const std::vector<double>& witness(VertexId v) const;
};

// ceil(diam(G)), at least 1.
std::size_t default_resolution(const MetricSpace& space);

Locus locus_pairwise(const MetricSpace& space, const ObservedSet& observed,
                     std::optional<std::size_t> resolution = std::nullopt);

// Throws BudgetExceeded when the grid has more than `budget` points.
Locus locus_general(const MetricSpace& space, const ObservedSet& observed,
                    std::optional<std::size_t> resolution = std::nullopt, double budget = kDefaultSweepBudget);

// Pairwise sweep on tree, phylogenetic and grid spaces; general otherwise.
Locus compute_locus(const MetricSpace& space, const ObservedSet& observed,
                    std::optional<std::size_t> resolution = std::nullopt, double budget = kDefaultSweepBudget);

struct DecomposabilityCheck {
    bool decomposable = true;
    std::optional<VertexId> counterexample;  // smallest id in the symmetric difference
    Locus pairwise;
    Locus general;
};

DecomposabilityCheck check_pairwise_decomposable(const MetricSpace& space, const ObservedSet& observed,
                                                 std::optional<std::size_t> resolution = std::nullopt,
                                                 double budget = kDefaultSweepBudget);

bool is_locus_cover(const MetricSpace& space, const ObservedSet& observed,
                    std::optional<std::size_t> resolution = std::nullopt, double budget = kDefaultSweepBudget);

// -----------------------------
// Covers
// -----------------------------

struct Certificate {
    VertexId vertex = 0;
    std::vector<double> weights;  // empty when no witness was found
    bool singleton = false;       // weights make the vertex the unique mean
};

struct CoverReport {
    std::string construction;
    ObservedSet cover;
    bool is_locus_cover = false;
    std::optional<bool> is_identifying;
    bool nontrivial = false;  // cover != Y
    std::vector<Certificate> certificates;
    std::optional<VertexId> failure_vertex;  // first label outside the locus
    std::string message;
};

// Leaves of a tree, with the two-leaf witness weights for internal vertices.
CoverReport min_cover_tree(const MetricSpace& space);

// Opposite corners (0,0) and (m-1,n-1) of a grid.
CoverReport min_cover_grid(const MetricSpace& space);

// All corners of a grid; identifying is verified by a weight-simplex search
// at `resolution` (default 4·diam).
CoverReport identifying_cover_grid(const MetricSpace& space, std::optional<std::size_t> resolution = std::nullopt);

// Greedy longest-leaf-path construction for phylogenetic trees.
CoverReport phylo_cover(const MetricSpace& space);

// The complete graph only admits the trivial cover.
CoverReport complete_cover(const MetricSpace& space);

// For every label, searches the simplex grid {a : Σa = resolution} over
// `observed` for weights whose Fréchet mean is exactly that label.
std::vector<Certificate> find_singleton_witnesses(const MetricSpace& space, const ObservedSet& observed,
                                                  std::size_t resolution);

}  // namespace fadapt
