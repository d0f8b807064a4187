#pragma once
// Fréchet-mean prediction over a metric label space.
//
// Given observed classes Λ = (λ_1..λ_K) and nonnegative weights w (usually a
// classifier's per-class probabilities), the prediction is
//
//     argmin_{y ∈ Y} Σ_i w_i d²(y, λ_i)
//
// which equals argmax_j (D w)_j for the fixed N x K matrix D[j][i] = -d²(y_j, λ_i).
// On the unit complete graph this reduces to argmax_i w_i.

#include <cstddef>
#include <span>
#include <vector>

#include "fadapt/common.hpp"
#include "fadapt/metric_space.hpp"

namespace fadapt {

// Ordered tuple of K >= 1 distinct labels.
class ObservedSet {
public:
    ObservedSet() = default;
    explicit ObservedSet(std::vector<VertexId> ids) : ids_(std::move(ids)) {}

    // Throws ValidationError on empty, duplicate, or non-label entries.
    void validate(const MetricSpace& space) const;

    std::size_t size() const noexcept { return ids_.size(); }
    VertexId operator[](std::size_t i) const { return ids_[i]; }
    const std::vector<VertexId>& ids() const noexcept { return ids_; }
    bool contains(VertexId v) const;

    ObservedSet with(VertexId v) const;

private:
    std::vector<VertexId> ids_;
};

// Argmin/argmax result: the full tie set (ascending) plus the canonical
// representative, which is the smallest id.
struct TieSet {
    std::vector<VertexId> members;

    VertexId canonical() const { return members.front(); }
    std::size_t size() const noexcept { return members.size(); }
    bool contains(VertexId v) const;
    bool operator==(const TieSet&) const = default;
};

// Σ_i w_i d²(v, λ_i). v must be a label.
double frechet_variance(const MetricSpace& space, const ObservedSet& observed, std::span<const double> weights,
                        VertexId v);

// Exact minimizer set over Y. Weights need not be normalized.
TieSet frechet_mean(const MetricSpace& space, const ObservedSet& observed, std::span<const double> weights);

// argmin over Y of Σ_i w_i d^β(y, λ_i); β = 1 is the Fréchet median.
TieSet beta_predict(const MetricSpace& space, const ObservedSet& observed, std::span<const double> weights,
                    double beta);

// The N x K matrix of negative squared distances, rows over sorted Y.
class DistanceAdaptor {
public:
    DistanceAdaptor(const MetricSpace& space, const ObservedSet& observed);

    std::size_t rows() const noexcept { return labels_.size(); }
    std::size_t cols() const noexcept { return observed_.size(); }
    double at(std::size_t row, std::size_t col) const { return d_[row * cols() + col]; }
    std::span<const double> row(std::size_t r) const { return {d_.data() + r * cols(), cols()}; }

    const std::vector<VertexId>& labels() const noexcept { return labels_; }
    const ObservedSet& observed() const noexcept { return observed_; }

    // argmax_j (D p)_j, ties within the shared relative tolerance.
    TieSet predict(std::span<const double> probs) const;

private:
    std::vector<VertexId> labels_;
    ObservedSet observed_;
    std::vector<double> d_;
};

inline DistanceAdaptor build_adaptor(const MetricSpace& space, const ObservedSet& observed) {
    return DistanceAdaptor(space, observed);
}

// Rejects negative, non-finite, or all-zero weights.
void validate_weights(std::span<const double> weights, std::size_t expected);

// Rescales to the probability simplex.
std::vector<double> normalized(std::span<const double> weights);

// p_i ∝ exp(logit_i / T), stabilized by max-subtraction.
std::vector<double> softmax_with_temperature(std::span<const double> logits, double temperature);

}  // namespace fadapt
