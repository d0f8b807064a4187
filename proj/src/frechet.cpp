#include "fadapt/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace fadapt {

void ObservedSet::validate(const MetricSpace& space) const {
    if (ids_.empty()) throw ValidationError("observed set is empty");
    std::set<VertexId> seen;
    for (VertexId v : ids_) {
        if (!space.graph().is_label(v))
            throw ValidationError("observed class " + std::to_string(v) + " is not a label of the space");
        if (!seen.insert(v).second) throw ValidationError("observed class " + std::to_string(v) + " is repeated");
    }
}

bool ObservedSet::contains(VertexId v) const { return std::find(ids_.begin(), ids_.end(), v) != ids_.end(); }

ObservedSet ObservedSet::with(VertexId v) const {
    auto ids = ids_;
    ids.push_back(v);
    return ObservedSet(std::move(ids));
}

bool TieSet::contains(VertexId v) const { return std::binary_search(members.begin(), members.end(), v); }

void validate_weights(std::span<const double> weights, std::size_t expected) {
    if (weights.size() != expected)
        throw ValidationError("expected " + std::to_string(expected) + " weights, got " +
                              std::to_string(weights.size()));
    bool any_positive = false;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) throw ValidationError("weights must be finite and nonnegative");
        any_positive |= w > 0.0;
    }
    if (!any_positive) throw ValidationError("weights are all zero");
}

std::vector<double> normalized(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    std::vector<double> out(weights.begin(), weights.end());
    for (double& w : out) w /= total;
    return out;
}

namespace {

// Minimizer set of `values` (indexed like `labels`), within tie_slack of the minimum.
TieSet argmin_set(const std::vector<VertexId>& labels, const std::vector<double>& values) {
    double best = std::numeric_limits<double>::infinity();
    for (double v : values) best = std::min(best, v);
    const double bound = best + tie_slack(best);
    TieSet out;
    for (std::size_t j = 0; j < values.size(); ++j)
        if (values[j] <= bound) out.members.push_back(labels[j]);
    return out;
}

template <typename Power>
TieSet minimize_over_labels(const MetricSpace& space, const ObservedSet& observed, std::span<const double> weights,
                            Power power) {
    const auto& labels = space.labels();
    std::vector<double> values(labels.size());
    for (std::size_t j = 0; j < labels.size(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < observed.size(); ++i) s += weights[i] * power(space.d(labels[j], observed[i]));
        values[j] = s;
    }
    return argmin_set(labels, values);
}

}  // namespace

double frechet_variance(const MetricSpace& space, const ObservedSet& observed, std::span<const double> weights,
                        VertexId v) {
    if (!space.graph().is_label(v)) throw ValidationError("candidate " + std::to_string(v) + " is not a label");
    validate_weights(weights, observed.size());
    double s = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double d = space.d(v, observed[i]);
        s += weights[i] * (d * d);
    }
    return s;
}

TieSet frechet_mean(const MetricSpace& space, const ObservedSet& observed, std::span<const double> weights) {
    observed.validate(space);
    validate_weights(weights, observed.size());
    return minimize_over_labels(space, observed, weights, [](double d) { return d * d; });
}

TieSet beta_predict(const MetricSpace& space, const ObservedSet& observed, std::span<const double> weights,
                    double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be a positive finite number");
    observed.validate(space);
    validate_weights(weights, observed.size());
    if (beta == 2.0) return minimize_over_labels(space, observed, weights, [](double d) { return d * d; });
    if (beta == 1.0) return minimize_over_labels(space, observed, weights, [](double d) { return d; });
    return minimize_over_labels(space, observed, weights, [beta](double d) { return std::pow(d, beta); });
}

DistanceAdaptor::DistanceAdaptor(const MetricSpace& space, const ObservedSet& observed)
    : labels_(space.labels()), observed_(observed) {
    observed_.validate(space);
    const std::size_t k = observed_.size();
    d_.resize(labels_.size() * k);
    for (std::size_t j = 0; j < labels_.size(); ++j)
        for (std::size_t i = 0; i < k; ++i) {
            const double d = space.d(labels_[j], observed_[i]);
            d_[j * k + i] = -(d * d);
        }
}

TieSet DistanceAdaptor::predict(std::span<const double> probs) const {
    validate_weights(probs, cols());
    // Accumulates in the same order as frechet_mean, so (D p)_j is exactly
    // the negated variance and both routes produce identical tie sets.
    std::vector<double> scores(rows());
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < rows(); ++j) {
        double s = 0.0;
        const auto r = row(j);
        for (std::size_t i = 0; i < r.size(); ++i) s += r[i] * probs[i];
        scores[j] = s;
        best = std::max(best, s);
    }
    const double bound = best - tie_slack(best);
    TieSet out;
    for (std::size_t j = 0; j < rows(); ++j)
        if (scores[j] >= bound) out.members.push_back(labels_[j]);
    return out;
}

std::vector<double> softmax_with_temperature(std::span<const double> logits, double temperature) {
    if (!(temperature > 0.0) || !std::isfinite(temperature))
        throw ValidationError("temperature must be a positive finite number");
    if (logits.empty()) throw ValidationError("softmax of an empty logit vector");
    double top = -std::numeric_limits<double>::infinity();
    for (double z : logits) {
        if (!std::isfinite(z)) throw ValidationError("logits must be finite");
        top = std::max(top, z);
    }
    std::vector<double> p(logits.size());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp((logits[i] - top) / temperature);
        total += p[i];
    }
    for (double& x : p) x /= total;
    return p;
}

}  // namespace fadapt
