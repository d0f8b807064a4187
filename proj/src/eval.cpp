#include "fadapt/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>

namespace fadapt {

namespace {

void check_lengths(std::size_t predictions, std::size_t truths) {
    if (predictions != truths)
        throw ValidationError("got " + std::to_string(predictions) + " predictions but " + std::to_string(truths) +
                              " truths");
    if (predictions == 0) throw ValidationError("nothing to evaluate");
}

void check_label(const MetricSpace& space, VertexId v, const char* role) {
    if (!space.graph().is_label(v))
        throw ValidationError(std::string(role) + " " + std::to_string(v) + " is not a label of the space");
}

EvalReport finish(const MetricSpace& space, double sq_sum, std::size_t wrong, std::size_t n) {
    EvalReport r;
    r.n_samples = n;
    r.mean_sq_distance = sq_sum / static_cast<double>(n);
    r.zero_one_error = static_cast<double>(wrong) / static_cast<double>(n);
    const double diam = space.diameter();
    r.normalized_msd = diam > 0.0 ? r.mean_sq_distance / (diam * diam) : 0.0;
    return r;
}

}  // namespace

EvalReport evaluate(const MetricSpace& space, std::span<const VertexId> predictions, std::span<const VertexId> truths) {
    check_lengths(predictions.size(), truths.size());
    double sq = 0.0;
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        check_label(space, predictions[i], "prediction");
        check_label(space, truths[i], "truth");
        const double d = space.d(predictions[i], truths[i]);
        sq += d * d;
        wrong += predictions[i] != truths[i];
    }
    return finish(space, sq, wrong, predictions.size());
}

EvalReport evaluate_optimistic(const MetricSpace& space, std::span<const TieSet> predictions,
                               std::span<const VertexId> truths) {
    check_lengths(predictions.size(), truths.size());
    double sq = 0.0;
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        check_label(space, truths[i], "truth");
        if (predictions[i].members.empty()) throw ValidationError("empty tie set");
        double best = std::numeric_limits<double>::infinity();
        for (VertexId p : predictions[i].members) {
            check_label(space, p, "prediction");
            const double d = space.d(p, truths[i]);
            best = std::min(best, d * d);
        }
        sq += best;
        wrong += !predictions[i].contains(truths[i]);
    }
    return finish(space, sq, wrong, predictions.size());
}

CalibrationReport expected_calibration_error(std::span<const double> confidences, std::span<const bool> correct,
                                             std::size_t n_bins) {
    if (n_bins < 1) throw ValidationError("need at least one bin");
    check_lengths(confidences.size(), correct.size());
    CalibrationReport report;
    report.bins.resize(n_bins);
    std::vector<double> conf_sum(n_bins, 0.0);
    std::vector<std::size_t> hits(n_bins, 0);
    for (std::size_t i = 0; i < confidences.size(); ++i) {
        const double c = confidences[i];
        if (!(c >= 0.0 && c <= 1.0)) throw ValidationError("confidences must lie in [0, 1]");
        const auto bin = std::min(n_bins - 1, static_cast<std::size_t>(c * static_cast<double>(n_bins)));
        conf_sum[bin] += c;
        hits[bin] += correct[i] ? 1 : 0;
        ++report.bins[bin].count;
    }
    const auto n = static_cast<double>(confidences.size());
    for (std::size_t b = 0; b < n_bins; ++b) {
        auto& bin = report.bins[b];
        bin.lower = static_cast<double>(b) / static_cast<double>(n_bins);
        bin.upper = static_cast<double>(b + 1) / static_cast<double>(n_bins);
        if (bin.count == 0) continue;
        const auto cnt = static_cast<double>(bin.count);
        bin.mean_confidence = conf_sum[b] / cnt;
        bin.accuracy = static_cast<double>(hits[b]) / cnt;
        report.ece += (cnt / n) * std::abs(bin.accuracy - bin.mean_confidence);
    }
    return report;
}

TemperatureSweep temperature_sweep(const MetricSpace& space, const ObservedSet& observed,
                                   const std::vector<std::vector<double>>& logits, std::span<const VertexId> truths,
                                   std::span<const double> temperatures, std::size_t n_bins) {
    if (temperatures.empty()) throw ValidationError("no temperatures to sweep");
    check_lengths(logits.size(), truths.size());
    const DistanceAdaptor adaptor(space, observed);
    TemperatureSweep sweep;
    std::vector<VertexId> predictions(logits.size());
    std::vector<double> confidence(logits.size());
    // std::vector<bool> has no contiguous storage for span
    std::unique_ptr<bool[]> correct(new bool[logits.size()]);
    for (double t : temperatures) {
        for (std::size_t s = 0; s < logits.size(); ++s) {
            if (logits[s].size() != observed.size())
                throw ValidationError("logit row " + std::to_string(s) + " has " + std::to_string(logits[s].size()) +
                                      " entries, expected " + std::to_string(observed.size()));
            const auto p = softmax_with_temperature(logits[s], t);
            predictions[s] = adaptor.predict(p).canonical();
            // argmax over observed classes, ties to the smallest label id
            std::size_t top = 0;
            for (std::size_t i = 1; i < p.size(); ++i)
                if (p[i] > p[top] || (p[i] == p[top] && observed[i] < observed[top])) top = i;
            confidence[s] = p[top];
            correct[s] = observed[top] == truths[s];
        }
        TemperaturePoint point;
        point.temperature = t;
        point.eval = evaluate(space, predictions, truths);
        point.calibration = expected_calibration_error(confidence, {correct.get(), logits.size()}, n_bins);
        point.calibration.temperature = t;
        sweep.points.push_back(std::move(point));
    }
    auto best_msd = std::min_element(sweep.points.begin(), sweep.points.end(), [](const auto& a, const auto& b) {
        return a.eval.mean_sq_distance < b.eval.mean_sq_distance;
    });
    auto best_ece = std::min_element(sweep.points.begin(), sweep.points.end(), [](const auto& a, const auto& b) {
        return a.calibration.ece < b.calibration.ece;
    });
    sweep.best_msd_temperature = best_msd->temperature;
    sweep.best_ece_temperature = best_ece->temperature;
    return sweep;
}

SimplexRegionGrid simplex_regions(const MetricSpace& space, const ObservedSet& anchors, std::size_t resolution) {
    if (anchors.size() != 3) throw ValidationError("simplex regions need exactly three observed classes");
    if (resolution < 1) throw ValidationError("resolution must be >= 1");
    anchors.validate(space);
    SimplexRegionGrid grid;
    grid.anchors = anchors;
    grid.resolution = resolution;
    const auto r = static_cast<double>(resolution);
    for (std::size_t a = resolution + 1; a-- > 0;) {
        for (std::size_t b = resolution - a + 1; b-- > 0;) {
            const std::size_t c = resolution - a - b;
            const double w[3] = {static_cast<double>(a) / r, static_cast<double>(b) / r, static_cast<double>(c) / r};
            const auto mean = frechet_mean(space, anchors, w);
            grid.cells.push_back({a, b, c, mean.canonical(), mean.size()});
        }
    }
    return grid;
}

std::vector<PolicyRoundSummary> compare_policies(std::span<const Trajectory> trajectories) {
    if (trajectories.empty()) throw ValidationError("no trajectories to compare");
    // (policy, round) -> samples
    std::map<std::pair<int, std::size_t>, std::vector<const TrajectoryPoint*>> groups;
    for (const auto& t : trajectories)
        for (const auto& p : t.points) groups[{t.policy == Policy::active ? 0 : 1, p.round}].push_back(&p);

    std::vector<PolicyRoundSummary> out;
    for (const auto& [key, pts] : groups) {
        PolicyRoundSummary s;
        s.policy = key.first == 0 ? Policy::active : Policy::passive;
        s.round = key.second;
        s.trials = pts.size();
        const auto n = static_cast<double>(pts.size());
        for (const auto* p : pts) {
            s.mean_locus_size += static_cast<double>(p->locus_size);
            s.mean_observed += static_cast<double>(p->num_observed);
        }
        s.mean_locus_size /= n;
        s.mean_observed /= n;
        if (pts.size() > 1) {
            double ss = 0.0;
            for (const auto* p : pts) {
                const double dev = static_cast<double>(p->locus_size) - s.mean_locus_size;
                ss += dev * dev;
            }
            s.stderr_locus_size = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
        }
        out.push_back(s);
    }
    return out;
}

double relative_improvement(double baseline, double ours) {
    if (baseline == 0.0) throw ValidationError("relative improvement is undefined for a zero baseline");
    return (baseline - ours) / baseline;
}

}  // namespace fadapt
