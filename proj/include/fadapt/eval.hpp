#pragma once
// Scoring predictions in a metric label space, calibration, and the
// probability-simplex region sweep.

#include <cstddef>
#include <span>
#include <vector>

#include "fadapt/active.hpp"
#include "fadapt/frechet.hpp"
#include "fadapt/metric_space.hpp"

namespace fadapt {

struct EvalReport {
    double mean_sq_distance = 0.0;  // (1/n) Σ d²(ŷ_i, y_i)
    double zero_one_error = 0.0;
    double normalized_msd = 0.0;    // mean_sq_distance / diam²
    std::size_t n_samples = 0;
};

EvalReport evaluate(const MetricSpace& space, std::span<const VertexId> predictions, std::span<const VertexId> truths);

// Scores each sample by the tie-set member closest to the truth.
EvalReport evaluate_optimistic(const MetricSpace& space, std::span<const TieSet> predictions,
                               std::span<const VertexId> truths);

struct ReliabilityBin {
    double lower = 0.0;
    double upper = 0.0;
    double mean_confidence = 0.0;
    double accuracy = 0.0;
    std::size_t count = 0;
};

struct CalibrationReport {
    double temperature = 1.0;
    double ece = 0.0;
    std::vector<ReliabilityBin> bins;
};

// Equal-width bins on [0, 1]; a confidence of exactly 1 falls in the last bin.
CalibrationReport expected_calibration_error(std::span<const double> confidences, std::span<const bool> correct,
                                             std::size_t n_bins = 10);

struct TemperaturePoint {
    double temperature = 1.0;
    EvalReport eval;
    CalibrationReport calibration;
};

struct TemperatureSweep {
    std::vector<TemperaturePoint> points;
    double best_msd_temperature = 1.0;  // first minimizer in input order
    double best_ece_temperature = 1.0;
};

// For each T: softmax(logits / T), Fréchet-mean predictions scored by
// evaluate(), and the ECE of the softmax argmax over the observed classes.
TemperatureSweep temperature_sweep(const MetricSpace& space, const ObservedSet& observed,
                                   const std::vector<std::vector<double>>& logits, std::span<const VertexId> truths,
                                   std::span<const double> temperatures, std::size_t n_bins = 10);

struct SimplexCell {
    std::size_t a = 0, b = 0, c = 0;  // a + b + c = resolution
    VertexId label = 0;               // canonical prediction
    std::size_t tie_size = 1;
};

struct SimplexRegionGrid {
    ObservedSet anchors;
    std::size_t resolution = 0;
    std::vector<SimplexCell> cells;  // (R+1)(R+2)/2 entries, a descending then b descending
};

SimplexRegionGrid simplex_regions(const MetricSpace& space, const ObservedSet& anchors, std::size_t resolution);

struct PolicyRoundSummary {
    Policy policy = Policy::active;
    std::size_t round = 0;
    std::size_t trials = 0;
    double mean_observed = 0.0;
    double mean_locus_size = 0.0;
    double stderr_locus_size = 0.0;  // sample std / sqrt(trials); 0 for one trial
};

// Per-policy, per-round means over trajectories; active rows first.
std::vector<PolicyRoundSummary> compare_policies(std::span<const Trajectory> trajectories);

// (baseline - ours) / baseline for losses where lower is better.
double relative_improvement(double baseline, double ours);

}  // namespace fadapt
