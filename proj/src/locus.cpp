#include "fadapt/locus.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace fadapt {

std::string to_string(LocusMethod method) { return method == LocusMethod::pairwise ? "pairwise" : "general"; }

bool Locus::contains(VertexId v) const { return std::binary_search(members.begin(), members.end(), v); }

const std::vector<double>& Locus::witness(VertexId v) const {
    auto it = std::lower_bound(members.begin(), members.end(), v);
    if (it == members.end() || *it != v) throw std::out_of_range("vertex is not in the locus");
    return witnesses[static_cast<std::size_t>(it - members.begin())];
}

std::size_t default_resolution(const MetricSpace& space) {
    const double diam = space.diameter();
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(diam - 1e-9)));
}

namespace {

// Squared distances label x anchor, accumulated in the same order as
// frechet_mean so sweep results coincide with direct evaluation.
class Sweep {
public:
    Sweep(const MetricSpace& space, const ObservedSet& observed)
        : labels_(space.labels()), k_(observed.size()), sq_(labels_.size() * k_), values_(labels_.size()) {
        for (std::size_t j = 0; j < labels_.size(); ++j)
            for (std::size_t i = 0; i < k_; ++i) {
                const double d = space.d(labels_[j], observed[i]);
                sq_[j * k_ + i] = d * d;
            }
        witness_of_.assign(labels_.size(), kNoWitness);
    }

    std::size_t anchors() const noexcept { return k_; }
    std::size_t num_labels() const noexcept { return labels_.size(); }
    VertexId label(std::size_t j) const { return labels_[j]; }

    // Label indices of the argmin for full weights.
    const std::vector<std::size_t>& argmin(const std::vector<double>& w) {
        for (std::size_t j = 0; j < labels_.size(); ++j) {
            const double* row = sq_.data() + j * k_;
            double s = 0.0;
            for (std::size_t i = 0; i < k_; ++i) s += w[i] * row[i];
            values_[j] = s;
        }
        return collect();
    }

    // Same as argmin() with only anchors a < b carrying weight; skipped zero
    // terms add exactly +0.
    const std::vector<std::size_t>& argmin_pair(std::size_t a, std::size_t b, double wa, double wb) {
        for (std::size_t j = 0; j < labels_.size(); ++j) {
            const double* row = sq_.data() + j * k_;
            double s = 0.0;
            s += wa * row[a];
            s += wb * row[b];
            values_[j] = s;
        }
        return collect();
    }

    // Records `w` as the witness of every label in `hits` that has none yet.
    void absorb(const std::vector<std::size_t>& hits, const std::vector<double>& w) {
        for (std::size_t j : hits) {
            if (witness_of_[j] == kNoWitness) {
                witness_of_[j] = witnesses_.size();
                witnesses_.push_back(w);
            }
        }
    }

    Locus finish(LocusMethod method, std::size_t resolution, bool lower_bound) const {
        Locus out;
        out.method = method;
        out.resolution = resolution;
        out.lower_bound = lower_bound;
        for (std::size_t j = 0; j < labels_.size(); ++j) {
            if (witness_of_[j] == kNoWitness) continue;
            out.members.push_back(labels_[j]);
            out.witnesses.push_back(witnesses_[witness_of_[j]]);
        }
        return out;
    }

private:
    static constexpr std::size_t kNoWitness = std::numeric_limits<std::size_t>::max();

    const std::vector<std::size_t>& collect() {
        double best = std::numeric_limits<double>::infinity();
        for (double v : values_) best = std::min(best, v);
        const double bound = best + tie_slack(best);
        hits_.clear();
        for (std::size_t j = 0; j < values_.size(); ++j)
            if (values_[j] <= bound) hits_.push_back(j);
        return hits_;
    }

    std::vector<VertexId> labels_;
    std::size_t k_;
    std::vector<double> sq_;
    std::vector<double> values_;
    std::vector<std::size_t> hits_;
    std::vector<std::size_t> witness_of_;
    std::vector<std::vector<double>> witnesses_;
};

bool integer_metric(const MetricSpace& space) {
    return !space.graph().is_weighted() && space.graph().kind() != GraphKind::embedding_metric;
}

std::size_t resolve(const MetricSpace& space, std::optional<std::size_t> resolution) {
    if (resolution && *resolution < 1) throw ValidationError("resolution must be >= 1");
    return resolution.value_or(default_resolution(space));
}

std::vector<double> indicator(std::size_t k, std::size_t i) {
    std::vector<double> w(k, 0.0);
    w[i] = 1.0;
    return w;
}

}  // namespace

Locus locus_pairwise(const MetricSpace& space, const ObservedSet& observed, std::optional<std::size_t> resolution) {
    observed.validate(space);
    const std::size_t steps = resolve(space, resolution);
    Sweep sweep(space, observed);
    const std::size_t k = observed.size();
    if (k == 1) sweep.absorb(sweep.argmin(indicator(1, 0)), indicator(1, 0));
    std::vector<double> w(k, 0.0);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            // every ratio x:y with x, y <= steps, the same pair weights the general grid visits
            for (std::size_t x = 0; x <= steps; ++x)
            for (std::size_t y = 0; y <= steps; ++y) {
                if (std::gcd(x, y) != 1) continue;
                const double wa = static_cast<double>(x) / static_cast<double>(x + y);
                const double wb = static_cast<double>(y) / static_cast<double>(x + y);
                const auto& hits = sweep.argmin_pair(a, b, wa, wb);
                std::fill(w.begin(), w.end(), 0.0);
                w[a] = wa;
                w[b] = wb;
                sweep.absorb(hits, w);
            }
        }
    }
    const auto kind = space.graph().kind();
    const bool decomposable = k <= 2 || kind == GraphKind::tree || kind == GraphKind::grid;
    return sweep.finish(LocusMethod::pairwise, steps, !integer_metric(space) || !decomposable);
}

Locus locus_general(const MetricSpace& space, const ObservedSet& observed, std::optional<std::size_t> resolution,
                    double budget) {
    observed.validate(space);
    const std::size_t steps = resolve(space, resolution);
    const std::size_t k = observed.size();
    const double points = std::pow(static_cast<double>(steps + 1), static_cast<double>(k)) - 1.0;
    if (points > budget) throw BudgetExceeded(points, budget);

    Sweep sweep(space, observed);
    std::vector<std::size_t> digits(k, 0);
    std::vector<double> w(k, 0.0);
    // odometer over {0..steps}^k, skipping the all-zero vector
    while (true) {
        std::size_t pos = 0;
        while (pos < k && digits[pos] == steps) {
            digits[pos] = 0;
            ++pos;
        }
        if (pos == k) break;
        ++digits[pos];
        std::size_t total = 0;
        for (std::size_t d : digits) total += d;
        for (std::size_t i = 0; i < k; ++i) w[i] = static_cast<double>(digits[i]) / static_cast<double>(total);
        sweep.absorb(sweep.argmin(w), w);
    }
    return sweep.finish(LocusMethod::general, steps, !integer_metric(space));
}

Locus compute_locus(const MetricSpace& space, const ObservedSet& observed, std::optional<std::size_t> resolution,
                    double budget) {
    switch (space.graph().kind()) {
        case GraphKind::tree:
        case GraphKind::phylogenetic_tree:
        case GraphKind::grid:
            return locus_pairwise(space, observed, resolution);
        default:
            return locus_general(space, observed, resolution, budget);
    }
}

DecomposabilityCheck check_pairwise_decomposable(const MetricSpace& space, const ObservedSet& observed,
                                                 std::optional<std::size_t> resolution, double budget) {
    DecomposabilityCheck out;
    out.general = locus_general(space, observed, resolution, budget);
    out.pairwise = locus_pairwise(space, observed, resolution);
    std::vector<VertexId> diff;
    std::set_symmetric_difference(out.general.members.begin(), out.general.members.end(),
                                  out.pairwise.members.begin(), out.pairwise.members.end(), std::back_inserter(diff));
    out.decomposable = diff.empty();
    if (!diff.empty()) out.counterexample = diff.front();
    return out;
}

bool is_locus_cover(const MetricSpace& space, const ObservedSet& observed, std::optional<std::size_t> resolution,
                    double budget) {
    return compute_locus(space, observed, resolution, budget).members == space.labels();
}

// -----------------------------
// Covers
// -----------------------------

std::vector<Certificate> find_singleton_witnesses(const MetricSpace& space, const ObservedSet& observed,
                                                  std::size_t resolution) {
    observed.validate(space);
    if (resolution < 1) throw ValidationError("resolution must be >= 1");
    Sweep sweep(space, observed);
    const std::size_t k = observed.size();
    std::vector<Certificate> certs(sweep.num_labels());
    for (std::size_t j = 0; j < certs.size(); ++j) certs[j].vertex = sweep.label(j);
    std::size_t missing = certs.size();

    std::vector<std::size_t> parts(k, 0);
    std::vector<double> w(k, 0.0);
    // compositions of `resolution` into k parts, lexicographic
    std::function<bool(std::size_t, std::size_t)> visit = [&](std::size_t i, std::size_t left) -> bool {
        if (i + 1 == k) {
            parts[i] = left;
            for (std::size_t t = 0; t < k; ++t)
                w[t] = static_cast<double>(parts[t]) / static_cast<double>(resolution);
            const auto& hits = sweep.argmin(w);
            if (hits.size() == 1 && !certs[hits[0]].singleton) {
                certs[hits[0]].weights = w;
                certs[hits[0]].singleton = true;
                --missing;
            }
            return missing == 0;
        }
        for (std::size_t a = 0; a <= left; ++a) {
            parts[i] = a;
            if (visit(i + 1, left - a)) return true;
        }
        return false;
    };
    visit(0, resolution);
    return certs;
}

namespace {

std::optional<VertexId> first_uncovered(const MetricSpace& space, const Locus& locus) {
    for (VertexId y : space.labels())
        if (!locus.contains(y)) return y;
    return std::nullopt;
}

void require_kind(const MetricSpace& space, GraphKind kind, const char* what) {
    if (space.graph().kind() != kind)
        throw ValidationError(std::string(what) + " requires a " + to_string(kind) + " space, got " +
                              to_string(space.graph().kind()));
}

// Walks from `from` through `next` away from `from` until a leaf.
VertexId walk_to_leaf(const LabelGraph& g, VertexId from, VertexId next) {
    VertexId prev = from, cur = next;
    while (g.degree(cur) > 1) {
        const auto nb = g.neighbors(cur);
        const VertexId step = nb[0] != prev ? nb[0] : nb[1];
        prev = cur;
        cur = step;
    }
    return cur;
}

std::size_t position_of(const ObservedSet& set, VertexId v) {
    for (std::size_t i = 0; i < set.size(); ++i)
        if (set[i] == v) return i;
    throw std::logic_error("vertex not in observed set");
}

Certificate two_anchor_certificate(const MetricSpace& space, const ObservedSet& cover, VertexId v, VertexId l1,
                                   VertexId l2) {
    const double span = space.d(l1, l2);
    std::vector<double> w(cover.size(), 0.0);
    w[position_of(cover, l1)] = space.d(v, l2) / span;
    w[position_of(cover, l2)] = space.d(v, l1) / span;
    const auto mean = frechet_mean(space, cover, w);
    return {v, std::move(w), mean.size() == 1 && mean.canonical() == v};
}

Certificate indicator_certificate(const ObservedSet& cover, VertexId v) {
    return {v, indicator(cover.size(), position_of(cover, v)), true};
}

void finish_cover(const MetricSpace& space, CoverReport& report) {
    const auto locus = locus_pairwise(space, report.cover);
    report.is_locus_cover = locus.members == space.labels();
    report.failure_vertex = first_uncovered(space, locus);
    report.nontrivial = report.cover.size() < space.num_labels();
}

std::vector<VertexId> grid_corners(GridShape shape) {
    const std::size_t m = shape.rows, n = shape.cols;
    std::vector<VertexId> c{0, static_cast<VertexId>(n - 1), static_cast<VertexId>((m - 1) * n),
                            static_cast<VertexId>(m * n - 1)};
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

}  // namespace

CoverReport min_cover_tree(const MetricSpace& space) {
    require_kind(space, GraphKind::tree, "min_cover_tree");
    const auto& g = space.graph();
    CoverReport report;
    report.construction = "tree_leaves";
    report.cover = ObservedSet(g.leaves());
    bool identifying = true;
    for (VertexId v : space.labels()) {
        Certificate cert;
        if (report.cover.contains(v)) {
            cert = indicator_certificate(report.cover, v);
        } else {
            const auto nb = g.neighbors(v);
            cert = two_anchor_certificate(space, report.cover, v, walk_to_leaf(g, v, nb[0]), walk_to_leaf(g, v, nb[1]));
        }
        identifying &= cert.singleton;
        report.certificates.push_back(std::move(cert));
    }
    report.is_identifying = identifying;
    finish_cover(space, report);
    return report;
}

CoverReport min_cover_grid(const MetricSpace& space) {
    require_kind(space, GraphKind::grid, "min_cover_grid");
    const auto n = static_cast<VertexId>(space.graph().num_vertices());
    CoverReport report;
    report.construction = "grid_opposite_corners";
    report.cover = n == 1 ? ObservedSet({0}) : ObservedSet({0, n - 1});
    if (n == 1) {
        report.certificates.push_back(indicator_certificate(report.cover, 0));
        report.is_identifying = true;
    } else {
        // constructive weights first; replaced by any singleton witness the search finds
        auto found = find_singleton_witnesses(space, report.cover, 4 * default_resolution(space));
        bool identifying = true;
        for (auto& cert : found) {
            if (!cert.singleton) cert = two_anchor_certificate(space, report.cover, cert.vertex, 0, n - 1);
            identifying &= cert.singleton;
            report.certificates.push_back(std::move(cert));
        }
        report.is_identifying = identifying;
    }
    finish_cover(space, report);
    return report;
}

CoverReport identifying_cover_grid(const MetricSpace& space, std::optional<std::size_t> resolution) {
    require_kind(space, GraphKind::grid, "identifying_cover_grid");
    if (resolution && *resolution < 1) throw ValidationError("resolution must be >= 1");
    CoverReport report;
    report.construction = "grid_all_corners";
    report.cover = ObservedSet(grid_corners(space.graph().grid_shape()));
    report.certificates =
        find_singleton_witnesses(space, report.cover, resolution.value_or(4 * default_resolution(space)));
    report.is_identifying = std::all_of(report.certificates.begin(), report.certificates.end(),
                                        [](const Certificate& c) { return c.singleton; });
    finish_cover(space, report);
    return report;
}

CoverReport phylo_cover(const MetricSpace& space) {
    require_kind(space, GraphKind::phylogenetic_tree, "phylo_cover");
    const auto& leaves = space.labels();

    struct LeafPath {
        double length;
        VertexId a, b;
    };
    std::vector<LeafPath> paths;
    for (std::size_t i = 0; i < leaves.size(); ++i)
        for (std::size_t j = i + 1; j < leaves.size(); ++j)
            paths.push_back({space.d(leaves[i], leaves[j]), leaves[i], leaves[j]});
    // longest first; equal lengths by ascending (min endpoint, max endpoint)
    std::stable_sort(paths.begin(), paths.end(), [](const LeafPath& x, const LeafPath& y) {
        if (x.length != y.length) return x.length > y.length;
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });

    std::vector<VertexId> chosen;
    auto covers = [&] {
        return !chosen.empty() && locus_pairwise(space, ObservedSet(chosen)).members == leaves;
    };
    bool covered = false;
    bool changed = true;
    for (const auto& p : paths) {
        if (changed) covered = covers();
        if (covered) break;
        changed = false;
        for (VertexId v : {p.a, p.b}) {
            if (std::find(chosen.begin(), chosen.end(), v) == chosen.end()) {
                chosen.push_back(v);
                changed = true;
            }
        }
    }

    CoverReport report;
    report.construction = "phylogenetic_greedy";
    report.cover = ObservedSet(chosen);
    const auto locus = locus_pairwise(space, report.cover);
    for (std::size_t i = 0; i < locus.members.size(); ++i) {
        const auto mean = frechet_mean(space, report.cover, locus.witnesses[i]);
        report.certificates.push_back({locus.members[i], locus.witnesses[i], mean.size() == 1});
    }
    finish_cover(space, report);
    return report;
}

CoverReport complete_cover(const MetricSpace& space) {
    require_kind(space, GraphKind::complete, "complete_cover");
    CoverReport report;
    report.construction = "complete_trivial";
    report.cover = ObservedSet(space.labels());
    for (VertexId v : space.labels()) report.certificates.push_back(indicator_certificate(report.cover, v));
    report.is_identifying = true;
    report.message = "no nontrivial cover exists for the complete graph; only the trivial cover Y works";
    finish_cover(space, report);
    return report;
}

}  // namespace fadapt
