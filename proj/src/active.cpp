#include "fadapt/active.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace fadapt {

std::string to_string(Policy policy) { return policy == Policy::active ? "active" : "passive"; }

Policy policy_from_string(const std::string& name) {
    if (name == "active") return Policy::active;
    if (name == "passive") return Policy::passive;
    throw ValidationError("unknown policy '" + name + "'");
}

namespace {

void require_tree(const MetricSpace& space) {
    if (space.graph().kind() != GraphKind::tree)
        throw ValidationError("class selection requires a tree space (got " + to_string(space.graph().kind()) +
                              "); use a minimum spanning tree as an approximation");
}

}  // namespace

std::vector<VertexId> tree_locus(const MetricSpace& space, const ObservedSet& observed) {
    require_tree(space);
    observed.validate(space);
    std::vector<char> in(space.graph().num_vertices(), 0);
    for (VertexId v : observed.ids()) in[v] = 1;
    // the spanned subtree is the union of paths from λ_0 to every other anchor
    for (std::size_t i = 1; i < observed.size(); ++i)
        for (VertexId v : space.paths().path(observed[0], observed[i])) in[v] = 1;
    std::vector<VertexId> out;
    for (std::size_t v = 0; v < in.size(); ++v)
        if (in[v]) out.push_back(static_cast<VertexId>(v));
    return out;
}

std::vector<VertexId> inner_boundary(const LabelGraph& graph, const std::vector<VertexId>& locus) {
    std::vector<char> in(graph.num_vertices(), 0);
    for (VertexId v : locus) in[v] = 1;
    std::vector<VertexId> out;
    for (VertexId v : locus) {
        const auto nb = graph.neighbors(v);
        if (std::any_of(nb.begin(), nb.end(), [&](VertexId w) { return !in[w]; })) out.push_back(v);
    }
    return out;
}

SelectionState SelectionState::initial(const MetricSpace& space, ObservedSet observed) {
    SelectionState s;
    s.locus = tree_locus(space, observed);
    s.inner_boundary = fadapt::inner_boundary(space.graph(), s.locus);
    s.observed = std::move(observed);
    return s;
}

namespace {

SelectionState advance(const MetricSpace& space, const SelectionState& state, VertexId v) {
    auto next = SelectionState::initial(space, state.observed.with(v));
    next.round = state.round + 1;
    return next;
}

}  // namespace

Selection next_class_active(const MetricSpace& space, const SelectionState& state) {
    require_tree(space);
    if (state.complete(space)) throw SelectionComplete();
    const auto& g = space.graph();
    std::vector<char> in(g.num_vertices(), 0);
    for (VertexId v : state.locus) in[v] = 1;

    // best (y, b) by (longest path, smallest y, smallest b)
    std::size_t best_len = 0;
    VertexId best_y = 0, best_b = 0;
    bool found = false;
    std::vector<std::size_t> hops(g.num_vertices());
    std::vector<VertexId> queue;
    for (VertexId b : state.inner_boundary) {
        // BFS from b through non-locus vertices only
        std::fill(hops.begin(), hops.end(), std::numeric_limits<std::size_t>::max());
        queue.assign(1, b);
        hops[b] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const VertexId x = queue[head];
            for (VertexId w : g.neighbors(x)) {
                if (in[w] || hops[w] != std::numeric_limits<std::size_t>::max()) continue;
                hops[w] = hops[x] + 1;
                queue.push_back(w);
                const bool better = !found || hops[w] > best_len ||
                                    (hops[w] == best_len && std::tie(w, b) < std::tie(best_y, best_b));
                if (better) {
                    found = true;
                    best_len = hops[w];
                    best_y = w;
                    best_b = b;
                }
            }
        }
    }
    if (!found) throw SelectionComplete();
    return {best_y, best_b, best_len, advance(space, state, best_y)};
}

Selection next_class_passive(const MetricSpace& space, const SelectionState& state, std::uint64_t seed) {
    std::vector<VertexId> pool;
    for (VertexId y : space.labels())
        if (!state.observed.contains(y)) pool.push_back(y);
    if (pool.empty()) throw SelectionComplete();
    Rng rng(seed, "passive", state.round);
    const VertexId pick = pool[rng.below(pool.size())];
    return {pick, std::nullopt, 0, advance(space, state, pick)};
}

Trajectory run_selection(const MetricSpace& space, const ObservedSet& initial, std::size_t rounds, Policy policy,
                         std::uint64_t seed) {
    require_tree(space);
    Trajectory traj;
    traj.policy = policy;
    traj.seed = seed;
    auto state = SelectionState::initial(space, initial);
    traj.points.push_back({0, state.observed.size(), state.locus.size()});
    bool exhausted = false;
    for (std::size_t r = 1; r <= rounds; ++r) {
        if (!exhausted) {
            try {
                state = policy == Policy::active ? next_class_active(space, state).state
                                                 : next_class_passive(space, state, seed).state;
            } catch (const SelectionComplete&) {
                exhausted = true;
            }
        }
        traj.points.push_back({r, state.observed.size(), state.locus.size()});
    }
    return traj;
}

VertexId metric_centroid(const MetricSpace& space) {
    const std::vector<double> ones(space.num_labels(), 1.0);
    return frechet_mean(space, ObservedSet(space.labels()), ones).canonical();
}

GibbsSample gibbs_sample_classes(const MetricSpace& space, std::size_t count, double theta, std::uint64_t seed) {
    if (!(theta >= 0.0) || !std::isfinite(theta)) throw ValidationError("theta must be finite and >= 0");
    if (count < 1) throw ValidationError("must sample at least one class");
    if (count > space.num_labels())
        throw ValidationError("cannot sample " + std::to_string(count) + " classes from " +
                              std::to_string(space.num_labels()) + " labels");
    GibbsSample out;
    out.centroid = metric_centroid(space);
    std::vector<VertexId> remaining = space.labels();
    std::vector<VertexId> chosen;
    std::vector<double> prob;
    Rng rng(seed, "gibbs");
    while (chosen.size() < count) {
        // shift by the nearest remaining distance so the largest weight is exp(0)
        double nearest = std::numeric_limits<double>::infinity();
        for (VertexId y : remaining) nearest = std::min(nearest, space.d(y, out.centroid));
        prob.resize(remaining.size());
        double z = 0.0;
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            prob[i] = std::exp(-theta * (space.d(remaining[i], out.centroid) - nearest));
            z += prob[i];
        }
        double mass = 0.0;
        for (double& p : prob) {
            p /= z;
            mass += p;
        }
        out.step_mass.push_back(mass);

        const double u = rng.uniform01();
        std::size_t pick = remaining.size() - 1;
        double acc = 0.0;
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            acc += prob[i];
            if (u < acc) {
                pick = i;
                break;
            }
        }
        chosen.push_back(remaining[pick]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    out.observed = ObservedSet(std::move(chosen));
    return out;
}

}  // namespace fadapt
