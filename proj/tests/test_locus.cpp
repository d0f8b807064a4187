#include <algorithm>
#include <random>

#include "doctest.h"
#include "fadapt/frechet.hpp"
#include "fadapt/locus.hpp"
#include "oracles.hpp"

using namespace fadapt;

namespace {

using Ids = std::vector<VertexId>;

LabelGraph path_graph(std::size_t n) {
    std::vector<Edge> e;
    for (VertexId i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, 1.0});
    return LabelGraph::infer(n, e);
}

// center 4, leaves 0..3
LabelGraph star5() { return LabelGraph::infer(5, {{0, 4}, {1, 4}, {2, 4}, {3, 4}}); }

void check_witnesses(const MetricSpace& s, const ObservedSet& obs, const Locus& l) {
    REQUIRE(l.witnesses.size() == l.members.size());
    for (std::size_t i = 0; i < l.members.size(); ++i)
        CHECK(frechet_mean(s, obs, l.witnesses[i]).contains(l.members[i]));
    for (VertexId a : obs.ids()) CHECK(l.contains(a));
}

}  // namespace

TEST_CASE("locus_pairwise examples") {
    const MetricSpace p5(path_graph(5));
    const auto l = locus_pairwise(p5, ObservedSet({0, 4}));
    CHECK(l.members == Ids{0, 1, 2, 3, 4});
    CHECK(l.method == LocusMethod::pairwise);
    CHECK(l.resolution == 4);
    CHECK(!l.lower_bound);
    check_witnesses(p5, ObservedSet({0, 4}), l);

    const MetricSpace star(star5());
    CHECK(locus_pairwise(star, ObservedSet({0, 1})).members == Ids{0, 1, 4});
    CHECK(locus_general(star, ObservedSet({0, 1})).members == Ids{0, 1, 4});

    CHECK(locus_pairwise(p5, ObservedSet({3})).members == Ids{3});
    CHECK_THROWS_AS(locus_pairwise(p5, ObservedSet({0, 4}), std::size_t{0}), ValidationError);
}

TEST_CASE("locus_general examples") {
    const MetricSpace k3(make_complete(3));
    CHECK(locus_general(k3, ObservedSet({0, 1})).members == Ids{0, 1});
    const MetricSpace p5(path_graph(5));
    CHECK(locus_general(p5, ObservedSet({0, 4})).members == locus_pairwise(p5, ObservedSet({0, 4})).members);
    const MetricSpace g33(make_grid(3, 3));
    const auto l = locus_general(g33, ObservedSet({0, 8}));
    CHECK(l.members == oracle::iota_ids(9));
    check_witnesses(g33, ObservedSet({0, 8}), l);

    SUBCASE("budget") {
        try {
            locus_general(MetricSpace(make_complete(5)), ObservedSet({0, 1, 2, 3}), std::size_t{200}, 1e6);
            FAIL("expected BudgetExceeded");
        } catch (const BudgetExceeded& e) {
            CHECK(e.required() > 1e6);
            CHECK(e.budget() == 1e6);
        }
        CHECK_NOTHROW(locus_general(k3, ObservedSet({0, 1, 2}), std::size_t{9}, 999.0));
        CHECK_THROWS_AS(locus_general(k3, ObservedSet({0, 1, 2}), std::size_t{9}, 998.0), BudgetExceeded);
    }
}

TEST_CASE("compute_locus dispatches by kind") {
    CHECK(compute_locus(MetricSpace(make_grid(2, 3)), ObservedSet({0, 5})).method == LocusMethod::pairwise);
    CHECK(compute_locus(MetricSpace(make_complete(4)), ObservedSet({0, 1})).method == LocusMethod::general);
    const auto emb = metric_from_embeddings({{0.0}, {1.0}, {2.5}});
    const auto l = compute_locus(emb.space, ObservedSet({0, 2}));
    CHECK(l.lower_bound);
}

TEST_CASE("tree locus is the union of anchor paths") {
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t n = 2 + rep % 19;
        const auto g = LabelGraph::infer(n, oracle::random_tree_edges(n, rng));
        const MetricSpace s(g);
        const auto fw = oracle::floyd_warshall(g);
        const std::size_t k = 1 + rep % std::min<std::size_t>(n, 5);
        const auto anchors = oracle::random_subset(oracle::iota_ids(n), k, rng);
        const ObservedSet obs(anchors);
        const auto l = locus_pairwise(s, obs);
        CHECK(l.members == oracle::interval_union(fw, anchors, s.labels()));
        check_witnesses(s, obs, l);
    }
}

TEST_CASE("pairwise equals general and the brute-force locus on trees and grids") {
    std::mt19937_64 rng(43);
    auto compare = [&](const LabelGraph& g) {
        const MetricSpace s(g);
        const auto fw = oracle::floyd_warshall(g);
        const std::size_t k = 1 + rng() % std::min<std::size_t>(s.num_labels(), 4);
        const auto anchors = oracle::random_subset(s.labels(), k, rng);
        const ObservedSet obs(anchors);
        const auto check = check_pairwise_decomposable(s, obs);
        CHECK(check.decomposable);
        CHECK(!check.counterexample);
        CHECK(check.general.members ==
              oracle::brute_locus(fw, s.labels(), anchors, default_resolution(s)));
        check_witnesses(s, obs, check.general);
        check_witnesses(s, obs, check.pairwise);
    };
    for (int rep = 0; rep < 15; ++rep) {
        const std::size_t n = 2 + rep % 11;
        compare(LabelGraph::infer(n, oracle::random_tree_edges(n, rng)));
    }
    for (std::size_t m = 1; m <= 3; ++m)
        for (std::size_t n = 1; n <= 4; ++n)
            if (m * n >= 2) compare(make_grid(m, n));
}

TEST_CASE("leaf-labelled trees: pairwise sweep is a lower bound of the brute-force locus") {
    std::mt19937_64 rng(47);
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        RandomGraphParams p{RandomFamily::phylo_tree, 3 + seed % 4};
        const auto g = generate_random(p, seed);
        const MetricSpace s(g);
        const auto anchors = oracle::random_subset(s.labels(), 1 + rng() % std::min<std::size_t>(s.num_labels(), 4), rng);
        const auto check = check_pairwise_decomposable(s, ObservedSet(anchors));
        CHECK(check.general.members ==
              oracle::brute_locus(oracle::floyd_warshall(g), s.labels(), anchors, default_resolution(s)));
        CHECK(std::includes(check.general.members.begin(), check.general.members.end(),
                            check.pairwise.members.begin(), check.pairwise.members.end()));
    }
}

TEST_CASE("leaf-labelled tree where a third anchor is needed") {
    // leaves 3 6 7 8 9 10; 6 hangs next to the cherry (9, 10)
    const auto g = LabelGraph::infer(
        11, {{0, 1}, {0, 2}, {1, 7}, {1, 8}, {2, 3}, {2, 4}, {4, 5}, {4, 6}, {5, 9}, {5, 10}},
        Ids{3, 6, 7, 8, 9, 10});
    REQUIRE(g.kind() == GraphKind::phylogenetic_tree);
    const MetricSpace s(g);
    const ObservedSet obs({8, 9, 10});
    // F(6) = 53 against 54.4 for 3, 9 and 10
    CHECK(frechet_mean(s, obs, std::vector<double>{1.4, 1.0, 1.0}).members == Ids{6});
    const auto fw = oracle::floyd_warshall(g);
    for (const auto& pair : {Ids{8, 9}, Ids{8, 10}, Ids{9, 10}}) {
        const auto l = oracle::brute_locus(fw, s.labels(), pair, 300);
        CHECK(!std::binary_search(l.begin(), l.end(), 6u));
    }
    const auto check = check_pairwise_decomposable(s, obs);
    CHECK(!check.decomposable);
    CHECK(check.counterexample == 6u);
    CHECK(compute_locus(s, obs).lower_bound);
    CHECK(!compute_locus(s, ObservedSet({8, 9})).lower_bound);
}

TEST_CASE("complete graphs have rigid loci") {
    for (std::size_t n = 2; n <= 5; ++n) {
        const MetricSpace s(make_complete(n));
        for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
            Ids lam;
            for (VertexId v = 0; v < n; ++v)
                if (mask & (1u << v)) lam.push_back(v);
            CHECK(locus_general(s, ObservedSet(lam)).members == lam);
            CHECK(!is_locus_cover(s, ObservedSet(lam)));
        }
    }
    const MetricSpace k4(make_complete(4));
    const auto c = check_pairwise_decomposable(k4, ObservedSet({0, 2, 3}));
    CHECK(c.decomposable);
    CHECK(c.general.members == Ids{0, 2, 3});
}

TEST_CASE("monotonicity in the observed set") {
    std::mt19937_64 rng(47);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 4 + rep % 17;
        const LabelGraph g = rep % 2 ? LabelGraph::infer(n, oracle::random_tree_edges(n, rng))
                                     : make_grid(2, n / 2);
        const MetricSpace s(g);
        const auto big = oracle::random_subset(s.labels(), 3, rng);
        const Ids small(big.begin(), big.begin() + 2);
        const auto ls = compute_locus(s, ObservedSet(small)).members;
        const auto lb = compute_locus(s, ObservedSet(big)).members;
        CHECK(std::includes(lb.begin(), lb.end(), ls.begin(), ls.end()));
    }
}

TEST_CASE("default resolution against finer grids") {
    // Unweighted trees and grids: refining the grid never adds members.
    std::mt19937_64 rng(53);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t n = 4 + rep;
        const MetricSpace s(LabelGraph::infer(n, oracle::random_tree_edges(n, rng)));
        const ObservedSet obs(oracle::random_subset(s.labels(), 3, rng));
        const auto r = default_resolution(s);
        const auto base = locus_general(s, obs).members;
        CHECK(locus_general(s, obs, 2 * r).members == base);
        CHECK(locus_general(s, obs, 4 * r).members == base);
    }
    // Generic graphs: report how often diam is not fine enough.
    int discrepancies = 0, trials = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 5 + rep % 6;
        const MetricSpace s(LabelGraph::infer(n, oracle::random_connected_edges(n, 3, rng)));
        const ObservedSet obs(oracle::random_subset(s.labels(), 3, rng));
        const auto r = default_resolution(s);
        const auto base = locus_general(s, obs).members;
        const auto fine = locus_general(s, obs, 4 * r).members;
        CHECK(std::includes(fine.begin(), fine.end(), base.begin(), base.end()));
        ++trials;
        discrepancies += base != fine;
    }
    MESSAGE("generic graphs where 4x resolution found extra locus members: " << discrepancies << "/" << trials);
}

TEST_CASE("non-decomposable locus is detected") {
    // equilateral triangle with side midpoints and centroid: the centroid is a
    // three-way mean but never a two-way mean
    const double h = std::sqrt(3.0) / 2.0;
    const auto m = metric_from_embeddings(
        {{0, 0}, {1, 0}, {0.5, h}, {0.5, 0}, {0.75, h / 2}, {0.25, h / 2}, {0.5, h / 3}});
    const auto c = check_pairwise_decomposable(m.space, ObservedSet({0, 1, 2}), std::size_t{12});
    CHECK(!c.decomposable);
    REQUIRE(c.counterexample);
    CHECK(*c.counterexample == 6);
    CHECK(c.general.contains(6));
    CHECK(!c.pairwise.contains(6));
}

TEST_CASE("min_cover_tree") {
    const MetricSpace p3(path_graph(3));
    auto r = min_cover_tree(p3);
    CHECK(r.cover.ids() == Ids{0, 2});
    CHECK(r.is_locus_cover);
    CHECK(r.is_identifying == true);
    CHECK(r.nontrivial);
    CHECK(r.construction == "tree_leaves");

    const MetricSpace star(star5());
    CHECK(min_cover_tree(star).cover.ids() == Ids{0, 1, 2, 3});

    // caterpillar: spine 0-1-2-3 with legs 4..7
    const MetricSpace cat(LabelGraph::infer(8, {{0, 1}, {1, 2}, {2, 3}, {0, 4}, {1, 5}, {2, 6}, {3, 7}}));
    r = min_cover_tree(cat);
    CHECK(r.cover.ids() == Ids{4, 5, 6, 7});
    CHECK(r.is_locus_cover);
    REQUIRE(r.certificates.size() == 8);
    for (const auto& c : r.certificates) {
        CHECK(c.singleton);
        CHECK(frechet_mean(cat, r.cover, c.weights).members == Ids{c.vertex});
    }
    CHECK_THROWS_AS(min_cover_tree(MetricSpace(make_complete(4))), ValidationError);
}

TEST_CASE("tree leaves cover every random tree with singleton witnesses") {
    std::mt19937_64 rng(59);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 2 + rep * 2;
        const auto g = LabelGraph::infer(n, oracle::random_tree_edges(n, rng));
        const MetricSpace s(g);
        const auto r = min_cover_tree(s);
        CHECK(r.cover.ids() == oracle::degree_one(n, g.edges()));
        CHECK(r.is_locus_cover);
        for (const auto& c : r.certificates) CHECK(frechet_mean(s, r.cover, c.weights).members == Ids{c.vertex});
    }
}

TEST_CASE("min_cover_grid") {
    CHECK(min_cover_grid(MetricSpace(make_grid(2, 2))).cover.ids() == Ids{0, 3});
    const MetricSpace g33(make_grid(3, 3));
    const auto r = min_cover_grid(g33);
    CHECK(r.cover.ids() == Ids{0, 8});
    CHECK(r.is_locus_cover);
    CHECK(r.construction == "grid_opposite_corners");
    CHECK(r.is_identifying == false);
    for (const auto& c : r.certificates) {
        REQUIRE(!c.weights.empty());
        CHECK(frechet_mean(g33, r.cover, c.weights).contains(c.vertex));
    }
    const auto line = min_cover_grid(MetricSpace(make_grid(1, 6)));
    CHECK(line.cover.ids() == Ids{0, 5});
    CHECK(line.is_locus_cover);
    CHECK_THROWS_AS(min_cover_grid(MetricSpace(path_graph(4))), ValidationError);
}

TEST_CASE("identifying_cover_grid") {
    const auto r22 = identifying_cover_grid(MetricSpace(make_grid(2, 2)));
    CHECK(r22.cover.ids() == Ids{0, 1, 2, 3});
    CHECK(r22.is_identifying == true);
    CHECK(!r22.nontrivial);

    const MetricSpace g33(make_grid(3, 3));
    const auto r = identifying_cover_grid(g33);
    CHECK(r.cover.ids() == Ids{0, 2, 6, 8});
    CHECK(r.is_identifying == true);
    CHECK(r.is_locus_cover);
    REQUIRE(r.certificates.size() == 9);
    for (const auto& c : r.certificates) {
        CHECK(c.singleton);
        CHECK(frechet_mean(g33, r.cover, c.weights).members == Ids{c.vertex});
    }
    CHECK(identifying_cover_grid(MetricSpace(make_grid(1, 4))).cover.ids() == Ids{0, 3});
}

TEST_CASE("phylo_cover") {
    SUBCASE("star with three leaves needs every leaf") {
        const MetricSpace s(LabelGraph::infer(4, {{0, 1}, {0, 2}, {0, 3}}, Ids{1, 2, 3}));
        CHECK(locus_pairwise(s, ObservedSet({1, 2})).members == Ids{1, 2});
        const auto r = phylo_cover(s);
        CHECK(r.cover.size() == 3);
        CHECK(r.is_locus_cover);
        CHECK(!r.nontrivial);
    }
    SUBCASE("path with leaf labels") {
        const MetricSpace s(LabelGraph::infer(3, {{0, 1}, {1, 2}}, Ids{0, 2}));
        REQUIRE(s.graph().kind() == GraphKind::phylogenetic_tree);
        const auto r = phylo_cover(s);
        auto ids = r.cover.ids();
        std::sort(ids.begin(), ids.end());
        CHECK(ids == Ids{0, 2});
        CHECK(r.is_locus_cover);
    }
    SUBCASE("balanced binary tree of depth two") {
        // root 0, internal 1 and 2, leaves 3..6
        const MetricSpace s(LabelGraph::infer(7, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}}, Ids{3, 4, 5, 6}));
        const auto r = phylo_cover(s);
        CHECK(r.cover.size() <= 4);
        CHECK(r.is_locus_cover);
        CHECK(is_locus_cover(s, r.cover));
    }
    SUBCASE("random phylogenetic trees") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            RandomGraphParams p{RandomFamily::phylo_tree, 3 + seed};
            const MetricSpace s(generate_random(p, seed));
            const auto r = phylo_cover(s);
            CHECK(r.is_locus_cover);
            CHECK(compute_locus(s, r.cover).members == s.labels());
        }
    }
}

TEST_CASE("complete_cover and is_locus_cover") {
    const MetricSpace k5(make_complete(5));
    const auto r = complete_cover(k5);
    CHECK(r.cover.ids() == oracle::iota_ids(5));
    CHECK(!r.nontrivial);
    CHECK(r.is_locus_cover);
    CHECK(r.message.find("no nontrivial cover") != std::string::npos);

    CHECK(is_locus_cover(MetricSpace(path_graph(6)), ObservedSet({0, 5})));
    CHECK(!is_locus_cover(k5, ObservedSet({0, 1, 2, 3})));
    CHECK(is_locus_cover(k5, ObservedSet(oracle::iota_ids(5))));
}
