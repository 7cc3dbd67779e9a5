#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "polylab/torus_poly.hpp"

using namespace polylab;

namespace {

TorusEnumResult run_torus(int d, int L, int r, int n_max, Model model)
{
    TorusEnumConfig cfg;
    cfg.d = d;
    cfg.L = L;
    cfg.r = r;
    cfg.n_max = n_max;
    cfg.model = model;
    return enumerate_torus(cfg);
}

TorusPolymer torus_from_edges(int d, int L, int r, Model model, const EdgeList& edges)
{
    TorusPolymer t;
    t.d = d;
    t.L = L;
    t.r = r;
    t.model = model;
    t.edges = edges;
    normalize_edges(t.edges, d);
    return t;
}

} // namespace

TEST_CASE("torus enumeration: matches the brute-force reference")
{
    struct Cfg {
        int d, L, r, n;
        Model model;
    };
    const Cfg cases[] = {
        {1, 1, 3, 5, Model::tree},   {1, 1, 3, 5, Model::animal},
        {1, 2, 5, 4, Model::tree},   {1, 2, 5, 4, Model::animal},
        {2, 1, 3, 4, Model::tree},   {2, 1, 3, 4, Model::animal},
    };
    for (const auto& c : cases) {
        CAPTURE(c.d);
        CAPTURE(c.r);
        CAPTURE(static_cast<int>(c.model));
        TorusEnumResult res = run_torus(c.d, c.L, c.r, c.n, c.model);
        auto brute = test_oracle::brute_rooted(c.d, c.L, c.n, c.model, c.r);
        for (int n = 0; n <= c.n; ++n) {
            const auto& level = brute[static_cast<std::size_t>(n)];
            std::map<test_oracle::Key, long long> cnt;
            long long chi = 0;
            for (const auto& [key, edges] : level.polymers) {
                auto vs = test_oracle::vertex_set_keys(edges, c.d);
                chi += static_cast<long long>(vs.size());
                for (const auto& vk : vs) cnt[vk] += 1;
            }
            CHECK(res.chi[static_cast<std::size_t>(n)] == chi);
            res.box.for_each([&](long long, const Point& x) {
                const test_oracle::Key key(x.begin(), x.begin() + c.d);
                auto it = cnt.find(key);
                CHECK(res.twopoint_at(n, x) == (it == cnt.end() ? 0 : it->second));
            });
        }
    }
}

TEST_CASE("torus enumeration: cycle exclusion and the unwrapped regime")
{
    // d=1, r=3, L=1 trees are paths with at most 2 edges
    TorusEnumResult res = run_torus(1, 1, 3, 5, Model::tree);
    for (int n = 3; n <= 5; ++n)
        for (const auto c : res.twopoint[static_cast<std::size_t>(n)]) CHECK(c == 0);

    // without wrapping (r large) torus and Z^d coefficients coincide
    EnumConfig zcfg;
    zcfg.d = 1;
    zcfg.L = 1;
    zcfg.n_max = 4;
    zcfg.model = Model::animal;
    EnumResult zd = enumerate_polymers(zcfg);
    TorusEnumResult big = run_torus(1, 1, 11, 4, Model::animal);
    big.box.for_each([&](long long, const Point& x) {
        for (int n = 0; n <= 4; ++n) CHECK(big.twopoint_at(n, x) == zd.twopoint_at(n, x));
    });

    // sum over x of two-point coefficients equals the susceptibility column
    for (int n = 0; n <= 4; ++n) {
        long long sum = 0;
        for (const auto c : big.twopoint[static_cast<std::size_t>(n)]) sum += c;
        CHECK(sum == big.chi[static_cast<std::size_t>(n)]);
    }

    CHECK_THROWS_AS(run_torus(1, 2, 4, 3, Model::tree), PreconditionError); // r < 2L+1
}

TEST_CASE("lift: walks")
{
    // single-point walk lifts to itself
    auto id = lift_walk({zero_point()}, 1, 1, 5);
    CHECK(id.size() == 1);
    CHECK(id[0] == zero_point());

    // d=1, r=5, L=1: 0 -> 4 -> 3 lifts to 0, -1, -2
    auto w = lift_walk({make_point({0}), make_point({4}), make_point({3})}, 1, 1, 5);
    REQUIRE(w.size() == 3);
    CHECK(w[1] == make_point({-1}));
    CHECK(w[2] == make_point({-2}));

    // round trip: projection recovers the torus walk stepwise
    for (std::size_t i = 0; i < w.size(); ++i) {
        Point rep = torus_rep_point(w[i], 5, 1);
        Point orig = torus_rep_point(i == 0 ? make_point({0}) : (i == 1 ? make_point({4}) : make_point({3})), 5, 1);
        CHECK(rep == orig);
    }

    CHECK_THROWS_AS(lift_walk({make_point({1})}, 1, 1, 5), PreconditionError);
    CHECK_THROWS_AS(lift_walk({make_point({0}), make_point({2})}, 1, 1, 5), PreconditionError);
}

TEST_CASE("lift: trees")
{
    // single vertex
    TorusPolymer trivial = torus_from_edges(1, 1, 3, Model::tree, {});
    LiftResult lr = lift_tree(trivial);
    CHECK(lr.zd_polymer.edges.empty());
    CHECK(lr.faithful);

    // d=1, r=3: path 0-1-2 lifts to the path 0,1,2 in Z
    EdgeList path{{make_point({0}), make_point({1})}, {make_point({1}), make_point({-1})}};
    TorusPolymer p = torus_from_edges(1, 1, 3, Model::tree, path);
    LiftResult lifted = lift_tree(p);
    EdgeList expect{{make_point({0}), make_point({1})}, {make_point({1}), make_point({2})}};
    normalize_edges(expect, 1);
    CHECK(lifted.zd_polymer.edges == expect);
    // lift vertices project bijectively onto the tree's vertices, so lifts of
    // genuine torus polymers never contain an equivalent pair
    CHECK(lifted.faithful);

    // projection recovers the torus tree
    TorusPolymer back = project_polymer(lifted.zd_polymer, 3);
    CHECK(back.edges == p.edges);

    // non-tree input is rejected
    EdgeList cyc{{make_point({0}), make_point({1})},
                 {make_point({1}), make_point({-1})},
                 {make_point({-1}), make_point({0})}};
    CHECK_THROWS_AS(lift_tree(torus_from_edges(1, 1, 3, Model::tree, cyc)), PreconditionError);
}

TEST_CASE("lift: animals break torus cycles")
{
    // the full triangle on the period-3 circle lifts to a path of 3 edges
    EdgeList cyc{{make_point({0}), make_point({1})},
                 {make_point({1}), make_point({-1})},
                 {make_point({-1}), make_point({0})}};
    TorusPolymer tri = torus_from_edges(1, 1, 3, Model::animal, cyc);
    LiftResult lifted = lift_animal(tri);
    CHECK(lifted.zd_polymer.edges.size() == 3);
    TorusPolymer back = project_polymer(lifted.zd_polymer, 3);
    CHECK(back.edges == tri.edges);
    // spanning tree grows toward -1 first, so the lift is the path -2..1
    EdgeList expect{{make_point({-2}), make_point({-1})},
                    {make_point({-1}), make_point({0})},
                    {make_point({0}), make_point({1})}};
    normalize_edges(expect, 1);
    CHECK(lifted.zd_polymer.edges == expect);

    // tree-shaped animals lift exactly like trees
    EdgeList path{{make_point({0}), make_point({1})}, {make_point({1}), make_point({-1})}};
    TorusPolymer pa = torus_from_edges(1, 1, 3, Model::animal, path);
    CHECK(lift_animal(pa).zd_polymer.edges == lift_tree(torus_from_edges(1, 1, 3, Model::tree, path)).zd_polymer.edges);
}

TEST_CASE("lift: round trip, injectivity, and the faithful-pool identity")
{
    struct Pool {
        int d, L, r, n;
    };
    const Pool pools[] = {{1, 1, 3, 5}, {1, 1, 5, 5}, {1, 1, 4, 4}, {2, 1, 3, 4}, {2, 1, 5, 3}};
    for (const auto& pool : pools) {
        CAPTURE(pool.d);
        CAPTURE(pool.r);
        for (Model model : {Model::tree, Model::animal}) {
            TorusEnumConfig cfg;
            cfg.d = pool.d;
            cfg.L = pool.L;
            cfg.r = pool.r;
            cfg.n_max = pool.n;
            cfg.model = model;
            std::set<std::vector<int>> lift_keys;
            long long count = 0;
            for_each_torus_polymer(cfg, [&](const EdgeList& edges) {
                TorusPolymer tp = torus_from_edges(pool.d, pool.L, pool.r, model, edges);
                LiftResult lr = model == Model::tree ? lift_tree(tp) : lift_animal(tp);
                // projection recovers the torus polymer
                CHECK(project_polymer(lr.zd_polymer, pool.r).edges == tp.edges);
                // injectivity: no two inputs share a lift
                CHECK(lift_keys.insert(edge_list_key(lr.zd_polymer.edges, pool.d)).second);
                ++count;
            });
            CHECK(count > 0);
        }

        // every Z^d animal without an equivalent vertex pair is the lift of its
        // own projection
        EnumConfig zcfg;
        zcfg.d = pool.d;
        zcfg.L = pool.L;
        zcfg.n_max = pool.n;
        zcfg.model = Model::animal;
        for_each_polymer(zcfg, [&](const EdgeList& edges) {
            Polymer poly;
            poly.d = pool.d;
            poly.L = pool.L;
            poly.model = Model::animal;
            poly.edges = edges;
            normalize_edges(poly.edges, pool.d);
            std::set<std::vector<int>> classes;
            bool faithful = true;
            for (const auto& vk : test_oracle::vertex_set_keys(poly.edges, pool.d)) {
                Point rep = torus_rep_point(make_point(vk), pool.r, pool.d);
                if (!classes.insert(std::vector<int>(rep.begin(), rep.begin() + pool.d)).second)
                    faithful = false;
            }
            if (!faithful) return;
            LiftResult lr = lift_animal(project_polymer(poly, pool.r));
            CHECK(lr.zd_polymer.edges == poly.edges);
        });
    }
}

TEST_CASE("torus: psi and exclusion series against interval oracles")
{
    EnumConfig cfg;
    cfg.d = 1;
    cfg.L = 1;
    cfg.n_max = 4;
    cfg.model = Model::tree;
    cfg.torus_r = 3;
    EnumResult zd = enumerate_polymers(cfg);

    // psi_n(0) counts intervals through 0 and +-3, +-6, ...
    IntSeries psi0 = psi_series(zd, 3, zero_point());
    CHECK(psi0.c[0] == 0);
    CHECK(psi0.c[1] == 0);
    CHECK(psi0.c[2] == 0);
    CHECK(psi0.c[3] == 2); // [-3,0] and [0,3]
    CHECK(psi0.c[4] == 4); // c_4(3) = 2 each side

    // exclusion oracle: loop over intervals [a, a+n] containing 0
    for (int xi = -1; xi <= 1; ++xi) {
        IntSeries ee = big_e_series(zd, make_point({xi}));
        for (int n = 0; n <= 4; ++n) {
            long long expect = 0;
            for (int a = -n; a <= 0; ++a) {
                long long in_class = 0, pairs = 0;
                std::map<int, int> occupancy;
                for (int v = a; v <= a + n; ++v) occupancy[torus_rep(v, 3)] += 1;
                for (const auto& [c, k] : occupancy) pairs += static_cast<long long>(k) * (k - 1);
                in_class = occupancy.count(torus_rep(xi, 3)) ? occupancy[torus_rep(xi, 3)] : 0;
                expect += in_class * pairs;
            }
            CHECK(ee.c[static_cast<std::size_t>(n)] == big_int(expect));
        }
    }
}

TEST_CASE("torus: sandwich bounds in exact arithmetic")
{
    // beyond-reach period: all corrections vanish and the report is trivial
    SandwichReport far = sandwich_check(1, 1, 13, 4, Model::tree, make_point({1}),
                                        parse_rational("1/8"));
    CHECK(far.trivial);
    CHECK(far.lower_ok);
    CHECK(far.upper_ok);
    CHECK(far.eval_ok);
    CHECK(far.mid_at_p == 0);

    for (Model model : {Model::tree, Model::animal}) {
        for (int x = -1; x <= 1; ++x) {
            SandwichReport rep = sandwich_check(1, 1, 3, 5, model, make_point({x}),
                                                parse_rational("1/8"));
            CHECK(rep.lower_ok);
            CHECK(rep.upper_ok);
            CHECK(rep.eval_ok);
            CHECK_FALSE(rep.trivial);
        }
        SandwichReport rep2 = sandwich_check(2, 1, 3, 4, model, make_point({1, 0}),
                                             parse_rational("1/16"));
        CHECK(rep2.lower_ok);
        CHECK(rep2.upper_ok);
        CHECK(rep2.eval_ok);
    }
}

TEST_CASE("torus: wrap identity via two computation paths")
{
    StepKernel k11 = make_kernel(1, 1);
    WrapIdentityReport r1 = wrap_identity_check(k11, 0.5, 6, 1);
    CHECK(r1.max_discrepancy <= 1e-12); // k = 1 is wrap_sum by definition

    WrapIdentityReport r2 = wrap_identity_check(k11, 0.5, 6, 2);
    CHECK(r2.max_discrepancy <= 1e-8);

    StepKernel k21 = make_kernel(2, 1);
    WrapIdentityReport r3 = wrap_identity_check(k21, 0.4, 5, 3);
    CHECK(r3.max_discrepancy <= 1e-8);
}
