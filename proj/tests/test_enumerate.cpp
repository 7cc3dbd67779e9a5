#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "polylab/enumerate.hpp"

using namespace polylab;

namespace {

EnumResult run(int d, int L, int n_max, Model model, int threads = 0, int torus_r = 0)
{
    EnumConfig cfg;
    cfg.d = d;
    cfg.L = L;
    cfg.n_max = n_max;
    cfg.model = model;
    cfg.threads = threads;
    cfg.torus_r = torus_r;
    return enumerate_polymers(cfg);
}

} // namespace

TEST_CASE("enumerate: d=1 interval closed forms")
{
    EnumResult res = run(1, 1, 10, Model::tree);
    for (int n = 0; n <= 10; ++n) {
        CHECK(res.t[static_cast<std::size_t>(n)] == 1);
        CHECK(res.rooted[static_cast<std::size_t>(n)] == n + 1);
        // two-point counts: c_n(x) = n + 1 - |x|
        CHECK(res.twopoint_at(n, make_point({1})) == (n >= 1 ? n : 0));
        CHECK(res.twopoint_at(n, make_point({0})) == n + 1);
        for (int x = 0; x <= 10; ++x) {
            const long long expect = x <= n ? (n + 1 - x) : 0;
            CHECK(res.twopoint_at(n, make_point({x})) == expect);
            CHECK(res.twopoint_at(n, make_point({-x})) == expect);
        }
    }
    // on Z with L=1 animals are the same intervals
    EnumResult anim = run(1, 1, 8, Model::animal);
    for (int n = 0; n <= 8; ++n) CHECK(anim.t[static_cast<std::size_t>(n)] == 1);
}

TEST_CASE("enumerate: one-bond classes equal Omega/2")
{
    for (int d : {1, 2, 3})
        for (int L : {1, 2}) {
            EnumResult res = run(d, L, 1, Model::tree);
            CHECK(res.t[1] == res.Omega / 2);
            CHECK(res.rooted[1] == res.Omega); // both root placements
        }
}

TEST_CASE("enumerate: full tables match the brute-force reference")
{
    struct Cfg {
        int d, L, n;
        Model model;
    };
    const Cfg cases[] = {
        {1, 2, 5, Model::tree}, {1, 2, 5, Model::animal},
        {2, 1, 4, Model::tree}, {2, 1, 4, Model::animal},
        {3, 1, 3, Model::tree}, {3, 1, 3, Model::animal},
    };
    for (const auto& c : cases) {
        CAPTURE(c.d);
        CAPTURE(c.L);
        CAPTURE(static_cast<int>(c.model));
        EnumResult res = run(c.d, c.L, c.n, c.model);
        auto brute = test_oracle::brute_rooted(c.d, c.L, c.n, c.model);
        for (int n = 0; n <= c.n; ++n) {
            const auto& level = brute[static_cast<std::size_t>(n)];
            CHECK(res.rooted[static_cast<std::size_t>(n)] ==
                  static_cast<long long>(level.polymers.size()));
            CHECK(res.t[static_cast<std::size_t>(n)] == test_oracle::brute_t_count(level, c.d));
            // two-point counts and susceptibility from the reference sets
            std::map<test_oracle::Key, long long> cnt;
            long long chi = 0, xi2 = 0;
            for (const auto& [key, edges] : level.polymers) {
                auto vs = test_oracle::vertex_set_keys(edges, c.d);
                chi += static_cast<long long>(vs.size());
                for (const auto& vk : vs) {
                    cnt[vk] += 1;
                    xi2 += norm_sq(make_point(vk), c.d);
                }
            }
            CHECK(res.chi[static_cast<std::size_t>(n)] == chi);
            CHECK(res.xi2num[static_cast<std::size_t>(n)] == xi2);
            res.box.for_each([&](long long, const Point& x) {
                const test_oracle::Key key(x.begin(), x.begin() + c.d);
                auto it = cnt.find(key);
                const long long expect = it == cnt.end() ? 0 : it->second;
                CHECK(res.twopoint_at(n, x) == expect);
            });
        }
    }
}

TEST_CASE("enumerate: deterministic across thread counts")
{
    EnumResult one = run(2, 1, 6, Model::tree, 1);
    EnumResult two = run(2, 1, 6, Model::tree, 2);
    CHECK(one.t == two.t);
    CHECK(one.rooted == two.rooted);
    CHECK(one.chi == two.chi);
    CHECK(one.xi2num == two.xi2num);
    CHECK(one.twopoint == two.twopoint);
}

TEST_CASE("enumerate: susceptibility identities")
{
    EnumResult trees = run(2, 1, 6, Model::tree);
    for (int n = 0; n <= 6; ++n) {
        const long long t = trees.t[static_cast<std::size_t>(n)];
        CHECK(trees.rooted[static_cast<std::size_t>(n)] == (n + 1) * t);
        CHECK(trees.chi[static_cast<std::size_t>(n)] ==
              static_cast<long long>(n + 1) * (n + 1) * t);
    }
    EnumResult anim = run(2, 1, 5, Model::animal);
    for (int n = 0; n <= 5; ++n)
        CHECK(anim.chi[static_cast<std::size_t>(n)] <=
              static_cast<long long>(n + 1) * (n + 1) * anim.t[static_cast<std::size_t>(n)]);

    // double counting: sum_x c_n(x) equals the susceptibility coefficients
    for (const EnumResult* res : {&trees, &anim})
        for (int n = 0; n <= res->cfg.n_max; ++n) {
            long long sum = 0;
            for (const auto c : res->twopoint[static_cast<std::size_t>(n)]) sum += c;
            CHECK(sum == res->chi[static_cast<std::size_t>(n)]);
        }
}

TEST_CASE("enumerate: coefficient symmetry under reflection and permutation")
{
    EnumResult res = run(2, 1, 5, Model::animal);
    res.box.for_each([&](long long, const Point& x) {
        Point neg = negate(x, 2);
        Point swp{};
        swp[0] = x[1];
        swp[1] = x[0];
        for (int n = 0; n <= 5; ++n) {
            CHECK(res.twopoint_at(n, x) == res.twopoint_at(n, neg));
            CHECK(res.twopoint_at(n, x) == res.twopoint_at(n, swp));
        }
    });
    // reach bound: ||x||_inf > n_max L has zero coefficients
    CHECK(res.twopoint_at(5, make_point({6, 0})) == 0);
    CHECK(res.twopoint_at(3, make_point({9, 9})) == 0);
}

TEST_CASE("enumerate: tilted susceptibility")
{
    EnumResult res = run(1, 1, 6, Model::tree);
    RealSeries flat = tilted_susceptibility_series(res, 0.0);
    for (int n = 0; n <= 6; ++n)
        CHECK(flat.c[static_cast<std::size_t>(n)] ==
              doctest::Approx(static_cast<double>(res.chi[static_cast<std::size_t>(n)])));

    // d=1, L=1, n=1: a_1(m) = 2 + 2 cosh m
    for (double m : {0.3, 1.0}) {
        RealSeries tilted = tilted_susceptibility_series(res, m);
        CHECK(tilted.c[1] == doctest::Approx(2.0 + 2.0 * std::cosh(m)).epsilon(1e-12));
        // a_n(m) <= e^{m n L} a_n(0)
        for (int n = 0; n <= 6; ++n)
            CHECK(tilted.c[static_cast<std::size_t>(n)] <=
                  std::exp(m * n) * flat.c[static_cast<std::size_t>(n)] + 1e-9);
    }

    // exponential-decay bound G_p(x) <= chi^(m)(p) e^{-m ||x||_inf}
    EnumResult res2 = run(2, 1, 5, Model::tree);
    const double p = 0.05 * static_cast<double>(res2.Omega);
    for (double m : {0.0, 0.4}) {
        RealSeries tilted = tilted_susceptibility_series(res2, m);
        const double chim = tilted.eval(p);
        res2.box.for_each([&](long long, const Point& x) {
            const double g = two_point_series(res2, x).eval_double(p);
            CHECK(g <= chim * std::exp(-m * norm_inf(x, 2)) + 1e-12);
        });
    }
}

TEST_CASE("enumerate: xi2 evaluation")
{
    EnumResult res = run(1, 1, 12, Model::tree);
    // sum_x |x|^2 c_n(x) = n (n+1)^2 (n+2) / 6 for intervals
    for (int n = 0; n <= 12; ++n) {
        const long long expect =
            static_cast<long long>(n) * (n + 1) * (n + 1) * (n + 2) / 6;
        CHECK(res.xi2num[static_cast<std::size_t>(n)] == expect);
    }
    CHECK(xi2_series_eval(res, 1e-12) <= 1e-5);
    // monotone increasing on a small grid; matches the closed-form ratio
    double prev = 0;
    for (double p : {0.1, 0.3, 0.5, 0.7}) {
        long double num = 0, den = 0, q = 1;
        for (int n = 0; n <= 12; ++n) {
            den += static_cast<long double>((n + 1)) * (n + 1) * q;
            num += static_cast<long double>(n) * (n + 1) * (n + 1) * (n + 2) / 6.0L * q;
            q *= p / 2.0;
        }
        const double xi = xi2_series_eval(res, p);
        CHECK(xi == doctest::Approx(std::sqrt(static_cast<double>(num / den))).epsilon(1e-12));
        CHECK(xi > prev);
        prev = xi;
    }
    CHECK_THROWS_AS(xi2_series_eval(res, 1.9), PreconditionError); // ratio test gate
}

TEST_CASE("enumerate: pc estimate and subadditivity")
{
    EnumResult res = run(1, 1, 6, Model::tree);
    PcEstimate pc = pc_estimate(res);
    CHECK(pc.estimate == doctest::Approx(2.0));
    CHECK(pc.last_ratios.size() == 3);

    EnumResult res2 = run(2, 1, 6, Model::tree);
    CHECK(check_subadditivity(res2.t).ok);
    EnumResult res3 = run(2, 1, 5, Model::animal);
    CHECK(check_subadditivity(res3.t).ok);

    // trend: growing L pulls the estimate down toward the universal limit
    double prev = 1e9;
    for (int L : {1, 2, 3}) {
        EnumConfig cfg;
        cfg.d = 1;
        cfg.L = L;
        cfg.n_max = 8;
        cfg.model = Model::tree;
        PcEstimate e = pc_estimate(enumerate_polymers(cfg));
        CHECK(e.estimate < prev);
        prev = e.estimate;
    }
}

TEST_CASE("enumerate: budget refusal")
{
    EnumConfig cfg;
    cfg.d = 2;
    cfg.L = 1;
    cfg.n_max = 6;
    cfg.model = Model::tree;
    cfg.budget = 100;
    CHECK_THROWS_AS(enumerate_polymers(cfg), BudgetExceeded);
}

TEST_CASE("enumerate: for_each_polymer agrees with counts")
{
    EnumConfig cfg;
    cfg.d = 2;
    cfg.L = 1;
    cfg.n_max = 3;
    cfg.model = Model::animal;
    std::vector<long long> counts(4, 0);
    counts[0] = 1;
    std::set<std::vector<int>> seen;
    for_each_polymer(cfg, [&](const EdgeList& edges) {
        counts[edges.size()] += 1;
        auto key = test_oracle::polymer_key(edges, 2);
        CHECK(seen.insert(key).second); // no duplicates
    });
    EnumResult res = enumerate_polymers(cfg);
    for (int n = 0; n <= 3; ++n) CHECK(counts[static_cast<std::size_t>(n)] == res.rooted[static_cast<std::size_t>(n)]);
}

TEST_CASE("enumerate: simon-lieb inequality in exact arithmetic")
{
    // d=1: Lambda = {0}, x = 2, p = 1/4, trees up to n = 10
    SimonLiebReport rep = simon_lieb_check(1, 1, 10, Model::tree, parse_rational("1/4"),
                                           {make_point({0})}, make_point({2}));
    CHECK(rep.holds);
    // both sides from the interval closed forms: G(y) = sum (n+1-|y|) q^n, q = p/2
    {
        Rational q = parse_rational("1/8");
        auto G = [&](int y) {
            Rational acc(0);
            Rational qn(1);
            for (int n = 0; n <= 10; ++n) {
                const int c = n + 1 - std::abs(y) > 0 ? n + 1 - std::abs(y) : 0;
                acc += Rational(c) * qn;
                qn *= q;
            }
            return acc;
        };
        CHECK(rep.lhs == G(2));
        // RHS: y = 0, z = +-1: G(0) p D (G(1) + G(3)) with p D = (1/4)(1/2)
        Rational expect = G(0) * parse_rational("1/8") * (G(1) + G(3));
        CHECK(rep.rhs == expect);
    }

    // x inside Lambda is rejected
    CHECK_THROWS_AS(simon_lieb_check(1, 1, 5, Model::tree, parse_rational("1/4"),
                                     {make_point({0}), make_point({1})}, make_point({1})),
                    PreconditionError);

    // d=2 smaller variant of the acceptance configuration
    std::vector<Point> lambda;
    MultiIndexer box1 = MultiIndexer::box(2, 1);
    box1.for_each([&](long long, const Point& y) { lambda.push_back(y); });
    SimonLiebReport rep2 = simon_lieb_check(2, 1, 5, Model::tree, parse_rational("1/16"),
                                            lambda, make_point({3, 0}));
    CHECK(rep2.holds);
}
