#include <doctest.h>

#include <cmath>
#include <random>

#include "polylab/field.hpp"
#include "polylab/greens.hpp"

using namespace polylab;

TEST_CASE("greens: nearest-neighbour mass closed form")
{
    CHECK(nn_mass(1.0, 3).m == doctest::Approx(0.0));
    CHECK(std::isinf(nn_mass(1.0, 3).xi));
    CHECK(nn_mass(0.5, 1).m == doctest::Approx(std::log(2.0 + std::sqrt(3.0))).epsilon(1e-14));
    // m^2/(1-mu) -> 2d as mu -> 1
    for (int d : {1, 2, 3}) {
        const double mu = 0.9999;
        const double m = nn_mass(mu, d).m;
        CHECK(m * m / (1.0 - mu) == doctest::Approx(2.0 * d).epsilon(2e-4));
    }
    CHECK_THROWS_AS(nn_mass(0.0, 1), PreconditionError);
    CHECK_THROWS_AS(nn_mass(-0.3, 2), PreconditionError);
}

TEST_CASE("greens: spread-out mass root find")
{
    StepKernel k11 = make_kernel(1, 1);
    for (double z : {0.5, 0.8, 0.99}) {
        MassResult r = so_mass(k11, z);
        CHECK(r.m == doctest::Approx(std::acosh(1.0 / z)).epsilon(1e-13));
        CHECK(r.residual <= 1e-12);
    }
    // z -> 1: m -> 0
    CHECK(so_mass(k11, 0.99999).m < 5e-2);
    // monotone decreasing in z for several kernels
    for (int d : {1, 2, 3})
        for (int L : {1, 2}) {
            StepKernel k = make_kernel(d, L);
            double prev = so_mass(k, 0.2).m;
            for (double z : {0.4, 0.6, 0.8, 0.95}) {
                const double cur = so_mass(k, z).m;
                CHECK(cur < prev);
                prev = cur;
            }
        }
    CHECK_THROWS_AS(so_mass(k11, 0.0), PreconditionError);
    CHECK_THROWS_AS(so_mass(k11, 1.0), PreconditionError);
}

TEST_CASE("greens: green_field basics")
{
    StepKernel k11 = make_kernel(1, 1);
    // z = 0 gives the delta
    Field f0 = green_field(k11, 1e-300, 64);
    CHECK(f0.at(zero_point()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f0.at(make_point({1})) == doctest::Approx(0.0).epsilon(1e-12));

    // sum of all values = 1/(1-z) (k = 0 mode)
    for (double z : {0.3, 0.7}) {
        Field f = green_field(k11, z, 128);
        CHECK(weighted_sum(f, 0, 0) == doctest::Approx(1.0 / (1.0 - z)).epsilon(1e-10));
    }

    // d=1 nearest-neighbour z=0.5: S(0) = 1/sqrt(1-z^2), with the return series
    // sum_j C(2j,j) (z/2)^{2j} as an independent oracle
    Field nn = green_field_nn(1, 0.5, 256);
    CHECK(nn.at(zero_point()) == doctest::Approx(1.0 / std::sqrt(0.75)).epsilon(1e-10));
    {
        long double acc = 0.0L, term = 1.0L; // term = C(2j,j) (z/2)^{2j}
        for (int j = 0; j <= 80; ++j) {
            acc += term;
            term *= (2.0L * j + 1) * (2.0L * j + 2) / ((j + 1.0L) * (j + 1.0L)) * 0.0625L;
        }
        CHECK(nn.at(zero_point()) == doctest::Approx(static_cast<double>(acc)).epsilon(1e-9));
    }

    // symmetry under x -> -x and coordinate permutation
    StepKernel k22 = make_kernel(2, 2);
    Field g2 = green_field(k22, 0.6, 32);
    g2.idx.for_each([&](long long i, const Point& x) {
        CHECK(g2.v[static_cast<std::size_t>(i)] ==
              doctest::Approx(g2.at(negate(x, 2))).epsilon(1e-10));
        Point swapped{};
        swapped[0] = x[1];
        swapped[1] = x[0];
        CHECK(g2.v[static_cast<std::size_t>(i)] == doctest::Approx(g2.at(swapped)).epsilon(1e-10));
    });

    CHECK_THROWS_AS(green_field(k11, 1.0, 64), PreconditionError);
    CHECK_THROWS_AS(green_field(k11, 0.5, 7), PreconditionError);
}

TEST_CASE("greens: pole axis values agree with the grid inversion")
{
    // the grid path wraps longitudinally as well, so N is scaled with the mass
    // to push that wrap below the comparison tolerance
    for (int d : {1, 2, 3})
        for (int L : {1, 2, 3}) {
            StepKernel k = make_kernel(d, L);
            const double z = 0.8;
            const double m = so_mass(k, z).m;
            int N = 24 + static_cast<int>(std::ceil(30.0 / m));
            if (N % 2) ++N;
            auto pole = green_axis_poles(k, z, N, 12);
            auto grid = green_axis_grid(k, z, N, 12);
            for (int n = 0; n < 12; ++n)
                CHECK(pole[static_cast<std::size_t>(n)] ==
                      doctest::Approx(grid[static_cast<std::size_t>(n)]).epsilon(1e-9));
        }

    // N divisible by 3 puts exact Dirichlet zeros on the transverse grid for
    // L = 1, exercising the near-degenerate expansion branch
    for (int d : {2, 3}) {
        StepKernel k = make_kernel(d, 1);
        auto pole = green_axis_poles(k, 0.8, 48, 9);
        auto grid = green_axis_grid(k, 0.8, 48, 9);
        for (int n = 0; n < 9; ++n) {
            CHECK(std::isfinite(pole[static_cast<std::size_t>(n)]));
            CHECK(pole[static_cast<std::size_t>(n)] ==
                  doctest::Approx(grid[static_cast<std::size_t>(n)]).epsilon(1e-9));
        }
    }
}

TEST_CASE("greens: decomposition parameters")
{
    // d=1, L=1, z=0.8: sigma^2 = 1, so lambda = 1, mu = 0.8, E identically 0
    StepKernel k11 = make_kernel(1, 1);
    DecompositionParams p = decomposition_params(k11, 0.8);
    CHECK(p.lambda == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.mu == doctest::Approx(0.8).epsilon(1e-14));
    p.E.idx.for_each([&](long long i, const Point&) {
        CHECK(std::abs(p.E.v[static_cast<std::size_t>(i)]) < 1e-15);
    });

    // z = 1: lambda = 1/sigma^2, mu = 1
    StepKernel k32 = make_kernel(3, 2);
    DecompositionParams q = decomposition_params(k32, 1.0);
    CHECK(q.lambda == doctest::Approx(1.0 / k32.sigma2).epsilon(1e-13));
    CHECK(q.mu == doctest::Approx(1.0).epsilon(1e-14));

    // vanishing moments across random (d, L, z)
    std::mt19937 rng(41);
    std::uniform_int_distribution<int> dd(1, 4), ll(1, 5);
    std::uniform_real_distribution<double> zz(0.05, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        StepKernel k = make_kernel(dd(rng), ll(rng));
        DecompositionParams r = decomposition_params(k, zz(rng));
        CHECK(std::abs(r.moment0) <= 1e-12);
        CHECK(std::abs(r.moment2) <= 1e-10);
        CHECK(r.mu > 0.0);
        CHECK(r.mu <= 1.0);
    }
}

TEST_CASE("greens: phi remainder")
{
    StepKernel k11 = make_kernel(1, 1);
    const double z = 0.6;
    const int N = 64;
    PhiRemainder pr = phi_remainder(k11, z, N);
    // with L=1, d=1 the nearest-neighbour walk at mu_z = z is the same walk:
    // phi = S - delta - z S pointwise, and also z(D*S - S)
    Field S = green_field(k11, z, N);
    Field D = kernel_field(k11, 1.0);
    pr.phi.idx.for_each([&](long long i, const Point& x) {
        const double s = S.v[static_cast<std::size_t>(i)];
        double expect = (1.0 - z) * s;
        if (norm_inf(x, 1) == 0) expect -= 1.0;
        CHECK(pr.phi.v[static_cast<std::size_t>(i)] == doctest::Approx(expect).epsilon(1e-11));
        // convolution route: z(D*S - S)(x)
        double ds = 0.0;
        D.idx.for_each([&](long long di, const Point& y) {
            ds += D.v[static_cast<std::size_t>(di)] * S.at(sub(x, y, 1));
        });
        CHECK(pr.phi.v[static_cast<std::size_t>(i)] ==
              doctest::Approx(z * (ds - s)).epsilon(1e-11));
    });

    // z -> 0: phi -> 0
    PhiRemainder small = phi_remainder(k11, 1e-12, 32);
    CHECK(small.sup_stat <= 1e-10);

    // larger L shrinks the remainder statistic (trend, d=3)
    StepKernel k33 = make_kernel(3, 3);
    StepKernel k35 = make_kernel(3, 5);
    const double s3 = phi_remainder(k33, 0.95, 96).sup_stat;
    const double s5 = phi_remainder(k35, 0.95, 128).sup_stat;
    CHECK(s5 < s3);
}

TEST_CASE("greens: mass-susceptibility product")
{
    StepKernel k11 = make_kernel(1, 1);
    auto rows = verify_mass_chi_product(k11, {0.5, 0.99, 0.999});
    // closed form at z: ratio = acosh(1/z)^2 / (2 (1-z))
    for (const auto& row : rows) {
        const double m = std::acosh(1.0 / row.z);
        CHECK(row.ratio == doctest::Approx(m * m / (2.0 * (1.0 - row.z))).epsilon(1e-10));
    }
    CHECK(rows[0].ratio > 1.0);
    CHECK(std::abs(rows[1].ratio - 1.0) < 0.02);
    CHECK(std::abs(rows[2].ratio - 1.0) < 0.002);
}

TEST_CASE("greens: decay rate matches the mass")
{
    StepKernel k11 = make_kernel(1, 1);
    DecayReport rep = verify_decay_bound(k11, 0.8, 512, 20, 120);
    CHECK(rep.mass == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-6));

    StepKernel k31 = make_kernel(3, 1);
    DecayReport r3 = verify_decay_bound(k31, 0.9);
    CHECK(std::abs(r3.ratio - 1.0) < 0.02);
    CHECK(r3.N >= static_cast<int>(40.0 / r3.mass));
}
