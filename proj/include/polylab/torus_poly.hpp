// Torus polymers, the canonical lift to Z^d, and the sandwich machinery
// psi - E <= G^T - G <= psi verified in exact arithmetic.
#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "polylab/enumerate.hpp"
#include "polylab/exact.hpp"
#include "polylab/field.hpp"
#include "polylab/kernel.hpp"
#include "polylab/point.hpp"
#include "polylab/series.hpp"

namespace polylab {

// Edge sets are kept normalized: each edge as (a, b) with a < b lexicographically,
// the list sorted. Z^d polymers use plain coordinates, torus polymers the
// Lambda_r representatives.
struct Polymer {
    int d = 0;
    int L = 0;
    Model model = Model::tree;
    EdgeList edges;
};

struct TorusPolymer {
    int d = 0;
    int L = 0;
    int r = 0;
    Model model = Model::tree;
    EdgeList edges;
};

void normalize_edges(EdgeList& edges, int d);
std::vector<int> edge_list_key(const EdgeList& edges, int d);

struct LiftResult {
    Polymer zd_polymer;
    TorusPolymer base;
    bool faithful = false; // lift contains no pair of torus-equivalent vertices
};

// Reduces vertices mod r into Lambda_r; parallel edges collapse.
TorusPolymer project_polymer(const Polymer& poly, int r);

// Lift of a torus walk from 0: increments copied via the Lambda_r representative.
std::vector<Point> lift_walk(const std::vector<Point>& walk, int d, int L, int r);

// Lift of a torus tree containing 0: union of the lifts of the unique tree
// paths from 0.
LiftResult lift_tree(const TorusPolymer& tree);

// Lift of a torus animal containing 0: canonical spanning tree grown by the
// first-vertex/first-edge rule under the lexicographic orders, lifted, plus the
// excess edges re-attached at their lifted lower endpoints.
LiftResult lift_animal(const TorusPolymer& animal);

struct TorusEnumConfig {
    int d = 1;
    int L = 1;
    int r = 3;
    int n_max = 5;
    Model model = Model::tree;
    std::uint64_t budget = 100000000ULL;
    int threads = 0;
};

struct TorusEnumResult {
    TorusEnumConfig cfg;
    long long Omega = 0;
    MultiIndexer box; // Lambda_r
    std::vector<long long> chi;                   // sum_x coefficients
    std::vector<std::vector<long long>> twopoint; // [n][site]

    long long twopoint_at(int n, const Point& x) const
    {
        if (n < 0 || n > cfg.n_max) return 0;
        return twopoint[static_cast<std::size_t>(n)]
                       [static_cast<std::size_t>(box.encode(torus_rep_point(x, cfg.r, cfg.d)))];
    }
};

TorusEnumResult enumerate_torus(const TorusEnumConfig& cfg);

// Single-threaded torus enumeration handing out explicit edge lists.
void for_each_torus_polymer(const TorusEnumConfig& cfg,
                            const std::function<void(const EdgeList&)>& fn);

IntSeries torus_two_point_series(const TorusEnumResult& res, const Point& x);

// psi_n(x) = sum over x' = x + r u, x' != x of c_n(x'); requires a Z^d run whose
// box covers the reach n_max * L.
IntSeries psi_series(const EnumResult& zd, int r, const Point& x);

// E_n(x): per polymer, (#vertices equivalent to x) * (#ordered distinct
// equivalent vertex pairs); requires enumerate_polymers with cfg.torus_r = r.
IntSeries big_e_series(const EnumResult& zd, const Point& x);

struct SandwichRow {
    int n = 0;
    long long g = 0, g_torus = 0, psi = 0, e = 0;
};

struct SandwichReport {
    std::vector<SandwichRow> rows;
    bool lower_ok = true; // psi - E <= G^T - G per coefficient
    bool upper_ok = true; // G^T - G <= psi per coefficient
    bool trivial = false; // r beyond reach: all torus corrections vanish
    Rational lhs_at_p, mid_at_p, rhs_at_p; // evaluated inequalities at rational p
    bool eval_ok = true;
};

SandwichReport sandwich_check(int d, int L, int r, int n_max, Model model, const Point& x,
                              const Rational& p, std::uint64_t budget = 100000000ULL,
                              int threads = 0);

struct WrapIdentityReport {
    int fold = 0;
    double max_discrepancy = 0; // two computation paths for Gamma^{*k}
    int box_radius = 0;
};

// Gamma = wrap_sum(S_z, r); compares Gamma^{star k} with the wrapped Z^d
// convolution power sum_u S^{*k}(x + r u).
WrapIdentityReport wrap_identity_check(const StepKernel& k, double z, int r, int fold);

} // namespace polylab
