// Exact enumeration of spread-out lattice trees and animals on Z^d, producing
// two-point and susceptibility observables as truncated series with exact
// coefficients.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "polylab/exact.hpp"
#include "polylab/point.hpp"
#include "polylab/series.hpp"

namespace polylab {

enum class Model { tree, animal };

inline std::string model_name(Model m) { return m == Model::tree ? "tree" : "animal"; }

struct EnumConfig {
    int d = 1;
    int L = 1;
    int n_max = 5;
    Model model = Model::tree;
    std::uint64_t budget = 100000000ULL; // hard cap on generated polymers
    int threads = 0;                     // 0 = hardware concurrency
    int torus_r = 0;                     // when > 0, track torus-exclusion counts mod r
};

// Everything one enumeration pass produces. Counts are per bond number
// n = 0..n_max; the n = 0 entry is the single-vertex polymer.
struct EnumResult {
    EnumConfig cfg;
    long long Omega = 0;
    std::vector<long long> t;       // polymers modulo translation
    std::vector<long long> rooted;  // polymers containing the origin
    std::vector<long long> chi;     // sum_x c_n(x) = sum over rooted polymers of |V|
    std::vector<long long> xi2num;  // sum_x |x|^2 c_n(x)
    MultiIndexer box;               // radius n_max * L
    std::vector<std::vector<long long>> twopoint; // [n][site] = c_n(x)
    // torus-exclusion counts E_n(x) over Lambda_r (only when cfg.torus_r > 0):
    // per polymer, (#vertices in class x) * (#ordered distinct equivalent pairs)
    MultiIndexer torus_box;
    std::vector<std::vector<long long>> exclusion;

    long long twopoint_at(int n, const Point& x) const
    {
        if (n < 0 || n > cfg.n_max) return 0;
        if (!box.contains(x)) return 0;
        return twopoint[static_cast<std::size_t>(n)][static_cast<std::size_t>(box.encode(x))];
    }
};

EnumResult enumerate_polymers(const EnumConfig& cfg);

// Single-threaded enumeration handing every polymer (n >= 1) to the callback as
// an explicit edge list; endpoints are box coordinates.
using EdgeList = std::vector<std::pair<Point, Point>>;
void for_each_polymer(const EnumConfig& cfg, const std::function<void(const EdgeList&)>& fn);

IntSeries two_point_series(const EnumResult& res, const Point& x);
IntSeries one_point_series(const EnumResult& res);
IntSeries susceptibility_series(const EnumResult& res);
IntSeries xi2_numerator_series(const EnumResult& res);

// Real-coefficient tilt: a_n(m) = sum_x c_n(x) e^{m x_1}.
RealSeries tilted_susceptibility_series(const EnumResult& res, double m);

// xi_2(p) = sqrt(sum_x |x|^2 G_p(x) / chi(p)) from the truncated series; the
// coefficient ratio test must pass at p.
double xi2_series_eval(const EnumResult& res, double p);

struct PcEstimate {
    double estimate = 0;              // Omega / (t_n / t_{n-1}) at n = n_max
    std::vector<double> last_ratios;  // up to three trailing ratios, for trend
};
PcEstimate pc_estimate(const EnumResult& res);

struct SubadditivityReport {
    bool ok = true;
    std::vector<std::pair<int, int>> violations; // (n, m) with t_n t_m > t_{n+m+1}
};
SubadditivityReport check_subadditivity(const std::vector<long long>& t);

struct SimonLiebReport {
    Rational lhs;  // G_p(x), truncated
    Rational rhs;  // sum_{y in Lambda, z not in Lambda} G_p(y) p D(z-y) G_p(x-z)
    bool holds = false;
    int n_max = 0;
};

// Exact-arithmetic Simon-Lieb inequality check with every factor truncated at
// n_max. Lambda must contain 0 and not x.
SimonLiebReport simon_lieb_check(int d, int L, int n_max, Model model, const Rational& p,
                                 const std::vector<Point>& Lambda, const Point& x,
                                 std::uint64_t budget = 100000000ULL);

} // namespace polylab
