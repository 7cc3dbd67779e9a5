// Lattice-field container and convolution engine for Z^d boxes and tori.
#pragma once

#include <span>
#include <vector>

#include "polylab/kernel.hpp"
#include "polylab/point.hpp"

namespace polylab {

enum class Geom { box, torus };

// Real values on a centred box [-R,R]^d (assumed negligible outside) or on a
// period-R torus indexed by the Lambda_R representatives. Fields are treated
// as immutable once filled.
struct Field {
    Geom geom = Geom::box;
    int d = 0;
    int extent = 0; // box: radius; torus: period
    MultiIndexer idx;
    std::vector<double> v;

    static Field box(int d, int radius)
    {
        Field f;
        f.geom = Geom::box;
        f.d = d;
        f.extent = radius;
        f.idx = MultiIndexer::box(d, radius);
        f.v.assign(static_cast<std::size_t>(f.idx.total), 0.0);
        return f;
    }

    static Field torus(int d, int period)
    {
        Field f;
        f.geom = Geom::torus;
        f.d = d;
        f.extent = period;
        f.idx = MultiIndexer::torus(d, period);
        f.v.assign(static_cast<std::size_t>(f.idx.total), 0.0);
        return f;
    }

    // Value at p; box fields read 0 outside the box, torus fields wrap.
    double at(const Point& p) const
    {
        if (geom == Geom::box) {
            if (!idx.contains(p)) return 0.0;
            return v[static_cast<std::size_t>(idx.encode(p))];
        }
        return v[static_cast<std::size_t>(idx.encode(torus_rep_point(p, extent, d)))];
    }

    double& ref(const Point& p)
    {
        if (geom == Geom::torus)
            return v[static_cast<std::size_t>(idx.encode(torus_rep_point(p, extent, d)))];
        return v[static_cast<std::size_t>(idx.encode(p))];
    }
};

Field delta_field(int d, int radius);

// Materializes w(x) * p * D(x) on the radius-L box; tilt applies the symmetrized
// weight cosh(m x_1).
Field kernel_field(const StepKernel& k, double p, double tilt_m = 0.0);

// Nearest-neighbour step distribution P = 1/(2d) on |x| = 1, as a radius-1 box field.
Field nn_field(int d);

// (f*g)(x) = sum_y f(y) g(x-y) over stored supports. result_radius < 0 keeps
// max(R_f, R_g); larger values grow the box (at most R_f + R_g is meaningful).
Field zd_convolve(const Field& f, const Field& g, int result_radius = -1);

// Cyclic convolution on a common period; `direct` forces the O(R^{2d}) path,
// otherwise a DFT path is used once R^d > 4096.
Field torus_convolve(const Field& f, const Field& g);
Field torus_convolve_direct(const Field& f, const Field& g);
Field torus_convolve_dft(const Field& f, const Field& g);

// x -> sum_u f(x + R u) over all u with x + R u inside the box.
Field wrap_sum(const Field& f, int period);

// sum_x |x|^a e^{m x_1} f(x) over the stored support (|x| Euclidean; the a > 0
// convention gives the origin a zero contribution).
double weighted_sum(const Field& f, double a, double m);

// Restricts a torus field to the centred box of the given radius
// (radius <= floor((period-1)/2)).
Field to_box(const Field& torus_field, int radius);

// Least-squares slope of -log f(n e_1) against n over n in [n_lo, n_hi].
double axis_decay_fit(const Field& f, int n_lo, int n_hi);
double axis_decay_fit(std::span<const double> axis_values, int n_lo, int n_hi);

} // namespace polylab
