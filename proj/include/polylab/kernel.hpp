// Spread-out step distribution D (uniform on 0 < ||x||_inf <= L) and its
// Fourier-side quantities.
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "polylab/point.hpp"

namespace polylab {

struct StepKernel {
    int d = 0;          // dimension
    int L = 0;          // spread-out range
    long long Omega = 0; // degree (2L+1)^d - 1
    double sigma2 = 0;   // variance sum_x |x|^2 D(x)
};

StepKernel make_kernel(int d, int L);

// Dirichlet kernel sum_{j=-L}^{L} cos(j t); equals 2L+1 at t = 0.
double dirichlet_sum(double t, int L);

// Fourier transform D_hat(k) = sum_x D(x) e^{ik.x} for k in (-pi,pi]^d.
// Real by symmetry, |D_hat| <= 1, computed by the closed product formula.
double d_hat(const StepKernel& k, std::span<const double> kvec);

// Tilted mass sum D_hat^{(m)}(0) = sum_x D(x) e^{m x_1}; equals 1 at m = 0 and
// is increasing and convex in m.
double tilted_mass_sum(const StepKernel& k, double m);

// Minimum over a uniform grid of (-pi,pi]^d \ {0} of (1 - D_hat(k)) / (L^2|k|^2 ^ 1).
// Positive for every (d, L); the reported margin is the empirical infrared constant.
double infrared_margin(const StepKernel& k, int grid_size);

// Visits every support point of D (0 < ||x||_inf <= L).
template <class F>
void for_each_support(const StepKernel& k, F&& fn)
{
    MultiIndexer box = MultiIndexer::box(k.d, k.L);
    box.for_each([&](long long, const Point& p) {
        if (norm_inf(p, k.d) > 0) fn(p);
    });
}

} // namespace polylab
