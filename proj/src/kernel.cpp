#include "polylab/kernel.hpp"

#include <algorithm>
#include <stdexcept>

namespace polylab {

StepKernel make_kernel(int d, int L)
{
    if (d < 1) throw PreconditionError("kernel dimension must be >= 1");
    if (L < 1) throw PreconditionError("kernel range must be >= 1");
    if (d > kMaxDim) throw PreconditionError("kernel dimension exceeds kMaxDim");
    StepKernel k;
    k.d = d;
    k.L = L;
    long long box = 1;
    for (int i = 0; i < d; ++i) box *= 2LL * L + 1;
    k.Omega = box - 1;
    // sigma^2 = d * (2L+1)^{d-1} * (sum_{j=-L}^{L} j^2) / Omega; the origin
    // contributes nothing, so the full-box sum is exact.
    long long per_axis = static_cast<long long>(L) * (L + 1) * (2LL * L + 1) / 3;
    long long cross = box / (2LL * L + 1);
    k.sigma2 = static_cast<double>(d) * static_cast<double>(cross) *
               static_cast<double>(per_axis) / static_cast<double>(k.Omega);
    return k;
}

double dirichlet_sum(double t, int L)
{
    const double half = 0.5 * t;
    const double s = std::sin(half);
    if (std::abs(s) < 1e-9) {
        // removable singularity: 2L+1 - t^2 L(L+1)(2L+1)/6 + O(t^4)
        const double n = 2.0 * L + 1.0;
        return n * (1.0 - t * t * L * (L + 1.0) / 6.0);
    }
    return std::sin((L + 0.5) * t) / s;
}

double d_hat(const StepKernel& k, std::span<const double> kvec)
{
    if (static_cast<int>(kvec.size()) != k.d) throw PreconditionError("d_hat: wrong k dimension");
    double prod = 1.0;
    for (int i = 0; i < k.d; ++i) prod *= dirichlet_sum(kvec[i], k.L);
    return (prod - 1.0) / static_cast<double>(k.Omega);
}

double tilted_mass_sum(const StepKernel& k, double m)
{
    if (m < 0) throw PreconditionError("tilted_mass_sum: tilt must be >= 0");
    double axis;
    if (m < 1e-6) {
        // sinh((L+1/2)m)/sinh(m/2) = (2L+1) + m^2 L(L+1)(2L+1)/6 + O(m^4)
        const double n = 2.0 * k.L + 1.0;
        axis = n + m * m * k.L * (k.L + 1.0) * n / 6.0;
    } else {
        axis = std::sinh((k.L + 0.5) * m) / std::sinh(0.5 * m);
    }
    double cross = 1.0;
    for (int i = 1; i < k.d; ++i) cross *= 2.0 * k.L + 1.0;
    return (cross * axis - 1.0) / static_cast<double>(k.Omega);
}

double infrared_margin(const StepKernel& k, int grid_size)
{
    if (grid_size < 4) throw PreconditionError("infrared_margin: grid_size must be >= 4");
    const double pi = 3.14159265358979323846;
    std::vector<double> kv(k.d, 0.0);
    std::vector<int> idx(k.d, 0);
    const double L2 = static_cast<double>(k.L) * k.L;
    double best = std::numeric_limits<double>::infinity();
    // uniform grid k_j = -pi + 2 pi t / g, t = 0..g-1, skipping k = 0
    long long total = 1;
    for (int i = 0; i < k.d; ++i) total *= grid_size;
    for (long long cell = 0; cell < total; ++cell) {
        long long rem = cell;
        bool is_zero = true;
        double ksq = 0;
        for (int i = k.d - 1; i >= 0; --i) {
            int t = static_cast<int>(rem % grid_size);
            rem /= grid_size;
            double kj = -pi + 2.0 * pi * t / grid_size;
            // the t = g/2 row is exactly 0 for even g
            if (std::abs(kj) < 1e-15) kj = 0.0;
            kv[i] = kj;
            if (kj != 0.0) is_zero = false;
            ksq += kj * kj;
        }
        if (is_zero) continue;
        double num = 1.0 - d_hat(k, kv);
        double den = std::min(L2 * ksq, 1.0);
        best = std::min(best, num / den);
    }
    return best;
}

} // namespace polylab
