#include "polylab/field.hpp"

#include <cmath>
#include <complex>

namespace polylab {

Field delta_field(int d, int radius)
{
    Field f = Field::box(d, radius);
    f.ref(zero_point()) = 1.0;
    return f;
}

Field kernel_field(const StepKernel& k, double p, double tilt_m)
{
    Field f = Field::box(k.d, k.L);
    const double w = p / static_cast<double>(k.Omega);
    for_each_support(k, [&](const Point& x) {
        f.ref(x) = w * std::cosh(tilt_m * x[0]);
    });
    return f;
}

Field nn_field(int d)
{
    Field f = Field::box(d, 1);
    for (int i = 0; i < d; ++i) {
        Point e{};
        e[i] = 1;
        f.ref(e) = 1.0 / (2.0 * d);
        e[i] = -1;
        f.ref(e) = 1.0 / (2.0 * d);
    }
    return f;
}

Field zd_convolve(const Field& f, const Field& g, int result_radius)
{
    if (f.geom != Geom::box || g.geom != Geom::box)
        throw PreconditionError("zd_convolve: box fields required");
    if (f.d != g.d) throw PreconditionError("zd_convolve: dimension mismatch");
    const int R = result_radius >= 0 ? result_radius : std::max(f.extent, g.extent);
    Field out = Field::box(f.d, R);
    // fixed row-major summation order over y per output point
    out.idx.for_each([&](long long oi, const Point& x) {
        long double acc = 0.0L;
        f.idx.for_each([&](long long fi, const Point& y) {
            const double fv = f.v[static_cast<std::size_t>(fi)];
            if (fv == 0.0) return;
            acc += static_cast<long double>(fv) * g.at(sub(x, y, f.d));
        });
        out.v[static_cast<std::size_t>(oi)] = static_cast<double>(acc);
    });
    return out;
}

Field torus_convolve_direct(const Field& f, const Field& g)
{
    if (f.geom != Geom::torus || g.geom != Geom::torus)
        throw PreconditionError("torus_convolve: torus fields required");
    if (f.d != g.d || f.extent != g.extent)
        throw PreconditionError("torus_convolve: period mismatch");
    Field out = Field::torus(f.d, f.extent);
    out.idx.for_each([&](long long oi, const Point& x) {
        long double acc = 0.0L;
        f.idx.for_each([&](long long fi, const Point& y) {
            acc += static_cast<long double>(f.v[static_cast<std::size_t>(fi)]) *
                   g.at(sub(x, y, f.d));
        });
        out.v[static_cast<std::size_t>(oi)] = static_cast<double>(acc);
    });
    return out;
}

namespace {

// In-place inverse/forward transform along each axis; sign is the exponent sign.
void dft_all_axes(std::vector<std::complex<double>>& a, const MultiIndexer& idx, int sign)
{
    const int d = idx.d;
    const int n = idx.len[0]; // all axes share the period
    const double pi = 3.14159265358979323846;
    std::vector<std::complex<double>> twiddle(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t)
        twiddle[static_cast<std::size_t>(t)] =
            std::polar(1.0, sign * 2.0 * pi * t / n);
    std::vector<std::complex<double>> line(static_cast<std::size_t>(n));
    for (int axis = 0; axis < d; ++axis) {
        const long long stride = idx.stride[axis];
        const long long lines = idx.total / n;
        for (long long li = 0; li < lines; ++li) {
            // base offset of this line: expand li over the other axes
            long long base = 0, rem = li;
            for (int i = d - 1; i >= 0; --i) {
                if (i == axis) continue;
                long long presence = rem % idx.len[i];
                rem /= idx.len[i];
                base += presence * idx.stride[i];
            }
            for (int t = 0; t < n; ++t) line[static_cast<std::size_t>(t)] = a[static_cast<std::size_t>(base + t * stride)];
            for (int k = 0; k < n; ++k) {
                std::complex<double> acc = 0.0;
                long long tw = 0;
                for (int t = 0; t < n; ++t) {
                    acc += line[static_cast<std::size_t>(t)] * twiddle[static_cast<std::size_t>(tw)];
                    tw += k;
                    if (tw >= n) tw -= n;
                }
                a[static_cast<std::size_t>(base + k * stride)] = acc;
            }
        }
    }
}

} // namespace

Field torus_convolve_dft(const Field& f, const Field& g)
{
    if (f.geom != Geom::torus || g.geom != Geom::torus)
        throw PreconditionError("torus_convolve: torus fields required");
    if (f.d != g.d || f.extent != g.extent)
        throw PreconditionError("torus_convolve: period mismatch");
    const std::size_t n = f.v.size();
    std::vector<std::complex<double>> fa(n), ga(n);
    for (std::size_t i = 0; i < n; ++i) {
        fa[i] = f.v[i];
        ga[i] = g.v[i];
    }
    dft_all_axes(fa, f.idx, +1);
    dft_all_axes(ga, f.idx, +1);
    for (std::size_t i = 0; i < n; ++i) fa[i] *= ga[i];
    dft_all_axes(fa, f.idx, -1);
    Field out = Field::torus(f.d, f.extent);
    const double scale = 1.0 / static_cast<double>(f.idx.total);
    // storage uses the Lambda_R labels (offset -floor(R/2) per axis); the plain
    // cyclic convolution above lives in array positions, so the result sits at
    // position (p - off) mod R
    const int R = f.extent;
    out.idx.for_each([&](long long oi, const Point&) {
        long long rem = oi, src = 0;
        for (int i = 0; i < f.d; ++i) {
            const long long p = rem / f.idx.stride[i];
            rem %= f.idx.stride[i];
            long long q = (p - f.idx.off[i]) % R;
            if (q < 0) q += R;
            src += q * f.idx.stride[i];
        }
        out.v[static_cast<std::size_t>(oi)] = fa[static_cast<std::size_t>(src)].real() * scale;
    });
    return out;
}

Field torus_convolve(const Field& f, const Field& g)
{
    if (f.geom != Geom::torus || g.geom != Geom::torus)
        throw PreconditionError("torus_convolve: torus fields required");
    if (f.d != g.d || f.extent != g.extent)
        throw PreconditionError("torus_convolve: period mismatch");
    if (f.idx.total > 4096) return torus_convolve_dft(f, g);
    return torus_convolve_direct(f, g);
}

Field wrap_sum(const Field& f, int period)
{
    if (f.geom != Geom::box) throw PreconditionError("wrap_sum: box field required");
    if (period < 1 || f.extent < period)
        throw PreconditionError("wrap_sum: box radius must be >= period");
    Field out = Field::torus(f.d, period);
    f.idx.for_each([&](long long fi, const Point& x) {
        out.ref(torus_rep_point(x, period, f.d)) += f.v[static_cast<std::size_t>(fi)];
    });
    return out;
}

double weighted_sum(const Field& f, double a, double m)
{
    long double acc = 0.0L;
    f.idx.for_each([&](long long fi, const Point& x) {
        const double fv = f.v[static_cast<std::size_t>(fi)];
        if (fv == 0.0) return;
        double w = 1.0;
        if (a != 0.0) {
            const double r2 = static_cast<double>(norm_sq(x, f.d));
            w = (r2 == 0.0) ? 0.0 : std::pow(r2, 0.5 * a);
        }
        if (m != 0.0) w *= std::exp(m * x[0]);
        acc += static_cast<long double>(w) * fv;
    });
    return static_cast<double>(acc);
}

Field to_box(const Field& torus_field, int radius)
{
    if (torus_field.geom != Geom::torus) throw PreconditionError("to_box: torus field required");
    if (2 * radius + 1 > torus_field.extent)
        throw PreconditionError("to_box: radius too large for period");
    Field out = Field::box(torus_field.d, radius);
    out.idx.for_each([&](long long oi, const Point& x) {
        out.v[static_cast<std::size_t>(oi)] = torus_field.at(x);
    });
    return out;
}

double axis_decay_fit(std::span<const double> axis_values, int n_lo, int n_hi)
{
    if (n_lo > n_hi) throw PreconditionError("axis_decay_fit: empty window");
    if (n_hi >= static_cast<int>(axis_values.size()))
        throw PreconditionError("axis_decay_fit: window exceeds stored axis");
    const int count = n_hi - n_lo + 1;
    long double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int n = n_lo; n <= n_hi; ++n) {
        const double fv = axis_values[static_cast<std::size_t>(n)];
        if (!(fv > 0.0)) throw PreconditionError("axis_decay_fit: nonpositive value in window");
        const long double y = -std::log(fv);
        sx += n;
        sy += y;
        sxx += static_cast<long double>(n) * n;
        sxy += n * y;
    }
    const long double denom = count * sxx - sx * sx;
    if (denom == 0) return 0.0;
    return static_cast<double>((count * sxy - sx * sy) / denom);
}

double axis_decay_fit(const Field& f, int n_lo, int n_hi)
{
    std::vector<double> axis(static_cast<std::size_t>(n_hi) + 1, 0.0);
    for (int n = 0; n <= n_hi; ++n) {
        Point p{};
        p[0] = n;
        axis[static_cast<std::size_t>(n)] = f.at(p);
    }
    return axis_decay_fit(std::span<const double>(axis), n_lo, n_hi);
}

} // namespace polylab
