#include "polylab/greens.hpp"

#include <cmath>
#include <complex>
#include <limits>

namespace polylab {

MassResult nn_mass(double mu, int d)
{
    if (!(mu > 0.0) || mu > 1.0) throw PreconditionError("nn_mass: mu must be in (0,1]");
    if (d < 1) throw PreconditionError("nn_mass: d must be >= 1");
    MassResult r;
    r.method = MassMethod::closed_form;
    r.m = std::acosh(1.0 + d * (1.0 - mu) / mu);
    r.xi = r.m > 0 ? 1.0 / r.m : std::numeric_limits<double>::infinity();
    r.residual = 0.0;
    return r;
}

MassResult so_mass(const StepKernel& k, double z)
{
    if (!(z > 0.0) || z >= 1.0) throw PreconditionError("so_mass: z must be in (0,1)");
    // f(m) = z D_hat^{(m)}(0) - 1 is increasing from z - 1 < 0; double the upper
    // end until a sign change, then bisect.
    auto f = [&](double m) { return z * tilted_mass_sum(k, m) - 1.0; };
    double lo = 1e-12, hi = 1.0;
    int guard = 0;
    while (f(hi) <= 0.0) {
        hi *= 2.0;
        if (++guard > 200) throw std::runtime_error("so_mass: bracketing failed");
    }
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    MassResult r;
    r.method = MassMethod::root_find;
    r.m = 0.5 * (lo + hi);
    r.xi = r.m > 0 ? 1.0 / r.m : std::numeric_limits<double>::infinity();
    r.residual = std::abs(f(r.m));
    return r;
}

int auto_period(double m)
{
    int n = std::max(64, static_cast<int>(std::ceil(40.0 / m)));
    int p = 1;
    while (p < n) p *= 2;
    return p;
}

namespace {

// Shared grid inversion: spectral(k) must return K_hat(k) given per-axis angles.
template <class SpectralFn>
Field invert_on_torus(int d, double z, int N, SpectralFn&& khat)
{
    if (N < 8 || N % 2 != 0) throw PreconditionError("green_field: N must be even and >= 8");
    if (!(z < 1.0)) throw PreconditionError("green_field: z must be < 1");
    MultiIndexer grid = MultiIndexer::torus(d, N);
    const double pi = 3.14159265358979323846;
    std::vector<std::complex<double>> a(static_cast<std::size_t>(grid.total));
    // fill spectral values 1/(1 - z K_hat) by array position: k_j = 2 pi t_j / N,
    // t_j = 0..N-1
    std::vector<double> kv(static_cast<std::size_t>(d));
    for (long long gi = 0; gi < grid.total; ++gi) {
        long long rem = gi;
        for (int i = 0; i < d; ++i) {
            kv[static_cast<std::size_t>(i)] = 2.0 * pi * (rem / grid.stride[i]) / N;
            rem %= grid.stride[i];
        }
        const double den = 1.0 - z * khat(kv);
        if (den <= 0.0)
            throw PreconditionError("green_field: 1 - z K_hat(k) <= 0 on the grid");
        a[static_cast<std::size_t>(gi)] = 1.0 / den;
    }
    // inverse transform along each axis
    std::vector<std::complex<double>> twiddle(static_cast<std::size_t>(N));
    for (int t = 0; t < N; ++t)
        twiddle[static_cast<std::size_t>(t)] = std::polar(1.0, -2.0 * pi * t / N);
    std::vector<std::complex<double>> line(static_cast<std::size_t>(N));
    for (int axis = 0; axis < d; ++axis) {
        const long long stride = grid.stride[axis];
        const long long lines = grid.total / N;
        for (long long li = 0; li < lines; ++li) {
            long long base = 0, rem = li;
            for (int i = d - 1; i >= 0; --i) {
                if (i == axis) continue;
                base += (rem % N) * grid.stride[i];
                rem /= N;
            }
            for (int t = 0; t < N; ++t)
                line[static_cast<std::size_t>(t)] = a[static_cast<std::size_t>(base + t * stride)];
            for (int x = 0; x < N; ++x) {
                std::complex<double> acc = 0.0;
                long long tw = 0;
                for (int t = 0; t < N; ++t) {
                    acc += line[static_cast<std::size_t>(t)] * twiddle[static_cast<std::size_t>(tw)];
                    tw += x;
                    if (tw >= N) tw -= N;
                }
                a[static_cast<std::size_t>(base + x * stride)] = acc;
            }
        }
    }
    Field out = Field::torus(d, N);
    const double scale = 1.0 / static_cast<double>(grid.total);
    // array position t holds the value at lattice site x = t (mod N)
    for (long long gi = 0; gi < grid.total; ++gi) {
        long long rem = gi;
        Point site{};
        for (int i = 0; i < d; ++i) {
            site[i] = static_cast<int>(rem / grid.stride[i]);
            rem %= grid.stride[i];
        }
        out.ref(torus_rep_point(site, N, d)) = a[static_cast<std::size_t>(gi)].real() * scale;
    }
    return out;
}

} // namespace

Field green_field(const StepKernel& k, double z, int N)
{
    return invert_on_torus(k.d, z, N, [&](const std::vector<double>& kv) {
        return d_hat(k, kv);
    });
}

Field green_field_nn(int d, double mu, int N)
{
    return invert_on_torus(d, mu, N, [&](const std::vector<double>& kv) {
        double s = 0;
        for (int i = 0; i < d; ++i) s += std::cos(kv[static_cast<std::size_t>(i)]);
        return s / d;
    });
}

namespace {

// Roots of a complex-coefficient polynomial by Durand-Kerner iteration.
std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeff)
{
    const int deg = static_cast<int>(coeff.size()) - 1;
    std::vector<std::complex<double>> c(coeff.begin(), coeff.end());
    // normalize to monic
    for (int i = 0; i <= deg; ++i) c[static_cast<std::size_t>(i)] /= coeff[static_cast<std::size_t>(deg)];
    std::vector<std::complex<double>> r(static_cast<std::size_t>(deg));
    for (int i = 0; i < deg; ++i)
        r[static_cast<std::size_t>(i)] = std::polar(0.7, 2.0 * 3.14159265358979323846 * i / deg + 0.4);
    for (int it = 0; it < 200; ++it) {
        double moved = 0.0;
        for (int i = 0; i < deg; ++i) {
            std::complex<double> p = c[static_cast<std::size_t>(deg)];
            for (int j = deg - 1; j >= 0; --j) p = p * r[static_cast<std::size_t>(i)] + c[static_cast<std::size_t>(j)];
            std::complex<double> q = 1.0;
            for (int j = 0; j < deg; ++j) {
                if (j == i) continue;
                q *= (r[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(j)]);
            }
            const std::complex<double> delta = p / q;
            r[static_cast<std::size_t>(i)] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14) break;
    }
    return r;
}

} // namespace

// S_z(n e_1) = N^{-(d-1)} sum_q u_q(n) where u_q is a one-dimensional lattice
// Green function with transverse weight c(q) = prod_{j>=2} Dirichlet(q_j). With
// w = e^{ik_1} the longitudinal denominator is R(w)/(Omega w^L), where
//   R(w) = (Omega + z) w^L - z c(q) (1 + w + ... + w^{2L}),
// so u_q(n) = Omega * sum over roots |w| < 1 of w^{n+L-1} / R'(w). Each summand
// carries its own exponential scale, so the deep tail keeps relative precision.
std::vector<double> green_axis_poles(const StepKernel& k, double z, int N, int n_count)
{
    if (!(z > 0.0) || z >= 1.0) throw PreconditionError("green_axis: z must be in (0,1)");
    if (N < 4) throw PreconditionError("green_axis: N too small");
    const int d = k.d;
    const int L = k.L;
    const double Omega = static_cast<double>(k.Omega);
    const double pi = 3.14159265358979323846;

    std::vector<long double> acc(static_cast<std::size_t>(n_count), 0.0L);
    std::vector<double> dir(static_cast<std::size_t>(N));
    for (int t = 0; t < N; ++t) dir[static_cast<std::size_t>(t)] = dirichlet_sum(2.0 * pi * t / N, L);

    long long tcells = 1;
    for (int i = 1; i < d; ++i) tcells *= N;

    std::vector<double> coeff(static_cast<std::size_t>(2 * L + 1));
    std::vector<double> dirpow; // Neumann fallback workspace
    for (long long cell = 0; cell < tcells; ++cell) {
        double c = 1.0;
        {
            long long rem = cell;
            for (int i = 0; i < d - 1; ++i) {
                c *= dir[static_cast<std::size_t>(rem % N)];
                rem /= N;
            }
        }
        if (std::abs(c) < 1e-5) {
            // Near-degenerate cells: the longitudinal roots cluster at 0 and the
            // residue formula loses conditioning. Expand the geometric series in
            // gamma = z c / (Omega + z) instead; gamma (2L+1) <= ~1e-6 here, so a
            // handful of terms is exact to double precision.
            const double gamma = z * c / (Omega + z);
            const int J = 12;
            dirpow.assign(1, 1.0); // Dir^{*0} = delta at offset 0
            double gj = 1.0;
            for (int j = 0; j <= J; ++j) {
                const int half = j * L;
                if (j > 0) {
                    // convolve with the flat (2L+1) window
                    std::vector<double> next(static_cast<std::size_t>(2 * half + 1), 0.0);
                    const int prev_half = (j - 1) * L;
                    for (int a = -prev_half; a <= prev_half; ++a) {
                        const double pv = dirpow[static_cast<std::size_t>(a + prev_half)];
                        if (pv == 0.0) continue;
                        for (int s = -L; s <= L; ++s)
                            next[static_cast<std::size_t>(a + s + half)] += pv;
                    }
                    dirpow.swap(next);
                    gj *= gamma;
                }
                for (int n = 0; n < n_count && n <= half; ++n)
                    acc[static_cast<std::size_t>(n)] += static_cast<long double>(
                        Omega / (Omega + z) * gj * dirpow[static_cast<std::size_t>(n + half)]);
            }
            continue;
        }
        std::vector<std::complex<double>> inside;
        if (L == 1) {
            // quadratic -zc w^2 + (Omega + z - zc) w - zc; the small root via the
            // product form stays stable for all c
            const double A = -z * c;
            const double B = Omega + z - z * c;
            const double C = -z * c;
            const double disc = std::sqrt(B * B - 4.0 * A * C);
            inside.push_back(std::complex<double>(2.0 * C / (-B - disc), 0.0));
        } else {
            for (int j = 0; j <= 2 * L; ++j) coeff[static_cast<std::size_t>(j)] = -z * c;
            coeff[static_cast<std::size_t>(L)] += Omega + z;
            for (auto w : poly_roots(coeff)) {
                if (std::abs(w) >= 1.0) continue;
                // Newton polish on R(w) directly
                for (int it = 0; it < 8; ++it) {
                    std::complex<double> p = 0.0, dp = 0.0;
                    for (int j = 2 * L; j >= 0; --j) {
                        dp = dp * w + p;
                        p = p * w + coeff[static_cast<std::size_t>(j)];
                    }
                    if (std::abs(dp) == 0.0) break;
                    const std::complex<double> step = p / dp;
                    w -= step;
                    if (std::abs(step) < 1e-16 * (1.0 + std::abs(w))) break;
                }
                inside.push_back(w);
            }
        }
        for (const auto& w : inside) {
            // R'(w); for L == 1 the coeff array is not filled, use the closed form
            std::complex<double> dR;
            if (L == 1) {
                dR = -2.0 * z * c * w + (Omega + z - z * c);
            } else {
                dR = 0.0;
                std::complex<double> wj = 1.0;
                for (int j = 1; j <= 2 * L; ++j) {
                    dR += static_cast<double>(j) * coeff[static_cast<std::size_t>(j)] * wj;
                    wj *= w;
                }
            }
            std::complex<double> wp = 1.0;
            for (int e = 0; e < L - 1; ++e) wp *= w; // w^{n+L-1} at n = 0
            for (int n = 0; n < n_count; ++n) {
                acc[static_cast<std::size_t>(n)] +=
                    static_cast<long double>((Omega * wp / dR).real());
                wp *= w;
                if (std::abs(wp.real()) < 1e-300 && std::abs(wp.imag()) < 1e-300) break;
            }
        }
    }
    std::vector<double> out(static_cast<std::size_t>(n_count));
    const double scale = 1.0 / static_cast<double>(tcells);
    for (int n = 0; n < n_count; ++n)
        out[static_cast<std::size_t>(n)] = static_cast<double>(acc[static_cast<std::size_t>(n)]) * scale;
    return out;
}

std::vector<double> green_axis_grid(const StepKernel& k, double z, int N, int n_count)
{
    if (!(z > 0.0) || z >= 1.0) throw PreconditionError("green_axis: z must be in (0,1)");
    const int d = k.d;
    const double pi = 3.14159265358979323846;
    std::vector<double> dir(static_cast<std::size_t>(N));
    for (int t = 0; t < N; ++t) dir[static_cast<std::size_t>(t)] = dirichlet_sum(2.0 * pi * t / N, k.L);
    // h(t1) = N^{-(d-1)} sum over transverse cells of 1/(1 - z D_hat)
    std::vector<long double> h(static_cast<std::size_t>(N), 0.0L);
    MultiIndexer tgrid = d > 1 ? MultiIndexer::torus(d - 1, N) : MultiIndexer::box(0, 0);
    const long long tcells = d > 1 ? tgrid.total : 1;
    for (long long cell = 0; cell < tcells; ++cell) {
        double c = 1.0;
        if (d > 1) {
            long long rem = cell;
            for (int i = d - 2; i >= 0; --i) {
                c *= dir[static_cast<std::size_t>(rem % N)];
                rem /= N;
            }
        }
        for (int t1 = 0; t1 < N; ++t1) {
            const double dh = (c * dir[static_cast<std::size_t>(t1)] - 1.0) / static_cast<double>(k.Omega);
            const double den = 1.0 - z * dh;
            if (den <= 0.0) throw PreconditionError("green_axis: 1 - z D_hat <= 0 on the grid");
            h[static_cast<std::size_t>(t1)] += 1.0L / den;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(n_count), 0.0);
    for (int n = 0; n < n_count; ++n) {
        long double s = 0.0L;
        for (int t1 = 0; t1 < N; ++t1)
            s += h[static_cast<std::size_t>(t1)] * std::cos(2.0 * pi * t1 * n / N);
        out[static_cast<std::size_t>(n)] =
            static_cast<double>(s) / static_cast<double>(tcells) / N;
    }
    return out;
}

DecompositionParams decomposition_params(const StepKernel& k, double z)
{
    if (!(z > 0.0) || z > 1.0) throw PreconditionError("decomposition_params: z in (0,1]");
    DecompositionParams p;
    const double s2 = k.sigma2;
    p.lambda = 1.0 / ((1.0 - z) + z * s2);
    p.mu = z * s2 / ((1.0 - z) + z * s2);
    // E = (delta - mu P) - lambda (delta - z D) on the radius-L box
    p.E = Field::box(k.d, k.L);
    p.E.ref(zero_point()) = (1.0 - p.lambda);
    Field P = nn_field(k.d);
    P.idx.for_each([&](long long pi_, const Point& x) {
        const double pv = P.v[static_cast<std::size_t>(pi_)];
        if (pv != 0.0) p.E.ref(x) -= p.mu * pv;
    });
    const double dw = p.lambda * z / static_cast<double>(k.Omega);
    for_each_support(k, [&](const Point& x) { p.E.ref(x) += dw; });
    p.moment0 = weighted_sum(p.E, 0.0, 0.0);
    p.moment2 = weighted_sum(p.E, 2.0, 0.0);
    return p;
}

PhiRemainder phi_remainder(const StepKernel& k, double z, int N)
{
    DecompositionParams dp = decomposition_params(k, z);
    Field S = green_field(k, z, N);
    Field C = green_field_nn(k.d, dp.mu, N);
    PhiRemainder r;
    r.phi = Field::torus(k.d, N);
    r.phi.idx.for_each([&](long long i, const Point& x) {
        double val = S.v[static_cast<std::size_t>(i)] - z * dp.lambda * C.v[static_cast<std::size_t>(i)];
        if (norm_inf(x, k.d) == 0) val -= 1.0;
        r.phi.v[static_cast<std::size_t>(i)] = val;
    });
    const double cutoff_sq = (static_cast<double>(N) / 4.0) * (static_cast<double>(N) / 4.0);
    double sup = 0.0;
    r.phi.idx.for_each([&](long long i, const Point& x) {
        const double r2 = static_cast<double>(norm_sq(x, k.d));
        if (r2 > cutoff_sq) return;
        const double xv = std::max(std::sqrt(r2), 1.0);
        sup = std::max(sup, std::pow(xv, k.d - 2) * std::abs(r.phi.v[static_cast<std::size_t>(i)]));
    });
    r.sup_stat = sup;
    return r;
}

std::vector<MassChiRow> verify_mass_chi_product(const StepKernel& k,
                                                const std::vector<double>& zs)
{
    std::vector<MassChiRow> rows;
    rows.reserve(zs.size());
    for (double z : zs) {
        MassChiRow row;
        row.z = z;
        const double m = so_mass(k, z).m;
        const double chi = 1.0 / (1.0 - z);
        row.ratio = m * m * chi * k.sigma2 / (2.0 * k.d);
        rows.push_back(row);
    }
    return rows;
}

DecayReport verify_decay_bound(const StepKernel& k, double z, int N, int window_lo,
                               int window_hi)
{
    DecayReport rep;
    rep.mass = so_mass(k, z).m;
    const double m = rep.mass;
    rep.window_lo = window_lo > 0 ? window_lo : static_cast<int>(std::ceil(80.0 / m));
    rep.window_hi = window_hi > 0 ? window_hi : static_cast<int>(std::ceil(160.0 / m));
    if (rep.window_hi <= rep.window_lo) rep.window_hi = rep.window_lo + 8;
    rep.N = N > 0 ? N : static_cast<int>(std::ceil(210.0 / m));
    if (rep.N % 2) ++rep.N;
    auto axis = green_axis_poles(k, z, rep.N, rep.window_hi + 1);
    rep.slope = axis_decay_fit(std::span<const double>(axis), rep.window_lo, rep.window_hi);
    rep.ratio = rep.slope / m;
    return rep;
}

} // namespace polylab
