#include "polylab/profile.hpp"

#include <cmath>
#include <vector>

#include "polylab/point.hpp"

namespace polylab {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct GaussRule {
    std::vector<double> node;   // on (-1, 1)
    std::vector<double> weight;
};

// 32-point Gauss-Legendre nodes by Newton iteration on the Legendre recurrence.
const GaussRule& gauss32()
{
    static const GaussRule rule = [] {
        GaussRule g;
        const int n = 32;
        g.node.resize(n);
        g.weight.resize(n);
        for (int i = 0; i < n; ++i) {
            double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int j = 2; j <= n; ++j) {
                    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            g.node[static_cast<std::size_t>(i)] = x;
            g.weight[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return g;
    }();
    return rule;
}

// Integrates fn over [a, b] with `panels` panels of 32-point Gauss-Legendre.
template <class F>
double panel_integrate(F&& fn, double a, double b, int panels)
{
    const auto& g = gauss32();
    const double h = (b - a) / panels;
    long double total = 0.0L;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        long double acc = 0.0L;
        for (std::size_t i = 0; i < g.node.size(); ++i)
            acc += g.weight[i] * fn(mid + 0.5 * h * g.node[i]);
        total += acc * 0.5L * h;
    }
    return static_cast<double>(total);
}

// Refines panel count until two successive estimates agree; returns the value
// and the last refinement change.
template <class F>
std::pair<double, double> refine_integrate(F&& fn, double a, double b, double tol)
{
    double prev = panel_integrate(fn, a, b, 4);
    for (int panels = 8; panels <= 512; panels *= 2) {
        const double cur = panel_integrate(fn, a, b, panels);
        const double change = std::abs(cur - prev);
        if (change <= tol * std::max(1.0, std::abs(cur))) return {cur, change};
        prev = cur;
    }
    return {prev, std::abs(prev) * 1e-9};
}

} // namespace

double faxen_i0_scaled(double s)
{
    // I0(s) e^{-s^2/4} = int_0^infty exp(-(t^2-s)^2/4) dt
    const double upper =
        s > 0 ? std::sqrt(s + std::sqrt(180.0)) : std::pow(160.0, 0.25) + 1.0;
    auto f = [&](double t) {
        const double u = t * t - s;
        return std::exp(-0.25 * u * u);
    };
    return refine_integrate(f, 0.0, upper, 1e-13).first;
}

ProfileValue faxen_i0(double s)
{
    ProfileValue out;
    out.s = s;
    if (std::abs(s) > 50.0) {
        out.method = "asymptotic";
        out.I0 = s < 0 ? std::sqrt(kPi / (2.0 * std::abs(s)))
                       : std::sqrt(kPi / s) * std::exp(0.25 * s * s);
        out.est_error = std::abs(out.I0) * 3.0 / (4.0 * s * s);
        return out;
    }
    out.method = "quadrature";
    if (s > 6.0) {
        // peak at sqrt(s); factor out e^{s^2/4} to avoid loss of scale
        auto [scaled, err] = std::pair<double, double>{faxen_i0_scaled(s), 0.0};
        auto f = [&](double t) {
            const double u = t * t - s;
            return std::exp(-0.25 * u * u);
        };
        auto ref = refine_integrate(f, 0.0, std::sqrt(s + std::sqrt(180.0)), 1e-13);
        scaled = ref.first;
        err = ref.second;
        const double boost = std::exp(0.25 * s * s);
        out.I0 = scaled * boost;
        out.est_error = err * boost;
        return out;
    }
    auto f = [&](double t) { return std::exp(-0.25 * t * t * t * t + 0.5 * s * t * t); };
    // integrand tail: t^4/4 - s t^2/2 >= 45 bounds T*
    double upper = std::pow(180.0, 0.25);
    if (s > 0) upper = std::sqrt(s + std::sqrt(s * s + 180.0));
    auto ref = refine_integrate(f, 0.0, upper + 0.5, 1e-13);
    out.I0 = ref.first;
    out.est_error = ref.second;
    return out;
}

double faxen_general(double alpha, double beta, double y)
{
    if (alpha < 0.0 || alpha >= 1.0) throw PreconditionError("faxen_general: alpha in [0,1)");
    if (!(beta > 0.0)) throw PreconditionError("faxen_general: beta > 0");
    // exp-sinh rule t = exp(sinh(u)): the t^{beta-1} endpoint singularity and the
    // e^{-t} tail both decay double-exponentially in u
    auto f = [&](double t) {
        return std::exp(-t + y * std::pow(t, alpha) + (beta - 1.0) * std::log(t));
    };
    auto eval_at = [&](double u) {
        const double sh = std::sinh(u);
        if (sh > 700.0) return 0.0; // t overflows, integrand is long dead
        const double t = std::exp(sh);
        const double w = t * std::cosh(u);
        const double v = f(t) * w;
        return std::isfinite(v) ? v : 0.0;
    };
    double prev = 0.0;
    double value = 0.0;
    for (double h : {0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625}) {
        long double acc = eval_at(0.0);
        for (int side = -1; side <= 1; side += 2) {
            int dead = 0;
            for (int k = 1; k < 4000; ++k) {
                const double term = eval_at(side * k * h);
                acc += term;
                if (std::abs(term) < 1e-18 * std::abs(static_cast<double>(acc))) {
                    if (++dead > 3) break;
                } else {
                    dead = 0;
                }
            }
        }
        value = static_cast<double>(acc) * h;
        if (h < 0.5 && std::abs(value - prev) <= 1e-13 * std::max(1.0, std::abs(value))) break;
        prev = value;
    }
    return value;
}

double i0_ratio_negative(double s)
{
    if (!(s < 0)) throw PreconditionError("i0_ratio_negative: s < 0 required");
    return faxen_i0(s).I0 * std::sqrt(2.0 * std::abs(s) / kPi);
}

double i0_ratio_positive(double s)
{
    if (!(s > 0)) throw PreconditionError("i0_ratio_positive: s > 0 required");
    return faxen_i0_scaled(s) * std::sqrt(s / kPi);
}

WindowPrediction window_prediction(int d, int r, double gamma, double dc)
{
    if (!(gamma > 0) || !(dc > 0)) throw PreconditionError("window_prediction: gamma, dc > 0");
    if (d < 1 || r < 1) throw PreconditionError("window_prediction: d, r >= 1");
    WindowPrediction w;
    w.window_exponent = -2.0 / (gamma * dc);
    w.chi_exponent = 2.0 / dc;
    w.plateau_exponent = 2.0 / dc - 1.0;
    const double logv = d * std::log(static_cast<double>(r));
    if (logv > 700.0) throw PreconditionError("window_prediction: volume overflows");
    w.volume = std::pow(static_cast<double>(r), d);
    w.window = std::exp(w.window_exponent * logv);
    w.chi_scale = std::exp(w.chi_exponent * logv);
    w.plateau_scale = std::exp(w.plateau_exponent * logv);
    return w;
}

} // namespace polylab
