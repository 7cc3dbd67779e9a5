#include "polylab/diagrams.hpp"

#include <cmath>

#include "polylab/greens.hpp"

namespace polylab {

namespace {

Field apply_weights(const Field& f, double tilt_m, double weight_a)
{
    Field out = f;
    if (tilt_m == 0 && weight_a == 0) return out;
    out.idx.for_each([&](long long i, const Point& x) {
        double w = 1.0;
        if (tilt_m != 0) w *= std::cosh(tilt_m * x[0]);
        if (weight_a != 0) {
            const double r2 = static_cast<double>(norm_sq(x, f.d));
            w *= (r2 == 0.0) ? 0.0 : std::pow(r2, 0.5 * weight_a);
        }
        out.v[static_cast<std::size_t>(i)] *= w;
    });
    return out;
}

Field convolve_any(const Field& a, const Field& b)
{
    if (a.geom == Geom::torus) return torus_convolve(a, b);
    return zd_convolve(a, b);
}

} // namespace

DiagramValue eval_diagram(const DiagramSpec& spec, const StepKernel& k,
                          const std::map<std::string, const Field*>& fields, double p,
                          double one_point)
{
    if (spec.factors.empty()) throw PreconditionError("eval_diagram: no factors");
    int weighted = 0;
    for (const auto& f : spec.factors)
        if (f.weight_a != 0) ++weighted;
    if (weighted > 1) throw PreconditionError("eval_diagram: at most one weighted factor");

    // geometry of the field bindings must be common
    Geom geom = Geom::box;
    int d = k.d, extent = -1;
    bool saw_field = false;
    int n_field_factors = 0;
    for (const auto& f : spec.factors) {
        if (f.kind != DiagramFactor::Kind::field_ref) continue;
        ++n_field_factors;
        auto it = fields.find(f.name);
        if (it == fields.end() || it->second == nullptr)
            throw PreconditionError("eval_diagram: unbound field " + f.name);
        const Field& fld = *it->second;
        if (!saw_field) {
            geom = fld.geom;
            d = fld.d;
            extent = fld.extent;
            saw_field = true;
        } else if (fld.geom != geom || fld.d != d || fld.extent != extent) {
            throw PreconditionError("eval_diagram: field geometries differ");
        }
    }

    auto materialize = [&](const DiagramFactor& f) -> Field {
        if (f.kind == DiagramFactor::Kind::kernel_d) {
            Field df = kernel_field(k, p, 0.0);
            Field weighted_df = apply_weights(df, f.tilt_m, f.weight_a);
            if (geom == Geom::torus && saw_field) {
                // rewrap the kernel onto the binding torus
                Field out = Field::torus(d, extent);
                weighted_df.idx.for_each([&](long long i, const Point& x) {
                    const double v = weighted_df.v[static_cast<std::size_t>(i)];
                    if (v != 0.0) out.ref(torus_rep_point(x, extent, d)) += v;
                });
                return out;
            }
            return weighted_df;
        }
        return apply_weights(*fields.at(f.name), f.tilt_m, f.weight_a);
    };

    Field acc = materialize(spec.factors.front());
    for (std::size_t i = 1; i < spec.factors.size(); ++i)
        acc = convolve_any(acc, materialize(spec.factors[static_cast<std::size_t>(i)]));

    DiagramValue out;
    out.box_radius = acc.extent;
    if (spec.reduce == DiagramReduce::sup_norm) {
        double sup = 0;
        for (double v : acc.v) sup = std::max(sup, std::abs(v));
        out.value = sup;
    } else {
        out.value = acc.at(zero_point());
    }
    if (spec.minus_one_point) out.value -= std::pow(one_point, n_field_factors);
    return out;
}

double square_max(const Field& g, const Field& g_tilted, double one_point)
{
    if (g.geom != g_tilted.geom || g.d != g_tilted.d || g.extent != g_tilted.extent)
        throw PreconditionError("square_max: geometry mismatch");
    Field tt = convolve_any(g_tilted, g_tilted);
    Field tu = convolve_any(g_tilted, g);
    Field uu = convolve_any(g, g);
    const double a = convolve_any(tt, uu).at(zero_point());
    const double b = convolve_any(tu, uu).at(zero_point());
    const double g4 = one_point * one_point * one_point * one_point;
    return std::max(a - g4, b - g4);
}

ScalingProbe l_scaling_probe(int d, double z, const std::vector<int>& Ls)
{
    ScalingProbe probe;
    for (int L : Ls) {
        StepKernel k = make_kernel(d, L);
        const double m = so_mass(k, z).m;
        int N = std::max(32, static_cast<int>(std::ceil(24.0 / m)));
        if (N % 2) ++N;
        Field S = green_field(k, z, N);
        DiagramSpec spec;
        spec.factors.assign(4, DiagramFactor{DiagramFactor::Kind::field_ref, "S", 0, 0});
        spec.reduce = DiagramReduce::at_zero;
        spec.minus_one_point = true;
        const double s0 = S.at(zero_point());
        DiagramValue v = eval_diagram(spec, k, {{"S", &S}}, z, s0);
        // paired evaluation with two lines tilted at half the mass
        DiagramSpec tilted = spec;
        tilted.factors[0].tilt_m = 0.5 * m;
        tilted.factors[1].tilt_m = 0.5 * m;
        DiagramValue vt = eval_diagram(tilted, k, {{"S", &S}}, z, s0);
        probe.rows.push_back({L, v.value, v.value > 0 ? vt.value / v.value : 0.0});
    }
    // least-squares slope of log value against log L
    long double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (const auto& row : probe.rows) {
        if (!(row.value > 0)) continue;
        const long double x = std::log(static_cast<long double>(row.L));
        const long double y = std::log(static_cast<long double>(row.value));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    if (cnt >= 2) {
        const long double denom = cnt * sxx - sx * sx;
        if (denom != 0) probe.fitted_exponent = static_cast<double>((cnt * sxy - sx * sy) / denom);
    }
    return probe;
}

} // namespace polylab
