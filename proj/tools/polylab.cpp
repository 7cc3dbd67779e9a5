// polylab: exact enumeration, random-walk Green functions, torus lifts and
// sandwich bounds, diagram functionals, and profile integrals from one CLI.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "polylab/diagrams.hpp"
#include "polylab/enumerate.hpp"
#include "polylab/greens.hpp"
#include "polylab/io.hpp"
#include "polylab/profile.hpp"
#include "polylab/torus_poly.hpp"

using namespace polylab;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPrecondition = 2;
constexpr int kExitBudget = 3;
constexpr int kExitUsage = 64;

struct RunContext {
    std::string out_dir = ".";
    int threads = 0;
    RunManifest manifest;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    void param(const std::string& key, const std::string& value)
    {
        manifest.params[key] = value;
    }

    std::string path_for(const std::string& name) const
    {
        return (std::filesystem::path(out_dir) / name).string();
    }

    // digest of the run identity (subcommand + full parameter set); embedded in
    // every artifact so outputs can be tied back to their manifest
    std::string manifest_digest() const
    {
        json id;
        id["subcommand"] = manifest.subcommand;
        id["params"] = manifest.params;
        id["version"] = manifest.version;
        return digest_hex(id.dump());
    }

    void emit(const std::string& name, const std::string& content)
    {
        write_text_file(path_for(name), content);
        manifest.output_digests[name] = digest_hex(content);
    }

    void emit_json(const std::string& name, json j)
    {
        j["manifest_digest"] = manifest_digest();
        emit(name, j.dump(2) + "\n");
    }

    void emit_csv(const std::string& name, const std::string& content)
    {
        emit(name, "# manifest " + manifest_digest() + "\n" + content);
    }

    void finish()
    {
        manifest.threads = threads;
        manifest.wall_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - started)
                               .count();
        write_text_file(path_for(manifest.subcommand + "_manifest.json"),
                        manifest.to_json().dump(2) + "\n");
    }
};

Model parse_model(const std::string& s)
{
    if (s == "tree") return Model::tree;
    if (s == "animal") return Model::animal;
    throw PreconditionError("unknown model: " + s + " (expected tree|animal)");
}

Point parse_point(const std::string& s, int d)
{
    std::vector<int> coords;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) coords.push_back(std::stoi(tok));
    if (static_cast<int>(coords.size()) != d)
        throw PreconditionError("point " + s + " does not have " + std::to_string(d) +
                                " coordinates");
    return make_point(coords);
}

std::uint64_t budget_from_env(std::uint64_t fallback)
{
    const char* env = std::getenv("POLYLAB_BUDGET");
    if (!env) return fallback;
    return std::stoull(env);
}

json series_rows(const IntSeries& s)
{
    json rows = json::array();
    for (int n = 0; n <= s.n_max(); ++n)
        rows.push_back(s.c[static_cast<std::size_t>(n)].get_str());
    return rows;
}

// ---------------------------------------------------------------------------

// pc_estimate needs n_max >= 4 and nonzero counts; skip the estimate quietly otherwise
PcEstimate pc_estimate_safe(const EnumResult& res)
{
    if (res.cfg.n_max < 4) return {};
    for (const auto t : res.t)
        if (t == 0) return {};
    return pc_estimate(res);
}

int cmd_enum(RunContext& ctx, int d, int L, int n_max, const std::string& model,
             std::uint64_t budget)
{
    EnumConfig cfg;
    cfg.d = d;
    cfg.L = L;
    cfg.n_max = n_max;
    cfg.model = parse_model(model);
    cfg.budget = budget_from_env(budget);
    cfg.threads = ctx.threads;
    EnumResult res = enumerate_polymers(cfg);

    json j;
    j["schema"] = kSchema;
    j["kind"] = "enumeration";
    j["model"] = model;
    j["d"] = d;
    j["L"] = L;
    j["n_max"] = n_max;
    j["Omega"] = res.Omega;
    j["t_n"] = res.t;
    j["rooted_n"] = res.rooted;
    j["chi_coeffs"] = res.chi;
    j["xi2_numerator_coeffs"] = res.xi2num;
    PcEstimate pc = pc_estimate_safe(res);
    if (!pc.last_ratios.empty()) {
        j["pc_estimate"] = pc.estimate;
        j["pc_last_ratios"] = pc.last_ratios;
    }
    SubadditivityReport sub = check_subadditivity(res.t);
    j["subadditive"] = sub.ok;
    std::ostringstream name;
    name << "enum_" << model << "_d" << d << "_L" << L << "_n" << n_max << ".json";
    ctx.emit_json(name.str(), j);

    std::printf("model=%s d=%d L=%d n_max=%d Omega=%lld\n", model.c_str(), d, L, n_max,
                res.Omega);
    std::printf("%4s %16s %16s %18s\n", "n", "t_n", "rooted_n", "chi_n");
    for (int n = 0; n <= n_max; ++n)
        std::printf("%4d %16lld %16lld %18lld\n", n, res.t[static_cast<std::size_t>(n)],
                    res.rooted[static_cast<std::size_t>(n)],
                    res.chi[static_cast<std::size_t>(n)]);
    std::printf("subadditivity: %s\n", sub.ok ? "PASS" : "FAIL");
    return kExitOk;
}

int cmd_twopoint(RunContext& ctx, int d, int L, int n_max, const std::string& model,
                 const std::string& xs, std::uint64_t budget)
{
    EnumConfig cfg;
    cfg.d = d;
    cfg.L = L;
    cfg.n_max = n_max;
    cfg.model = parse_model(model);
    cfg.budget = budget_from_env(budget);
    cfg.threads = ctx.threads;
    EnumResult res = enumerate_polymers(cfg);
    const Point x = parse_point(xs, d);
    IntSeries s = two_point_series(res, x);

    std::ostringstream csv;
    csv << "n,coefficient\n";
    for (int n = 0; n <= n_max; ++n) csv << n << "," << s.c[static_cast<std::size_t>(n)].get_str() << "\n";
    std::ostringstream name;
    name << "twopoint_" << model << "_d" << d << "_L" << L << "_n" << n_max << ".csv";
    ctx.emit_csv(name.str(), csv.str());

    std::printf("two-point coefficients at x=%s (model=%s, d=%d, L=%d)\n", xs.c_str(),
                model.c_str(), d, L);
    std::fputs(csv.str().c_str(), stdout);
    return kExitOk;
}

int cmd_chi(RunContext& ctx, int d, int L, int n_max, const std::string& model, double tilt,
            const std::string& eval_p, std::uint64_t budget)
{
    EnumConfig cfg;
    cfg.d = d;
    cfg.L = L;
    cfg.n_max = n_max;
    cfg.model = parse_model(model);
    cfg.budget = budget_from_env(budget);
    cfg.threads = ctx.threads;
    EnumResult res = enumerate_polymers(cfg);

    json j;
    j["schema"] = kSchema;
    j["kind"] = "susceptibility";
    j["model"] = model;
    j["d"] = d;
    j["L"] = L;
    j["n_max"] = n_max;
    j["Omega"] = res.Omega;
    IntSeries chi = susceptibility_series(res);
    j["chi_coeffs"] = series_rows(chi);
    if (tilt > 0) {
        RealSeries tilted = tilted_susceptibility_series(res, tilt);
        j["tilt_m"] = tilt;
        j["tilted_coeffs"] = tilted.c;
    }
    if (!eval_p.empty()) {
        Rational p = parse_rational(eval_p);
        j["eval_p"] = eval_p;
        j["chi_at_p"] = chi.eval(p).get_str();
        j["xi2_at_p"] = xi2_series_eval(res, p.get_d());
    }
    std::ostringstream name;
    name << "chi_" << model << "_d" << d << "_L" << L << "_n" << n_max << ".json";
    ctx.emit_json(name.str(), j);
    std::printf("chi coefficients written; n_max=%d\n", n_max);
    for (int n = 0; n <= n_max; ++n)
        std::printf("%4d %s\n", n, chi.c[static_cast<std::size_t>(n)].get_str().c_str());
    return kExitOk;
}

int cmd_mass(RunContext& ctx, int d, int L, const std::string& zs, bool nn, double mu)
{
    json j;
    j["schema"] = kSchema;
    j["kind"] = "mass";
    std::ostringstream csv;
    csv << "z,m,xi,residual,method\n";
    if (nn) {
        MassResult r = nn_mass(mu, d);
        csv << mu << "," << r.m << "," << r.xi << "," << r.residual << ",closed-form\n";
        std::printf("nearest-neighbour mass: mu=%g d=%d m=%.12f\n", mu, d, r.m);
    } else {
        StepKernel k = make_kernel(d, L);
        std::stringstream ss(zs);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            const double z = std::stod(tok);
            MassResult r = so_mass(k, z);
            csv << z << "," << r.m << "," << r.xi << "," << r.residual << ",root-find\n";
            std::printf("m = %.12f  (z=%g, xi=%.10g, residual=%.3g)\n", r.m, z, r.xi,
                        r.residual);
        }
    }
    ctx.emit_csv("mass_table.csv", csv.str());
    return kExitOk;
}

int cmd_greens(RunContext& ctx, int d, int L, double z, int N, const std::string& kind)
{
    Field f;
    double sigma2 = 0;
    if (kind == "so") {
        StepKernel k = make_kernel(d, L);
        if (N <= 0) N = auto_period(so_mass(k, z).m);
        f = green_field(k, z, N);
        sigma2 = k.sigma2;
    } else if (kind == "nn") {
        if (N <= 0) N = auto_period(nn_mass(z, d).m);
        f = green_field_nn(d, z, N);
        sigma2 = 1.0;
    } else {
        throw PreconditionError("greens kind must be so|nn");
    }
    json j = field_to_json(f);
    j["z"] = z;
    j["kind"] = kind;
    j["sigma2"] = sigma2;
    std::ostringstream name;
    name << "greens_" << kind << "_d" << d << "_z" << z << "_N" << N << ".json";
    ctx.emit_json(name.str(), j);
    ctx.emit_csv("greens_axis.csv", axis_slice_csv(f, N / 2 - 1));
    const double total = weighted_sum(f, 0, 0);
    std::printf("grid N=%d  sum=%.12g  expected 1/(1-z)=%.12g  S(0)=%.12g\n", N, total,
                1.0 / (1.0 - z), f.at(zero_point()));
    return kExitOk;
}

int cmd_decomp(RunContext& ctx, int d, int L, double z)
{
    StepKernel k = make_kernel(d, L);
    DecompositionParams p = decomposition_params(k, z);
    json j;
    j["schema"] = kSchema;
    j["kind"] = "decomposition";
    j["d"] = d;
    j["L"] = L;
    j["z"] = z;
    j["sigma2"] = k.sigma2;
    j["lambda"] = p.lambda;
    j["mu"] = p.mu;
    j["moment0"] = p.moment0;
    j["moment2"] = p.moment2;
    j["E"] = field_to_json(p.E);
    ctx.emit_json("decomp.json", j);
    std::printf("lambda=%.15g mu=%.15g |moment0|=%.3g |moment2|=%.3g\n", p.lambda, p.mu,
                std::abs(p.moment0), std::abs(p.moment2));
    return kExitOk;
}

int cmd_torus(RunContext& ctx, int d, int L, int r, int n_max, const std::string& model,
              const std::string& xs, std::uint64_t budget)
{
    TorusEnumConfig cfg;
    cfg.d = d;
    cfg.L = L;
    cfg.r = r;
    cfg.n_max = n_max;
    cfg.model = parse_model(model);
    cfg.budget = budget_from_env(budget);
    TorusEnumResult res = enumerate_torus(cfg);
    json j;
    j["schema"] = kSchema;
    j["kind"] = "torus_enumeration";
    j["model"] = model;
    j["d"] = d;
    j["L"] = L;
    j["r"] = r;
    j["n_max"] = n_max;
    j["chi_coeffs"] = res.chi;
    if (!xs.empty()) {
        const Point x = parse_point(xs, d);
        j["x"] = xs;
        j["twopoint_coeffs"] = series_rows(torus_two_point_series(res, x));
    }
    std::ostringstream name;
    name << "torus_" << model << "_d" << d << "_r" << r << "_n" << n_max << ".json";
    ctx.emit_json(name.str(), j);
    std::printf("torus susceptibility coefficients (d=%d, r=%d):\n", d, r);
    for (int n = 0; n <= n_max; ++n)
        std::printf("%4d %16lld\n", n, res.chi[static_cast<std::size_t>(n)]);
    return kExitOk;
}

int cmd_sandwich(RunContext& ctx, int d, int L, int r, int n_max, const std::string& model,
                 const std::string& xs, const std::string& ps, std::uint64_t budget)
{
    const Point x = parse_point(xs, d);
    const Rational p = parse_rational(ps);
    SandwichReport rep = sandwich_check(d, L, r, n_max, parse_model(model), x, p,
                                        budget_from_env(budget), ctx.threads);
    json j;
    j["schema"] = kSchema;
    j["kind"] = "sandwich";
    j["model"] = model;
    j["d"] = d;
    j["L"] = L;
    j["r"] = r;
    j["n_max"] = n_max;
    j["x"] = xs;
    j["p"] = ps;
    json rows = json::array();
    for (const auto& row : rep.rows)
        rows.push_back({{"n", row.n},
                        {"G", row.g},
                        {"G_torus", row.g_torus},
                        {"psi", row.psi},
                        {"E", row.e}});
    j["rows"] = rows;
    j["coefficientwise_lower_ok"] = rep.lower_ok;
    j["coefficientwise_upper_ok"] = rep.upper_ok;
    j["trivial"] = rep.trivial;
    j["lower_at_p"] = rational_to_string(rep.lhs_at_p);
    j["middle_at_p"] = rational_to_string(rep.mid_at_p);
    j["upper_at_p"] = rational_to_string(rep.rhs_at_p);
    j["eval_ok"] = rep.eval_ok;
    ctx.emit_json("sandwich.json", j);

    std::printf("%4s %12s %12s %12s %12s\n", "n", "G", "G_torus", "psi", "E");
    for (const auto& row : rep.rows)
        std::printf("%4d %12lld %12lld %12lld %12lld\n", row.n, row.g, row.g_torus, row.psi,
                    row.e);
    std::printf("psi - E <= G^T - G <= psi at p=%s:\n  %s <= %s <= %s\n", ps.c_str(),
                rational_to_string(rep.lhs_at_p).c_str(),
                rational_to_string(rep.mid_at_p).c_str(),
                rational_to_string(rep.rhs_at_p).c_str());
    const bool ok = rep.lower_ok && rep.upper_ok && rep.eval_ok;
    std::printf("verdict: %s%s\n", ok ? "PASS" : "FAIL", rep.trivial ? " (trivial: no wrap reach)" : "");
    return kExitOk;
}

int cmd_lift_audit(RunContext& ctx, int d, int L, int r, int n_max, const std::string& model,
                   std::uint64_t budget)
{
    TorusEnumConfig cfg;
    cfg.d = d;
    cfg.L = L;
    cfg.r = r;
    cfg.n_max = n_max;
    cfg.model = parse_model(model);
    cfg.budget = budget_from_env(budget);
    long long count = 0, faithful = 0;
    bool round_trip_ok = true, injective = true;
    std::set<std::vector<int>> keys;
    for_each_torus_polymer(cfg, [&](const EdgeList& edges) {
        TorusPolymer tp;
        tp.d = d;
        tp.L = L;
        tp.r = r;
        tp.model = cfg.model;
        tp.edges = edges;
        normalize_edges(tp.edges, d);
        LiftResult lr = cfg.model == Model::tree ? lift_tree(tp) : lift_animal(tp);
        if (project_polymer(lr.zd_polymer, r).edges != tp.edges) round_trip_ok = false;
        if (!keys.insert(edge_list_key(lr.zd_polymer.edges, d)).second) injective = false;
        faithful += lr.faithful ? 1 : 0;
        ++count;
    });
    json j;
    j["schema"] = kSchema;
    j["kind"] = "lift_audit";
    j["model"] = model;
    j["d"] = d;
    j["L"] = L;
    j["r"] = r;
    j["n_max"] = n_max;
    j["polymers"] = count;
    j["round_trip_ok"] = round_trip_ok;
    j["injective"] = injective;
    j["faithful"] = faithful;
    ctx.emit_json("lift_audit.json", j);
    std::printf("lift audit over %lld torus %ss: round-trip %s, injective %s\n", count,
                model.c_str(), round_trip_ok ? "PASS" : "FAIL", injective ? "PASS" : "FAIL");
    return round_trip_ok && injective ? kExitOk : 1;
}

int cmd_diagram(RunContext& ctx, const std::string& spec_path, double p)
{
    const json spec_json = json::parse(read_text_file(spec_path));
    DiagramSpec spec;
    for (const auto& f : spec_json.at("factors")) {
        DiagramFactor factor;
        const std::string kind = f.at("kind").get<std::string>();
        if (kind == "kernel") {
            factor.kind = DiagramFactor::Kind::kernel_d;
        } else if (kind == "field") {
            factor.kind = DiagramFactor::Kind::field_ref;
            factor.name = f.at("name").get<std::string>();
        } else {
            throw PreconditionError("diagram factor kind must be kernel|field");
        }
        factor.tilt_m = f.value("tilt", 0.0);
        factor.weight_a = f.value("weight", 0.0);
        spec.factors.push_back(factor);
    }
    spec.reduce = spec_json.value("reduce", std::string("sup")) == "sup"
                      ? DiagramReduce::sup_norm
                      : DiagramReduce::at_zero;
    spec.minus_one_point = spec_json.value("minus_one_point", false);
    const double one_point = spec_json.value("one_point", 1.0);
    StepKernel k = make_kernel(spec_json.at("d").get<int>(), spec_json.at("L").get<int>());

    std::map<std::string, Field> storage;
    std::map<std::string, const Field*> bindings;
    if (spec_json.contains("fields"))
        for (const auto& [name, path] : spec_json.at("fields").items()) {
            storage[name] = field_from_json(json::parse(read_text_file(path.get<std::string>())));
            bindings[name] = &storage[name];
        }

    const auto t0 = std::chrono::steady_clock::now();
    DiagramValue v = eval_diagram(spec, k, bindings, p, one_point);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    json j;
    j["schema"] = kSchema;
    j["kind"] = "diagram";
    j["value"] = v.value;
    j["box_radius"] = v.box_radius;
    j["runtime_ms"] = ms;
    ctx.emit_json("diagram.json", j);
    std::printf("value=%.12g box_radius=%d runtime=%.1f ms\n", v.value, v.box_radius, ms);
    return kExitOk;
}

int cmd_wrap(RunContext& ctx, int d, int L, int r, double z, int fold)
{
    StepKernel k = make_kernel(d, L);
    WrapIdentityReport rep = wrap_identity_check(k, z, r, fold);
    json j;
    j["schema"] = kSchema;
    j["kind"] = "wrap_identity";
    j["d"] = d;
    j["L"] = L;
    j["r"] = r;
    j["z"] = z;
    j["fold"] = fold;
    j["box_radius"] = rep.box_radius;
    j["max_discrepancy"] = rep.max_discrepancy;
    ctx.emit_json("wrap.json", j);
    std::printf("fold=%d box_radius=%d max discrepancy=%.3g (%s)\n", fold, rep.box_radius,
                rep.max_discrepancy, rep.max_discrepancy <= 1e-8 ? "PASS" : "FAIL");
    return kExitOk;
}

int cmd_profile(RunContext& ctx, const std::string& range)
{
    // range syntax lo:hi:step
    double lo = 0, hi = 0, step = 1;
    {
        std::stringstream ss(range);
        std::string tok;
        std::vector<double> xs;
        while (std::getline(ss, tok, ':')) xs.push_back(std::stod(tok));
        if (xs.size() != 3) throw PreconditionError("profile range must be lo:hi:step");
        lo = xs[0];
        hi = xs[1];
        step = xs[2];
        if (step <= 0 || hi < lo) throw PreconditionError("profile range must be increasing");
    }
    std::ostringstream csv;
    csv.precision(15);
    csv << "s,I0,est_error,method\n";
    for (double s = lo; s <= hi + 1e-12; s += step) {
        ProfileValue v = faxen_i0(s);
        csv << s << "," << v.I0 << "," << v.est_error << "," << v.method << "\n";
    }
    ctx.emit_csv("profile.csv", csv.str());
    std::fputs(csv.str().c_str(), stdout);
    return kExitOk;
}

int cmd_window(RunContext& ctx, int d, int r, double gamma, double dc)
{
    WindowPrediction w = window_prediction(d, r, gamma, dc);
    json j;
    j["schema"] = kSchema;
    j["kind"] = "window";
    j["d"] = d;
    j["r"] = r;
    j["gamma"] = gamma;
    j["dc"] = dc;
    j["volume"] = w.volume;
    j["window_exponent"] = w.window_exponent;
    j["chi_exponent"] = w.chi_exponent;
    j["plateau_exponent"] = w.plateau_exponent;
    j["window"] = w.window;
    j["chi_scale"] = w.chi_scale;
    j["plateau_scale"] = w.plateau_scale;
    ctx.emit_json("window.json", j);
    std::printf("V=%.6g exponents: window %+g, chi %+g, plateau %+g\n", w.volume,
                w.window_exponent, w.chi_exponent, w.plateau_exponent);
    std::printf("scales: window %.6g, chi %.6g, plateau %.6g\n", w.window, w.chi_scale,
                w.plateau_scale);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"polylab: lattice polymer laboratory"};
    app.require_subcommand(1);

    RunContext ctx;
    app.add_option("--out", ctx.out_dir, "output directory for artifacts");
    app.add_option("--threads", ctx.threads, "worker count (0 = hardware)");

    // shared option storage
    int d = 1, L = 1, n_max = 5, r = 3, N = 0, fold = 2;
    double z = 0.5, mu = 0.5, tilt = 0.0, gamma = 0.5, dc = 8.0, p_float = 0.5;
    std::string model = "tree", xs, ps = "1/8", zs = "0.5", kind = "so",
                range = "-5:5:0.5", spec_path, eval_p;
    std::uint64_t budget = 100000000ULL;
    bool nn = false;

    auto* c_enum = app.add_subcommand("enum", "enumerate polymers: t_n, rooted counts");
    c_enum->add_option("--d", d)->required();
    c_enum->add_option("--L", L)->required();
    c_enum->add_option("--nmax", n_max)->required();
    c_enum->add_option("--model", model);
    c_enum->add_option("--budget", budget);

    auto* c_two = app.add_subcommand("twopoint", "two-point series at a lattice point");
    c_two->add_option("--d", d)->required();
    c_two->add_option("--L", L)->required();
    c_two->add_option("--nmax", n_max)->required();
    c_two->add_option("--model", model);
    c_two->add_option("--x", xs)->required();
    c_two->add_option("--budget", budget);

    auto* c_chi = app.add_subcommand("chi", "susceptibility series, optional tilt/eval");
    c_chi->add_option("--d", d)->required();
    c_chi->add_option("--L", L)->required();
    c_chi->add_option("--nmax", n_max)->required();
    c_chi->add_option("--model", model);
    c_chi->add_option("--m", tilt);
    c_chi->add_option("--p", eval_p);
    c_chi->add_option("--budget", budget);

    auto* c_mass = app.add_subcommand("mass", "walk masses (spread-out or nearest-neighbour)");
    c_mass->add_option("--d", d)->required();
    c_mass->add_option("--L", L);
    c_mass->add_option("--z", zs);
    c_mass->add_flag("--nn", nn);
    c_mass->add_option("--mu", mu);

    auto* c_greens = app.add_subcommand("greens", "walk two-point field on a torus grid");
    c_greens->add_option("--d", d)->required();
    c_greens->add_option("--L", L);
    c_greens->add_option("--z", z)->required();
    c_greens->add_option("--N", N);
    c_greens->add_option("--kind", kind);

    auto* c_decomp = app.add_subcommand("decomp", "walk decomposition parameters");
    c_decomp->add_option("--d", d)->required();
    c_decomp->add_option("--L", L)->required();
    c_decomp->add_option("--z", z)->required();

    auto* c_torus = app.add_subcommand("torus", "torus polymer enumeration");
    c_torus->add_option("--d", d)->required();
    c_torus->add_option("--L", L)->required();
    c_torus->add_option("--r", r)->required();
    c_torus->add_option("--nmax", n_max)->required();
    c_torus->add_option("--model", model);
    c_torus->add_option("--x", xs);
    c_torus->add_option("--budget", budget);

    auto* c_sand = app.add_subcommand("sandwich", "exact sandwich bound verification");
    c_sand->add_option("--d", d)->required();
    c_sand->add_option("--L", L)->required();
    c_sand->add_option("--r", r)->required();
    c_sand->add_option("--nmax", n_max)->required();
    c_sand->add_option("--model", model);
    c_sand->add_option("--x", xs)->required();
    c_sand->add_option("--p", ps)->required();
    c_sand->add_option("--budget", budget);

    auto* c_lift = app.add_subcommand("lift-audit", "lift round-trip and injectivity audit");
    c_lift->add_option("--d", d)->required();
    c_lift->add_option("--L", L)->required();
    c_lift->add_option("--r", r)->required();
    c_lift->add_option("--nmax", n_max)->required();
    c_lift->add_option("--model", model);
    c_lift->add_option("--budget", budget);

    auto* c_diag = app.add_subcommand("diagram", "evaluate a diagram spec file");
    c_diag->add_option("--spec", spec_path)->required();
    c_diag->add_option("--p", p_float);

    auto* c_wrap = app.add_subcommand("wrap", "wrap identity discrepancy");
    c_wrap->add_option("--d", d)->required();
    c_wrap->add_option("--L", L);
    c_wrap->add_option("--r", r)->required();
    c_wrap->add_option("--z", z)->required();
    c_wrap->add_option("--k", fold);

    auto* c_prof = app.add_subcommand("profile", "profile integral table");
    c_prof->add_option("--s", range, "range lo:hi:step");

    auto* c_win = app.add_subcommand("window", "finite-size scaling window arithmetic");
    c_win->add_option("--d", d)->required();
    c_win->add_option("--r", r)->required();
    c_win->add_option("--gamma", gamma);
    c_win->add_option("--dc", dc);

    // parent-level --out/--threads may appear after the subcommand name
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        std::filesystem::create_directories(ctx.out_dir);
        CLI::App* sub = app.get_subcommands().front();
        ctx.manifest.subcommand = sub->get_name();
        for (const auto* opt : sub->get_options())
            if (opt->count() > 0) ctx.param(opt->get_name(), opt->results().front());

        int rc = kExitOk;
        if (sub == c_enum) rc = cmd_enum(ctx, d, L, n_max, model, budget);
        else if (sub == c_two) rc = cmd_twopoint(ctx, d, L, n_max, model, xs, budget);
        else if (sub == c_chi) rc = cmd_chi(ctx, d, L, n_max, model, tilt, eval_p, budget);
        else if (sub == c_mass) rc = cmd_mass(ctx, d, L, zs, nn, mu);
        else if (sub == c_greens) rc = cmd_greens(ctx, d, L, z, N, kind);
        else if (sub == c_decomp) rc = cmd_decomp(ctx, d, L, z);
        else if (sub == c_torus) rc = cmd_torus(ctx, d, L, r, n_max, model, xs, budget);
        else if (sub == c_sand) rc = cmd_sandwich(ctx, d, L, r, n_max, model, xs, ps, budget);
        else if (sub == c_lift) rc = cmd_lift_audit(ctx, d, L, r, n_max, model, budget);
        else if (sub == c_diag) rc = cmd_diagram(ctx, spec_path, p_float);
        else if (sub == c_wrap) rc = cmd_wrap(ctx, d, L, r, z, fold);
        else if (sub == c_prof) rc = cmd_profile(ctx, range);
        else if (sub == c_win) rc = cmd_window(ctx, d, r, gamma, dc);
        ctx.finish();
        return rc;
    } catch (const BudgetExceeded& e) {
        std::fprintf(stderr, "budget exhausted: %s\n", e.what());
        return kExitBudget;
    } catch (const PreconditionError& e) {
        std::fprintf(stderr, "precondition violation: %s\n", e.what());
        return kExitPrecondition;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitPrecondition;
    }
}
