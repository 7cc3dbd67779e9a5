#include "polylab/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "enum_core.hpp"

namespace polylab {

namespace {

using detail::EdgeRec;
using detail::GraphView;
using detail::SearchLimits;

// Positive step directions: s in [-L,L]^d \ {0} with s lexicographically > 0.
// The full direction set is these and their negatives.
std::vector<Point> positive_steps(int d, int L)
{
    std::vector<Point> steps;
    MultiIndexer box = MultiIndexer::box(d, L);
    Point origin = zero_point();
    box.for_each([&](long long, const Point& s) {
        if (norm_inf(s, d) == 0) return;
        if (lex_less(origin, s, d)) steps.push_back(s);
    });
    return steps;
}

// Z^d graph restricted to the box of radius n_max * L: every polymer with at
// most n_max bonds containing the origin fits, including all candidate edges
// the search can offer.
GraphView build_zd_graph(int d, int L, int n_max, const MultiIndexer& box)
{
    const auto steps = positive_steps(d, L);
    const int half = static_cast<int>(steps.size());
    GraphView g;
    g.n_vertices = box.total;
    g.n_edge_slots = box.total * half;
    g.root = box.encode(zero_point());
        g.adj_begin.assign(static_cast<std::size_t>(box.total) + 1, 0);
    const int R = n_max * L;

    std::vector<std::int64_t> other;
    std::vector<std::int64_t> key;
    other.reserve(static_cast<std::size_t>(box.total) * 2 * half);
    key.reserve(static_cast<std::size_t>(box.total) * 2 * half);
    box.for_each([&](long long vi, const Point& x) {
        g.adj_begin[static_cast<std::size_t>(vi)] = static_cast<std::int32_t>(other.size());
        for (int si = 0; si < half; ++si) {
            for (int sign = 0; sign < 2; ++sign) {
                Point y = sign == 0 ? add(x, steps[static_cast<std::size_t>(si)], d)
                                    : sub(x, steps[static_cast<std::size_t>(si)], d);
                bool in = true;
                for (int i = 0; i < d; ++i)
                    if (y[i] < -R || y[i] > R) { in = false; break; }
                if (!in) continue;
                const long long yi = box.encode(y);
                // undirected key: (smaller endpoint in the positive direction, step)
                const long long k = sign == 0 ? vi * half + si : yi * half + si;
                other.push_back(yi);
                key.push_back(k);
            }
        }
    });
    g.adj_begin[static_cast<std::size_t>(box.total)] = static_cast<std::int32_t>(other.size());
    g.adj_other = std::move(other);
    g.adj_key = std::move(key);
    return g;
}

struct Accum {
    std::vector<long long> t, rooted, chi, xi2num;
    std::vector<std::vector<long long>> twopoint;
    std::vector<std::vector<long long>> exclusion;

    void init(int n_max, long long sites, long long torus_sites)
    {
        t.assign(static_cast<std::size_t>(n_max) + 1, 0);
        rooted.assign(static_cast<std::size_t>(n_max) + 1, 0);
        chi.assign(static_cast<std::size_t>(n_max) + 1, 0);
        xi2num.assign(static_cast<std::size_t>(n_max) + 1, 0);
        twopoint.assign(static_cast<std::size_t>(n_max) + 1,
                        std::vector<long long>(static_cast<std::size_t>(sites), 0));
        if (torus_sites > 0)
            exclusion.assign(static_cast<std::size_t>(n_max) + 1,
                             std::vector<long long>(static_cast<std::size_t>(torus_sites), 0));
    }

    void merge(const Accum& o)
    {
        for (std::size_t n = 0; n < t.size(); ++n) {
            t[n] += o.t[n];
            rooted[n] += o.rooted[n];
            chi[n] += o.chi[n];
            xi2num[n] += o.xi2num[n];
            for (std::size_t i = 0; i < twopoint[n].size(); ++i)
                twopoint[n][i] += o.twopoint[n][i];
            if (!exclusion.empty())
                for (std::size_t i = 0; i < exclusion[n].size(); ++i)
                    exclusion[n][i] += o.exclusion[n][i];
        }
    }
};

// Counting visitor; all per-site quantities are precomputed tables indexed by
// the box site index, so a visit touches only integer arrays.
struct CountVisitor {
    const std::vector<long long>* normsq = nullptr;
    const std::vector<std::uint8_t>* below = nullptr; // lexicographically below 0
    const std::vector<std::int32_t>* proj = nullptr;  // torus class per site
    const std::vector<std::int64_t>* vlist = nullptr;
    Accum* acc = nullptr;
    detail::BudgetGate* gate = nullptr;

    int below_count = 0;
    // torus-class occupancy with a touched-list for O(|V|) reset
    std::vector<std::int32_t> class_count;
    std::vector<std::int32_t> touched;

    std::uint64_t local_visits = 0;

    void on_vertex_added(std::int64_t v)
    {
        below_count += (*below)[static_cast<std::size_t>(v)];
    }
    void on_vertex_removed(std::int64_t v)
    {
        below_count -= (*below)[static_cast<std::size_t>(v)];
    }

    bool visit(int n)
    {
        const auto& vs = *vlist;
        auto& a = *acc;
        const auto un = static_cast<std::size_t>(n);
        a.rooted[un] += 1;
        if (below_count == 0) a.t[un] += 1;
        a.chi[un] += static_cast<long long>(vs.size());
        auto& tp = a.twopoint[un];
        long long ns = 0;
        for (const auto v : vs) {
            tp[static_cast<std::size_t>(v)] += 1;
            ns += (*normsq)[static_cast<std::size_t>(v)];
        }
        a.xi2num[un] += ns;
        if (proj) {
            // ordered distinct equivalent pairs: B = sum_c cnt_c (cnt_c - 1)
            long long B = 0;
            for (const auto v : vs) {
                const auto c = (*proj)[static_cast<std::size_t>(v)];
                if (class_count[static_cast<std::size_t>(c)]++ == 0)
                    touched.push_back(c);
                else
                    B += 2LL * (class_count[static_cast<std::size_t>(c)] - 1);
            }
            if (B > 0) {
                auto& ex = a.exclusion[un];
                for (const auto c : touched)
                    ex[static_cast<std::size_t>(c)] +=
                        static_cast<long long>(class_count[static_cast<std::size_t>(c)]) * B;
            }
            for (const auto c : touched) class_count[static_cast<std::size_t>(c)] = 0;
            touched.clear();
        }
        if (++local_visits >= 4096) {
            const bool ok = gate->consume(local_visits);
            local_visits = 0;
            return ok;
        }
        return true;
    }

    bool flush() { const bool ok = gate->consume(local_visits); local_visits = 0; return ok; }
};

void validate_config(const EnumConfig& cfg)
{
    if (cfg.d < 1 || cfg.d > kMaxDim) throw PreconditionError("enumerate: bad dimension");
    if (cfg.L < 1) throw PreconditionError("enumerate: bad range");
    if (cfg.n_max < 0) throw PreconditionError("enumerate: bad n_max");
    if (cfg.budget > 1000000000000ULL)
        throw PreconditionError("enumerate: budget above 1e12 is not supported");
    if (cfg.torus_r != 0 && cfg.torus_r < 2 * cfg.L + 1)
        throw PreconditionError("enumerate: torus period must be >= 2L+1");
    // refuse up front when the graph tables alone would be unreasonable
    MultiIndexer box = MultiIndexer::box(cfg.d, cfg.n_max * cfg.L);
    long long omega = 1;
    for (int i = 0; i < cfg.d; ++i) omega *= 2LL * cfg.L + 1;
    if (box.total * omega > 200000000LL)
        throw BudgetExceeded("enumerate: projected state tables exceed the budget");
}

} // namespace

EnumResult enumerate_polymers(const EnumConfig& cfg)
{
    validate_config(cfg);
    EnumResult res;
    res.cfg = cfg;
    long long omega = 1;
    for (int i = 0; i < cfg.d; ++i) omega *= 2LL * cfg.L + 1;
    res.Omega = omega - 1;
    res.box = MultiIndexer::box(cfg.d, std::max(1, cfg.n_max) * cfg.L);

    const bool track_torus = cfg.torus_r > 0;
    if (track_torus) res.torus_box = MultiIndexer::torus(cfg.d, cfg.torus_r);

    // per-site tables
    std::vector<long long> normsq(static_cast<std::size_t>(res.box.total));
    std::vector<std::uint8_t> below(static_cast<std::size_t>(res.box.total));
    std::vector<std::int32_t> proj;
    if (track_torus) proj.resize(static_cast<std::size_t>(res.box.total));
    const Point origin = zero_point();
    res.box.for_each([&](long long i, const Point& x) {
        normsq[static_cast<std::size_t>(i)] = norm_sq(x, cfg.d);
        below[static_cast<std::size_t>(i)] = lex_less(x, origin, cfg.d) ? 1 : 0;
        if (track_torus)
            proj[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(
                res.torus_box.encode(torus_rep_point(x, cfg.torus_r, cfg.d)));
    });

    GraphView g = build_zd_graph(cfg.d, cfg.L, std::max(1, cfg.n_max), res.box);
    SearchLimits lim{cfg.n_max, cfg.model == Model::tree};
    detail::BudgetGate gate;
    gate.limit = cfg.budget;

    Accum total;
    total.init(cfg.n_max, res.box.total, track_torus ? res.torus_box.total : 0);
    // n = 0: the single-vertex polymer
    total.rooted[0] = 1;
    total.t[0] = 1;
    total.chi[0] = 1;
    total.twopoint[0][static_cast<std::size_t>(res.box.encode(origin))] = 1;
    gate.consume(1);

    if (cfg.n_max >= 1) {
        int threads = cfg.threads > 0 ? cfg.threads
                                      : static_cast<int>(std::thread::hardware_concurrency());
        if (threads < 1) threads = 1;

        // shard over the first included root edge; merge in shard order
        std::size_t n_shards;
        {
            CountVisitor probe; // only used to size the shard loop
            probe.normsq = &normsq;
            probe.below = &below;
            Accum dummy;
            dummy.init(0, 1, 0);
            probe.acc = &dummy;
            probe.gate = &gate;
            detail::Search<CountVisitor> s(g, lim, probe);
            probe.vlist = &s.vertex_list();
            n_shards = s.initial_count();
        }

        std::vector<Accum> per_shard(n_shards);
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::size_t shard = next.fetch_add(1);
                if (shard >= n_shards || gate.exceeded.load(std::memory_order_relaxed)) break;
                Accum& acc = per_shard[shard];
                acc.init(cfg.n_max, res.box.total, track_torus ? res.torus_box.total : 0);
                CountVisitor vis;
                vis.normsq = &normsq;
                vis.below = &below;
                if (track_torus) {
                    vis.proj = &proj;
                    vis.class_count.assign(static_cast<std::size_t>(res.torus_box.total), 0);
                    vis.touched.reserve(static_cast<std::size_t>(cfg.n_max) + 1);
                }
                vis.acc = &acc;
                vis.gate = &gate;
                detail::Search<CountVisitor> s(g, lim, vis);
                vis.vlist = &s.vertex_list();
                s.run_shard(shard);
                vis.flush();
            }
        };
        if (threads == 1 || n_shards <= 1) {
            worker();
        } else {
            const std::size_t n_workers =
                std::min(static_cast<std::size_t>(threads), n_shards);
            std::vector<std::thread> pool;
            for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }
        if (gate.exceeded.load())
            throw BudgetExceeded("enumerate: generated polymers exceeded the budget of " +
                                 std::to_string(cfg.budget));
        for (const auto& acc : per_shard) total.merge(acc);
    }

    res.t = std::move(total.t);
    res.rooted = std::move(total.rooted);
    res.chi = std::move(total.chi);
    res.xi2num = std::move(total.xi2num);
    res.twopoint = std::move(total.twopoint);
    res.exclusion = std::move(total.exclusion);
    return res;
}

namespace {

struct CollectVisitor {
    const MultiIndexer* box = nullptr;
    const std::vector<std::int64_t>* vlist = nullptr;
    const std::vector<EdgeRec>* edges = nullptr;
    const std::function<void(const EdgeList&)>* fn = nullptr;
    detail::BudgetGate* gate = nullptr;
    int d = 0;
    EdgeList scratch;

    void on_vertex_added(std::int64_t) {}
    void on_vertex_removed(std::int64_t) {}

    bool visit(int)
    {
        scratch.clear();
        for (const auto& e : *edges)
            scratch.emplace_back(box->decode(e.a), box->decode(e.b));
        (*fn)(scratch);
        return gate->consume(1);
    }
};

} // namespace

void for_each_polymer(const EnumConfig& cfg, const std::function<void(const EdgeList&)>& fn)
{
    validate_config(cfg);
    if (cfg.n_max < 1) return;
    MultiIndexer box = MultiIndexer::box(cfg.d, cfg.n_max * cfg.L);
    GraphView g = build_zd_graph(cfg.d, cfg.L, cfg.n_max, box);
    SearchLimits lim{cfg.n_max, cfg.model == Model::tree};
    detail::BudgetGate gate;
    gate.limit = cfg.budget;
    CollectVisitor vis;
    vis.box = &box;
    vis.fn = &fn;
    vis.gate = &gate;
    vis.d = cfg.d;
    detail::Search<CollectVisitor> s(g, lim, vis);
    vis.vlist = &s.vertex_list();
    vis.edges = &s.edge_stack();
    s.run_all();
    if (gate.exceeded.load()) throw BudgetExceeded("for_each_polymer: budget exceeded");
}

IntSeries two_point_series(const EnumResult& res, const Point& x)
{
    IntSeries s;
    s.Omega = res.Omega;
    s.c.resize(static_cast<std::size_t>(res.cfg.n_max) + 1);
    for (int n = 0; n <= res.cfg.n_max; ++n)
        s.c[static_cast<std::size_t>(n)] = big_int(res.twopoint_at(n, x));
    return s;
}

IntSeries one_point_series(const EnumResult& res)
{
    return two_point_series(res, zero_point());
}

IntSeries susceptibility_series(const EnumResult& res)
{
    IntSeries s;
    s.Omega = res.Omega;
    s.c.resize(static_cast<std::size_t>(res.cfg.n_max) + 1);
    for (int n = 0; n <= res.cfg.n_max; ++n)
        s.c[static_cast<std::size_t>(n)] = big_int(res.chi[static_cast<std::size_t>(n)]);
    return s;
}

IntSeries xi2_numerator_series(const EnumResult& res)
{
    IntSeries s;
    s.Omega = res.Omega;
    s.c.resize(static_cast<std::size_t>(res.cfg.n_max) + 1);
    for (int n = 0; n <= res.cfg.n_max; ++n)
        s.c[static_cast<std::size_t>(n)] = big_int(res.xi2num[static_cast<std::size_t>(n)]);
    return s;
}

RealSeries tilted_susceptibility_series(const EnumResult& res, double m)
{
    if (m < 0) throw PreconditionError("tilted susceptibility: m must be >= 0");
    RealSeries s;
    s.Omega = res.Omega;
    s.c.assign(static_cast<std::size_t>(res.cfg.n_max) + 1, 0.0);
    res.box.for_each([&](long long i, const Point& x) {
        const double w = std::exp(m * x[0]);
        for (int n = 0; n <= res.cfg.n_max; ++n) {
            const long long cn = res.twopoint[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)];
            if (cn != 0) s.c[static_cast<std::size_t>(n)] += w * static_cast<double>(cn);
        }
    });
    return s;
}

double xi2_series_eval(const EnumResult& res, double p)
{
    IntSeries chi = susceptibility_series(res);
    if (!chi.ratio_test(p))
        throw PreconditionError("xi2_series_eval: p fails the coefficient ratio test");
    const double num = xi2_numerator_series(res).eval_double(p);
    const double den = chi.eval_double(p);
    return std::sqrt(num / den);
}

PcEstimate pc_estimate(const EnumResult& res)
{
    if (res.cfg.n_max < 4) throw PreconditionError("pc_estimate: n_max must be >= 4");
    PcEstimate e;
    const auto& t = res.t;
    for (int n = std::max(1, res.cfg.n_max - 2); n <= res.cfg.n_max; ++n) {
        const double prev = static_cast<double>(t[static_cast<std::size_t>(n) - 1]);
        const double cur = static_cast<double>(t[static_cast<std::size_t>(n)]);
        if (prev <= 0 || cur <= 0) throw PreconditionError("pc_estimate: zero counts");
        e.last_ratios.push_back(cur / prev);
    }
    e.estimate = static_cast<double>(res.Omega) / e.last_ratios.back();
    return e;
}

SubadditivityReport check_subadditivity(const std::vector<long long>& t)
{
    SubadditivityReport rep;
    const int n_max = static_cast<int>(t.size()) - 1;
    for (int n = 0; n <= n_max; ++n)
        for (int m = n; n + m + 1 <= n_max; ++m) {
            // counts fit comfortably in 128-bit products
            const __int128 lhs =
                static_cast<__int128>(t[static_cast<std::size_t>(n)]) * t[static_cast<std::size_t>(m)];
            if (lhs > static_cast<__int128>(t[static_cast<std::size_t>(n) + m + 1])) {
                rep.ok = false;
                rep.violations.emplace_back(n, m);
            }
        }
    return rep;
}

SimonLiebReport simon_lieb_check(int d, int L, int n_max, Model model, const Rational& p,
                                 const std::vector<Point>& Lambda, const Point& x,
                                 std::uint64_t budget)
{
    if (Lambda.empty()) throw PreconditionError("simon_lieb_check: malformed Lambda");
    std::set<std::vector<int>> lam;
    bool has_origin = false;
    for (const auto& y : Lambda) {
        lam.insert(std::vector<int>(y.begin(), y.begin() + d));
        if (norm_inf(y, d) == 0) has_origin = true;
    }
    auto in_lambda = [&](const Point& y) {
        return lam.count(std::vector<int>(y.begin(), y.begin() + d)) > 0;
    };
    if (!has_origin) throw PreconditionError("simon_lieb_check: Lambda must contain 0");
    if (in_lambda(x)) throw PreconditionError("simon_lieb_check: x must lie outside Lambda");

    EnumConfig cfg;
    cfg.d = d;
    cfg.L = L;
    cfg.n_max = n_max;
    cfg.model = model;
    cfg.budget = budget;
    EnumResult res = enumerate_polymers(cfg);

    SimonLiebReport rep;
    rep.n_max = n_max;
    rep.lhs = two_point_series(res, x).eval(p);
    Rational rhs(0);
    const Rational pD = p / Rational(big_int(res.Omega));
    MultiIndexer steps = MultiIndexer::box(d, L);
    for (const auto& y : Lambda) {
        const Rational gy = two_point_series(res, y).eval(p);
        if (gy == 0) continue;
        steps.for_each([&](long long, const Point& s) {
            if (norm_inf(s, d) == 0) return;
            const Point zpt = add(y, s, d);
            if (in_lambda(zpt)) return;
            const Rational gxz = two_point_series(res, sub(x, zpt, d)).eval(p);
            if (gxz == 0) return;
            rhs += gy * pD * gxz;
        });
    }
    rhs.canonicalize();
    rep.rhs = rhs;
    rep.holds = rep.lhs <= rep.rhs;
    return rep;
}

} // namespace polylab
