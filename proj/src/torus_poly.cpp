#include "polylab/torus_poly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "enum_core.hpp"
#include "polylab/greens.hpp"

namespace polylab {

void normalize_edges(EdgeList& edges, int d)
{
    for (auto& e : edges)
        if (lex_less(e.second, e.first, d)) std::swap(e.first, e.second);
    std::sort(edges.begin(), edges.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return lex_less(a.first, b.first, d);
        return lex_less(a.second, b.second, d);
    });
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

std::vector<int> edge_list_key(const EdgeList& edges, int d)
{
    std::vector<int> key;
    key.reserve(edges.size() * 2 * static_cast<std::size_t>(d));
    for (const auto& e : edges) {
        for (int i = 0; i < d; ++i) key.push_back(e.first[i]);
        for (int i = 0; i < d; ++i) key.push_back(e.second[i]);
    }
    return key;
}

TorusPolymer project_polymer(const Polymer& poly, int r)
{
    if (r < 2 * poly.L + 1) throw PreconditionError("project: period must be >= 2L+1");
    TorusPolymer t;
    t.d = poly.d;
    t.L = poly.L;
    t.r = r;
    t.model = poly.model;
    t.edges.reserve(poly.edges.size());
    for (const auto& e : poly.edges)
        t.edges.emplace_back(torus_rep_point(e.first, r, poly.d),
                             torus_rep_point(e.second, r, poly.d));
    normalize_edges(t.edges, poly.d);
    return t;
}

namespace {

// The representative of a projected step: components reduced into
// [-floor(r/2), ...); for a valid torus edge this lands in [-L, L]^d.
Point step_rep(const Point& from, const Point& to, int d, int L, int r)
{
    Point s = torus_rep_point(sub(to, from, d), r, d);
    if (norm_inf(s, d) == 0 || norm_inf(s, d) > L)
        throw PreconditionError("invalid torus step (range violated)");
    return s;
}

} // namespace

std::vector<Point> lift_walk(const std::vector<Point>& walk, int d, int L, int r)
{
    if (r < 2 * L + 1) throw PreconditionError("lift_walk: period must be >= 2L+1");
    if (walk.empty() || norm_inf(walk.front(), d) != 0)
        throw PreconditionError("lift_walk: walk must start at 0");
    std::vector<Point> lifted;
    lifted.reserve(walk.size());
    lifted.push_back(zero_point());
    for (std::size_t i = 1; i < walk.size(); ++i)
        lifted.push_back(add(lifted.back(), step_rep(walk[i - 1], walk[i], d, L, r), d));
    return lifted;
}

namespace {

struct TorusAdjacency {
    // vertex (as key) -> list of (neighbour, edge index)
    std::map<std::vector<int>, std::vector<std::pair<Point, std::size_t>>> at;

    static std::vector<int> key(const Point& p, int d)
    {
        return std::vector<int>(p.begin(), p.begin() + d);
    }

    explicit TorusAdjacency(const TorusPolymer& poly)
    {
        for (std::size_t i = 0; i < poly.edges.size(); ++i) {
            const auto& e = poly.edges[i];
            at[key(e.first, poly.d)].emplace_back(e.second, i);
            at[key(e.second, poly.d)].emplace_back(e.first, i);
        }
    }
};

bool contains_origin(const TorusPolymer& poly)
{
    for (const auto& e : poly.edges)
        if (norm_inf(e.first, poly.d) == 0 || norm_inf(e.second, poly.d) == 0) return true;
    return poly.edges.empty();
}

// Lifts a torus tree given as an adjacency structure; returns the vertex map.
std::map<std::vector<int>, Point> lift_tree_vertices(const TorusPolymer& tree)
{
    TorusAdjacency adj(tree);
    std::map<std::vector<int>, Point> hat;
    const Point origin = zero_point();
    hat[TorusAdjacency::key(origin, tree.d)] = origin;
    // BFS; tree paths are unique so the assignment is consistent
    std::vector<Point> queue{origin};
    while (!queue.empty()) {
        Point u = queue.back();
        queue.pop_back();
        const Point hu = hat[TorusAdjacency::key(u, tree.d)];
        auto it = adj.at.find(TorusAdjacency::key(u, tree.d));
        if (it == adj.at.end()) continue;
        for (const auto& [v, ei] : it->second) {
            auto kv = TorusAdjacency::key(v, tree.d);
            if (hat.count(kv)) continue;
            hat[kv] = add(hu, step_rep(u, v, tree.d, tree.L, tree.r), tree.d);
            queue.push_back(v);
        }
    }
    if (!tree.edges.empty() && hat.size() != adj.at.size())
        throw PreconditionError("lift: polymer is not connected to 0");
    return hat;
}

bool lift_is_faithful(const Polymer& lifted, int r)
{
    std::set<std::vector<int>> classes;
    std::set<std::vector<int>> verts;
    for (const auto& e : lifted.edges) {
        for (const Point* p : {&e.first, &e.second}) {
            auto vk = TorusAdjacency::key(*p, lifted.d);
            if (!verts.insert(vk).second) continue;
            auto ck = TorusAdjacency::key(torus_rep_point(*p, r, lifted.d), lifted.d);
            if (!classes.insert(ck).second) return false;
        }
    }
    return true;
}

} // namespace

LiftResult lift_tree(const TorusPolymer& tree)
{
    if (tree.r < 2 * tree.L + 1) throw PreconditionError("lift_tree: period must be >= 2L+1");
    if (!contains_origin(tree)) throw PreconditionError("lift_tree: tree must contain 0");
    // acyclicity: |V| = |E| + 1 once connectivity holds
    auto hat = lift_tree_vertices(tree);
    if (!tree.edges.empty() && hat.size() != tree.edges.size() + 1)
        throw PreconditionError("lift_tree: input is not a tree");
    LiftResult out;
    out.base = tree;
    out.zd_polymer.d = tree.d;
    out.zd_polymer.L = tree.L;
    out.zd_polymer.model = tree.model;
    for (const auto& e : tree.edges)
        out.zd_polymer.edges.emplace_back(hat.at(TorusAdjacency::key(e.first, tree.d)),
                                          hat.at(TorusAdjacency::key(e.second, tree.d)));
    normalize_edges(out.zd_polymer.edges, tree.d);
    out.faithful = lift_is_faithful(out.zd_polymer, tree.r);
    return out;
}

LiftResult lift_animal(const TorusPolymer& animal)
{
    const int d = animal.d;
    if (animal.r < 2 * animal.L + 1)
        throw PreconditionError("lift_animal: period must be >= 2L+1");
    if (!contains_origin(animal)) throw PreconditionError("lift_animal: animal must contain 0");

    // vertex set in torus order (lexicographic on Lambda_r representatives)
    std::set<std::vector<int>> vset;
    for (const auto& e : animal.edges) {
        vset.insert(TorusAdjacency::key(e.first, d));
        vset.insert(TorusAdjacency::key(e.second, d));
    }
    if (animal.edges.empty()) vset.insert(TorusAdjacency::key(zero_point(), d));

    // steps in lexicographic order on [-L,L]^d \ {0}
    std::vector<Point> steps;
    MultiIndexer sbox = MultiIndexer::box(d, animal.L);
    sbox.for_each([&](long long, const Point& s) {
        if (norm_inf(s, d) > 0) steps.push_back(s);
    });

    std::set<std::pair<std::vector<int>, std::vector<int>>> edge_set;
    for (const auto& e : animal.edges)
        edge_set.insert({TorusAdjacency::key(e.first, d), TorusAdjacency::key(e.second, d)});
    auto has_edge = [&](const Point& u, const Point& v) {
        auto ku = TorusAdjacency::key(u, d), kv = TorusAdjacency::key(v, d);
        return edge_set.count({ku, kv}) > 0 || edge_set.count({kv, ku}) > 0;
    };

    // grow the canonical spanning tree: repeatedly take the first tree vertex
    // (torus order) incident to an edge of the animal whose other endpoint is
    // outside the tree, and add the first such edge (step order)
    std::set<std::vector<int>> tree_v{TorusAdjacency::key(zero_point(), d)};
    TorusPolymer tree;
    tree.d = d;
    tree.L = animal.L;
    tree.r = animal.r;
    tree.model = Model::tree;
    while (tree_v.size() < vset.size()) {
        bool grew = false;
        for (const auto& uk : tree_v) {
            Point u = make_point(uk);
            for (const auto& s : steps) {
                Point v = torus_rep_point(add(u, s, d), animal.r, d);
                auto vk = TorusAdjacency::key(v, d);
                if (tree_v.count(vk)) continue;
                if (!vset.count(vk)) continue;
                if (!has_edge(u, v)) continue;
                tree.edges.emplace_back(u, v);
                tree_v.insert(vk);
                grew = true;
                break;
            }
            if (grew) break;
        }
        if (!grew) throw PreconditionError("lift_animal: animal is not connected to 0");
    }

    auto hat = lift_tree_vertices(tree);

    LiftResult out;
    out.base = animal;
    out.zd_polymer.d = d;
    out.zd_polymer.L = animal.L;
    out.zd_polymer.model = animal.model;
    for (const auto& e : tree.edges)
        out.zd_polymer.edges.emplace_back(hat.at(TorusAdjacency::key(e.first, d)),
                                          hat.at(TorusAdjacency::key(e.second, d)));
    // excess edges {u,v}, u < v in torus order, lifted to {hat u, hat u + (v-u)}
    EdgeList tree_edges = tree.edges;
    normalize_edges(tree_edges, d);
    std::set<std::pair<std::vector<int>, std::vector<int>>> in_tree;
    for (const auto& e : tree_edges)
        in_tree.insert({TorusAdjacency::key(e.first, d), TorusAdjacency::key(e.second, d)});
    for (const auto& e : animal.edges) {
        Point u = e.first, v = e.second;
        if (lex_less(v, u, d)) std::swap(u, v);
        if (in_tree.count({TorusAdjacency::key(u, d), TorusAdjacency::key(v, d)})) continue;
        const Point hu = hat.at(TorusAdjacency::key(u, d));
        out.zd_polymer.edges.emplace_back(hu, add(hu, step_rep(u, v, d, animal.L, animal.r), d));
    }
    normalize_edges(out.zd_polymer.edges, d);
    out.faithful = lift_is_faithful(out.zd_polymer, animal.r);
    return out;
}

namespace {

using detail::GraphView;

GraphView build_torus_graph(int d, int L, int r, const MultiIndexer& box)
{
    std::vector<Point> pos;
    MultiIndexer sbox = MultiIndexer::box(d, L);
    const Point origin = zero_point();
    sbox.for_each([&](long long, const Point& s) {
        if (norm_inf(s, d) > 0 && lex_less(origin, s, d)) pos.push_back(s);
    });
    const int half = static_cast<int>(pos.size());
    GraphView g;
    g.n_vertices = box.total;
    g.n_edge_slots = box.total * half;
    g.root = box.encode(zero_point());
    g.adj_begin.assign(static_cast<std::size_t>(box.total) + 1, 0);
    std::vector<std::int64_t> other, key;
    box.for_each([&](long long vi, const Point& x) {
        g.adj_begin[static_cast<std::size_t>(vi)] = static_cast<std::int32_t>(other.size());
        for (int si = 0; si < half; ++si) {
            for (int sign = 0; sign < 2; ++sign) {
                const Point s = pos[static_cast<std::size_t>(si)];
                Point y = torus_rep_point(sign == 0 ? add(x, s, d) : sub(x, s, d), r, d);
                const long long yi = box.encode(y);
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

struct TorusCountVisitor {
    const std::vector<std::int64_t>* vlist = nullptr;
    std::vector<long long>* chi = nullptr;
    std::vector<std::vector<long long>>* twopoint = nullptr;
    detail::BudgetGate* gate = nullptr;
    std::uint64_t local_visits = 0;

    void on_vertex_added(std::int64_t) {}
    void on_vertex_removed(std::int64_t) {}

    bool visit(int n)
    {
        const auto un = static_cast<std::size_t>(n);
        (*chi)[un] += static_cast<long long>(vlist->size());
        auto& tp = (*twopoint)[un];
        for (const auto v : *vlist) tp[static_cast<std::size_t>(v)] += 1;
        if (++local_visits >= 4096) {
            const bool ok = gate->consume(local_visits);
            local_visits = 0;
            return ok;
        }
        return true;
    }
    bool flush() { const bool ok = gate->consume(local_visits); local_visits = 0; return ok; }
};

void validate_torus_config(const TorusEnumConfig& cfg)
{
    if (cfg.d < 1 || cfg.d > kMaxDim) throw PreconditionError("enumerate_torus: bad dimension");
    if (cfg.L < 1) throw PreconditionError("enumerate_torus: bad range");
    if (cfg.r < 2 * cfg.L + 1) throw PreconditionError("enumerate_torus: period must be >= 2L+1");
    if (cfg.n_max < 0) throw PreconditionError("enumerate_torus: bad n_max");
}

} // namespace

TorusEnumResult enumerate_torus(const TorusEnumConfig& cfg)
{
    validate_torus_config(cfg);
    TorusEnumResult res;
    res.cfg = cfg;
    long long omega = 1;
    for (int i = 0; i < cfg.d; ++i) omega *= 2LL * cfg.L + 1;
    res.Omega = omega - 1;
    res.box = MultiIndexer::torus(cfg.d, cfg.r);
    res.chi.assign(static_cast<std::size_t>(cfg.n_max) + 1, 0);
    res.twopoint.assign(static_cast<std::size_t>(cfg.n_max) + 1,
                        std::vector<long long>(static_cast<std::size_t>(res.box.total), 0));
    res.chi[0] = 1;
    res.twopoint[0][static_cast<std::size_t>(res.box.encode(zero_point()))] = 1;

    if (cfg.n_max >= 1) {
        GraphView g = build_torus_graph(cfg.d, cfg.L, cfg.r, res.box);
        detail::SearchLimits lim{cfg.n_max, cfg.model == Model::tree};
        detail::BudgetGate gate;
        gate.limit = cfg.budget;
        gate.consume(1);
        TorusCountVisitor vis;
        vis.chi = &res.chi;
        vis.twopoint = &res.twopoint;
        vis.gate = &gate;
        detail::Search<TorusCountVisitor> s(g, lim, vis);
        vis.vlist = &s.vertex_list();
        s.run_all();
        vis.flush();
        if (gate.exceeded.load()) throw BudgetExceeded("enumerate_torus: budget exceeded");
    }
    return res;
}

namespace {

struct TorusCollectVisitor {
    const MultiIndexer* box = nullptr;
    const std::vector<detail::EdgeRec>* edges = nullptr;
    const std::function<void(const EdgeList&)>* fn = nullptr;
    detail::BudgetGate* gate = nullptr;
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

void for_each_torus_polymer(const TorusEnumConfig& cfg,
                            const std::function<void(const EdgeList&)>& fn)
{
    validate_torus_config(cfg);
    if (cfg.n_max < 1) return;
    MultiIndexer box = MultiIndexer::torus(cfg.d, cfg.r);
    GraphView g = build_torus_graph(cfg.d, cfg.L, cfg.r, box);
    detail::SearchLimits lim{cfg.n_max, cfg.model == Model::tree};
    detail::BudgetGate gate;
    gate.limit = cfg.budget;
    TorusCollectVisitor vis;
    vis.box = &box;
    vis.fn = &fn;
    vis.gate = &gate;
    detail::Search<TorusCollectVisitor> s(g, lim, vis);
    vis.edges = &s.edge_stack();
    s.run_all();
    if (gate.exceeded.load()) throw BudgetExceeded("for_each_torus_polymer: budget exceeded");
}

IntSeries torus_two_point_series(const TorusEnumResult& res, const Point& x)
{
    IntSeries s;
    s.Omega = res.Omega;
    s.c.resize(static_cast<std::size_t>(res.cfg.n_max) + 1);
    for (int n = 0; n <= res.cfg.n_max; ++n)
        s.c[static_cast<std::size_t>(n)] = big_int(res.twopoint_at(n, x));
    return s;
}

IntSeries psi_series(const EnumResult& zd, int r, const Point& x)
{
    if (r < 2 * zd.cfg.L + 1) throw PreconditionError("psi_series: period must be >= 2L+1");
    IntSeries s;
    s.Omega = zd.Omega;
    s.c.assign(static_cast<std::size_t>(zd.cfg.n_max) + 1, BigInt(0));
    const Point xrep = torus_rep_point(x, r, zd.cfg.d);
    zd.box.for_each([&](long long i, const Point& y) {
        if (torus_rep_point(y, r, zd.cfg.d) != xrep) return;
        if (y == xrep) return; // exclude the representative itself
        for (int n = 0; n <= zd.cfg.n_max; ++n) {
            const long long c = zd.twopoint[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)];
            if (c != 0) s.c[static_cast<std::size_t>(n)] += big_int(c);
        }
    });
    return s;
}

IntSeries big_e_series(const EnumResult& zd, const Point& x)
{
    if (zd.cfg.torus_r <= 0)
        throw PreconditionError("big_e_series: run enumerate_polymers with torus_r set");
    IntSeries s;
    s.Omega = zd.Omega;
    s.c.resize(static_cast<std::size_t>(zd.cfg.n_max) + 1);
    const long long xi =
        zd.torus_box.encode(torus_rep_point(x, zd.cfg.torus_r, zd.cfg.d));
    for (int n = 0; n <= zd.cfg.n_max; ++n)
        s.c[static_cast<std::size_t>(n)] =
            big_int(zd.exclusion[static_cast<std::size_t>(n)][static_cast<std::size_t>(xi)]);
    return s;
}

SandwichReport sandwich_check(int d, int L, int r, int n_max, Model model, const Point& x,
                              const Rational& p, std::uint64_t budget, int threads)
{
    EnumConfig zcfg;
    zcfg.d = d;
    zcfg.L = L;
    zcfg.n_max = n_max;
    zcfg.model = model;
    zcfg.budget = budget;
    zcfg.threads = threads;
    zcfg.torus_r = r;
    EnumResult zd = enumerate_polymers(zcfg);

    TorusEnumConfig tcfg;
    tcfg.d = d;
    tcfg.L = L;
    tcfg.r = r;
    tcfg.n_max = n_max;
    tcfg.model = model;
    tcfg.budget = budget;
    TorusEnumResult tor = enumerate_torus(tcfg);

    const Point xrep = torus_rep_point(x, r, d);
    IntSeries g = two_point_series(zd, xrep);
    IntSeries gt = torus_two_point_series(tor, xrep);
    IntSeries psi = psi_series(zd, r, xrep);
    IntSeries ee = big_e_series(zd, xrep);

    SandwichReport rep;
    rep.trivial = true;
    for (int n = 0; n <= n_max; ++n) {
        SandwichRow row;
        row.n = n;
        row.g = g.c[static_cast<std::size_t>(n)].get_si();
        row.g_torus = gt.c[static_cast<std::size_t>(n)].get_si();
        row.psi = psi.c[static_cast<std::size_t>(n)].get_si();
        row.e = ee.c[static_cast<std::size_t>(n)].get_si();
        if (row.psi != 0 || row.e != 0 || row.g != row.g_torus) rep.trivial = false;
        const long long diff = row.g_torus - row.g;
        if (diff > row.psi) rep.upper_ok = false;
        if (row.psi - row.e > diff) rep.lower_ok = false;
        rep.rows.push_back(row);
    }
    rep.lhs_at_p = psi.eval(p) - ee.eval(p);
    rep.mid_at_p = gt.eval(p) - g.eval(p);
    rep.rhs_at_p = psi.eval(p);
    rep.eval_ok = rep.lhs_at_p <= rep.mid_at_p && rep.mid_at_p <= rep.rhs_at_p;
    return rep;
}

WrapIdentityReport wrap_identity_check(const StepKernel& k, double z, int r, int fold)
{
    if (fold < 1 || fold > 4) throw PreconditionError("wrap_identity_check: fold in 1..4");
    const double m = so_mass(k, z).m;
    int radius = std::max(3 * r, static_cast<int>(std::ceil(30.0 / m)) + r);
    int N = 2 * radius + 2;
    if (N % 2) ++N;
    Field S_torus = green_field(k, z, N);
    Field S = to_box(S_torus, radius);

    // path 1: wrap first, then torus powers
    Field gamma = wrap_sum(S, r);
    Field path1 = gamma;
    for (int i = 1; i < fold; ++i) path1 = torus_convolve(path1, gamma);

    // path 2: Z^d powers first, then wrap
    Field Sk = S;
    for (int i = 1; i < fold; ++i) Sk = zd_convolve(Sk, S);
    Field path2 = wrap_sum(Sk, r);

    WrapIdentityReport rep;
    rep.fold = fold;
    rep.box_radius = radius;
    double worst = 0;
    for (std::size_t i = 0; i < path1.v.size(); ++i)
        worst = std::max(worst, std::abs(path1.v[i] - path2.v[i]));
    rep.max_discrepancy = worst;
    return rep;
}

} // namespace polylab
