// Duplicate-free enumeration of connected bond polymers (trees/animals) rooted
// at a vertex, over a finite graph view with precomputed adjacency. The search
// keeps an "untried" list of candidate edges: at each level the front candidate
// is removed, the polymer with that edge added is visited and extended, and the
// candidate then stays excluded for the rest of the level. Every connected edge
// set containing the root is produced exactly once.
#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "polylab/point.hpp"

namespace polylab::detail {

struct EdgeRec {
    std::int64_t a = 0; // vertex indices
    std::int64_t b = 0;
    std::int64_t key = 0;
};

// Precomputed graph: per-vertex adjacency (other endpoint, undirected edge key).
struct GraphView {
    std::int64_t n_vertices = 0;
    std::int64_t n_edge_slots = 0;
    std::int64_t root = 0;
    std::vector<std::int64_t> adj_other; // flattened, degree entries per vertex
    std::vector<std::int64_t> adj_key;
    std::vector<std::int32_t> adj_begin; // size n_vertices + 1 (offsets)
};

struct SearchLimits {
    int n_max = 0;
    bool trees_only = false;
};

// Shared across shards: generated-polymer budget accounting.
struct BudgetGate {
    std::atomic<std::uint64_t> used{0};
    std::atomic<bool> exceeded{false};
    std::uint64_t limit = 0;

    // returns false once the budget is exhausted
    bool consume(std::uint64_t amount)
    {
        if (used.fetch_add(amount, std::memory_order_relaxed) + amount > limit) {
            exceeded.store(true, std::memory_order_relaxed);
            return false;
        }
        return !exceeded.load(std::memory_order_relaxed);
    }
};

// Visitor contract:
//   void on_vertex_added(int64 v);    // v enters the vertex set (root excluded)
//   void on_vertex_removed(int64 v);
//   bool visit(int n_bonds);          // called for every polymer; false aborts
// The driver exposes current state through references handed to the visitor at
// construction time (edge stack, vertex list).
template <class Visitor>
class Search {
public:
    Search(const GraphView& g, const SearchLimits& lim, Visitor& vis)
        : g_(g), lim_(lim), vis_(vis)
    {
        vcount_.assign(static_cast<std::size_t>(g.n_vertices), 0);
        marks_.assign(static_cast<std::size_t>(g.n_edge_slots), 0);
        vlist_.reserve(static_cast<std::size_t>(lim.n_max) + 1);
        vlist_.push_back(g.root);
        edges_.reserve(static_cast<std::size_t>(lim.n_max));
        untried_.reserve(1024);
    }

    const std::vector<std::int64_t>& vertex_list() const { return vlist_; }
    const std::vector<EdgeRec>& edge_stack() const { return edges_; }

    // Runs the whole search (single shard). The root's incident edges are the
    // initial untried list, offered in adjacency order.
    bool run_all()
    {
        push_initial();
        const bool ok = recurse(0, untried_.size());
        pop_to(0);
        return ok;
    }

    // Runs only the subtree in which initial edge `index` is the first edge
    // included (edges before it excluded). Used for sharded/parallel runs.
    bool run_shard(std::size_t index)
    {
        push_initial();
        bool ok = true;
        if (index < untried_.size()) ok = include_and_descend(index, untried_.size());
        pop_to(0);
        return ok;
    }

    std::size_t initial_count()
    {
        push_initial();
        const std::size_t n = untried_.size();
        pop_to(0);
        return n;
    }

private:
    void push_initial()
    {
        const auto lo = static_cast<std::size_t>(g_.adj_begin[static_cast<std::size_t>(g_.root)]);
        const auto hi = static_cast<std::size_t>(g_.adj_begin[static_cast<std::size_t>(g_.root) + 1]);
        for (std::size_t i = lo; i < hi; ++i) {
            const std::int64_t key = g_.adj_key[i];
            if (marks_[static_cast<std::size_t>(key)]) continue; // parallel slot guard
            marks_[static_cast<std::size_t>(key)] = 1;
            untried_.push_back(PackedEdge{g_.root, g_.adj_other[i], key});
        }
    }

    struct PackedEdge {
        std::int64_t a, b, key;
    };

    bool vertex_in(std::int64_t v) const
    {
        return v == g_.root || vcount_[static_cast<std::size_t>(v)] > 0;
    }

    void add_vertex_use(std::int64_t v)
    {
        if (v != g_.root && vcount_[static_cast<std::size_t>(v)]++ == 0) {
            vlist_.push_back(v);
            vis_.on_vertex_added(v);
        }
    }

    void remove_vertex_use(std::int64_t v)
    {
        if (v != g_.root && --vcount_[static_cast<std::size_t>(v)] == 0) {
            vlist_.pop_back();
            vis_.on_vertex_removed(v);
        }
    }

    void pop_to(std::size_t size)
    {
        while (untried_.size() > size) {
            marks_[static_cast<std::size_t>(untried_.back().key)] = 0;
            untried_.pop_back();
        }
    }

    bool include_and_descend(std::size_t i, std::size_t hi)
    {
        const PackedEdge e = untried_[i];
        const bool a_in = vertex_in(e.a);
        const bool b_in = vertex_in(e.b);
        if (lim_.trees_only && a_in && b_in) return true; // cycle edge: skip branch
        add_vertex_use(e.a);
        add_vertex_use(e.b);
        edges_.push_back(EdgeRec{e.a, e.b, e.key});
        bool ok = vis_.visit(static_cast<int>(edges_.size()));
        if (ok && static_cast<int>(edges_.size()) < lim_.n_max) {
            if (!a_in) offer_edges_at(e.a);
            if (!b_in) offer_edges_at(e.b);
            ok = recurse(i + 1, untried_.size());
            pop_to(hi);
        }
        edges_.pop_back();
        remove_vertex_use(e.b);
        remove_vertex_use(e.a);
        return ok;
    }

    void offer_edges_at(std::int64_t v)
    {
        const auto lo = static_cast<std::size_t>(g_.adj_begin[static_cast<std::size_t>(v)]);
        const auto hi = static_cast<std::size_t>(g_.adj_begin[static_cast<std::size_t>(v) + 1]);
        for (std::size_t i = lo; i < hi; ++i) {
            const std::int64_t key = g_.adj_key[i];
            if (marks_[static_cast<std::size_t>(key)]) continue;
            marks_[static_cast<std::size_t>(key)] = 1;
            untried_.push_back(PackedEdge{v, g_.adj_other[i], key});
        }
    }

    bool recurse(std::size_t lo, std::size_t hi)
    {
        for (std::size_t i = lo; i < hi; ++i) {
            if (!include_and_descend(i, hi)) return false;
        }
        return true;
    }

    const GraphView& g_;
    const SearchLimits& lim_;
    Visitor& vis_;
    std::vector<std::int32_t> vcount_;
    std::vector<std::uint8_t> marks_;
    std::vector<PackedEdge> untried_;
    std::vector<std::int64_t> vlist_;
    std::vector<EdgeRec> edges_;
};

} // namespace polylab::detail
