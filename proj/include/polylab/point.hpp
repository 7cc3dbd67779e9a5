// Lattice points and dense multi-dimensional index arithmetic shared by all modules.
#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace polylab {

inline constexpr int kMaxDim = 8;

// A point of Z^d. Only the first d coordinates are meaningful; the rest stay zero
// so that comparisons and hashing can ignore d.
using Point = std::array<int, kMaxDim>;

inline Point zero_point()
{
    return Point{};
}

inline Point make_point(const std::vector<int>& coords)
{
    if (coords.size() > kMaxDim) throw std::invalid_argument("point dimension exceeds kMaxDim");
    Point p{};
    for (std::size_t i = 0; i < coords.size(); ++i) p[i] = coords[i];
    return p;
}

inline bool lex_less(const Point& a, const Point& b, int d)
{
    for (int i = 0; i < d; ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

inline Point add(const Point& a, const Point& b, int d)
{
    Point r{};
    for (int i = 0; i < d; ++i) r[i] = a[i] + b[i];
    return r;
}

inline Point sub(const Point& a, const Point& b, int d)
{
    Point r{};
    for (int i = 0; i < d; ++i) r[i] = a[i] - b[i];
    return r;
}

inline Point negate(const Point& a, int d)
{
    Point r{};
    for (int i = 0; i < d; ++i) r[i] = -a[i];
    return r;
}

inline long long norm_sq(const Point& a, int d)
{
    long long s = 0;
    for (int i = 0; i < d; ++i) s += static_cast<long long>(a[i]) * a[i];
    return s;
}

inline int norm_inf(const Point& a, int d)
{
    int m = 0;
    for (int i = 0; i < d; ++i) {
        int v = a[i] < 0 ? -a[i] : a[i];
        if (v > m) m = v;
    }
    return m;
}

inline std::string point_to_string(const Point& a, int d)
{
    std::string s = "(";
    for (int i = 0; i < d; ++i) {
        if (i) s += ",";
        s += std::to_string(a[i]);
    }
    return s + ")";
}

// Representative of x mod r in Lambda_r = [-floor(r/2), ceil(r/2)-1].
inline int torus_rep(int x, int r)
{
    int m = x % r;
    if (m < 0) m += r;
    if (m >= (r + 1) / 2) m -= r;
    return m;
}

inline Point torus_rep_point(const Point& x, int r, int d)
{
    Point p{};
    for (int i = 0; i < d; ++i) p[i] = torus_rep(x[i], r);
    return p;
}

// Row-major indexer over a dense rectangular block: coordinate i ranges over
// [off, off+len). Boxes use len = 2R+1, off = -R; tori use len = r, off = -floor(r/2)
// (the Lambda_r representatives).
struct MultiIndexer {
    int d = 0;
    std::array<int, kMaxDim> len{};
    std::array<int, kMaxDim> off{};
    std::array<long long, kMaxDim> stride{};
    long long total = 0;

    static MultiIndexer box(int d, int radius)
    {
        MultiIndexer m;
        m.d = d;
        long long s = 1;
        for (int i = d - 1; i >= 0; --i) {
            m.len[i] = 2 * radius + 1;
            m.off[i] = -radius;
            m.stride[i] = s;
            s *= m.len[i];
        }
        m.total = s;
        return m;
    }

    static MultiIndexer torus(int d, int period)
    {
        MultiIndexer m;
        m.d = d;
        long long s = 1;
        for (int i = d - 1; i >= 0; --i) {
            m.len[i] = period;
            m.off[i] = -(period / 2);
            m.stride[i] = s;
            s *= m.len[i];
        }
        m.total = s;
        return m;
    }

    bool contains(const Point& p) const
    {
        for (int i = 0; i < d; ++i) {
            int c = p[i] - off[i];
            if (c < 0 || c >= len[i]) return false;
        }
        return true;
    }

    long long encode(const Point& p) const
    {
        long long idx = 0;
        for (int i = 0; i < d; ++i) idx += static_cast<long long>(p[i] - off[i]) * stride[i];
        return idx;
    }

    Point decode(long long idx) const
    {
        Point p{};
        for (int i = 0; i < d; ++i) {
            p[i] = static_cast<int>(idx / stride[i]) + off[i];
            idx %= stride[i];
        }
        return p;
    }

    // Visits all cells in row-major order.
    template <class F>
    void for_each(F&& fn) const
    {
        Point p{};
        for (int i = 0; i < d; ++i) p[i] = off[i];
        for (long long idx = 0; idx < total; ++idx) {
            fn(idx, p);
            for (int i = d - 1; i >= 0; --i) {
                if (++p[i] < off[i] + len[i]) break;
                p[i] = off[i];
            }
        }
    }
};

class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace polylab
