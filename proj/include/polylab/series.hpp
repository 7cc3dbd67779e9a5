// Truncated power series in (p/Omega)^n with exact integer or real coefficients.
#pragma once

#include <string>
#include <vector>

#include "polylab/exact.hpp"
#include "polylab/point.hpp"

namespace polylab {

// Counting series: the represented quantity is sum_n c[n] (p/Omega)^n.
struct IntSeries {
    std::vector<BigInt> c;
    long long Omega = 0;

    int n_max() const { return static_cast<int>(c.size()) - 1; }

    Rational eval(const Rational& p) const
    {
        Rational q = p / Rational(big_int(Omega));
        q.canonicalize();
        // Horner from the top coefficient
        Rational acc(0);
        for (int n = n_max(); n >= 0; --n) {
            acc *= q;
            acc += Rational(c[static_cast<std::size_t>(n)]);
        }
        acc.canonicalize();
        return acc;
    }

    double eval_double(double p) const
    {
        const long double q = static_cast<long double>(p) / static_cast<long double>(Omega);
        long double acc = 0;
        for (int n = n_max(); n >= 0; --n) {
            acc = acc * q + static_cast<long double>(c[static_cast<std::size_t>(n)].get_d());
        }
        return static_cast<double>(acc);
    }

    // Empirical convergence gate: p * rho / Omega <= threshold with rho the
    // largest of the last (up to) three coefficient ratios.
    bool ratio_test(double p, double threshold = 0.7) const
    {
        double rho = 0.0;
        int seen = 0;
        for (int n = n_max(); n >= 1 && seen < 3; --n) {
            const double cn = c[static_cast<std::size_t>(n)].get_d();
            const double cm = c[static_cast<std::size_t>(n) - 1].get_d();
            if (cm <= 0.0 || cn <= 0.0) continue;
            rho = std::max(rho, cn / cm);
            ++seen;
        }
        if (seen == 0) return true;
        return p * rho / static_cast<double>(Omega) <= threshold;
    }
};

struct RealSeries {
    std::vector<double> c;
    long long Omega = 0;

    int n_max() const { return static_cast<int>(c.size()) - 1; }

    double eval(double p) const
    {
        const long double q = static_cast<long double>(p) / static_cast<long double>(Omega);
        long double acc = 0;
        for (int n = n_max(); n >= 0; --n)
            acc = acc * q + c[static_cast<std::size_t>(n)];
        return static_cast<double>(acc);
    }
};

} // namespace polylab
