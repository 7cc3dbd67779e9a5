// Faxen-type profile integrals and finite-size scaling window arithmetic.
#pragma once

#include <string>
#include <vector>

namespace polylab {

struct ProfileValue {
    double s = 0;
    double I0 = 0;
    std::string method;   // "quadrature" or "asymptotic"
    double est_error = 0; // absolute estimate, scaled with the value for s >> 1
};

// I0(s) = int_0^infty exp(-t^4/4 + s t^2/2) dt. Quadrature for |s| <= 50 with
// the s > 0 peak at t = sqrt(s) factored out as exp(s^2/4); the asymptotic
// branch takes over beyond.
ProfileValue faxen_i0(double s);

// I0(s) * exp(-s^2/4): the numerically stable core for large positive s.
double faxen_i0_scaled(double s);

// Fi(alpha, beta; y) = int_0^infty exp(-t + y t^alpha) t^{beta-1} dt for
// 0 <= alpha < 1, beta > 0 (substituted u = t^beta to remove the endpoint
// singularity).
double faxen_general(double alpha, double beta, double y);

// Asymptotic comparison ratios; both approach 1 in the corresponding limit.
double i0_ratio_negative(double s); // I0(s) / (sqrt(pi/2) |s|^{-1/2}), s < 0
double i0_ratio_positive(double s); // I0(s) / (sqrt(pi) s^{-1/2} e^{s^2/4}), s > 0

struct WindowPrediction {
    double window_exponent = 0;     // -2 / (gamma * dc)
    double chi_exponent = 0;        // 2 / dc
    double plateau_exponent = 0;    // 2 / dc - 1
    double volume = 0;              // V = r^d
    double window = 0;              // V^window_exponent
    double chi_scale = 0;           // V^chi_exponent
    double plateau_scale = 0;       // V^plateau_exponent
};

WindowPrediction window_prediction(int d, int r, double gamma, double dc);

} // namespace polylab
