// Random-walk two-point functions, masses, and the walk decomposition
// S_z = delta + z lambda_z C_{mu_z} + phi_z.
#pragma once

#include <string>
#include <vector>

#include "polylab/field.hpp"
#include "polylab/kernel.hpp"

namespace polylab {

enum class MassMethod { closed_form, root_find };

struct MassResult {
    double m = 0;        // mass (decay rate)
    double xi = 0;       // correlation length 1/m (inf when m = 0)
    MassMethod method = MassMethod::closed_form;
    double residual = 0; // |defining equation| at the solution
};

// Nearest-neighbour walk mass: cosh m = 1 + d (1-mu)/mu, closed form.
MassResult nn_mass(double mu, int d);

// Spread-out walk mass: the unique m > 0 with z * D_hat^{(m)}(0) = 1,
// found by bracketing plus bisection.
MassResult so_mass(const StepKernel& k, double z);

enum class WalkKind { spread_out, nearest_neighbour };

// Period-N torus field S^T(x) = N^{-d} sum_k e^{-ik.x} / (1 - z K_hat(k)) over the
// discrete grid k in (2pi/N) Z^d. By the wrap identity this equals
// sum_u S_z(x + N u), so for N m >~ 20 it approximates S_z on the fundamental
// domain with relative wrap error <= e^{-m N / 2}.
Field green_field(const StepKernel& k, double z, int N);
Field green_field_nn(int d, double mu, int N);

// Default grid for a given mass: max(64, ceil(40/m)) rounded up to a power of two.
int auto_period(double m);

// Axis values S_z(n e_1), n = 0..n_count-1, via longitudinal pole decomposition
// per transverse grid momentum: exact in the longitudinal direction, transverse
// wrap error e^{-m(N - n)}. Keeps relative precision in the deep exponential tail,
// where the grid inversion's additive noise floor (~1e-15) dominates.
std::vector<double> green_axis_poles(const StepKernel& k, double z, int N, int n_count);

// Same axis values read from the plain grid inversion (cross-check path).
std::vector<double> green_axis_grid(const StepKernel& k, double z, int N, int n_count);

struct DecompositionParams {
    double lambda = 0; // 1 / ((1-z) + z sigma^2)
    double mu = 0;     // z sigma^2 / ((1-z) + z sigma^2)
    Field E;           // (delta - mu P) - lambda (delta - z D) on the radius-L box
    double moment0 = 0; // sum E (vanishes by construction)
    double moment2 = 0; // sum |x|^2 E (vanishes by construction)
};

DecompositionParams decomposition_params(const StepKernel& k, double z);

struct PhiRemainder {
    Field phi;          // S_z - delta - z lambda_z C_{mu_z} on the period-N torus
    double sup_stat = 0; // sup over |x| <= N/4 of max(|x|,1)^{d-2} |phi(x)|
};

PhiRemainder phi_remainder(const StepKernel& k, double z, int N);

struct MassChiRow {
    double z = 0;
    double ratio = 0; // m_S(z)^2 chi_S(z) sigma^2 / (2d), -> 1 as z -> 1
};

std::vector<MassChiRow> verify_mass_chi_product(const StepKernel& k,
                                                const std::vector<double>& zs);

struct DecayReport {
    double mass = 0;
    double slope = 0;
    double ratio = 0; // slope / mass
    int N = 0;
    int window_lo = 0;
    int window_hi = 0;
};

// Fits the axis decay rate of S_z and compares with the root-found mass.
// window_lo/hi <= 0 selects [80/m, 160/m]; N <= 0 selects ceil(210/m).
DecayReport verify_decay_bound(const StepKernel& k, double z, int N = 0,
                               int window_lo = 0, int window_hi = 0);

} // namespace polylab
