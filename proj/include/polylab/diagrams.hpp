// Diagram functionals: tilted/weighted bubbles, triangles and squares evaluated
// as iterated convolutions of two-point fields, reduced by sup-norm or by the
// value at 0.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "polylab/field.hpp"
#include "polylab/kernel.hpp"

namespace polylab {

struct DiagramFactor {
    enum class Kind { kernel_d, field_ref };
    Kind kind = Kind::field_ref;
    std::string name;    // field binding name (field_ref only)
    double tilt_m = 0;   // symmetrized weight cosh(m x_1)
    double weight_a = 0; // moment weight |x|^a; at most one factor may carry it
};

enum class DiagramReduce { sup_norm, at_zero };

struct DiagramSpec {
    std::vector<DiagramFactor> factors;
    DiagramReduce reduce = DiagramReduce::sup_norm;
    bool minus_one_point = false; // subtract one_point^(#field factors)
};

struct DiagramValue {
    double value = 0;
    int box_radius = 0; // truncation radius (or torus period) of the evaluation
};

// Composes the factors by convolution in order (box or torus fields; all field
// bindings must share one geometry). Kernel factors materialize p D on the
// radius-L box. Tilts and weights are applied pointwise before convolving.
DiagramValue eval_diagram(const DiagramSpec& spec, const StepKernel& k,
                          const std::map<std::string, const Field*>& fields, double p,
                          double one_point = 1.0);

// max over the two tilt assignments of the four-fold convolution at 0, minus
// the fourth power of the one-point value.
double square_max(const Field& g, const Field& g_tilted, double one_point);

struct ScalingProbeRow {
    int L = 0;
    double value = 0;      // untilted square minus the delta part
    double tilt_ratio = 0; // value with two lines tilted at m_S/2, over value
};

struct ScalingProbe {
    std::vector<ScalingProbeRow> rows;
    double fitted_exponent = 0; // least-squares slope of log value vs log L
};

// Evaluates the untilted square (minus the delta part) on the walk two-point
// field S_z for each L; the expected trend is a negative power of L.
ScalingProbe l_scaling_probe(int d, double z, const std::vector<int>& Ls);

} // namespace polylab
