#pragma once

// Flattened cutoff functions: smooth monotone 0 -> 1 transitions that are
// exactly constant in neighborhoods of both threshold endpoints, so that
// compositions with merely Lipschitz inputs (distance functions) stay smooth
// where it matters. The unit profile eta is the primitive of a normalized
// bump supported in [1/4, 3/4]; outside that band eta is identically 0 or 1.

namespace sascal::sphere {

struct CutoffSpec {
    double sigma;  // cutoff is identically 0 at and below sigma
    double tau;    // cutoff is identically 1 at and above tau
};

// The unit profile on [0, 1]: 0 on [0, 1/4], 1 on [3/4, 1], smooth monotone
// in between. Clamped transparently outside [0, 1].
double cutoff_profile(double s);

// Analytic profile derivatives, orders 1 and 2 (the bump and its derivative,
// normalized). Zero outside the open support.
double cutoff_profile_derivative(double s, int order);

// Measured sup |eta^(j)| of the implementation profile, j in {1, 2}.
double cutoff_derivative_constant(int order);

double flattened_cutoff(const CutoffSpec& spec, double t);
double flattened_cutoff_derivative(const CutoffSpec& spec, double t, int order);

}  // namespace sascal::sphere
