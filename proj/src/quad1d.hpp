#pragma once

// Adaptive one-dimensional quadrature (Gauss-Kronrod 7-15 with bisection).
// Used for the cot-integral bounds, Beta-integral coefficient checks, cutoff
// profile construction, and radial reductions.

#include <functional>

namespace sascal::quad1d {

// Integrates f over [a, b] to the requested relative tolerance (with an
// absolute floor for integrals near zero). Throws tolerance_error if the
// refinement limit is reached before convergence.
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12,
                 double abs_tol = 1e-300);

}  // namespace sascal::quad1d
