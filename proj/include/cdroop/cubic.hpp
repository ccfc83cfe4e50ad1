#pragma once

#include <vector>

namespace cdroop {

// Coefficients of a*x^3 + b*x^2 + c*x + d with x the squared voltage
// magnitude at steady state.
struct CubicCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
};

// Discriminant of the cubic; negative iff exactly one real root.
double cubic_discriminant(const CubicCoefficients& c);

// Real roots of a polynomial given coefficients from highest to lowest
// degree. Leading zeros are stripped, so degenerate (lower-degree) inputs
// are handled; roots are found as companion-matrix eigenvalues, filtered by
// a relative imaginary-part threshold of 1e-9, then polished with one
// Newton step. Ascending order.
std::vector<double> real_roots(const std::vector<double>& coeffs_desc);

// Real positive roots of the steady-state cubic, ascending.
std::vector<double> solve_positive_roots(const CubicCoefficients& c);

}  // namespace cdroop
