#include "cdroop/cubic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

namespace cdroop {

double cubic_discriminant(const CubicCoefficients& k) {
    const double a = k.a, b = k.b, c = k.c, d = k.d;
    return b * b * c * c - 4.0 * a * c * c * c - 4.0 * d * b * b * b -
           27.0 * a * a * d * d + 18.0 * a * b * c * d;
}

namespace {

double eval_poly(const std::vector<double>& coeffs_desc, double x) {
    double acc = 0.0;
    for (double c : coeffs_desc) acc = acc * x + c;
    return acc;
}

double eval_poly_derivative(const std::vector<double>& coeffs_desc, double x) {
    const int n = static_cast<int>(coeffs_desc.size()) - 1;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc = acc * x + coeffs_desc[i] * (n - i);
    return acc;
}

}  // namespace

std::vector<double> real_roots(const std::vector<double>& coeffs_desc) {
    // Strip exact leading zeros (degenerate gain settings lower the degree).
    std::size_t lead = 0;
    while (lead < coeffs_desc.size() && coeffs_desc[lead] == 0.0) ++lead;
    std::vector<double> p(coeffs_desc.begin() + lead, coeffs_desc.end());
    const int degree = static_cast<int>(p.size()) - 1;

    std::vector<double> roots;
    if (degree < 1) return roots;
    if (degree == 1) {
        roots.push_back(-p[1] / p[0]);
        return roots;
    }

    // Monic companion matrix; its eigenvalues are the roots.
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (int i = 0; i < degree; ++i)
        companion(0, i) = -p[static_cast<std::size_t>(i) + 1] / p[0];
    for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    const auto& eig = solver.eigenvalues();

    for (int i = 0; i < degree; ++i) {
        const std::complex<double> lambda = eig(i);
        const double scale = std::max(1.0, std::abs(lambda.real()));
        if (std::abs(lambda.imag()) > 1e-9 * scale) continue;
        double x = lambda.real();
        // One Newton polish step; skipped at (near-)multiple roots where the
        // derivative vanishes.
        const double fp = eval_poly_derivative(p, x);
        if (fp != 0.0) {
            const double step = eval_poly(p, x) / fp;
            if (std::isfinite(step)) x -= step;
        }
        roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::vector<double> solve_positive_roots(const CubicCoefficients& c) {
    std::vector<double> all = real_roots({c.a, c.b, c.c, c.d});
    std::vector<double> pos;
    for (double x : all)
        if (x > 0.0) pos.push_back(x);
    return pos;
}

}  // namespace cdroop
