#pragma once

#include <functional>

namespace ulab {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    int max_depth = 48;
};

/// Adaptive 15-point Gauss-Legendre integration of f over [a, b].
/// Panels are bisected until the two-level error estimate meets
/// max(abs_tol, rel_tol * |whole|). Throws NumericalError once a panel
/// chain exceeds max_depth without converging.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureOptions& opts = {});

/// Single non-adaptive 15-point Gauss-Legendre rule on [a, b].
double gauss_legendre_15(const std::function<double(double)>& f, double a, double b);

} // namespace ulab
