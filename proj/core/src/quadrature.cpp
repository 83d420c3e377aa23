#include "ulab/quadrature.hpp"

#include "ulab/errors.hpp"

#include <cmath>

namespace ulab {
namespace {

// 15-point Gauss-Legendre nodes/weights on [-1, 1], exact through degree 29.
constexpr int kGlPoints = 15;
constexpr double kGlNode[kGlPoints] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272, -0.7244177313601701,
    -0.5709721726085388, -0.3941513470775634, -0.2011940939974345, 0.0,
    0.2011940939974345,  0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
constexpr double kGlWeight[kGlPoints] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719, 0.1395706779261543,
    0.1662692058169939, 0.1861610000155622, 0.1984314853271116, 0.2025782419255613,
    0.1984314853271116, 0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

double gl15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < kGlPoints; ++i) {
        s += kGlWeight[i] * f(mid + half * kGlNode[i]);
    }
    return s * half;
}

double refine(const std::function<double(double)>& f, double a, double b, double whole,
              double abs_tol, double rel_scale, int depth, const QuadratureOptions& opts) {
    const double mid = 0.5 * (a + b);
    const double left = gl15(f, a, mid);
    const double right = gl15(f, mid, b);
    const double err = std::fabs(left + right - whole);
    if (err <= std::fmax(abs_tol, opts.rel_tol * rel_scale) || mid <= a || mid >= b) {
        return left + right;
    }
    if (depth >= opts.max_depth) {
        throw NumericalError("adaptive quadrature failed to converge to tolerance");
    }
    const double half_tol = 0.5 * abs_tol;
    return refine(f, a, mid, left, half_tol, rel_scale, depth + 1, opts) +
           refine(f, mid, b, right, half_tol, rel_scale, depth + 1, opts);
}

} // namespace

double gauss_legendre_15(const std::function<double(double)>& f, double a, double b) {
    return gl15(f, a, b);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureOptions& opts) {
    if (a == b) return 0.0;
    if (a > b) return -integrate_adaptive(f, b, a, opts);
    const double whole = gl15(f, a, b);
    const double rel_scale = std::fabs(whole);
    if (!std::isfinite(whole)) {
        throw NumericalError("quadrature integrand is not finite on the panel");
    }
    return refine(f, a, b, whole, opts.abs_tol, rel_scale, 0, opts);
}

} // namespace ulab
