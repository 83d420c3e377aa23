#include "ulab/kernels.hpp"

#include "ulab/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace ulab {
namespace {

using std::numbers::pi;

// exp(-t^2/2u)/u^p underflows long before the power overflows; cut over to 0
// once the exponent is past the denormal range.
constexpr double kExpUnderflow = 745.0;

double levy_kernel(double t, double u, int order) {
    if (u <= 0.0) return 0.0;
    const double expo = t * t / (2.0 * u);
    if (expo > kExpUnderflow) return 0.0;
    const double c = t / std::sqrt(2.0 * pi) * std::exp(-expo);
    switch (order) {
    case 0:
        return c / (u * std::sqrt(u));
    case 1:
        return c * (t * t - 3.0 * u) / (2.0 * std::pow(u, 3.5));
    default:
        return c * (15.0 * u * u - 10.0 * t * t * u + t * t * t * t) / (4.0 * std::pow(u, 5.5));
    }
}

} // namespace

const char* process_name(ProcessKind kind) {
    switch (kind) {
    case ProcessKind::ClassicalGaussian: return "gaussian";
    case ProcessKind::Cauchy: return "cauchy";
    case ProcessKind::LevyHalf: return "levy";
    case ProcessKind::FreeSemicircle: return "free";
    }
    return "?";
}

double kernel(ProcessKind kind, double t, double u, int order) {
    if (!(t > 0.0)) throw ValidationError("kernel: t must be > 0");
    if (order < 0 || order > 2) throw ValidationError("kernel: order must be 0, 1 or 2");
    switch (kind) {
    case ProcessKind::ClassicalGaussian: {
        const double phi = std::exp(-u * u / (2.0 * t)) / std::sqrt(2.0 * pi * t);
        if (order == 0) return phi;
        if (order == 1) return -u / t * phi;
        return (u * u - t) / (t * t) * phi;
    }
    case ProcessKind::Cauchy: {
        const double d = u * u + t * t;
        if (order == 0) return t / (pi * d);
        if (order == 1) return -2.0 * t * u / (pi * d * d);
        return t * (6.0 * u * u - 2.0 * t * t) / (pi * d * d * d);
    }
    case ProcessKind::LevyHalf:
        return levy_kernel(t, u, order);
    case ProcessKind::FreeSemicircle:
        throw ValidationError("kernel: the free process has no pointwise kernel here");
    }
    throw ValidationError("kernel: unknown process kind");
}

ConvolvedDensity::ConvolvedDensity(ProbabilityMeasure mu_, ProcessKind kind_, double t_)
    : mu(std::move(mu_)), kind(kind_), t(t_) {
    if (kind == ProcessKind::FreeSemicircle) {
        throw ValidationError("convolved density: free process is not kernel-based");
    }
    if (!(t > 0.0)) throw ValidationError("convolved density: t must be > 0");
}

namespace {

double convolve(const ConvolvedDensity& cd, double x, int order) {
    // breakpoints at the kernel's peak/kink locations, relative to x
    std::array<double, 3> breaks{};
    std::size_t n_breaks = 0;
    switch (cd.kind) {
    case ProcessKind::ClassicalGaussian: {
        const double s = std::sqrt(cd.t);
        breaks = {x - s, x, x + s};
        n_breaks = 3;
        break;
    }
    case ProcessKind::Cauchy:
        breaks = {x - cd.t, x, x + cd.t};
        n_breaks = 3;
        break;
    case ProcessKind::LevyHalf:
        breaks = {x - cd.t * cd.t / 3.0, x, 0};
        n_breaks = 2;
        break;
    default:
        break;
    }
    return cd.mu.integrate(
        [&](double y) { return kernel(cd.kind, cd.t, x - y, order); }, 1e-10,
        std::span<const double>(breaks.data(), n_breaks));
}

} // namespace

double density(const ConvolvedDensity& cd, double x) { return convolve(cd, x, 0); }

double density_derivative(const ConvolvedDensity& cd, double x, int order) {
    if (order != 1 && order != 2) {
        throw ValidationError("density_derivative: order must be 1 or 2");
    }
    return convolve(cd, x, order);
}

double tail_halfwidth(ProcessKind kind, double t, double tail_mass) {
    if (!(t > 0.0) || !(tail_mass > 0.0) || !(tail_mass < 1.0)) {
        throw ValidationError("tail_halfwidth: requires t > 0 and tail_mass in (0,1)");
    }
    switch (kind) {
    case ProcessKind::ClassicalGaussian:
        return std::sqrt(2.0 * t * std::log(1.0 / tail_mass));
    case ProcessKind::Cauchy:
        return std::fmin(t * std::tan(pi * (0.5 - 0.5 * tail_mass)), 1e8);
    case ProcessKind::LevyHalf: {
        // upper tail mass erf(t/sqrt(2x)) = m; for small m,
        // erfinv(m) = m sqrt(pi)/2 to within O(m^3)
        const double s = tail_mass * std::sqrt(pi) / 2.0;
        return t * t / (2.0 * s * s);
    }
    case ProcessKind::FreeSemicircle:
        return 2.0 * std::sqrt(t);  // compact support, no tail
    }
    throw ValidationError("tail_halfwidth: unknown process kind");
}

} // namespace ulab
