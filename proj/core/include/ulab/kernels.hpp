#pragma once

#include "ulab/measure.hpp"

namespace ulab {

/// The Cauchy semigroup is special: its classical and free convolutions with
/// any measure coincide, so every verdict computed here for the cauchy kernel
/// is simultaneously a statement about the free process with Cauchy
/// marginals. No separate free-Cauchy evaluator exists for this reason.
enum class ProcessKind { ClassicalGaussian, Cauchy, LevyHalf, FreeSemicircle };

const char* process_name(ProcessKind kind);

/// Transition kernel density of the process increment at time t, or its
/// first/second derivative in u (order 1|2).
///   gaussian:  exp(-u^2/2t) / sqrt(2 pi t)
///   cauchy:    t / (pi (u^2 + t^2))
///   levy_half: (t/sqrt(2 pi)) exp(-t^2/2u) u^{-3/2} for u > 0, else 0
/// FreeSemicircle is rejected: the free process density comes from the
/// subordination engine, not from a pointwise kernel.
double kernel(ProcessKind kind, double t, double u, int order);

/// Law of mu convolved with the kernel at time t.
struct ConvolvedDensity {
    ProbabilityMeasure mu;
    ProcessKind kind;
    double t;

    ConvolvedDensity(ProbabilityMeasure mu_, ProcessKind kind_, double t_);
};

/// Density of (mu * K_t)(x): exact kernel sum over atoms plus per-panel
/// adaptive quadrature against the continuous part (absolute tolerance 1e-10).
double density(const ConvolvedDensity& cd, double x);

/// d/dx or d^2/dx^2 of the convolved density, by exact kernel-derivative
/// sums/quadrature.
double density_derivative(const ConvolvedDensity& cd, double x, int order);

/// Half-width w such that the kernel mass outside [-w, w] (for the symmetric
/// kernels) is below tail_mass; for levy_half, the upper quantile offset with
/// that much mass above it. Used to size evaluation windows.
double tail_halfwidth(ProcessKind kind, double t, double tail_mass);

} // namespace ulab
