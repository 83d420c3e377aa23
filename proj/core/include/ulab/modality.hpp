#pragma once

#include "ulab/kernels.hpp"
#include "ulab/profile.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace ulab {

enum class ModalityMethod { DerivativeScan, ProfileScan };

struct ModalityReport {
    int mode_count = 0;
    std::vector<double> mode_locations;  // sorted, length == mode_count
    int support_components = 1;
    bool unimodal = false;  // mode_count == 1 && support_components == 1
    ModalityMethod method = ModalityMethod::DerivativeScan;
    int grid_size = 0;
};

struct Window {
    double lo;
    double hi;
};

/// Evaluation window wide enough that no mode of the convolved density lies
/// outside it: padded hull covering the gaussian and cauchy spread (plus the
/// one-sided levy drift).
Window default_window(const ConvolvedDensity& cd);

/// Count modes of a kernel-convolved density by locating the sign changes of
/// its first derivative on a window grid, each refined by bisection to 1e-10.
/// extra_points are merged into the grid (pass atom-adjacent probes when the
/// density has isolated spikes the uniform grid would miss). Throws
/// NumericalError when the derivative does not point inward at a window edge
/// that still carries mass.
ModalityReport count_modes_derivative(const ConvolvedDensity& cd, Window window, int grid_size,
                                      std::span<const double> extra_points = {});

/// Count modes of a tabulated density curve: strict rise-and-fall local
/// maxima with relative prominence at least 1e-9 of the peak (flat runs
/// collapse to one candidate). support_components counts maximal runs of
/// positive values. Throws NumericalError on an all-zero profile.
ModalityReport count_modes_profile(const DensityProfile& profile);

struct ModalityOptions {
    int grid_size = 4096;        // derivative-scan grid
    int profile_points = 2049;   // free-profile tabulation size
    std::optional<Window> window;
    std::vector<double> extra_points;
};

/// Unified modality decision for any process: derivative scan for the kernel
/// processes, profile scan for the free process. Atom-adjacent probe points
/// are seeded automatically.
ModalityReport analyze_modality(const ProbabilityMeasure& mu, ProcessKind kind, double t,
                                const ModalityOptions& opts = {});

/// Number of solutions of density = level (kernel processes) or, for the free
/// process, of xi_{pi*level*t}(u) = 1/t, which parametrizes the same level
/// set. Tangential touches count once.
int level_crossings(const ProbabilityMeasure& mu, ProcessKind kind, double t, double level);

struct CriticalTimeResult {
    double t_star = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    bool monotone_verified = false;
    std::vector<std::pair<double, bool>> scan;  // (t, unimodal) log-spaced
};

/// Bisect for the smallest time after which the convolved law stays unimodal.
/// Requires a non-unimodal verdict at t_min and a unimodal one at t_max. A
/// 32-point log-spaced scan first checks that the verdict flips exactly once;
/// if it flips several times the last transition is bracketed and
/// monotone_verified is false.
CriticalTimeResult critical_time(const ProbabilityMeasure& mu, ProcessKind kind, double t_min,
                                 double t_max, double tol, const ModalityOptions& opts = {});

/// True iff the gaussian evolution of mu at time t has a unique mode and that
/// mode lies within [-sqrt(t)/2, sqrt(t)/2]. Callers should center mu first.
bool mode_location_bound_check(const ProbabilityMeasure& mu, double t);

} // namespace ulab
