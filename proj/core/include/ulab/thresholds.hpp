#pragma once

#include "ulab/measure.hpp"
#include "ulab/modality.hpp"

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ulab {

enum class ThresholdTheorem {
    Free4D2,               // free evolution unimodal for t >= 4 D^2
    ClassicalGaussianTail, // gaussian evolution unimodal for t >= 36 log(2 alpha) / eps
    CauchyThirdMoment,     // cauchy evolution unimodal for t >= 20 beta^(1/3)
    LevyDiameter,          // levy evolution unimodal for t >= (90/4)^(1/4) sqrt(D)
};

const char* threshold_name(ThresholdTheorem theorem);

double free_bound(double diameter);
double classical_bound(double eps, double alpha);
double cauchy_bound(double beta);
double levy_bound(double diameter);

struct ThresholdReport {
    ThresholdTheorem theorem;
    std::map<std::string, double> inputs;  // named functional values
    double bound = 0.0;
    std::vector<std::pair<double, bool>> verified_at;  // (t, unimodal), t >= bound
    bool falsified = false;  // some t >= bound came back non-unimodal
};

/// Compute the bound from mu's functionals, then check unimodality at n_times
/// geometrically spaced times starting at the bound itself
/// (bound, 1.5 bound, 2 bound, 4 bound, ...). eps feeds the gaussian-tail
/// functional for the classical theorem and is ignored otherwise.
ThresholdReport verify_threshold(const ProbabilityMeasure& mu, ThresholdTheorem theorem,
                                 int n_times = 3, double eps = 1.0);

struct GapProbeResult {
    double max_ratio = 0.0;                 // max over the family of t* / D^2
    std::vector<double> ratios;             // per measure, in input order
    std::vector<CriticalTimeResult> detail; // the underlying bisections
};

/// For each compactly supported measure, bisect the free critical time and
/// report t* / D^2. The sufficient bound guarantees every ratio is <= 4.
GapProbeResult constant_gap_probe(std::span<const ProbabilityMeasure> family, double tol = 1e-2);

} // namespace ulab
