#pragma once

#include "ulab/measure.hpp"
#include "ulab/modality.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ulab {

/// Weight rule for the free construction: w_n proportional to
/// 1 / (n^2 max{f(a_n), 1}) with f == 1 or f(x) = exp(x^2).
enum class FreeWeightRule { One, ExpSquare };

/// Geometric-atom measures whose kernel evolutions stay non-unimodal over a
/// wide time range. Each takes atoms a_n = a^n, n = 1..n_atoms, with the
/// stated weights, renormalized over the truncation. The untruncated
/// measures never become unimodal; a truncation is compactly supported and
/// so eventually unimodal, which is why witnesses are only claimed at
/// explicitly tested times.
AtomicMeasure build_free_counterexample(double a, int n_atoms, FreeWeightRule rule);

/// w_k proportional to exp(-delta b_k^2 / k), b_k = min_{n != k} |a_k - a_n - 1|
/// over the truncated index set.
AtomicMeasure build_classical_counterexample(double a, int n_atoms, double delta);

/// w_n proportional to n^r a^(-3n).
AtomicMeasure build_cauchy_counterexample(double a, int n_atoms, double r);

/// w_k proportional to k a^(-5k/2); requires a > 2.
AtomicMeasure build_levy_counterexample(double a, int n_atoms);

/// Default parameters under which every construction produces a witness at
/// each t in {0.5, 1, 2, 5, 10}.
namespace ctrex_defaults {
inline constexpr double free_a = 2.0;
inline constexpr int free_n = 8;
inline constexpr FreeWeightRule free_rule = FreeWeightRule::One;
inline constexpr double classical_a = 2.0;
inline constexpr int classical_n = 6;
inline constexpr double classical_delta = 1e-4;
inline constexpr double cauchy_a = 3.0;
inline constexpr int cauchy_n = 8;
inline constexpr double cauchy_r = 4.0;
inline constexpr double levy_a = 50.0;
inline constexpr int levy_n = 8;
} // namespace ctrex_defaults

struct NonUnimodalWitness {
    enum class Evidence { Components, Modes, DerivativeSign };
    double t = 0.0;
    Evidence evidence = Evidence::Modes;
    int support_components = 1;      // Components evidence
    std::vector<double> mode_locations;  // Modes evidence
    double derivative_location = 0.0;    // DerivativeSign evidence
    /// Certified numerical slack of the evidence: smallest component gap,
    /// best secondary-mode prominence, or the positive derivative value.
    double margin = 0.0;
};

const char* evidence_name(NonUnimodalWitness::Evidence e);

/// Run the modality engine on mu at time t and return the strongest
/// non-unimodality evidence found: disconnected level-set components for the
/// free process, extra modes (atom-adjacent probe points seeded) for the
/// kernel processes. Throws NoWitnessError when the evolution looks unimodal
/// at this t or the margin is below 10x the evaluation tolerance.
NonUnimodalWitness witness_non_unimodal(const ProbabilityMeasure& mu, ProcessKind process,
                                        double t);

struct StrongUnimodalityWitness {
    double s = 0.0;  // two-atom scale: (delta_{-s} + delta_{+s}) / 2
    double t = 0.0;  // free time at which the evolution is non-unimodal
    ModalityReport free_report;
    double cauchy_time = 0.0;   // Cauchy scale R realizing the same level set
    double cauchy_level = 0.0;  // density level with >= 3 solutions
    int cauchy_crossings = 0;
};

/// Search the dilated two-atom family for (s, t) whose free evolution is
/// non-unimodal, and confirm through the Cauchy-smoothing route that some
/// density level is hit at least three times. Returns the first hit in grid
/// order, or nullopt if every (s, t) looks unimodal.
std::optional<StrongUnimodalityWitness>
strong_unimodality_witness_search(std::span<const double> scales, std::span<const double> times);

/// Default grids for the search: s in {1, 2}, 16 log-spaced t in [0.5, 16].
std::optional<StrongUnimodalityWitness> strong_unimodality_witness_search();

} // namespace ulab
