#pragma once

#include "ulab/measure.hpp"
#include "ulab/profile.hpp"

#include <vector>

namespace ulab {

struct Interval {
    double lo;
    double hi;
};

/// X(u) = integral of 1/(u - x)^2 dmu(x). Returns +infinity when the integral
/// diverges (u coincides with an atom, or touches the closed support of the
/// continuous part).
double x_functional(const ProbabilityMeasure& mu, double u);

/// xi_R(u) = integral of 1/((x-u)^2 + R^2) dmu(x), R > 0. Up to a factor this
/// is the density of mu convolved with a Cauchy kernel of scale R.
double smoothed_x_functional(const ProbabilityMeasure& mu, double u, double R);

/// The half-plane boundary height v_t(u): 0 when X(u) <= 1/t, otherwise the
/// unique v in (0, sqrt(t)] with xi_v(u) = 1/t, found by bisection (the map
/// v -> xi_v(u) is strictly decreasing). |xi_v(u) - 1/t| <= tol on return.
double solve_v(const ProbabilityMeasure& mu, double t, double u, double tol = 1e-12);

/// Connected components of {u : X(u) > 1/t}, endpoints refined by bisection
/// to 1e-10. The scan covers [support_min - 2 sqrt(t), support_max + 2 sqrt(t)],
/// which contains the set since X <= 1/dist(u, supp)^2; atoms and inter-atom
/// midpoints are seeded explicitly so components narrower than the scan step
/// are still found.
std::vector<Interval> ut_intervals(const ProbabilityMeasure& mu, double t);

/// psi_t(u) = u + t * integral of (u - y) / ((u - y)^2 + v_t(u)^2) dmu(y);
/// an increasing homeomorphism of the real line.
double psi(const ProbabilityMeasure& mu, double t, double u);

/// Density of the free evolution of mu at time t and position x, obtained by
/// inverting psi_t (monotone bisection) and reading off v/(pi t).
double free_density(const ProbabilityMeasure& mu, double t, double x, double tol = 1e-12);

/// Tabulates the free density over a u-grid covering the components of
/// {X > 1/t}: x-coordinates are psi_t(u_i) (exact parametrization, no
/// inversion), p values are v_t(u_i)/(pi t). Component endpoints are included
/// with p = 0; one tenth of each component's points are clustered into the 5%
/// of its length next to each endpoint, where v has a root-type cusp.
/// Throws NumericalError if the tabulated psi is not strictly increasing.
DensityProfile free_density_profile(const ProbabilityMeasure& mu, double t, int n_points);

/// Solved subordination data for one (mu, t): the component list plus
/// evaluators. Construction is pure; evaluators are const and thread-safe.
class SubordinationState {
public:
    SubordinationState(ProbabilityMeasure mu, double t, double tol = 1e-12);

    const ProbabilityMeasure& measure() const { return mu_; }
    double time() const { return t_; }
    double tolerance() const { return tol_; }
    const std::vector<Interval>& components() const { return intervals_; }

    double v(double u) const;
    double psi(double u) const;
    double density(double x) const;

private:
    ProbabilityMeasure mu_;
    double t_;
    double tol_;
    std::vector<Interval> intervals_;
};

} // namespace ulab
