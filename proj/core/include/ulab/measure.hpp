#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace ulab {

/// Purely atomic measure: strictly increasing atom positions with strictly
/// positive weights. The constructor sorts, merges duplicate positions by
/// adding their weights, and renormalizes when the weight sum lies in
/// [0.999, 1.001]; sums outside that band are rejected.
class AtomicMeasure {
public:
    AtomicMeasure(std::vector<double> atoms, std::vector<double> weights);

    const std::vector<double>& atoms() const { return atoms_; }
    const std::vector<double>& weights() const { return weights_; }

private:
    std::vector<double> atoms_;
    std::vector<double> weights_;
};

/// Lebesgue-absolutely-continuous measure given by density samples on a
/// strictly increasing grid, interpolated piecewise linearly. The trapezoid
/// mass of the interpolant is renormalized to 1 at construction.
class GriddedDensityMeasure {
public:
    GriddedDensityMeasure(std::vector<double> grid, std::vector<double> values);

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double value_at(double x) const;

private:
    std::vector<double> grid_;
    std::vector<double> values_;
};

enum class MeasureFamily { Bernoulli, PointMass, Uniform, Triangle, Semicircle };

/// Closed-form distribution families.
///   bernoulli(a)     = (delta_{-a} + delta_{+a}) / 2
///   point_mass(a)    = delta_a
///   uniform(l, r)    : constant density on [l, r]
///   triangle(l,m,r)  : linear ramp peaking at m
///   semicircle(t)    : density sqrt(4t - x^2) / (2 pi t) on [-2 sqrt(t), 2 sqrt(t)]
class NamedMeasure {
public:
    static NamedMeasure bernoulli(double a);
    static NamedMeasure point_mass(double a);
    static NamedMeasure uniform(double l, double r);
    static NamedMeasure triangle(double l, double m, double r);
    static NamedMeasure semicircle(double t);

    MeasureFamily family() const { return family_; }
    const std::array<double, 3>& params() const { return params_; }

private:
    NamedMeasure(MeasureFamily family, std::array<double, 3> params)
        : family_(family), params_(params) {}

    MeasureFamily family_;
    std::array<double, 3> params_;
};

/// Closed union of the three measure variants, pre-decomposed into an atomic
/// part and a continuous part so that every functional below works uniformly.
/// The continuous part is either a piecewise-linear interpolant or the
/// semicircle closed form; it is integrated panel by panel.
///
/// Immutable after construction; all member functions are const and
/// thread-safe.
class ProbabilityMeasure {
public:
    ProbabilityMeasure(AtomicMeasure m);
    ProbabilityMeasure(GriddedDensityMeasure m);
    ProbabilityMeasure(NamedMeasure m);

    enum class Variant { Atomic, Gridded, Named };
    Variant variant() const;
    const AtomicMeasure* as_atomic() const;
    const GriddedDensityMeasure* as_gridded() const;
    const NamedMeasure* as_named() const;

    const std::vector<double>& atom_positions() const { return atom_pos_; }
    const std::vector<double>& atom_weights() const { return atom_w_; }

    struct SemicirclePart {
        double t;
        double center;
    };

    bool has_continuous_part() const { return !edges_.empty(); }
    /// Non-null when the continuous part is a piecewise-linear interpolant.
    const GriddedDensityMeasure* piecewise_linear_part() const {
        return pl_ ? &*pl_ : nullptr;
    }
    /// Non-null when the continuous part is a semicircle law.
    const SemicirclePart* semicircle_part() const { return sc_ ? &*sc_ : nullptr; }
    /// Panel edges partitioning the continuous support for quadrature.
    const std::vector<double>& panel_edges() const { return edges_; }
    /// Continuous-part density at x (0 outside its support).
    double density_value(double x) const;
    double continuous_mass() const { return cmass_; }
    /// Maximal closed intervals on which the continuous density is not
    /// identically zero.
    const std::vector<std::pair<double, double>>& continuous_support() const {
        return csupport_;
    }

    double support_min() const;
    double support_max() const;
    double total_mass() const;

    /// Integral of f against the measure: exact sum over atoms plus adaptive
    /// panel quadrature against the continuous density. extra_breakpoints
    /// split the panels (pass kink or peak locations of f).
    double integrate(const std::function<double(double)>& f, double abs_tol,
                     std::span<const double> extra_breakpoints = {}) const;

    /// Pushforward by x -> x + c.
    ProbabilityMeasure shifted(double c) const;
    /// Pushforward by x -> c x, c > 0.
    ProbabilityMeasure dilated(double c) const;

private:
    void decompose();

    std::variant<AtomicMeasure, GriddedDensityMeasure, NamedMeasure> source_;
    std::vector<double> atom_pos_;
    std::vector<double> atom_w_;
    std::optional<GriddedDensityMeasure> pl_;  // piecewise-linear continuous part
    std::optional<SemicirclePart> sc_;         // semicircle continuous part
    double cmass_ = 0.0;
    std::vector<double> edges_;
    std::vector<std::pair<double, double>> csupport_;
};

/// Diameter of the support, sup{|x-y| : x,y in supp}.
double diameter(const ProbabilityMeasure& mu);

/// alpha = integral of exp(eps x^2) dmu; exact for atoms, adaptive quadrature
/// (absolute tolerance 1e-10) for continuous parts.
double gaussian_tail_functional(const ProbabilityMeasure& mu, double eps);

/// Integral of |x|^p dmu, p > 0.
double abs_moment(const ProbabilityMeasure& mu, double p);

} // namespace ulab
