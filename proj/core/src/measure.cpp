#include "ulab/measure.hpp"

#include "ulab/errors.hpp"
#include "ulab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace ulab {
namespace {

constexpr double kWeightBandLo = 0.999;
constexpr double kWeightBandHi = 1.001;

void require_finite(std::span<const double> xs, const char* what) {
    for (double x : xs) {
        if (!std::isfinite(x)) {
            std::ostringstream os;
            os << what << ": non-finite entry";
            throw ValidationError(os.str());
        }
    }
}

} // namespace

AtomicMeasure::AtomicMeasure(std::vector<double> atoms, std::vector<double> weights) {
    if (atoms.empty() || atoms.size() != weights.size()) {
        throw ValidationError("atomic measure: atoms and weights must be nonempty and equal length");
    }
    require_finite(atoms, "atoms");
    require_finite(weights, "weights");
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) {
            std::ostringstream os;
            os << "weights[" << i << "]: must be strictly positive";
            throw ValidationError(os.str());
        }
    }
    std::vector<std::size_t> order(atoms.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });
    for (std::size_t i : order) {
        if (!atoms_.empty() && atoms_.back() == atoms[i]) {
            weights_.back() += weights[i];  // merge duplicate positions
        } else {
            atoms_.push_back(atoms[i]);
            weights_.push_back(weights[i]);
        }
    }
    const double sum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    if (sum < kWeightBandLo || sum > kWeightBandHi) {
        std::ostringstream os;
        os << "weights: sum " << sum << " outside tolerance band [0.999, 1.001]";
        throw ValidationError(os.str());
    }
    // skip the division when already normalized, so serialization round-trips
    // reproduce weights bit-exactly
    if (std::fabs(sum - 1.0) > 1e-12) {
        for (double& w : weights_) w /= sum;
    }
}

GriddedDensityMeasure::GriddedDensityMeasure(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (grid_.size() < 2 || grid_.size() != values_.size()) {
        throw ValidationError("density measure: grid and values must have equal length >= 2");
    }
    require_finite(grid_, "grid");
    require_finite(values_, "values");
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
        if (!(grid_[i] < grid_[i + 1])) {
            std::ostringstream os;
            os << "grid[" << i + 1 << "]: grid must be strictly increasing";
            throw ValidationError(os.str());
        }
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] < 0.0) {
            std::ostringstream os;
            os << "values[" << i << "]: density samples must be nonnegative";
            throw ValidationError(os.str());
        }
    }
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
        mass += 0.5 * (values_[i] + values_[i + 1]) * (grid_[i + 1] - grid_[i]);
    }
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw ValidationError("values: interpolant has no positive mass");
    }
    if (std::fabs(mass - 1.0) > 1e-12) {
        for (double& v : values_) v /= mass;
    }
}

double GriddedDensityMeasure::value_at(double x) const {
    if (x < grid_.front() || x > grid_.back()) return 0.0;
    auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    if (it == grid_.begin()) return values_.front();
    if (it == grid_.end()) return values_.back();
    const std::size_t hi = static_cast<std::size_t>(it - grid_.begin());
    const std::size_t lo = hi - 1;
    const double s = (x - grid_[lo]) / (grid_[hi] - grid_[lo]);
    return values_[lo] + s * (values_[hi] - values_[lo]);
}

NamedMeasure NamedMeasure::bernoulli(double a) {
    if (!std::isfinite(a)) throw ValidationError("bernoulli: a must be finite");
    return NamedMeasure(MeasureFamily::Bernoulli, {a, 0, 0});
}

NamedMeasure NamedMeasure::point_mass(double a) {
    if (!std::isfinite(a)) throw ValidationError("point_mass: a must be finite");
    return NamedMeasure(MeasureFamily::PointMass, {a, 0, 0});
}

NamedMeasure NamedMeasure::uniform(double l, double r) {
    if (!std::isfinite(l) || !std::isfinite(r) || !(l < r)) {
        throw ValidationError("uniform: requires l < r");
    }
    return NamedMeasure(MeasureFamily::Uniform, {l, r, 0});
}

NamedMeasure NamedMeasure::triangle(double l, double m, double r) {
    if (!std::isfinite(l) || !std::isfinite(m) || !std::isfinite(r) || !(l < r) || m < l || m > r) {
        throw ValidationError("triangle: requires l <= m <= r and l < r");
    }
    return NamedMeasure(MeasureFamily::Triangle, {l, m, r});
}

NamedMeasure NamedMeasure::semicircle(double t) {
    if (!std::isfinite(t) || !(t > 0.0)) throw ValidationError("semicircle: requires t > 0");
    return NamedMeasure(MeasureFamily::Semicircle, {t, 0, 0});
}

ProbabilityMeasure::ProbabilityMeasure(AtomicMeasure m) : source_(std::move(m)) { decompose(); }
ProbabilityMeasure::ProbabilityMeasure(GriddedDensityMeasure m) : source_(std::move(m)) {
    decompose();
}
ProbabilityMeasure::ProbabilityMeasure(NamedMeasure m) : source_(std::move(m)) { decompose(); }

ProbabilityMeasure::Variant ProbabilityMeasure::variant() const {
    if (std::holds_alternative<AtomicMeasure>(source_)) return Variant::Atomic;
    if (std::holds_alternative<GriddedDensityMeasure>(source_)) return Variant::Gridded;
    return Variant::Named;
}

const AtomicMeasure* ProbabilityMeasure::as_atomic() const {
    return std::get_if<AtomicMeasure>(&source_);
}
const GriddedDensityMeasure* ProbabilityMeasure::as_gridded() const {
    return std::get_if<GriddedDensityMeasure>(&source_);
}
const NamedMeasure* ProbabilityMeasure::as_named() const {
    return std::get_if<NamedMeasure>(&source_);
}

void ProbabilityMeasure::decompose() {
    atom_pos_.clear();
    atom_w_.clear();
    pl_.reset();
    sc_.reset();
    cmass_ = 0.0;
    edges_.clear();
    csupport_.clear();

    if (const auto* a = std::get_if<AtomicMeasure>(&source_)) {
        atom_pos_ = a->atoms();
        atom_w_ = a->weights();
    } else if (const auto* g = std::get_if<GriddedDensityMeasure>(&source_)) {
        pl_ = *g;
        cmass_ = 1.0;
    } else {
        const auto& n = std::get<NamedMeasure>(source_);
        const auto& p = n.params();
        switch (n.family()) {
        case MeasureFamily::Bernoulli: {
            const double a = std::fabs(p[0]);
            if (a == 0.0) {
                atom_pos_ = {0.0};
                atom_w_ = {1.0};
            } else {
                atom_pos_ = {-a, a};
                atom_w_ = {0.5, 0.5};
            }
            break;
        }
        case MeasureFamily::PointMass:
            atom_pos_ = {p[0]};
            atom_w_ = {1.0};
            break;
        case MeasureFamily::Uniform: {
            const double h = 1.0 / (p[1] - p[0]);
            pl_ = GriddedDensityMeasure({p[0], p[1]}, {h, h});
            cmass_ = 1.0;
            break;
        }
        case MeasureFamily::Triangle: {
            const double h = 2.0 / (p[2] - p[0]);
            if (p[1] > p[0] && p[1] < p[2]) {
                pl_ = GriddedDensityMeasure({p[0], p[1], p[2]}, {0.0, h, 0.0});
            } else if (p[1] == p[0]) {
                pl_ = GriddedDensityMeasure({p[0], p[2]}, {h, 0.0});
            } else {
                pl_ = GriddedDensityMeasure({p[0], p[2]}, {0.0, h});
            }
            cmass_ = 1.0;
            break;
        }
        case MeasureFamily::Semicircle:
            sc_ = SemicirclePart{p[0], 0.0};
            cmass_ = 1.0;
            break;
        }
    }

    if (pl_) {
        edges_ = pl_->grid();
        // maximal runs of panels carrying mass
        const auto& g = pl_->grid();
        const auto& v = pl_->values();
        std::optional<double> run_lo;
        for (std::size_t i = 0; i + 1 < g.size(); ++i) {
            const bool live = v[i] > 0.0 || v[i + 1] > 0.0;
            if (live && !run_lo) run_lo = g[i];
            if (!live && run_lo) {
                csupport_.emplace_back(*run_lo, g[i]);
                run_lo.reset();
            }
        }
        if (run_lo) csupport_.emplace_back(*run_lo, g.back());
    } else if (sc_) {
        // cosine-spaced panels cluster where the density has root-type edges
        const double radius = 2.0 * std::sqrt(sc_->t);
        const int panels = 32;
        edges_.resize(panels + 1);
        for (int i = 0; i <= panels; ++i) {
            edges_[i] = sc_->center - radius * std::cos(std::numbers::pi * i / panels);
        }
        csupport_.emplace_back(sc_->center - radius, sc_->center + radius);
    }
}

double ProbabilityMeasure::density_value(double x) const {
    if (pl_) return pl_->value_at(x);
    if (sc_) {
        const double r2 = 4.0 * sc_->t - (x - sc_->center) * (x - sc_->center);
        if (r2 <= 0.0) return 0.0;
        return std::sqrt(r2) / (2.0 * std::numbers::pi * sc_->t);
    }
    return 0.0;
}

double ProbabilityMeasure::support_min() const {
    double m = std::numeric_limits<double>::infinity();
    if (!atom_pos_.empty()) m = atom_pos_.front();
    if (!csupport_.empty()) m = std::min(m, csupport_.front().first);
    return m;
}

double ProbabilityMeasure::support_max() const {
    double m = -std::numeric_limits<double>::infinity();
    if (!atom_pos_.empty()) m = atom_pos_.back();
    if (!csupport_.empty()) m = std::max(m, csupport_.back().second);
    return m;
}

double ProbabilityMeasure::total_mass() const {
    double s = std::accumulate(atom_w_.begin(), atom_w_.end(), 0.0);
    if (pl_) {
        const auto& g = pl_->grid();
        const auto& v = pl_->values();
        for (std::size_t i = 0; i + 1 < g.size(); ++i) {
            s += 0.5 * (v[i] + v[i + 1]) * (g[i + 1] - g[i]);
        }
    } else if (sc_) {
        s += integrate_adaptive([this](double x) { return density_value(x); }, edges_.front(),
                                edges_.back(), {.abs_tol = 1e-11});
    }
    return s;
}

double ProbabilityMeasure::integrate(const std::function<double(double)>& f, double abs_tol,
                                     std::span<const double> extra_breakpoints) const {
    double s = 0.0;
    for (std::size_t i = 0; i < atom_pos_.size(); ++i) {
        s += atom_w_[i] * f(atom_pos_[i]);
    }
    if (edges_.empty()) return s;

    std::vector<double> cuts(edges_);
    for (double b : extra_breakpoints) {
        if (b > cuts.front() && b < cuts.back()) cuts.push_back(b);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    QuadratureOptions opts;
    opts.abs_tol = abs_tol / static_cast<double>(cuts.size());
    const auto integrand = [&](double x) { return f(x) * density_value(x); };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        s += integrate_adaptive(integrand, cuts[i], cuts[i + 1], opts);
    }
    return s;
}

ProbabilityMeasure ProbabilityMeasure::shifted(double c) const {
    if (!std::isfinite(c)) throw ValidationError("shift: offset must be finite");
    if (const auto* a = std::get_if<AtomicMeasure>(&source_)) {
        std::vector<double> atoms = a->atoms();
        for (double& x : atoms) x += c;
        return AtomicMeasure(std::move(atoms), a->weights());
    }
    if (const auto* g = std::get_if<GriddedDensityMeasure>(&source_)) {
        std::vector<double> grid = g->grid();
        for (double& x : grid) x += c;
        return GriddedDensityMeasure(std::move(grid), g->values());
    }
    const auto& n = std::get<NamedMeasure>(source_);
    const auto& p = n.params();
    switch (n.family()) {
    case MeasureFamily::Bernoulli: {
        const double a = std::fabs(p[0]);
        if (a == 0.0) return NamedMeasure::point_mass(c);
        return AtomicMeasure({c - a, c + a}, {0.5, 0.5});
    }
    case MeasureFamily::PointMass:
        return NamedMeasure::point_mass(p[0] + c);
    case MeasureFamily::Uniform:
        return NamedMeasure::uniform(p[0] + c, p[1] + c);
    case MeasureFamily::Triangle:
        return NamedMeasure::triangle(p[0] + c, p[1] + c, p[2] + c);
    case MeasureFamily::Semicircle: {
        // sampled on a cosine grid; a shifted semicircle has no named form
        const double radius = 2.0 * std::sqrt(p[0]);
        const int n_pts = 2048;
        std::vector<double> grid(n_pts + 1), vals(n_pts + 1);
        for (int i = 0; i <= n_pts; ++i) {
            const double x = -radius * std::cos(std::numbers::pi * i / n_pts);
            grid[i] = c + x;
            const double r2 = 4.0 * p[0] - x * x;
            vals[i] = r2 > 0.0 ? std::sqrt(r2) / (2.0 * std::numbers::pi * p[0]) : 0.0;
        }
        return GriddedDensityMeasure(std::move(grid), std::move(vals));
    }
    }
    throw ValidationError("shift: unknown family");
}

ProbabilityMeasure ProbabilityMeasure::dilated(double c) const {
    if (!std::isfinite(c) || !(c > 0.0)) throw ValidationError("dilation: factor must be > 0");
    if (const auto* a = std::get_if<AtomicMeasure>(&source_)) {
        std::vector<double> atoms = a->atoms();
        for (double& x : atoms) x *= c;
        return AtomicMeasure(std::move(atoms), a->weights());
    }
    if (const auto* g = std::get_if<GriddedDensityMeasure>(&source_)) {
        std::vector<double> grid = g->grid();
        std::vector<double> vals = g->values();
        for (double& x : grid) x *= c;
        for (double& v : vals) v /= c;
        return GriddedDensityMeasure(std::move(grid), std::move(vals));
    }
    const auto& n = std::get<NamedMeasure>(source_);
    const auto& p = n.params();
    switch (n.family()) {
    case MeasureFamily::Bernoulli:
        return NamedMeasure::bernoulli(p[0] * c);
    case MeasureFamily::PointMass:
        return NamedMeasure::point_mass(p[0] * c);
    case MeasureFamily::Uniform:
        return NamedMeasure::uniform(p[0] * c, p[1] * c);
    case MeasureFamily::Triangle:
        return NamedMeasure::triangle(p[0] * c, p[1] * c, p[2] * c);
    case MeasureFamily::Semicircle:
        return NamedMeasure::semicircle(p[0] * c * c);
    }
    throw ValidationError("dilation: unknown family");
}

double diameter(const ProbabilityMeasure& mu) {
    return mu.support_max() - mu.support_min();
}

double gaussian_tail_functional(const ProbabilityMeasure& mu, double eps) {
    if (!(eps > 0.0)) throw ValidationError("gaussian tail functional: eps must be > 0");
    return mu.integrate([eps](double x) { return std::exp(eps * x * x); }, 1e-10);
}

double abs_moment(const ProbabilityMeasure& mu, double p) {
    if (!(p > 0.0)) throw ValidationError("abs_moment: p must be > 0");
    const double zero = 0.0;
    return mu.integrate([p](double x) { return std::pow(std::fabs(x), p); }, 1e-10,
                        std::span<const double>(&zero, 1));
}

} // namespace ulab
