#include "ulab/subordination.hpp"

#include "ulab/errors.hpp"
#include "ulab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ulab {
namespace {

using std::numbers::pi;

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---- closed-form cell integrals against a linear density  -----------------
// On a cell [x0, x1] the density is rho(y) = v0 + slope * (y - x0). All three
// subordination integrands have elementary antiderivatives per cell, so the
// piecewise-linear continuous parts are integrated exactly.

// integral of rho(y) / ((y - u)^2 + R^2) dy, R > 0
double cell_smoothed(double x0, double x1, double v0, double v1, double u, double R) {
    const double h = x1 - x0;
    const double slope = (v1 - v0) / h;
    const double rho_at_u = v0 + slope * (u - x0);  // linear extrapolation to u
    const double s0 = x0 - u, s1 = x1 - u;
    const double lin = rho_at_u / R * (std::atan(s1 / R) - std::atan(s0 / R));
    const double quad = 0.5 * slope * std::log((s1 * s1 + R * R) / (s0 * s0 + R * R));
    return lin + quad;
}

// integral of rho(y) / (y - u)^2 dy; requires u strictly outside [x0, x1]
double cell_inv_sq(double x0, double x1, double v0, double v1, double u) {
    const double h = x1 - x0;
    const double slope = (v1 - v0) / h;
    const double rho_at_u = v0 + slope * (u - x0);
    const double s0 = x0 - u, s1 = x1 - u;
    return rho_at_u * (1.0 / s0 - 1.0 / s1) + slope * std::log(std::fabs(s1 / s0));
}

// integral of (u - y) rho(y) / ((u - y)^2 + R^2) dy; for R == 0 requires u
// strictly outside [x0, x1]
double cell_drift(double x0, double x1, double v0, double v1, double u, double R) {
    const double h = x1 - x0;
    const double slope = (v1 - v0) / h;
    const double rho_at_u = v0 + slope * (u - x0);
    const double sa = u - x1, sb = u - x0;  // sa < sb
    if (R > 0.0) {
        const auto F = [&](double s) {
            return rho_at_u * 0.5 * std::log(s * s + R * R) - slope * (s - R * std::atan(s / R));
        };
        return F(sb) - F(sa);
    }
    const auto F = [&](double s) { return rho_at_u * std::log(std::fabs(s)) - slope * s; };
    return F(sb) - F(sa);
}

double continuous_distance(const ProbabilityMeasure& mu, double u) {
    double d = kInf;
    for (const auto& [lo, hi] : mu.continuous_support()) {
        if (u >= lo && u <= hi) return 0.0;
        d = std::fmin(d, std::fmin(std::fabs(u - lo), std::fabs(u - hi)));
    }
    return d;
}

// semicircle continuous parts have no elementary antiderivative; integrate
// panel-by-panel instead
double semicircle_quad(const ProbabilityMeasure& mu, const std::function<double(double)>& f,
                       std::span<const double> breaks, double abs_tol) {
    const auto& edges = mu.panel_edges();
    std::vector<double> cuts(edges.begin(), edges.end());
    for (double b : breaks) {
        if (b > cuts.front() && b < cuts.back()) cuts.push_back(b);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    QuadratureOptions opts;
    opts.abs_tol = abs_tol / static_cast<double>(cuts.size());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        s += integrate_adaptive([&](double x) { return f(x) * mu.density_value(x); }, cuts[i],
                                cuts[i + 1], opts);
    }
    return s;
}

double xi(const ProbabilityMeasure& mu, double u, double R, double quad_tol) {
    double s = 0.0;
    const auto& pos = mu.atom_positions();
    const auto& w = mu.atom_weights();
    for (std::size_t i = 0; i < pos.size(); ++i) {
        const double d = pos[i] - u;
        s += w[i] / (d * d + R * R);
    }
    if (const auto* pl = mu.piecewise_linear_part()) {
        const auto& g = pl->grid();
        const auto& v = pl->values();
        for (std::size_t i = 0; i + 1 < g.size(); ++i) {
            if (v[i] == 0.0 && v[i + 1] == 0.0) continue;
            s += cell_smoothed(g[i], g[i + 1], v[i], v[i + 1], u, R);
        }
    } else if (mu.semicircle_part()) {
        const double breaks[3] = {u - R, u, u + R};
        s += semicircle_quad(
            mu, [&](double x) { return 1.0 / ((x - u) * (x - u) + R * R); }, breaks, quad_tol);
    }
    return s;
}

double drift(const ProbabilityMeasure& mu, double u, double R, double quad_tol) {
    double s = 0.0;
    const auto& pos = mu.atom_positions();
    const auto& w = mu.atom_weights();
    for (std::size_t i = 0; i < pos.size(); ++i) {
        const double d = u - pos[i];
        s += w[i] * d / (d * d + R * R);
    }
    if (const auto* pl = mu.piecewise_linear_part()) {
        const auto& g = pl->grid();
        const auto& v = pl->values();
        for (std::size_t i = 0; i + 1 < g.size(); ++i) {
            if (v[i] == 0.0 && v[i + 1] == 0.0) continue;
            s += cell_drift(g[i], g[i + 1], v[i], v[i + 1], u, R);
        }
    } else if (mu.semicircle_part()) {
        const double breaks[3] = {u - R, u, u + R};
        s += semicircle_quad(
            mu,
            [&](double x) {
                const double d = u - x;
                return d / (d * d + R * R);
            },
            breaks, quad_tol);
    }
    return s;
}

double psi_with_v(const ProbabilityMeasure& mu, double t, double u, double v) {
    return u + t * drift(mu, u, v, 1e-12);
}

} // namespace

double x_functional(const ProbabilityMeasure& mu, double u) {
    const auto& pos = mu.atom_positions();
    const auto& w = mu.atom_weights();
    double s = 0.0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        if (pos[i] == u) return kInf;
        const double d = u - pos[i];
        s += w[i] / (d * d);
    }
    if (mu.has_continuous_part()) {
        const double dist = continuous_distance(mu, u);
        if (dist <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::fabs(u))) {
            return kInf;  // divergent: u touches the continuous support
        }
        if (const auto* pl = mu.piecewise_linear_part()) {
            const auto& g = pl->grid();
            const auto& v = pl->values();
            for (std::size_t i = 0; i + 1 < g.size(); ++i) {
                if (v[i] == 0.0 && v[i + 1] == 0.0) continue;
                s += cell_inv_sq(g[i], g[i + 1], v[i], v[i + 1], u);
            }
        } else {
            s += semicircle_quad(
                mu, [&](double x) { return 1.0 / ((x - u) * (x - u)); }, {}, 1e-11);
        }
    }
    return s;
}

double smoothed_x_functional(const ProbabilityMeasure& mu, double u, double R) {
    if (!(R > 0.0)) throw ValidationError("smoothed_x_functional: R must be > 0");
    return xi(mu, u, R, 1e-12);
}

double solve_v(const ProbabilityMeasure& mu, double t, double u, double tol) {
    if (!(t > 0.0)) throw ValidationError("solve_v: t must be > 0");
    if (!(tol > 0.0)) throw ValidationError("solve_v: tol must be > 0");
    const double target = 1.0 / t;
    if (!(x_functional(mu, u) > target)) return 0.0;

    const double quad_tol = std::fmin(1e-12, tol / 16.0);
    // xi_v(u) <= 1/v^2, so v = sqrt(t) always brackets the root from above
    double lo = 0.0, hi = std::sqrt(t);
    if (xi(mu, u, hi, quad_tol) > target) return hi;  // only for mu = delta_u
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double g = xi(mu, u, mid, quad_tol);
        if (std::fabs(g - target) <= 0.25 * tol) return mid;
        if (g > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<Interval> ut_intervals(const ProbabilityMeasure& mu, double t) {
    if (!(t > 0.0)) throw ValidationError("ut_intervals: t must be > 0");
    const double target = 1.0 / t;
    const double pad = 2.0 * std::sqrt(t);
    const double lo = mu.support_min() - pad;
    const double hi = mu.support_max() + pad;

    std::vector<double> scan;
    const int n_scan = 4096;
    scan.reserve(n_scan + 64);
    for (int i = 0; i <= n_scan; ++i) {
        scan.push_back(lo + (hi - lo) * i / n_scan);
    }
    const auto& atoms = mu.atom_positions();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        scan.push_back(atoms[i]);
        if (i + 1 < atoms.size()) scan.push_back(0.5 * (atoms[i] + atoms[i + 1]));
    }
    for (const auto& [a, b] : mu.continuous_support()) {
        scan.push_back(a);
        scan.push_back(b);
    }
    std::sort(scan.begin(), scan.end());
    scan.erase(std::unique(scan.begin(), scan.end()), scan.end());

    const auto above = [&](double u) { return x_functional(mu, u) > target; };

    std::vector<char> in(scan.size());
    for (std::size_t i = 0; i < scan.size(); ++i) in[i] = above(scan[i]) ? 1 : 0;
    if (in.front() || in.back()) {
        throw NumericalError("ut_intervals: scan window failed to contain the level set");
    }

    // bisect the boundary between an inside and an outside scan point
    const auto refine = [&](double inside, double outside) {
        for (int it = 0; it < 120; ++it) {
            const double mid = 0.5 * (inside + outside);
            const double width = std::fabs(outside - inside);
            if (width <= std::fmax(1e-10, 4.0 * std::numeric_limits<double>::epsilon() *
                                               std::fmax(std::fabs(inside), std::fabs(outside)))) {
                break;
            }
            if (mid == inside || mid == outside) break;
            if (above(mid)) {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        return 0.5 * (inside + outside);
    };

    std::vector<Interval> out;
    std::size_t i = 0;
    while (i < scan.size()) {
        if (!in[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < scan.size() && in[j + 1]) ++j;
        const double left = refine(scan[i], scan[i - 1]);
        const double right = refine(scan[j], scan[j + 1]);
        out.push_back({left, right});
        i = j + 1;
    }
    return out;
}

double psi(const ProbabilityMeasure& mu, double t, double u) {
    if (!(t > 0.0)) throw ValidationError("psi: t must be > 0");
    return psi_with_v(mu, t, u, solve_v(mu, t, u));
}

double free_density(const ProbabilityMeasure& mu, double t, double x, double tol) {
    if (!(t > 0.0)) throw ValidationError("free_density: t must be > 0");
    // psi(u) < u below the support and psi(u) > u above it, so this brackets x
    double lo = std::fmin(x, mu.support_min()) - 1.0;
    double hi = std::fmax(x, mu.support_max()) + 1.0;
    if (psi(mu, t, lo) > x || psi(mu, t, hi) < x) {
        throw NumericalError("free_density: map inversion lost its bracket");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (psi(mu, t, mid) < x) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-13 * (1.0 + std::fabs(mid))) break;
    }
    return solve_v(mu, t, 0.5 * (lo + hi), tol) / (pi * t);
}

DensityProfile free_density_profile(const ProbabilityMeasure& mu, double t, int n_points) {
    if (n_points < 16) throw ValidationError("free_density_profile: n_points must be >= 16");
    const auto intervals = ut_intervals(mu, t);
    if (intervals.empty()) {
        throw NumericalError("free_density_profile: empty level set");
    }

    const std::size_t m = intervals.size();
    double total_len = 0.0;
    for (const auto& iv : intervals) total_len += iv.hi - iv.lo;

    // at least 3 points per component, proportional to length otherwise
    std::vector<int> counts(m, 3);
    const int target = std::max<int>(n_points, static_cast<int>(3 * m));
    int assigned = static_cast<int>(3 * m);
    std::vector<double> frac(m);
    for (std::size_t k = 0; k < m; ++k) {
        frac[k] = (intervals[k].hi - intervals[k].lo) / total_len;
    }
    while (assigned < target) {
        // hand the next point to the component most below its share
        std::size_t best = 0;
        double worst = -kInf;
        for (std::size_t k = 0; k < m; ++k) {
            const double deficit = frac[k] * target - counts[k];
            if (deficit > worst) {
                worst = deficit;
                best = k;
            }
        }
        ++counts[best];
        ++assigned;
    }

    DensityProfile prof;
    prof.kind = ProcessKind::FreeSemicircle;
    prof.t = t;
    prof.grid_size = n_points;
    prof.x.reserve(assigned);
    prof.p.reserve(assigned);

    for (std::size_t k = 0; k < m; ++k) {
        const double l = intervals[k].lo, r = intervals[k].hi;
        const double len = r - l;
        const int n_i = counts[k];
        std::vector<double> us;
        us.push_back(l);
        const int inner = n_i - 2;
        if (inner >= 5) {
            // quadratically graded points in the 5% bands adjacent to the
            // endpoints (one tenth of the budget each), uniform in between
            int n_band = std::max(1, static_cast<int>(std::lround(0.10 * n_i)));
            int n_mid = inner - 2 * n_band;
            if (n_mid < 1) {
                n_band = (inner - 1) / 2;
                n_mid = inner - 2 * n_band;
            }
            const double bl = l + 0.05 * len, br = r - 0.05 * len;
            for (int j = 1; j <= n_band; ++j) {
                const double f = static_cast<double>(j) / n_band;
                us.push_back(l + (bl - l) * f * f);
            }
            for (int j = 1; j <= n_mid; ++j) {
                us.push_back(bl + (br - bl) * j / (n_mid + 1.0));
            }
            for (int j = n_band; j >= 1; --j) {
                const double f = static_cast<double>(j) / n_band;
                us.push_back(r - (r - br) * f * f);
            }
        } else {
            for (int j = 1; j <= inner; ++j) {
                us.push_back(l + len * j / (inner + 1.0));
            }
        }
        us.push_back(r);
        std::sort(us.begin(), us.end());
        us.erase(std::unique(us.begin(), us.end()), us.end());

        for (double u : us) {
            double v;
            if (u == l || u == r) {
                v = 0.0;  // component endpoints sit exactly on the level set
            } else {
                v = solve_v(mu, t, u);
            }
            prof.x.push_back(psi_with_v(mu, t, u, v));
            prof.p.push_back(v / (pi * t));
        }
    }

    for (std::size_t i = 0; i + 1 < prof.x.size(); ++i) {
        if (!(prof.x[i] < prof.x[i + 1])) {
            throw NumericalError("free_density_profile: psi tabulation is not strictly increasing");
        }
    }
    return prof;
}

SubordinationState::SubordinationState(ProbabilityMeasure mu, double t, double tol)
    : mu_(std::move(mu)), t_(t), tol_(tol), intervals_(ut_intervals(mu_, t)) {
    if (!(tol > 0.0)) throw ValidationError("SubordinationState: tol must be > 0");
}

double SubordinationState::v(double u) const { return solve_v(mu_, t_, u, tol_); }

double SubordinationState::psi(double u) const { return ulab::psi(mu_, t_, u); }

double SubordinationState::density(double x) const { return free_density(mu_, t_, x, tol_); }

} // namespace ulab
