#include "ulab/modality.hpp"

#include "ulab/errors.hpp"
#include "ulab/subordination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ulab {
namespace {

using std::numbers::pi;

constexpr double kRelProminence = 1e-9;

double refine_tol(double a, double b) {
    return std::fmax(1e-10, 4.0 * std::numeric_limits<double>::epsilon() *
                                std::fmax(std::fabs(a), std::fabs(b)));
}

// indices of local maxima of v, alternation filtered by dead band h
std::vector<std::size_t> prominent_maxima(std::span<const double> v, double h) {
    std::vector<std::size_t> maxima;
    if (v.empty()) return maxima;
    bool seeking_max = true;
    std::size_t cur = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (seeking_max) {
            if (v[i] > v[cur]) {
                cur = i;
            } else if (v[cur] - v[i] >= h) {
                maxima.push_back(cur);
                seeking_max = false;
                cur = i;
            }
        } else {
            if (v[i] < v[cur]) {
                cur = i;
            } else if (v[i] - v[cur] >= h) {
                seeking_max = true;
                cur = i;
            }
        }
    }
    return maxima;
}

std::vector<double> scan_points(Window w, int grid_size, std::span<const double> extra) {
    std::vector<double> pts;
    pts.reserve(grid_size + extra.size() + 1);
    for (int i = 0; i <= grid_size; ++i) {
        pts.push_back(w.lo + (w.hi - w.lo) * i / grid_size);
    }
    for (double x : extra) {
        if (x > w.lo && x < w.hi) pts.push_back(x);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

std::vector<double> atom_probes(const ProbabilityMeasure& mu, ProcessKind kind, double t) {
    std::vector<double> probes;
    const auto& atoms = mu.atom_positions();
    const double rt = std::sqrt(t);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const double a = atoms[i];
        probes.push_back(a);
        probes.push_back(a - 1.0);
        probes.push_back(a + 1.0);
        for (double s : {0.125, 0.25, 0.5, 1.0, 2.0, 4.0}) {
            probes.push_back(a - s * t);
            probes.push_back(a + s * t);
            probes.push_back(a - s * rt);
            probes.push_back(a + s * rt);
        }
        if (kind == ProcessKind::LevyHalf) {
            // the levy kernel rises only on (0, t^2/3) past each atom
            for (double s : {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0}) {
                probes.push_back(a + s * t * t / 3.0);
            }
        }
        if (i + 1 < atoms.size()) probes.push_back(0.5 * (a + atoms[i + 1]));
    }
    for (const auto& [lo, hi] : mu.continuous_support()) {
        probes.push_back(lo);
        probes.push_back(hi);
        probes.push_back(0.5 * (lo + hi));
    }
    return probes;
}

} // namespace

Window default_window(const ConvolvedDensity& cd) {
    const double lo = cd.mu.support_min();
    const double hi = cd.mu.support_max();
    const double spread = 6.0 * std::sqrt(cd.t) + 10.0 * cd.t;
    if (cd.kind == ProcessKind::LevyHalf) {
        // one-sided support: nothing below min supp, drift t^2/3 above
        return {lo, hi + spread + cd.t * cd.t / 3.0};
    }
    return {lo - spread, hi + spread};
}

ModalityReport count_modes_derivative(const ConvolvedDensity& cd, Window window, int grid_size,
                                      std::span<const double> extra_points) {
    if (grid_size < 256) {
        throw ValidationError("count_modes_derivative: grid_size must be >= 256");
    }
    if (!(window.lo < window.hi)) {
        throw ValidationError("count_modes_derivative: window must be nonempty");
    }

    // edges must point inward unless there is provably no mass outside
    const auto edge_ok = [&](double edge, bool lower) {
        const double d = density_derivative(cd, edge, 1);
        if (lower && d > 0.0) return true;
        if (!lower && d < 0.0) return true;
        if (cd.kind == ProcessKind::LevyHalf && lower && edge <= cd.mu.support_min()) return true;
        return d == 0.0 && density(cd, edge) < 1e-280;  // beyond underflow range
    };
    if (!edge_ok(window.lo, true) || !edge_ok(window.hi, false)) {
        throw NumericalError("count_modes_derivative: window too small, density slope "
                             "points outward at an edge");
    }

    const auto pts = scan_points(window, grid_size, extra_points);
    std::vector<double> xs;
    std::vector<int> sgn;
    xs.reserve(pts.size());
    sgn.reserve(pts.size());
    for (double x : pts) {
        const double d = density_derivative(cd, x, 1);
        if (d == 0.0) continue;  // exact ties resolve by their neighbors
        xs.push_back(x);
        sgn.push_back(d > 0.0 ? 1 : -1);
    }

    ModalityReport rep;
    rep.method = ModalityMethod::DerivativeScan;
    rep.grid_size = grid_size;
    rep.support_components = 1;  // each kernel smears mu onto one interval

    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        if (sgn[i] > 0 && sgn[i + 1] < 0) {
            double a = xs[i], b = xs[i + 1];
            while (b - a > refine_tol(a, b)) {
                const double mid = 0.5 * (a + b);
                if (mid <= a || mid >= b) break;
                if (density_derivative(cd, mid, 1) > 0.0) {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            rep.mode_locations.push_back(0.5 * (a + b));
        }
    }
    rep.mode_count = static_cast<int>(rep.mode_locations.size());
    rep.unimodal = rep.mode_count == 1 && rep.support_components == 1;
    return rep;
}

ModalityReport count_modes_profile(const DensityProfile& profile) {
    if (profile.x.size() != profile.p.size() || profile.x.size() < 2) {
        throw ValidationError("count_modes_profile: malformed profile");
    }
    for (std::size_t i = 0; i + 1 < profile.x.size(); ++i) {
        if (!(profile.x[i] < profile.x[i + 1])) {
            throw ValidationError("count_modes_profile: profile x must be strictly increasing");
        }
    }
    const double peak = *std::max_element(profile.p.begin(), profile.p.end());
    if (!(peak > 0.0)) {
        throw NumericalError("count_modes_profile: degenerate profile, all values zero");
    }

    ModalityReport rep;
    rep.method = ModalityMethod::ProfileScan;
    rep.grid_size = static_cast<int>(profile.x.size());

    const auto maxima = prominent_maxima(profile.p, kRelProminence * peak);
    for (std::size_t idx : maxima) rep.mode_locations.push_back(profile.x[idx]);
    rep.mode_count = static_cast<int>(rep.mode_locations.size());

    int runs = 0;
    bool inside = false;
    for (double p : profile.p) {
        const bool pos = p > 0.0;
        if (pos && !inside) ++runs;
        inside = pos;
    }
    rep.support_components = runs;
    rep.unimodal = rep.mode_count == 1 && rep.support_components == 1;
    return rep;
}

ModalityReport analyze_modality(const ProbabilityMeasure& mu, ProcessKind kind, double t,
                                const ModalityOptions& opts) {
    if (kind == ProcessKind::FreeSemicircle) {
        return count_modes_profile(free_density_profile(mu, t, opts.profile_points));
    }
    ConvolvedDensity cd(mu, kind, t);
    const Window w = opts.window ? *opts.window : default_window(cd);
    std::vector<double> extra = atom_probes(mu, kind, t);
    extra.insert(extra.end(), opts.extra_points.begin(), opts.extra_points.end());
    return count_modes_derivative(cd, w, opts.grid_size, extra);
}

int level_crossings(const ProbabilityMeasure& mu, ProcessKind kind, double t, double level) {
    if (!(level > 0.0)) throw ValidationError("level_crossings: level must be > 0");
    if (!(t > 0.0)) throw ValidationError("level_crossings: t must be > 0");

    // h is the scanned function minus its level; crossings of h = 0
    std::function<double(double)> h;
    Window w{};
    if (kind == ProcessKind::FreeSemicircle) {
        const double R = pi * level * t;
        h = [&mu, R, t](double u) { return smoothed_x_functional(mu, u, R) - 1.0 / t; };
        const double pad = 2.0 * std::sqrt(t) + R;
        w = {mu.support_min() - pad, mu.support_max() + pad};
    } else {
        ConvolvedDensity cd(mu, kind, t);
        h = [cd = std::move(cd), level](double x) { return density(cd, x) - level; };
        w = default_window(ConvolvedDensity(mu, kind, t));
    }

    const auto probes = atom_probes(mu, kind, t);
    const auto pts = scan_points(w, 4096, probes);
    std::vector<double> hv(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) hv[i] = h(pts[i]);

    // piecewise-monotone chain through refined local extrema
    std::vector<double> chain;
    chain.push_back(hv.front());
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const bool loc_max = hv[i] >= hv[i - 1] && hv[i] >= hv[i + 1];
        const bool loc_min = hv[i] <= hv[i - 1] && hv[i] <= hv[i + 1];
        if (!(loc_max || loc_min) || (loc_max && loc_min)) continue;
        double a = pts[i - 1], b = pts[i + 1];
        double fm = hv[i];
        double xm = pts[i];
        for (int it = 0; it < 80 && b - a > refine_tol(a, b); ++it) {
            const double x1 = xm - 0.25 * (xm - a);
            const double x2 = xm + 0.25 * (b - xm);
            const double f1 = h(x1), f2 = h(x2);
            if (loc_max ? f1 > fm : f1 < fm) {
                b = xm;
                xm = x1;
                fm = f1;
            } else if (loc_max ? f2 > fm : f2 < fm) {
                a = xm;
                xm = x2;
                fm = f2;
            } else {
                a = x1;
                b = x2;
            }
        }
        chain.push_back(fm);
    }
    chain.push_back(hv.back());

    const double touch = std::fmax(1e-12, 1e-9 * std::fabs(level));
    int count = 0;
    std::vector<int> signs;
    for (double v : chain) {
        if (std::fabs(v) <= touch) {
            ++count;  // tangential touch: one solution
            signs.push_back(0);
        } else {
            signs.push_back(v > 0.0 ? 1 : -1);
        }
    }
    for (std::size_t i = 0; i + 1 < signs.size(); ++i) {
        if (signs[i] * signs[i + 1] < 0) ++count;
    }
    return count;
}

CriticalTimeResult critical_time(const ProbabilityMeasure& mu, ProcessKind kind, double t_min,
                                 double t_max, double tol, const ModalityOptions& opts) {
    if (!(t_min > 0.0) || !(t_min < t_max)) {
        throw ValidationError("critical_time: need 0 < t_min < t_max");
    }
    if (!(tol > 0.0)) throw ValidationError("critical_time: tol must be > 0");

    const auto verdict = [&](double t) { return analyze_modality(mu, kind, t, opts).unimodal; };

    CriticalTimeResult res;
    const int n_scan = 32;
    const double lr = std::log(t_max / t_min);
    for (int i = 0; i < n_scan; ++i) {
        const double t = t_min * std::exp(lr * i / (n_scan - 1));
        res.scan.emplace_back(t, verdict(t));
    }
    if (res.scan.front().second) {
        throw ValidationError("critical_time: verdict at t_min is already unimodal");
    }
    if (!res.scan.back().second) {
        throw ValidationError("critical_time: verdict at t_max is not unimodal");
    }

    int transitions = 0;
    std::size_t last_false = 0;
    for (std::size_t i = 0; i + 1 < res.scan.size(); ++i) {
        if (res.scan[i].second != res.scan[i + 1].second) ++transitions;
        if (!res.scan[i].second) last_false = i;
    }
    res.monotone_verified = transitions == 1;

    // bracket the last false -> true transition
    double lo = res.scan[last_false].first;
    double hi = res.scan[last_false + 1].first;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (verdict(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    res.bracket_lo = lo;
    res.bracket_hi = hi;
    res.t_star = 0.5 * (lo + hi);
    return res;
}

bool mode_location_bound_check(const ProbabilityMeasure& mu, double t) {
    const auto rep = analyze_modality(mu, ProcessKind::ClassicalGaussian, t);
    if (rep.mode_count != 1) return false;
    return std::fabs(rep.mode_locations.front()) <= 0.5 * std::sqrt(t);
}

} // namespace ulab
