#include "ulab/counterexamples.hpp"

#include "ulab/errors.hpp"
#include "ulab/subordination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ulab {
namespace {

using std::numbers::pi;

constexpr double kMinNormal = std::numeric_limits<double>::min();

std::vector<double> geometric_atoms(double a, int n_atoms, double a_min) {
    if (!(a >= a_min)) {
        throw ValidationError("counterexample: base a below the admissible range");
    }
    if (n_atoms < 4) throw ValidationError("counterexample: need at least 4 atoms");
    std::vector<double> atoms(n_atoms);
    double p = 1.0;
    for (int n = 0; n < n_atoms; ++n) {
        p *= a;
        atoms[n] = p;
    }
    if (!std::isfinite(atoms.back())) {
        throw ValidationError("counterexample: atoms overflow at this (a, n)");
    }
    return atoms;
}

AtomicMeasure normalized(std::vector<double> atoms, std::vector<double> weights) {
    // weights that underflowed to zero are clamped to the smallest positive
    // normal so the measure stays valid; renormalization absorbs the rest
    for (double& w : weights) {
        if (w <= 0.0) w = kMinNormal;
    }
    return AtomicMeasure(std::move(atoms), std::move(weights));
}

} // namespace

AtomicMeasure build_free_counterexample(double a, int n_atoms, FreeWeightRule rule) {
    auto atoms = geometric_atoms(a, n_atoms, 2.0);
    std::vector<double> w(atoms.size());
    double sum = 0.0;
    for (std::size_t n = 0; n < atoms.size(); ++n) {
        const double k = static_cast<double>(n + 1);
        double log_f = 0.0;  // log max{f(a_n), 1}
        if (rule == FreeWeightRule::ExpSquare) log_f = atoms[n] * atoms[n];
        w[n] = std::exp(-2.0 * std::log(k) - log_f);
        sum += w[n];
    }
    for (double& x : w) x /= sum;
    return normalized(std::move(atoms), std::move(w));
}

AtomicMeasure build_classical_counterexample(double a, int n_atoms, double delta) {
    if (!(delta > 0.0)) throw ValidationError("counterexample: delta must be > 0");
    auto atoms = geometric_atoms(a, n_atoms, 2.0);
    std::vector<double> w(atoms.size());
    double sum = 0.0;
    for (int k = 0; k < n_atoms; ++k) {
        double b = std::numeric_limits<double>::infinity();
        for (int n = 0; n < n_atoms; ++n) {
            if (n != k) b = std::fmin(b, std::fabs(atoms[k] - atoms[n] - 1.0));
        }
        w[k] = std::exp(-delta * b * b / (k + 1.0));
        sum += w[k];
    }
    for (double& x : w) x /= sum;
    return normalized(std::move(atoms), std::move(w));
}

AtomicMeasure build_cauchy_counterexample(double a, int n_atoms, double r) {
    if (!(r > 0.0)) throw ValidationError("counterexample: r must be > 0");
    auto atoms = geometric_atoms(a, n_atoms, 2.0);
    std::vector<double> w(atoms.size());
    double sum = 0.0;
    for (std::size_t n = 0; n < atoms.size(); ++n) {
        const double k = static_cast<double>(n + 1);
        w[n] = std::exp(r * std::log(k) - 3.0 * k * std::log(a));
        sum += w[n];
    }
    for (double& x : w) x /= sum;
    return normalized(std::move(atoms), std::move(w));
}

AtomicMeasure build_levy_counterexample(double a, int n_atoms) {
    if (!(a > 2.0)) throw ValidationError("counterexample: levy construction requires a > 2");
    auto atoms = geometric_atoms(a, n_atoms, a);
    std::vector<double> w(atoms.size());
    double sum = 0.0;
    for (std::size_t n = 0; n < atoms.size(); ++n) {
        const double k = static_cast<double>(n + 1);
        w[n] = std::exp(std::log(k) - 2.5 * k * std::log(a));
        sum += w[n];
    }
    for (double& x : w) x /= sum;
    return normalized(std::move(atoms), std::move(w));
}

const char* evidence_name(NonUnimodalWitness::Evidence e) {
    switch (e) {
    case NonUnimodalWitness::Evidence::Components: return "components";
    case NonUnimodalWitness::Evidence::Modes: return "modes";
    case NonUnimodalWitness::Evidence::DerivativeSign: return "derivative_sign";
    }
    return "?";
}

namespace {

// depth of the shallowest side of the best dip separating two modes
double best_dip(const ConvolvedDensity& cd, const std::vector<double>& modes) {
    double best = 0.0;
    std::vector<double> peak(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) peak[i] = density(cd, modes[i]);
    for (std::size_t i = 0; i + 1 < modes.size(); ++i) {
        double valley = std::numeric_limits<double>::infinity();
        const int n = 512;
        for (int j = 0; j <= n; ++j) {
            const double x = modes[i] + (modes[i + 1] - modes[i]) * j / n;
            valley = std::fmin(valley, density(cd, x));
        }
        best = std::fmax(best, std::fmin(peak[i], peak[i + 1]) - valley);
    }
    return best;
}

} // namespace

NonUnimodalWitness witness_non_unimodal(const ProbabilityMeasure& mu, ProcessKind process,
                                        double t) {
    if (!(t > 0.0)) throw ValidationError("witness_non_unimodal: t must be > 0");

    NonUnimodalWitness wit;
    wit.t = t;

    if (process == ProcessKind::FreeSemicircle) {
        const auto intervals = ut_intervals(mu, t);
        if (intervals.size() >= 2) {
            wit.evidence = NonUnimodalWitness::Evidence::Components;
            wit.support_components = static_cast<int>(intervals.size());
            double gap = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i + 1 < intervals.size(); ++i) {
                gap = std::fmin(gap, intervals[i + 1].lo - intervals[i].hi);
            }
            wit.margin = gap;
            if (wit.margin <= 10.0 * 1e-10) {
                throw NoWitnessError("witness: component separation below the certification floor");
            }
            return wit;
        }
        const auto rep = analyze_modality(mu, process, t);
        if (rep.mode_count >= 2) {
            wit.evidence = NonUnimodalWitness::Evidence::Modes;
            wit.support_components = rep.support_components;
            wit.mode_locations = rep.mode_locations;
            // profile prominences are already filtered against the relative
            // floor; reuse the gap between the top modes as the margin
            const auto prof = free_density_profile(mu, t, 2049);
            double peak = 0.0;
            for (double p : prof.p) peak = std::fmax(peak, p);
            wit.margin = 1e-9 * peak;
            return wit;
        }
        throw NoWitnessError("witness: free evolution looks unimodal at this t");
    }

    const auto rep = analyze_modality(mu, process, t);
    ConvolvedDensity cd(mu, process, t);
    if (rep.mode_count >= 2) {
        wit.evidence = NonUnimodalWitness::Evidence::Modes;
        wit.support_components = rep.support_components;
        wit.mode_locations = rep.mode_locations;
        wit.margin = best_dip(cd, rep.mode_locations);
        double peak = 0.0;
        for (double m : rep.mode_locations) peak = std::fmax(peak, density(cd, m));
        const double eval_tol = 1e-13 * peak + 1e-300;
        if (wit.margin > 10.0 * eval_tol) return wit;
        throw NoWitnessError("witness: mode prominence below the certification floor");
    }

    // fall back to a raw derivative-sign certificate at the probe points:
    // a positive slope to the right of a negative one forces a second rise
    const Window w = default_window(cd);
    std::vector<double> probes;
    const auto& atoms = mu.atom_positions();
    for (double atom : atoms) {
        for (double off : {-1.0, 1.0, -0.5 * t, 0.5 * t}) probes.push_back(atom + off);
        if (process == ProcessKind::LevyHalf) {
            for (double s : {1.0 / 3.0, 2.0 / 3.0, 1.0}) probes.push_back(atom + s * t * t / 3.0);
        }
    }
    std::sort(probes.begin(), probes.end());
    double max_abs = 0.0;
    std::vector<std::pair<double, double>> vals;
    for (double x : probes) {
        if (x <= w.lo || x >= w.hi) continue;
        const double d = density_derivative(cd, x, 1);
        vals.emplace_back(x, d);
        max_abs = std::fmax(max_abs, std::fabs(d));
    }
    const double floor = 10.0 * (1e-13 * max_abs + 1e-300);
    bool descended = false;
    for (const auto& [x, d] : vals) {
        if (d < -floor) descended = true;
        if (descended && d > floor) {
            wit.evidence = NonUnimodalWitness::Evidence::DerivativeSign;
            wit.derivative_location = x;
            wit.margin = d;
            return wit;
        }
    }
    throw NoWitnessError("witness: no non-unimodality evidence at this t");
}

std::optional<StrongUnimodalityWitness>
strong_unimodality_witness_search(std::span<const double> scales, std::span<const double> times) {
    for (double s : scales) {
        if (!(s > 0.0)) throw ValidationError("witness search: scales must be > 0");
        const ProbabilityMeasure mu = NamedMeasure::bernoulli(s);
        for (double t : times) {
            const auto prof = free_density_profile(mu, t, 2049);
            const auto rep = count_modes_profile(prof);
            if (rep.unimodal) continue;

            // pick a density level the curve must hit at least three times
            double level = 0.0;
            if (rep.support_components >= 2) {
                // half the smaller component's peak
                double run_peak = 0.0;
                double min_peak = std::numeric_limits<double>::infinity();
                bool inside = false;
                for (double p : prof.p) {
                    if (p > 0.0) {
                        inside = true;
                        run_peak = std::fmax(run_peak, p);
                    } else if (inside) {
                        min_peak = std::fmin(min_peak, run_peak);
                        run_peak = 0.0;
                        inside = false;
                    }
                }
                if (inside) min_peak = std::fmin(min_peak, run_peak);
                level = 0.5 * min_peak;
            } else {
                // midpoint between the shallower summit and the valley floor
                double p1 = 0.0, p2 = 0.0;
                std::size_t i1 = 0;
                std::vector<std::pair<double, std::size_t>> summits;
                for (std::size_t i = 1; i + 1 < prof.p.size(); ++i) {
                    if (prof.p[i] >= prof.p[i - 1] && prof.p[i] >= prof.p[i + 1]) {
                        summits.emplace_back(prof.p[i], i);
                    }
                }
                if (summits.size() < 2) continue;
                std::sort(summits.rbegin(), summits.rend());
                p1 = summits[0].first;
                i1 = summits[0].second;
                std::size_t i2 = summits[1].second;
                p2 = summits[1].first;
                double valley = p1;
                for (std::size_t i = std::min(i1, i2); i <= std::max(i1, i2); ++i) {
                    valley = std::fmin(valley, prof.p[i]);
                }
                level = 0.5 * (p2 + valley);
            }
            if (!(level > 0.0)) continue;

            StrongUnimodalityWitness out;
            out.s = s;
            out.t = t;
            out.free_report = rep;
            out.cauchy_time = pi * level * t;
            out.cauchy_level = out.cauchy_time / (pi * t);
            out.cauchy_crossings =
                level_crossings(mu, ProcessKind::Cauchy, out.cauchy_time, out.cauchy_level);
            if (out.cauchy_crossings >= 3) return out;
        }
    }
    return std::nullopt;
}

std::optional<StrongUnimodalityWitness> strong_unimodality_witness_search() {
    const std::vector<double> scales{1.0, 2.0};
    std::vector<double> times;
    const double lo = 0.5, hi = 16.0;
    for (int i = 0; i < 16; ++i) {
        times.push_back(lo * std::exp(std::log(hi / lo) * i / 15.0));
    }
    return strong_unimodality_witness_search(scales, times);
}

} // namespace ulab
