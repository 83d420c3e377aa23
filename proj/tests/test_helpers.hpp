#pragma once

#include "ulab/kernels.hpp"
#include "ulab/measure.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace testutil {

/// Composite Simpson rule, used as an oracle independent of the library's
/// adaptive quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return s * h / 3.0;
}

/// Random atomic measure with n_atoms positions in [lo, hi].
inline ulab::AtomicMeasure random_atomic(std::mt19937_64& rng, int n_atoms, double lo, double hi) {
    std::uniform_real_distribution<double> upos(lo, hi);
    std::uniform_real_distribution<double> uw(0.1, 1.0);
    std::vector<double> atoms, weights;
    double sum = 0.0;
    for (int i = 0; i < n_atoms; ++i) {
        atoms.push_back(upos(rng));
        weights.push_back(uw(rng));
        sum += weights.back();
    }
    for (double& w : weights) w /= sum;
    return ulab::AtomicMeasure(std::move(atoms), std::move(weights));
}

/// Trapezoid mass of a kernel-convolved density over a warped grid that
/// resolves the kernel's spread around every atom / support interval: the
/// integration variable is warped so heavy tails get logarithmically many
/// nodes. Returns the trapezoid integral of density over the window.
inline double warped_mass(const ulab::ConvolvedDensity& cd, double tail_mass, int nodes_per_part) {
    using ulab::ProcessKind;
    std::vector<double> centers(cd.mu.atom_positions());
    for (const auto& [lo, hi] : cd.mu.continuous_support()) {
        const int k = 16;
        for (int i = 0; i <= k; ++i) centers.push_back(lo + (hi - lo) * i / k);
    }

    // linear nodes through the kernel core, log-spaced nodes down the heavy
    // tails (uniform spacing superconverges on the core; log spacing keeps the
    // per-slice trapezoid error of an x^-a tail uniformly small)
    std::vector<double> xs;
    const double w = ulab::tail_halfwidth(cd.kind, cd.t, tail_mass);
    for (double c : centers) {
        if (cd.kind == ProcessKind::ClassicalGaussian) {
            for (int i = 0; i <= nodes_per_part; ++i) {
                xs.push_back(c - w + 2.0 * w * i / nodes_per_part);
            }
        } else if (cd.kind == ProcessKind::Cauchy) {
            const double core = 10.0 * cd.t;
            for (int i = 0; i <= nodes_per_part; ++i) {
                xs.push_back(c - core + 2.0 * core * i / nodes_per_part);
            }
            const double lr = std::log(w / core);
            const int n_log = 2 * nodes_per_part;
            for (int i = 1; i <= n_log; ++i) {
                const double r = core * std::exp(lr * i / n_log);
                xs.push_back(c - r);
                xs.push_back(c + r);
            }
        } else {
            const double core = 50.0 * cd.t * cd.t;
            const int n_core = 4 * nodes_per_part;
            for (int i = 0; i <= n_core; ++i) {
                xs.push_back(c + core * i / n_core);
            }
            const double lr = std::log(w / core);
            const int n_log = 4 * nodes_per_part;
            for (int i = 1; i <= n_log; ++i) {
                xs.push_back(c + core * std::exp(lr * i / n_log));
            }
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    double mass = 0.0;
    double prev_x = xs.front();
    double prev_p = ulab::density(cd, prev_x);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double p = ulab::density(cd, xs[i]);
        mass += 0.5 * (p + prev_p) * (xs[i] - prev_x);
        prev_x = xs[i];
        prev_p = p;
    }
    return mass;
}

} // namespace testutil
