#include "ulab/thresholds.hpp"

#include "ulab/errors.hpp"

#include <cmath>

namespace ulab {
namespace {

ProcessKind theorem_process(ThresholdTheorem theorem) {
    switch (theorem) {
    case ThresholdTheorem::Free4D2: return ProcessKind::FreeSemicircle;
    case ThresholdTheorem::ClassicalGaussianTail: return ProcessKind::ClassicalGaussian;
    case ThresholdTheorem::CauchyThirdMoment: return ProcessKind::Cauchy;
    case ThresholdTheorem::LevyDiameter: return ProcessKind::LevyHalf;
    }
    throw ValidationError("unknown threshold theorem");
}

} // namespace

const char* threshold_name(ThresholdTheorem theorem) {
    switch (theorem) {
    case ThresholdTheorem::Free4D2: return "free_4D2";
    case ThresholdTheorem::ClassicalGaussianTail: return "classical_gaussian_tail";
    case ThresholdTheorem::CauchyThirdMoment: return "cauchy_third_moment";
    case ThresholdTheorem::LevyDiameter: return "levy_diameter";
    }
    return "?";
}

double free_bound(double diameter) {
    if (!(diameter >= 0.0)) throw ValidationError("free_bound: diameter must be >= 0");
    return 4.0 * diameter * diameter;
}

double classical_bound(double eps, double alpha) {
    if (!(eps > 0.0)) throw ValidationError("classical_bound: eps must be > 0");
    if (!(alpha >= 1.0)) {
        throw ValidationError("classical_bound: alpha < 1 is impossible for a probability measure");
    }
    return 36.0 * std::log(2.0 * alpha) / eps;
}

double cauchy_bound(double beta) {
    if (!(beta >= 0.0)) throw ValidationError("cauchy_bound: beta must be >= 0");
    return 20.0 * std::cbrt(beta);
}

double levy_bound(double diameter) {
    if (!(diameter >= 0.0)) throw ValidationError("levy_bound: diameter must be >= 0");
    return std::pow(90.0 / 4.0, 0.25) * std::sqrt(diameter);
}

ThresholdReport verify_threshold(const ProbabilityMeasure& mu, ThresholdTheorem theorem,
                                 int n_times, double eps) {
    if (n_times < 1) throw ValidationError("verify_threshold: n_times must be >= 1");

    ThresholdReport rep;
    rep.theorem = theorem;
    switch (theorem) {
    case ThresholdTheorem::Free4D2: {
        const double D = diameter(mu);
        if (!std::isfinite(D)) throw ValidationError("verify_threshold: unbounded support");
        rep.inputs["D"] = D;
        rep.bound = free_bound(D);
        break;
    }
    case ThresholdTheorem::ClassicalGaussianTail: {
        const double alpha = gaussian_tail_functional(mu, eps);
        rep.inputs["eps"] = eps;
        rep.inputs["alpha"] = alpha;
        rep.bound = classical_bound(eps, alpha);
        break;
    }
    case ThresholdTheorem::CauchyThirdMoment: {
        const double beta = abs_moment(mu, 3.0);
        rep.inputs["beta"] = beta;
        rep.bound = cauchy_bound(beta);
        break;
    }
    case ThresholdTheorem::LevyDiameter: {
        const double D = diameter(mu);
        if (!std::isfinite(D)) throw ValidationError("verify_threshold: unbounded support");
        rep.inputs["D"] = D;
        rep.bound = levy_bound(D);
        break;
    }
    }

    const ProcessKind kind = theorem_process(theorem);
    // geometric ladder above the bound; a zero bound (point mass) degenerates
    // to a fixed small time, where the claim is trivially about the kernel
    double mult = 1.0;
    for (int i = 0; i < n_times; ++i) {
        const double t = std::fmax(rep.bound * mult, 1e-2);
        const bool uni = analyze_modality(mu, kind, t).unimodal;
        rep.verified_at.emplace_back(t, uni);
        if (t >= rep.bound && !uni) rep.falsified = true;
        mult = (i == 0) ? 1.5 : mult * 2.0;
    }
    return rep;
}

GapProbeResult constant_gap_probe(std::span<const ProbabilityMeasure> family, double tol) {
    GapProbeResult out;
    for (const auto& mu : family) {
        const double D = diameter(mu);
        if (!(D > 0.0)) {
            throw ValidationError("constant_gap_probe: every measure needs positive diameter");
        }
        // shrink t until the verdict flips to non-unimodal; 4 D^2 is always a
        // unimodal upper end
        double t_lo = D * D / 100.0;
        int guard = 0;
        while (analyze_modality(mu, ProcessKind::FreeSemicircle, t_lo).unimodal) {
            t_lo *= 0.5;
            if (++guard > 40) {
                throw NumericalError("constant_gap_probe: no non-unimodal time found");
            }
        }
        const double t_hi = 8.0 * D * D;
        auto ct = critical_time(mu, ProcessKind::FreeSemicircle, t_lo, t_hi, tol * D * D);
        const double ratio = ct.t_star / (D * D);
        out.ratios.push_back(ratio);
        out.max_ratio = std::fmax(out.max_ratio, ratio);
        out.detail.push_back(std::move(ct));
    }
    return out;
}

} // namespace ulab
