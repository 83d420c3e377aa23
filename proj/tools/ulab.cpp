// ulab: compute classical / free evolution densities of a measure, decide
// unimodality, locate critical times, verify sufficient thresholds and build
// never-unimodal counterexample truncations.

#include "ulab/counterexamples.hpp"
#include "ulab/errors.hpp"
#include "ulab/kernels.hpp"
#include "ulab/measure_io.hpp"
#include "ulab/modality.hpp"
#include "ulab/subordination.hpp"
#include "ulab/thresholds.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using nlohmann::json;
using namespace ulab;

constexpr const char* kVersion = "1.0.0";

// ---- shared flag plumbing --------------------------------------------------

struct MeasureSource {
    std::string inline_spec;
    std::string file_path;
};

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError(std::string(what) + ": expected comma-separated numbers, got '" +
                                  item + "'");
        }
    }
    if (out.empty()) throw ValidationError(std::string(what) + ": empty list");
    return out;
}

ProbabilityMeasure parse_inline_measure(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string family = spec.substr(0, colon);
    std::vector<double> p;
    if (colon != std::string::npos && colon + 1 < spec.size()) {
        p = parse_double_list(spec.substr(colon + 1), "--measure");
    }
    const auto need = [&](std::size_t n) {
        if (p.size() != n) {
            throw ValidationError("--measure " + family + ": expected " + std::to_string(n) +
                                  " parameter(s)");
        }
    };
    if (family == "bernoulli") {
        need(1);
        return NamedMeasure::bernoulli(p[0]);
    }
    if (family == "point_mass") {
        need(1);
        return NamedMeasure::point_mass(p[0]);
    }
    if (family == "uniform") {
        need(2);
        return NamedMeasure::uniform(p[0], p[1]);
    }
    if (family == "triangle") {
        need(3);
        return NamedMeasure::triangle(p[0], p[1], p[2]);
    }
    if (family == "semicircle") {
        need(1);
        return NamedMeasure::semicircle(p[0]);
    }
    throw ValidationError("--measure: unknown family '" + family + "'");
}

ProbabilityMeasure resolve_measure(const MeasureSource& src) {
    if (!src.inline_spec.empty() && !src.file_path.empty()) {
        throw ValidationError("give either --measure or --measure-file, not both");
    }
    if (!src.inline_spec.empty()) return parse_inline_measure(src.inline_spec);
    if (!src.file_path.empty()) {
        std::ifstream in(src.file_path);
        if (!in) throw ValidationError("--measure-file: cannot open '" + src.file_path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_measure(buf.str());
    }
    throw ValidationError("a measure is required (--measure or --measure-file)");
}

ProcessKind parse_process(const std::string& name) {
    if (name == "gaussian") return ProcessKind::ClassicalGaussian;
    if (name == "cauchy") return ProcessKind::Cauchy;
    if (name == "levy") return ProcessKind::LevyHalf;
    if (name == "free") return ProcessKind::FreeSemicircle;
    throw ValidationError("--process: expected gaussian|cauchy|levy|free, got '" + name + "'");
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ValidationError("--out: cannot open '" + out_path + "' for writing");
    out << text;
}

std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

json modality_json(const ModalityReport& rep) {
    json j;
    j["mode_count"] = rep.mode_count;
    j["mode_locations"] = rep.mode_locations;
    j["support_components"] = rep.support_components;
    j["unimodal"] = rep.unimodal;
    j["method"] =
        rep.method == ModalityMethod::ProfileScan ? "profile_scan" : "derivative_scan";
    j["grid_size"] = rep.grid_size;
    return j;
}

std::string report_document(const std::string& command, json inputs, json result,
                            json diagnostics) {
    json doc;
    doc["command"] = command;
    doc["inputs"] = std::move(inputs);
    doc["result"] = std::move(result);
    doc["diagnostics"] = std::move(diagnostics);
    return doc.dump(2) + "\n";
}

// ---- per-verb state --------------------------------------------------------

struct Options {
    MeasureSource measure;
    std::string process;
    double t = 1.0;
    std::string t_list;
    int grid = 513;
    std::string window;
    std::string bracket;
    double tol = 1e-3;
    std::string theorem;
    int n_times = 3;
    double eps = 1.0;
    double a = std::nan("");  // nan: use the construction default
    int n_atoms = -1;         // -1: use the construction default
    double delta = ctrex_defaults::classical_delta;
    double r = ctrex_defaults::cauchy_r;
    std::string f_rule = "one";
    std::string out;
    std::string emit_measure;
};

DensityProfile classical_profile(const ProbabilityMeasure& mu, ProcessKind kind, double t,
                                 int grid, const std::optional<Window>& window) {
    ConvolvedDensity cd(mu, kind, t);
    const Window w = window ? *window : default_window(cd);
    DensityProfile prof;
    prof.kind = kind;
    prof.t = t;
    prof.grid_size = grid;
    for (int i = 0; i < grid; ++i) {
        const double x = grid == 1 ? w.lo : w.lo + (w.hi - w.lo) * i / (grid - 1);
        prof.x.push_back(x);
        prof.p.push_back(density(cd, x));
    }
    return prof;
}

std::optional<Window> parse_window(const std::string& text) {
    if (text.empty()) return std::nullopt;
    const auto vals = parse_double_list(text, "--window");
    if (vals.size() != 2 || !(vals[0] < vals[1])) {
        throw ValidationError("--window: expected lo,hi with lo < hi");
    }
    return Window{vals[0], vals[1]};
}

std::string csv_header(const std::string& command, const ProbabilityMeasure& mu,
                       const std::string& process, double t) {
    std::string s;
    s += "# ulab " + std::string(kVersion) + " " + command + "\n";
    s += "# measure: " + measure_to_json(mu) + "\n";
    s += "# process: " + process + "\n";
    if (t > 0.0) s += "# t: " + fmt17(t) + "\n";
    return s;
}

int run_density(const Options& o) {
    const auto mu = resolve_measure(o.measure);
    const ProcessKind kind = parse_process(o.process);
    if (!(o.t > 0.0)) throw ValidationError("--t: must be > 0");
    if (o.grid < 3) throw ValidationError("--grid: must be >= 3");

    DensityProfile prof;
    if (kind == ProcessKind::FreeSemicircle) {
        prof = free_density_profile(mu, o.t, std::max(o.grid, 16));
    } else {
        prof = classical_profile(mu, kind, o.t, o.grid, parse_window(o.window));
    }
    std::string text = csv_header("density", mu, o.process, o.t);
    text += "x,p\n";
    for (std::size_t i = 0; i < prof.x.size(); ++i) {
        text += fmt17(prof.x[i]) + "," + fmt17(prof.p[i]) + "\n";
    }
    write_output(o.out, text);
    return 0;
}

int run_sweep(const Options& o) {
    const auto mu = resolve_measure(o.measure);
    const ProcessKind kind = parse_process(o.process);
    const auto ts = parse_double_list(o.t_list, "--t-list");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (!(ts[i] > 0.0)) throw ValidationError("--t-list: times must be > 0");
        if (i > 0 && !(ts[i] > ts[i - 1])) {
            throw ValidationError("--t-list: times must be strictly increasing");
        }
    }
    ModalityOptions mo;
    mo.window = parse_window(o.window);
    if (o.grid > 256) mo.grid_size = o.grid;

    std::string text = csv_header("sweep", mu, o.process, 0.0);
    text += "t,mode_count,support_components,unimodal,mode_locations\n";
    for (double t : ts) {
        const auto rep = analyze_modality(mu, kind, t, mo);
        std::string locs;
        for (std::size_t i = 0; i < rep.mode_locations.size(); ++i) {
            if (i > 0) locs += ";";
            locs += fmt17(rep.mode_locations[i]);
        }
        text += fmt17(t) + "," + std::to_string(rep.mode_count) + "," +
                std::to_string(rep.support_components) + "," +
                (rep.unimodal ? "true" : "false") + "," + locs + "\n";
    }
    write_output(o.out, text);
    return 0;
}

int run_modes(const Options& o) {
    const auto mu = resolve_measure(o.measure);
    const ProcessKind kind = parse_process(o.process);
    if (!(o.t > 0.0)) throw ValidationError("--t: must be > 0");
    ModalityOptions mo;
    mo.window = parse_window(o.window);
    if (o.grid > 256) mo.grid_size = o.grid;
    const auto rep = analyze_modality(mu, kind, o.t, mo);

    json inputs;
    inputs["measure"] = json::parse(measure_to_json(mu));
    inputs["process"] = o.process;
    inputs["t"] = o.t;
    json diag;
    diag["version"] = kVersion;
    write_output(o.out, report_document("modes", inputs, modality_json(rep), diag));
    return 0;
}

int run_critical_time(const Options& o) {
    const auto mu = resolve_measure(o.measure);
    const ProcessKind kind = parse_process(o.process);
    const auto br = parse_double_list(o.bracket, "--bracket");
    if (br.size() != 2) throw ValidationError("--bracket: expected t_min,t_max");
    const auto res = critical_time(mu, kind, br[0], br[1], o.tol);

    json inputs;
    inputs["measure"] = json::parse(measure_to_json(mu));
    inputs["process"] = o.process;
    inputs["bracket"] = {br[0], br[1]};
    inputs["tol"] = o.tol;
    json result;
    result["t_star"] = res.t_star;
    result["bracket"] = {res.bracket_lo, res.bracket_hi};
    result["monotone_verified"] = res.monotone_verified;
    json diag;
    diag["version"] = kVersion;
    json scan = json::array();
    for (const auto& [t, uni] : res.scan) scan.push_back({{"t", t}, {"unimodal", uni}});
    diag["scan"] = scan;
    write_output(o.out, report_document("critical-time", inputs, result, diag));
    return 0;
}

int run_threshold(const Options& o) {
    const auto mu = resolve_measure(o.measure);
    ThresholdTheorem theorem;
    if (o.theorem == "free_4D2") {
        theorem = ThresholdTheorem::Free4D2;
    } else if (o.theorem == "classical_gaussian_tail") {
        theorem = ThresholdTheorem::ClassicalGaussianTail;
    } else if (o.theorem == "cauchy_third_moment") {
        theorem = ThresholdTheorem::CauchyThirdMoment;
    } else if (o.theorem == "levy_diameter") {
        theorem = ThresholdTheorem::LevyDiameter;
    } else {
        throw ValidationError("--theorem: expected free_4D2|classical_gaussian_tail|"
                              "cauchy_third_moment|levy_diameter");
    }
    const auto rep = verify_threshold(mu, theorem, o.n_times, o.eps);

    json inputs;
    inputs["measure"] = json::parse(measure_to_json(mu));
    inputs["theorem"] = threshold_name(rep.theorem);
    inputs["n_times"] = o.n_times;
    if (theorem == ThresholdTheorem::ClassicalGaussianTail) inputs["eps"] = o.eps;
    json result;
    for (const auto& [k, v] : rep.inputs) result["functionals"][k] = v;
    result["bound"] = rep.bound;
    result["falsified"] = rep.falsified;
    json checks = json::array();
    for (const auto& [t, uni] : rep.verified_at) checks.push_back({{"t", t}, {"unimodal", uni}});
    result["verified_at"] = checks;
    json diag;
    diag["version"] = kVersion;
    write_output(o.out, report_document("threshold", inputs, result, diag));
    return 0;
}

int run_counterexample(const Options& o) {
    const ProcessKind kind = parse_process(o.process);
    if (!(o.t > 0.0)) throw ValidationError("--t: must be > 0");

    AtomicMeasure built = [&] {
        switch (kind) {
        case ProcessKind::FreeSemicircle: {
            FreeWeightRule rule;
            if (o.f_rule == "one") {
                rule = FreeWeightRule::One;
            } else if (o.f_rule == "exp_square") {
                rule = FreeWeightRule::ExpSquare;
            } else {
                throw ValidationError("--f: expected one|exp_square");
            }
            return build_free_counterexample(std::isnan(o.a) ? ctrex_defaults::free_a : o.a,
                                             o.n_atoms < 0 ? ctrex_defaults::free_n : o.n_atoms,
                                             rule);
        }
        case ProcessKind::ClassicalGaussian:
            return build_classical_counterexample(
                std::isnan(o.a) ? ctrex_defaults::classical_a : o.a,
                o.n_atoms < 0 ? ctrex_defaults::classical_n : o.n_atoms, o.delta);
        case ProcessKind::Cauchy:
            return build_cauchy_counterexample(std::isnan(o.a) ? ctrex_defaults::cauchy_a : o.a,
                                               o.n_atoms < 0 ? ctrex_defaults::cauchy_n : o.n_atoms,
                                               o.r);
        case ProcessKind::LevyHalf:
            return build_levy_counterexample(std::isnan(o.a) ? ctrex_defaults::levy_a : o.a,
                                             o.n_atoms < 0 ? ctrex_defaults::levy_n : o.n_atoms);
        }
        throw ValidationError("--process: unknown process");
    }();

    const ProbabilityMeasure mu(built);
    if (!o.emit_measure.empty()) {
        write_output(o.emit_measure, measure_to_json(mu) + "\n");
    }
    const auto wit = witness_non_unimodal(mu, kind, o.t);

    json inputs;
    inputs["process"] = o.process;
    inputs["t"] = o.t;
    inputs["measure"] = json::parse(measure_to_json(mu));
    json result;
    result["evidence"] = evidence_name(wit.evidence);
    result["margin"] = wit.margin;
    switch (wit.evidence) {
    case NonUnimodalWitness::Evidence::Components:
        result["support_components"] = wit.support_components;
        break;
    case NonUnimodalWitness::Evidence::Modes:
        result["mode_locations"] = wit.mode_locations;
        break;
    case NonUnimodalWitness::Evidence::DerivativeSign:
        result["derivative_location"] = wit.derivative_location;
        break;
    }
    json diag;
    diag["version"] = kVersion;
    write_output(o.out, report_document("counterexample", inputs, result, diag));
    return 0;
}

int run_witness_search(const Options& o) {
    std::optional<StrongUnimodalityWitness> wit;
    json inputs;
    if (!o.t_list.empty()) {
        const auto ts = parse_double_list(o.t_list, "--t-list");
        const std::vector<double> scales{1.0, 2.0};
        inputs["times"] = ts;
        inputs["scales"] = scales;
        wit = strong_unimodality_witness_search(scales, ts);
    } else {
        inputs["times"] = "default 16-point log grid in [0.5, 16]";
        inputs["scales"] = {1.0, 2.0};
        wit = strong_unimodality_witness_search();
    }
    if (!wit) throw NoWitnessError("witness-search: every (s, t) in the grid looks unimodal");

    json result;
    result["s"] = wit->s;
    result["t"] = wit->t;
    result["free_report"] = modality_json(wit->free_report);
    result["cauchy_time"] = wit->cauchy_time;
    result["cauchy_level"] = wit->cauchy_level;
    result["cauchy_level_crossings"] = wit->cauchy_crossings;
    json diag;
    diag["version"] = kVersion;
    write_output(o.out, report_document("witness-search", inputs, result, diag));
    return 0;
}

} // namespace

namespace {

int run_main(int argc, char** argv) {
    CLI::App app{"unimodality laboratory for classical and free evolutions"};
    app.require_subcommand(1);
    Options o;

    const auto add_measure_flags = [&](CLI::App* cmd) {
        cmd->add_option("--measure", o.measure.inline_spec,
                        "inline measure, family:params (e.g. bernoulli:1, uniform:-1,1)");
        cmd->add_option("--measure-file", o.measure.file_path, "measure JSON file");
    };

    auto* density_cmd = app.add_subcommand("density", "tabulate the evolved density as CSV");
    add_measure_flags(density_cmd);
    density_cmd->add_option("--process", o.process)->required();
    density_cmd->add_option("--t", o.t)->required();
    density_cmd->add_option("--grid", o.grid);
    density_cmd->add_option("--window", o.window);
    density_cmd->add_option("--out", o.out);

    auto* modes_cmd = app.add_subcommand("modes", "modality report as JSON");
    add_measure_flags(modes_cmd);
    modes_cmd->add_option("--process", o.process)->required();
    modes_cmd->add_option("--t", o.t)->required();
    modes_cmd->add_option("--grid", o.grid);
    modes_cmd->add_option("--window", o.window);
    modes_cmd->add_option("--out", o.out);

    auto* ct_cmd = app.add_subcommand("critical-time", "bisect the unimodality transition time");
    add_measure_flags(ct_cmd);
    ct_cmd->add_option("--process", o.process)->required();
    ct_cmd->add_option("--bracket", o.bracket)->required();
    ct_cmd->add_option("--tol", o.tol);
    ct_cmd->add_option("--out", o.out);

    auto* th_cmd = app.add_subcommand("threshold", "verify a sufficient unimodality bound");
    add_measure_flags(th_cmd);
    th_cmd->add_option("--theorem", o.theorem)->required();
    th_cmd->add_option("--n", o.n_times);
    th_cmd->add_option("--eps", o.eps);
    th_cmd->add_option("--out", o.out);

    auto* ce_cmd =
        app.add_subcommand("counterexample", "build a truncation and find a witness at --t");
    ce_cmd->add_option("--process", o.process)->required();
    ce_cmd->add_option("--t", o.t)->required();
    ce_cmd->add_option("--a", o.a);
    ce_cmd->add_option("--n", o.n_atoms);
    ce_cmd->add_option("--delta", o.delta);
    ce_cmd->add_option("--r", o.r);
    ce_cmd->add_option("--f", o.f_rule);
    ce_cmd->add_option("--emit-measure", o.emit_measure);
    ce_cmd->add_option("--out", o.out);

    auto* sw_cmd = app.add_subcommand("sweep", "modality verdicts over a time list as CSV");
    add_measure_flags(sw_cmd);
    sw_cmd->add_option("--process", o.process)->required();
    sw_cmd->add_option("--t-list", o.t_list)->required();
    sw_cmd->add_option("--grid", o.grid);
    sw_cmd->add_option("--window", o.window);
    sw_cmd->add_option("--out", o.out);

    auto* ws_cmd = app.add_subcommand("witness-search",
                                      "search the two-atom scale family for a free witness");
    ws_cmd->add_option("--t-list", o.t_list);
    ws_cmd->add_option("--out", o.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(density_cmd)) return run_density(o);
        if (app.got_subcommand(modes_cmd)) return run_modes(o);
        if (app.got_subcommand(ct_cmd)) return run_critical_time(o);
        if (app.got_subcommand(th_cmd)) return run_threshold(o);
        if (app.got_subcommand(ce_cmd)) return run_counterexample(o);
        if (app.got_subcommand(sw_cmd)) return run_sweep(o);
        if (app.got_subcommand(ws_cmd)) return run_witness_search(o);
    } catch (const NoWitnessError& e) {
        std::cerr << "no witness: " << e.what() << "\n";
        return 4;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_main(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (...) {
        std::cerr << "error: unknown failure\n";
        return 3;
    }
}
