#include "ulab/measure_io.hpp"

#include "ulab/errors.hpp"

#include <json.hpp>

#include <sstream>

namespace ulab {
namespace {

using nlohmann::json;

double get_number(const json& j, const char* field) {
    if (!j.contains(field)) {
        throw ValidationError(std::string(field) + ": missing required field");
    }
    if (!j[field].is_number()) {
        throw ValidationError(std::string(field) + ": expected a number");
    }
    return j[field].get<double>();
}

std::vector<double> get_array(const json& j, const char* field) {
    if (!j.contains(field)) {
        throw ValidationError(std::string(field) + ": missing required field");
    }
    const auto& arr = j[field];
    if (!arr.is_array()) {
        throw ValidationError(std::string(field) + ": expected an array of numbers");
    }
    std::vector<double> out;
    out.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) {
            std::ostringstream os;
            os << field << "[" << i << "]: expected a number";
            throw ValidationError(os.str());
        }
        out.push_back(arr[i].get<double>());
    }
    return out;
}

} // namespace

ProbabilityMeasure parse_measure(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("measure JSON parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
        throw ValidationError("type: missing or non-string measure type");
    }
    const std::string type = j["type"].get<std::string>();
    if (type == "atomic") {
        return AtomicMeasure(get_array(j, "atoms"), get_array(j, "weights"));
    }
    if (type == "density") {
        return GriddedDensityMeasure(get_array(j, "grid"), get_array(j, "values"));
    }
    if (type == "bernoulli") return NamedMeasure::bernoulli(get_number(j, "a"));
    if (type == "point_mass") return NamedMeasure::point_mass(get_number(j, "a"));
    if (type == "uniform") {
        return NamedMeasure::uniform(get_number(j, "l"), get_number(j, "r"));
    }
    if (type == "triangle") {
        return NamedMeasure::triangle(get_number(j, "l"), get_number(j, "m"), get_number(j, "r"));
    }
    if (type == "semicircle") return NamedMeasure::semicircle(get_number(j, "t"));
    throw ValidationError("type: unknown measure type '" + type + "'");
}

std::string measure_to_json(const ProbabilityMeasure& mu) {
    json j;
    if (const auto* a = mu.as_atomic()) {
        j["type"] = "atomic";
        j["atoms"] = a->atoms();
        j["weights"] = a->weights();
    } else if (const auto* g = mu.as_gridded()) {
        j["type"] = "density";
        j["grid"] = g->grid();
        j["values"] = g->values();
    } else {
        const auto* n = mu.as_named();
        const auto& p = n->params();
        switch (n->family()) {
        case MeasureFamily::Bernoulli:
            j["type"] = "bernoulli";
            j["a"] = p[0];
            break;
        case MeasureFamily::PointMass:
            j["type"] = "point_mass";
            j["a"] = p[0];
            break;
        case MeasureFamily::Uniform:
            j["type"] = "uniform";
            j["l"] = p[0];
            j["r"] = p[1];
            break;
        case MeasureFamily::Triangle:
            j["type"] = "triangle";
            j["l"] = p[0];
            j["m"] = p[1];
            j["r"] = p[2];
            break;
        case MeasureFamily::Semicircle:
            j["type"] = "semicircle";
            j["t"] = p[0];
            break;
        }
    }
    return j.dump();
}

} // namespace ulab
