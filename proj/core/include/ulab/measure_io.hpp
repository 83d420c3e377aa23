#pragma once

#include "ulab/measure.hpp"

#include <string>

namespace ulab {

/// Parse a measure from its JSON document. Accepted forms:
///   {"type":"atomic","atoms":[...],"weights":[...]}
///   {"type":"density","grid":[...],"values":[...]}
///   {"type":"bernoulli","a":x} | {"type":"point_mass","a":x}
///   {"type":"uniform","l":x,"r":x} | {"type":"triangle","l":x,"m":x,"r":x}
///   {"type":"semicircle","t":x}
/// Throws ValidationError with the offending field path.
ProbabilityMeasure parse_measure(const std::string& json_text);

/// Serialize in the same schema. Round-trips bit-exactly through
/// parse_measure for atomic and named measures.
std::string measure_to_json(const ProbabilityMeasure& mu);

} // namespace ulab
