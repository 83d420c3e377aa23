#pragma once

#include "ulab/kernels.hpp"

#include <vector>

namespace ulab {

/// Sampled density curve {(x_i, p(x_i))} with strictly increasing x.
struct DensityProfile {
    std::vector<double> x;
    std::vector<double> p;
    ProcessKind kind = ProcessKind::FreeSemicircle;
    double t = 0.0;
    int grid_size = 0;
};

} // namespace ulab
