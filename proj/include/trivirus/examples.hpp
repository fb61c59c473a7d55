#pragma once

#include "trivirus/model.hpp"

namespace trivirus {

/// Unit-healing 4-node tri-virus systems built from the three base layers
/// B^1 (weighted 4-cycle), B^2 and B^3 with four entry offsets. Examples 1-4
/// select the offsets (b2_12, b3_22, b3_31, b3_13):
///   1: (-0.1, -0.1, 0.1, 0), 2: (-0.1, -0.1, 0.15, 0), 3: (0, 0, 0, 0.05),
///   4: (0, 0, 0, -0.1).
struct ExampleOffsets {
    double b2_12 = 0.0;
    double b3_22 = 0.0;
    double b3_31 = 0.0;
    double b3_13 = 0.0;
};

ExampleOffsets example_offsets(int example);

MultiVirusSystem example_system(const ExampleOffsets& offsets);

/// Throws ParameterOutOfRange for an example number outside 1..4.
MultiVirusSystem example_system(int example);

} // namespace trivirus
