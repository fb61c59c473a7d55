#include "trivirus/examples.hpp"

#include <string>

namespace trivirus {

ExampleOffsets example_offsets(int example) {
    switch (example) {
    case 1: return {-0.1, -0.1, 0.1, 0.0};
    case 2: return {-0.1, -0.1, 0.15, 0.0};
    case 3: return {0.0, 0.0, 0.0, 0.05};
    case 4: return {0.0, 0.0, 0.0, -0.1};
    default:
        throw Error(ErrorCode::ParameterOutOfRange, "example must be 1, 2, 3 or 4, got " + std::to_string(example));
    }
}

MultiVirusSystem example_system(const ExampleOffsets& o) {
    Matrix b1(4, 4);
    b1 << 0, 0, 0, 1.5,
          1.5, 0, 0, 0,
          0, 1.5, 0, 0,
          0, 0, 1.5, 0;
    Matrix b2(4, 4);
    b2 << 0, 1.5 + o.b2_12, 0, 0,
          0, 0, 1.5, 0,
          0, 0, 0, 1.5,
          1.5, 0, 0, 0;
    Matrix b3(4, 4);
    b3 << 1, 0, 0.5 + o.b3_13, 0,
          0, 1 + o.b3_22, 0.5, 0,
          0, 0.5, 0, 1,
          0.3 + o.b3_31, 0, 1.2, 0;
    const Vector ones = Vector::Ones(4);
    return build_system({ones, ones, ones}, {b1, b2, b3});
}

MultiVirusSystem example_system(int example) { return example_system(example_offsets(example)); }

} // namespace trivirus
