#include "rydberg/constants.hpp"

namespace rydberg {

const PhysicalConstants& physical_constants() {
    static const PhysicalConstants c{};
    return c;
}

}  // namespace rydberg
