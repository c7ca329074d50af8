#pragma once

#include <vector>

#include "dfkit/measure.hpp"

namespace fixtures {

inline dfkit::Measure two_atom() {
    return dfkit::Measure::from_atoms({{1.0, 0.4}, {2.0, 0.5}});
}

inline dfkit::Measure three_atom() {
    return dfkit::Measure::from_atoms({{0.5, 0.2}, {1.5, 0.3}, {3.0, 0.4}});
}

inline dfkit::Measure lognormal() {
    return dfkit::Measure({}, dfkit::LognormalDensity{1.0, 0.2, 1.0, 1.0});
}

// One atom inside the body of a scaled lognormal: exercises mixed
// atomic/absolutely-continuous handling.
inline dfkit::Measure mixture() {
    return dfkit::Measure({{1.5, 0.25}}, dfkit::LognormalDensity{1.0, 0.3, 1.0, 0.7});
}

inline std::vector<dfkit::Measure> all() {
    return {two_atom(), three_atom(), lognormal(), mixture()};
}

}  // namespace fixtures
