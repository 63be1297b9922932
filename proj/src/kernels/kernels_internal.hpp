#pragma once

#include "kschemo/model.hpp"

namespace kschemo::kernels {

// phi at a face mean density; none of the families depends on v.
template <SensitivityKind Phi>
inline double sensitivity_value(double u) {
    if constexpr (Phi == SensitivityKind::linear) {
        return u;
    } else if constexpr (Phi == SensitivityKind::volume_filling) {
        return u * (1.0 - u);
    } else {
        return 1.0;
    }
}

// d phi / d u at a face mean density: the characteristic speed factor of the transport.
template <SensitivityKind Phi>
inline double sensitivity_slope(double u) {
    if constexpr (Phi == SensitivityKind::linear) {
        return 1.0;
    } else if constexpr (Phi == SensitivityKind::volume_filling) {
        return 1.0 - 2.0 * u;
    } else {
        return 0.0;
    }
}

}  // namespace kschemo::kernels
