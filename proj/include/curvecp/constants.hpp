#pragma once

namespace curvecp {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double hbar_c = 0.1973269804;      // eV um
inline constexpr double k_boltzmann = 8.617333262e-5; // eV / K

} // namespace curvecp
