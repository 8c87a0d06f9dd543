#pragma once

#include <span>

namespace ccinterp {

/// Largest Boys order the integral code asks for: 4 * l_max + 2.
inline constexpr int kMaxBoysOrder = 10;

/// F_m(z) = int_0^1 u^{2m} exp(-z u^2) du, absolute error below 1e-13.
double boys(int m, double z);

/// Fills out[0..m_max] with F_0(z)..F_{m_max}(z).
void boys_all(int m_max, double z, std::span<double> out);

}  // namespace ccinterp
