#include "ccinterp/boys.hpp"

#include <cmath>
#include <numbers>

#include "ccinterp/errors.hpp"

namespace ccinterp {

namespace {

// Below the switch the confluent series
//   F_m(z) = e^{-z} sum_k (2z)^k / ((2m+1)(2m+3)...(2m+2k+1))
// has only positive terms; above it erf(sqrt z) plus upward recursion is
// accurate because e^{-z} is negligible against F_m.
constexpr double kSwitch = 25.0;

double series(int m, double z) {
  double term = 1.0 / (2 * m + 1);
  double sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= 2.0 * z / (2 * m + 2 * k + 1);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum * std::exp(-z);
}

}  // namespace

void boys_all(int m_max, double z, std::span<double> out) {
  if (m_max < 0 || out.size() < static_cast<std::size_t>(m_max + 1)) {
    throw InvalidArgument("boys_all: output span too small");
  }
  if (z < 0.0) throw InvalidArgument("boys: negative argument");
  if (z < kSwitch) {
    const double ez = std::exp(-z);
    out[m_max] = series(m_max, z);
    for (int m = m_max - 1; m >= 0; --m) {
      out[m] = (2.0 * z * out[m + 1] + ez) / (2 * m + 1);
    }
  } else {
    const double ez = std::exp(-z);
    const double sz = std::sqrt(z);
    out[0] = 0.5 * std::sqrt(std::numbers::pi) * std::erf(sz) / sz;
    for (int m = 0; m < m_max; ++m) {
      out[m + 1] = ((2 * m + 1) * out[m] - ez) / (2.0 * z);
    }
  }
}

double boys(int m, double z) {
  double buf[64];
  if (m < 0 || m >= 64) throw InvalidArgument("boys: order out of range");
  boys_all(m, z, std::span<double>(buf, static_cast<std::size_t>(m + 1)));
  return buf[m];
}

}  // namespace ccinterp
