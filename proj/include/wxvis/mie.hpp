// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

namespace wxvis {

/// Number of partial waves kept for size parameter x, using the standard
/// ceil(x + 4 x^(1/3) + 2) truncation.
std::size_t mie_series_length(double size_parameter);

/// Extinction efficiency Q of a homogeneous sphere with a purely real
/// refractive index, from the Mie partial-wave series:
///
///   Q = (2 / x^2) * sum_n (2n + 1) Re(a_n + b_n)
///
/// The scattering coefficients a_n, b_n are evaluated with the logarithmic
/// derivative of the interior Riccati-Bessel function by downward
/// recurrence, and the exterior Riccati-Bessel functions by upward
/// recurrence.
///
/// `size_parameter` is x = 2*pi*r/lambda (> 0), `refractive_index_real`
/// the real part n' of the refractive index (> 1). Throws
/// std::invalid_argument on domain violations and NumericError if the sum
/// degenerates (non-finite), which the truncation rule should prevent.
double mie_extinction_efficiency(double size_parameter, double refractive_index_real);

} // namespace wxvis
