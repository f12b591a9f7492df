// SPDX-License-Identifier: Apache-2.0
#include "wxvis/mie.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "wxvis/errors.hpp"

namespace wxvis {

std::size_t mie_series_length(double size_parameter) {
    return static_cast<std::size_t>(
        std::ceil(size_parameter + 4.0 * std::cbrt(size_parameter) + 2.0));
}

double mie_extinction_efficiency(double x, double n_real) {
    if (!(x > 0.0)) throw std::invalid_argument("mie: size parameter must be positive");
    if (!(n_real > 1.0)) throw std::invalid_argument("mie: refractive index must exceed 1");

    const std::size_t n_stop = mie_series_length(x);
    const double mx = n_real * x;

    // Logarithmic derivative D_n(mx) by downward recurrence, seeded with 0
    // well past the last term that is kept.
    const std::size_t n_start = std::max(n_stop, static_cast<std::size_t>(std::ceil(mx))) + 15;
    std::vector<double> log_deriv(n_start + 1, 0.0);
    for (std::size_t n = n_start; n >= 1; --n) {
        const double k = static_cast<double>(n) / mx;
        log_deriv[n - 1] = k - 1.0 / (log_deriv[n] + k);
    }

    // Riccati-Bessel psi_n(x) and chi_n(x) by upward recurrence, starting
    // from the n = -1 and n = 0 values.
    double psi_prev = std::cos(x); // psi_{-1}
    double psi_curr = std::sin(x); // psi_0
    double chi_prev = -std::sin(x);
    double chi_curr = std::cos(x);

    double q_sum = 0.0;
    for (std::size_t n = 1; n <= n_stop; ++n) {
        const double dn = static_cast<double>(n);
        const double psi = (2.0 * dn - 1.0) / x * psi_curr - psi_prev;
        const double chi = (2.0 * dn - 1.0) / x * chi_curr - chi_prev;

        // a_n and b_n for a real index have a common structure
        //   ((D_n/s + n/x) psi_n - psi_{n-1}) / ((D_n/s + n/x) xi_n - xi_{n-1})
        // with s = m for a_n and s = 1/m for b_n, xi_n = psi_n - i chi_n.
        // Only the real part of a_n + b_n is needed.
        for (const double scale : {n_real, 1.0 / n_real}) {
            const double g = log_deriv[n] / scale + dn / x;
            const double num = g * psi - psi_curr;          // real
            const double den_re = num;                      // g*psi_n - psi_{n-1}
            const double den_im = -(g * chi - chi_curr);    // -(g*chi_n - chi_{n-1})
            // Re(num / (den_re + i*den_im))
            q_sum += (2.0 * dn + 1.0) * num * den_re / (den_re * den_re + den_im * den_im);
        }

        psi_prev = psi_curr;
        psi_curr = psi;
        chi_prev = chi_curr;
        chi_curr = chi;
    }

    const double q = 2.0 / (x * x) * q_sum;
    if (!std::isfinite(q))
        throw NumericError("mie: series produced a non-finite efficiency at x=" +
                           std::to_string(x));
    return q;
}

} // namespace wxvis
