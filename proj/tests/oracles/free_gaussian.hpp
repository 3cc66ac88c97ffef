#pragma once

#include "quadrature_oracle.hpp"

#include <cmath>
#include <complex>

namespace oracle {

using cplx = std::complex<double>;

/// e^{-i t d^2/dx^2} applied to exp(-x^2/2), evaluated as the Fourier integral
/// (2 pi)^{-1/2} int e^{i k x} e^{i t k^2} e^{-k^2/2} dk by adaptive quadrature.
inline cplx free_gaussian_fourier(double x, double t) {
    const GaussKronrod gk(1e-14);
    auto integrand = [&](double k) {
        return std::exp(cplx(-0.5 * k * k, k * x + t * k * k));
    };
    cplx sum = 0.0;
    for (int j = -12; j < 12; ++j) sum += gk.integrate(integrand, j, j + 1.0);
    return sum / std::sqrt(2.0 * M_PI);
}

}  // namespace oracle
