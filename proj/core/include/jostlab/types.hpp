#pragma once

#include <complex>
#include <vector>

namespace jostlab {

using cplx = std::complex<double>;
using ComplexArray = std::vector<cplx>;
using RealArray = std::vector<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Which end of the line a Jost solution is normalized at:
/// plus ~ e^{+i lambda x} as x -> +inf, minus ~ e^{-i lambda x} as x -> -inf.
enum class Direction { plus, minus };

}  // namespace jostlab
