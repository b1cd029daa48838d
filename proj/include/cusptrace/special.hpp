#pragma once

namespace cusptrace {

// Euler-Mascheroni constant; note Gamma'(1) = -kEulerGamma.
inline constexpr double kEulerGamma = 0.57721566490153286;

inline constexpr double kPi = 3.14159265358979323846;

// Exponential integral E1(x) = int_x^inf e^-t / t dt, x > 0.
// Power series for x <= 1, modified-Lentz continued fraction beyond.
double exp_int_e1(double x);

}  // namespace cusptrace
