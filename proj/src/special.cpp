#include "cusptrace/special.hpp"

#include <cmath>
#include <limits>

#include "cusptrace/errors.hpp"

namespace cusptrace {

double exp_int_e1(double x) {
    if (!(x > 0.0)) throw NumericalError("exp_int_e1 requires x > 0");
    if (x <= 1.0) {
        // E1(x) = -gamma - log x + sum_{k>=1} (-1)^{k+1} x^k / (k * k!)
        double sum = 0.0;
        double term = 1.0;  // x^k / k!
        for (int k = 1; k <= 40; ++k) {
            term *= x / k;
            const double add = ((k & 1) ? term : -term) / k;
            sum += add;
            if (std::abs(add) < 1e-18 * std::abs(sum)) break;
        }
        return -kEulerGamma - std::log(x) + sum;
    }
    if (x > 700.0) return 0.0;  // below double underflow after e^-x
    // E1(x) = e^-x / (x + 1 - 1/(x + 3 - 4/(x + 5 - 9/(...))))
    const double tiny = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int k = 1; k <= 200; ++k) {
        const double a = -static_cast<double>(k) * k;
        b += 2.0;
        d = a * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + a / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x) * h;
}

}  // namespace cusptrace
