#include "cusptrace/hyperbolic.hpp"

#include <cmath>

#include "cusptrace/errors.hpp"

namespace cusptrace {

double ell(double r) {
    if (r < 0.0) throw AdmissionError("ell requires r >= 0");
    return 4.0 * std::asinh(0.5 * r);
}

double parabolic_distance(double n_len, double y) {
    if (!(y > 0.0)) throw AdmissionError("parabolic_distance requires y > 0");
    if (n_len < 0.0) throw AdmissionError("parabolic_distance requires |n| >= 0");
    if (n_len == 0.0) return 0.0;
    const double w = n_len * n_len / (n_len * n_len + 4.0 * y * y);
    const double u = std::sqrt(w);
    // 1 - u = (1 - w) / (1 + u), evaluated without cancellation
    const double one_minus_u = (4.0 * y * y / (n_len * n_len + 4.0 * y * y)) / (1.0 + u);
    return 2.0 * (std::log1p(u) - std::log(one_minus_u));
}

double log_lower_bound_constant(int grid_points) {
    const double lo = 1e-3, hi = 1e6;
    double inf = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_points; ++i) {
        const double t = static_cast<double>(i) / (grid_points - 1);
        const double r = lo * std::pow(hi / lo, t);
        const double ratio = ell(r) / std::log1p(r);
        if (ratio < inf) inf = ratio;
    }
    return inf;
}

double cusp_boundary_area(const CuspGeometry& c, double Yj) {
    if (Yj < 1.0) throw AdmissionError("truncation height below normalization (Y >= 1)");
    return c.lattice.covolume / (Yj * Yj);
}

double cusp_volume_above(const CuspGeometry& c, double Yj) {
    if (Yj < 1.0) throw AdmissionError("truncation height below normalization (Y >= 1)");
    return c.lattice.covolume / (2.0 * Yj * Yj);
}

}  // namespace cusptrace
