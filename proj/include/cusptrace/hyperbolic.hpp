#pragma once

#include <vector>

#include "cusptrace/lattice.hpp"

namespace cusptrace {

// Translation length of a unipotent displacement as a function of |n|/y.
// The closed form 2(log(1+u) - log(1-u)) with u = (1+(2/r)^2)^{-1/2}
// collapses to 4 asinh(r/2), which is cancellation-free on all of [0, inf).
double ell(double r);

// Hyperbolic distance d(x, nx) for a parabolic translation of length n_len at
// height y; equals ell(n_len / y). Evaluated through the explicit distance
// formula rather than ell() so the two routes stay independent.
double parabolic_distance(double n_len, double y);

// inf over a log-uniform grid on [1e-3, 1e6] of ell(r) / log(1+r).
double log_lower_bound_constant(int grid_points = 4096);

struct CuspGeometry {
    ReducedLattice lattice;
    double height_normalization = 1.0;
};

struct TruncationHeights {
    std::vector<double> Y;  // one per cusp, each >= 1
};

double cusp_boundary_area(const CuspGeometry& c, double Yj);
double cusp_volume_above(const CuspGeometry& c, double Yj);

}  // namespace cusptrace
