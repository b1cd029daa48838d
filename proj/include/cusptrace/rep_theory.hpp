#pragma once

#include <cstdint>
#include <map>

namespace cusptrace {

// Highest weights (n1, n2) of V_{n1,n2} = Sym^{n1}(C^2) (x) Sym^{n2}(conj C^2).
struct RepWeights {
    int n1 = 0;
    int n2 = 0;
};

// M-weight multiplicities d_m; m runs over -(n1+n2) .. n1+n2 in steps of 2.
struct WeightSpectrum {
    std::map<int, int> d;
    int parity = 0;  // (n1 - n2) mod 2
};

std::int64_t dimension(const RepWeights& w);  // (n1+1)(n2+1)

std::int64_t casimir(const RepWeights& w);  // (n1+n2+2)^2 - 4 + (n1-n2)^2

WeightSpectrum weight_multiplicities(const RepWeights& w);

// Laplace eigenvalue u^2 - (m+eps)^2 + (n1+n2+2)^2 + (n1-n2)^2 on the
// (m, eps) piece; sections use eps = 0.
double form_eigenvalue(const RepWeights& w, int m, int eps, double u);

// Smallest eigenvalue over valid (m, eps) at u = 0 for the given degree;
// degrees 2 and 3 reduce to 1 and 0 by Hodge duality. Requires n1 != n2.
double spectral_gap(const RepWeights& w, int p);

// t^(2)(V) = -((n1+n2+2)^3 - |n1-n2|^3
//             + 3|n1-n2|(n1+n2+2)(n1+n2+2-|n1-n2|)) / (48 pi),
// assembled in integer arithmetic and divided once at the end.
double l2_torsion_coefficient(const RepWeights& w);

}  // namespace cusptrace
