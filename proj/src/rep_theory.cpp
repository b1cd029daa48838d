#include "cusptrace/rep_theory.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "cusptrace/errors.hpp"
#include "cusptrace/special.hpp"

namespace cusptrace {

namespace {

void check(const RepWeights& w) {
    if (w.n1 < 0 || w.n2 < 0) throw AdmissionError("rep weights must be nonnegative");
}

bool valid_weight(const RepWeights& w, int m) {
    const int span = w.n1 + w.n2;
    return std::abs(m) <= span && ((m - span) % 2 == 0);
}

}  // namespace

std::int64_t dimension(const RepWeights& w) {
    check(w);
    return static_cast<std::int64_t>(w.n1 + 1) * (w.n2 + 1);
}

std::int64_t casimir(const RepWeights& w) {
    check(w);
    const std::int64_t s = w.n1 + w.n2 + 2;
    const std::int64_t d = w.n1 - w.n2;
    return s * s - 4 + d * d;
}

WeightSpectrum weight_multiplicities(const RepWeights& w) {
    check(w);
    WeightSpectrum spec;
    spec.parity = ((w.n1 - w.n2) % 2 + 2) % 2;
    for (int l = -w.n1; l <= w.n1; l += 2)
        for (int k = -w.n2; k <= w.n2; k += 2) ++spec.d[l + k];
    return spec;
}

double form_eigenvalue(const RepWeights& w, int m, int eps, double u) {
    check(w);
    if (!valid_weight(w, m)) throw AdmissionError("invalid M-weight for this representation");
    if (eps != -2 && eps != 0 && eps != 2) throw AdmissionError("eps must be one of {-2,0,2}");
    const double s = w.n1 + w.n2 + 2;
    const double d = w.n1 - w.n2;
    const double me = m + eps;
    return u * u - me * me + s * s + d * d;
}

double spectral_gap(const RepWeights& w, int p) {
    check(w);
    if (w.n1 == w.n2) throw AdmissionError("not strongly acyclic (n1 == n2)");
    if (p < 0 || p > 3) throw AdmissionError("degree must be 0..3");
    const bool middle = (p == 1 || p == 2);  // Hodge duality: 3 <-> 0, 2 <-> 1
    double gap = std::numeric_limits<double>::infinity();
    for (int m = -(w.n1 + w.n2); m <= w.n1 + w.n2; m += 2) {
        if (middle) {
            for (int eps : {-2, 0, 2}) gap = std::min(gap, form_eigenvalue(w, m, eps, 0.0));
        } else {
            gap = std::min(gap, form_eigenvalue(w, m, 0, 0.0));
        }
    }
    return gap;
}

double l2_torsion_coefficient(const RepWeights& w) {
    check(w);
    const std::int64_t s = w.n1 + w.n2 + 2;
    const std::int64_t d = std::llabs(static_cast<long long>(w.n1) - w.n2);
    const std::int64_t numerator = s * s * s - d * d * d + 3 * d * s * (s - d);
    return -static_cast<double>(numerator) / (48.0 * kPi);
}

}  // namespace cusptrace
