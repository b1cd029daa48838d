#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "cusptrace/quadrature.hpp"
#include "cusptrace/rep_theory.hpp"

namespace cusptrace {

// Small-time model of a heat trace:
//   phi(t) = sum_k a_k t^{(k-3)/2} + sum_k b_k t^{(k-1)/2} log t + H(t),
// with |H(t)| <= bound_constant * t^{(order_m+1)/2} on (0, t0_max].
// The bound is sampled on a log grid at construction.
struct SmallTimeExpansion {
    std::map<int, double> a;  // k -> coefficient of t^{(k-3)/2}
    std::map<int, double> b;  // k -> coefficient of t^{(k-1)/2} log t
    std::function<double(double)> remainder;
    double bound_constant = 0.0;
    int order_m = 0;
    double t0_max = 2.0;

    SmallTimeExpansion() = default;
    SmallTimeExpansion(std::map<int, double> a_coeffs, std::map<int, double> b_coeffs,
                       std::function<double(double)> H, double C_H, int m, double t_max);

    // series + remainder at t
    double eval(double t) const;
};

struct DiscreteSpectrum {
    // (eigenvalue, multiplicity), eigenvalues > 0
    std::vector<std::pair<double, std::int64_t>> eigenvalues;
    double declared_gap = 0.0;  // optional; > 0 enforces lambda >= gap

    void validate() const;
    double heat_trace(double t) const;
};

// How the derivative at s = 0 of (1/Gamma(s)) int_0^t0 phi(t) t^s dt/t is
// assembled from the pure-power coefficients.
//
//   continued      — the actual analytic continuation:
//                      t^beta       -> t0^beta / beta      (beta != 0)
//                      t^0          -> gamma_E + log t0
//                    This is the variant under which the regularized
//                    determinant is t0-independent and reproduces
//                    -sum mult log lambda on finite spectra.
//   lemma_printed  — the textbook-style bookkeeping formula
//                      sum_{k>=1} 2 a_k t0^{-k/2} / k  -  gamma_E a_0,
//                    which flips the sign of the negative-power terms and
//                    drops the a_0 log t0 term. Positive powers are folded
//                    into the remainder integral in both variants, and the
//                    log-term continuation is shared.
enum class MellinVariant { continued, lemma_printed };

double mellin_zero_derivative(const SmallTimeExpansion& exp, double t0,
                              MellinVariant variant = MellinVariant::continued,
                              const QuadOptions& opt = {});

// sum mult * E1(lambda t0) = int_t0^inf Tr e^{-t Delta} dt/t.
double large_time_integral(const DiscreteSpectrum& spec, double t0);

// Derivative of the heat-trace zeta at 0; independent of t0 when the
// expansion and the spectrum describe the same trace.
double regularized_log_det(const SmallTimeExpansion& exp, const DiscreteSpectrum& spec,
                           double t0, double consistency_rel_tol = 1e-6,
                           const QuadOptions& opt = {});

struct TorsionLedger {
    std::map<int, double> log_det;  // degree -> log det_R
    double log_T_R = 0.0;           // (1/2)(-3 log det_0 + log det_1)
    double t0 = 1.0;
};

TorsionLedger analytic_torsion(const std::map<int, double>& log_dets, double t0 = 1.0);

double l2_log_torsion(double volume, const RepWeights& w);

struct SmallEigenvalueTail {
    bool condition_ok = true;
    double tail = 0.0;
};

// Checks mu(]0,lambda]) <= C lambda^alpha at every eigenvalue <= lambda0 and
// reports the large-time tail sum mult * E1(lambda t0).
SmallEigenvalueTail small_eigenvalue_tail(const DiscreteSpectrum& measure, double C,
                                          double alpha, double lambda0, double t0);

struct HomologySummary {
    struct Degree {
        std::int64_t torsion_order = 1;
        double free_covolume = 1.0;
    };
    std::map<int, Degree> degrees;
};

// log tau = sum_p (-1)^p (log |H_p tors| - log vol H_p free).
double reidemeister_from_homology(const HomologySummary& h);

// (log 2 / 2) dim(V) chi(boundary); zero for torus boundaries.
double boundary_correction(std::int64_t dim_v, std::int64_t euler_boundary);

}  // namespace cusptrace
