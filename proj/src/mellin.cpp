#include "cusptrace/mellin.hpp"

#include <cmath>

#include "cusptrace/errors.hpp"
#include "cusptrace/special.hpp"

namespace cusptrace {

namespace {

double series_eval(const std::map<int, double>& a, const std::map<int, double>& b, double t) {
    double v = 0.0;
    const double lt = std::log(t);
    for (const auto& [k, c] : a) v += c * std::pow(t, 0.5 * (k - 3));
    for (const auto& [k, c] : b) v += c * std::pow(t, 0.5 * (k - 1)) * lt;
    return v;
}

// d/ds (1/Gamma(s)) int_0^t0 t^{s+beta-1} log t dt at s=0, beta != 0:
//   t0^beta (beta log t0 - 1) / beta^2.
double log_term_value(double beta, double t0) {
    return std::pow(t0, beta) * (beta * std::log(t0) - 1.0) / (beta * beta);
}

}  // namespace

SmallTimeExpansion::SmallTimeExpansion(std::map<int, double> a_coeffs,
                                       std::map<int, double> b_coeffs,
                                       std::function<double(double)> H, double C_H, int m,
                                       double t_max)
    : a(std::move(a_coeffs)),
      b(std::move(b_coeffs)),
      remainder(std::move(H)),
      bound_constant(C_H),
      order_m(m),
      t0_max(t_max) {
    if (!(t0_max > 0.0)) throw AdmissionError("expansion needs t0_max > 0");
    if (!remainder) remainder = [](double) { return 0.0; };
    // 1e-12 slack: remainders are typically differences of O(1) quantities,
    // so their floating-point evaluation bottoms out near the epsilon floor
    const int grid = 64;
    for (int i = 0; i < grid; ++i) {
        const double t = t0_max * std::pow(1e-6, static_cast<double>(grid - 1 - i) / (grid - 1));
        const double bound = bound_constant * std::pow(t, 0.5 * (order_m + 1));
        if (std::abs(remainder(t)) > bound + 1e-12) {
            throw AdmissionError("expansion remainder violates its declared bound at t = " +
                                 std::to_string(t));
        }
    }
}

double SmallTimeExpansion::eval(double t) const {
    return series_eval(a, b, t) + (remainder ? remainder(t) : 0.0);
}

void DiscreteSpectrum::validate() const {
    for (const auto& [lambda, mult] : eigenvalues) {
        if (!(lambda > 0.0)) throw NumericalError("no spectral gap (eigenvalue <= 0)");
        if (mult < 1) throw AdmissionError("eigenvalue multiplicities must be >= 1");
        if (declared_gap > 0.0 && lambda < declared_gap)
            throw AdmissionError("eigenvalue below declared spectral gap");
    }
}

double DiscreteSpectrum::heat_trace(double t) const {
    double v = 0.0;
    for (const auto& [lambda, mult] : eigenvalues)
        v += static_cast<double>(mult) * std::exp(-lambda * t);
    return v;
}

double mellin_zero_derivative(const SmallTimeExpansion& exp, double t0, MellinVariant variant,
                              const QuadOptions& opt) {
    if (!(t0 > 0.0)) throw AdmissionError("t0 must be positive");
    if (t0 > exp.t0_max * (1.0 + 1e-12))
        throw AdmissionError("t0 exceeds the declared domain of the remainder bound");

    double value = 0.0;
    for (const auto& [k, c] : exp.a) {
        if (c == 0.0) continue;
        const double beta = 0.5 * (k - 3);
        if (beta == 0.0) {
            value += (variant == MellinVariant::continued)
                         ? c * (kEulerGamma + std::log(t0))
                         : -c * kEulerGamma;
        } else if (beta > 0.0) {
            value += c * std::pow(t0, beta) / beta;  // plain dt/t integral; both variants
        } else {
            const double cont = c * std::pow(t0, beta) / beta;
            value += (variant == MellinVariant::continued) ? cont : -cont;
        }
    }
    for (const auto& [k, c] : exp.b) {
        if (c == 0.0) continue;
        const double beta = 0.5 * (k - 1);
        if (beta == 0.0)
            throw NumericalError("log term at t^0: zeta function has a pole at s = 0");
        value += c * log_term_value(beta, t0);
    }
    // int_0^t0 H dt/t, softened by t = tau^2
    const auto& H = exp.remainder;
    QuadResult q = integrate([&H](double tau) { return 2.0 * H(tau * tau) / tau; }, 0.0,
                             std::sqrt(t0), opt);
    require_quadrature(q, 1e-6, "remainder integral of the small-time expansion");
    return value + q.value;
}

double large_time_integral(const DiscreteSpectrum& spec, double t0) {
    if (!(t0 > 0.0)) throw AdmissionError("t0 must be positive");
    spec.validate();
    double v = 0.0;
    for (const auto& [lambda, mult] : spec.eigenvalues)
        v += static_cast<double>(mult) * exp_int_e1(lambda * t0);
    return v;
}

double regularized_log_det(const SmallTimeExpansion& exp, const DiscreteSpectrum& spec,
                           double t0, double consistency_rel_tol, const QuadOptions& opt) {
    spec.validate();
    const double lhs = exp.eval(t0);
    const double rhs = spec.heat_trace(t0);
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-12});
    if (std::abs(lhs - rhs) > consistency_rel_tol * scale) {
        throw NumericalError("inconsistent trace model at t0 = " + std::to_string(t0) +
                             " (expansion " + std::to_string(lhs) + ", heat sum " +
                             std::to_string(rhs) + ")");
    }
    return mellin_zero_derivative(exp, t0, MellinVariant::continued, opt) +
           large_time_integral(spec, t0);
}

TorsionLedger analytic_torsion(const std::map<int, double>& log_dets, double t0) {
    if (!log_dets.count(0) || !log_dets.count(1))
        throw AdmissionError("analytic torsion needs degrees 0 and 1");
    TorsionLedger ledger;
    ledger.log_det = log_dets;
    ledger.t0 = t0;
    ledger.log_T_R = 0.5 * (-3.0 * log_dets.at(0) + log_dets.at(1));
    return ledger;
}

double l2_log_torsion(double volume, const RepWeights& w) {
    if (!(volume > 0.0)) throw AdmissionError("volume must be positive");
    return volume * l2_torsion_coefficient(w);
}

SmallEigenvalueTail small_eigenvalue_tail(const DiscreteSpectrum& measure, double C,
                                          double alpha, double lambda0, double t0) {
    if (!(C > 0.0 && alpha > 0.0 && lambda0 > 0.0 && t0 > 0.0))
        throw AdmissionError("small_eigenvalue_tail parameters must be positive");
    auto sorted = measure.eigenvalues;
    std::sort(sorted.begin(), sorted.end());
    SmallEigenvalueTail out;
    std::int64_t cumulative = 0;
    for (const auto& [lambda, mult] : sorted) {
        if (!(lambda > 0.0)) throw AdmissionError("measure must be supported on (0, inf)");
        cumulative += mult;
        if (lambda <= lambda0 &&
            static_cast<double>(cumulative) > C * std::pow(lambda, alpha)) {
            out.condition_ok = false;
        }
        out.tail += static_cast<double>(mult) * exp_int_e1(lambda * t0);
    }
    return out;
}

double reidemeister_from_homology(const HomologySummary& h) {
    double log_tau = 0.0;
    for (const auto& [p, deg] : h.degrees) {
        if (deg.torsion_order < 1) throw AdmissionError("torsion order must be >= 1");
        if (!(deg.free_covolume > 0.0)) throw AdmissionError("free covolume must be > 0");
        const double sign = (p % 2 == 0) ? 1.0 : -1.0;
        log_tau += sign * (std::log(static_cast<double>(deg.torsion_order)) -
                           std::log(deg.free_covolume));
    }
    return log_tau;
}

double boundary_correction(std::int64_t dim_v, std::int64_t euler_boundary) {
    return 0.5 * std::log(2.0) * static_cast<double>(dim_v) *
           static_cast<double>(euler_boundary);
}

}  // namespace cusptrace
