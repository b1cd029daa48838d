#include <cmath>
#include <random>

#include <doctest.h>

#include "cusptrace/errors.hpp"
#include "cusptrace/mellin.hpp"
#include "cusptrace/special.hpp"

using namespace cusptrace;

namespace {

// reference for d/ds (1/Gamma(s) int_0^t0 t^{s+beta-1} [log t] dt)|_{s=0}:
// central difference of G(s)/Gamma(s) with the closed-form one-term Mellin
// transform, Richardson-extrapolated. Independent of the engine's formulas.
double continuation_oracle(double beta, double t0, bool log_term) {
    auto F = [&](double s) {
        double g;
        if (!log_term) {
            g = std::pow(t0, s + beta) / (s + beta);
        } else {
            g = std::pow(t0, s + beta) * ((s + beta) * std::log(t0) - 1.0) /
                ((s + beta) * (s + beta));
        }
        return g / std::tgamma(s);
    };
    auto central = [&](double h) { return (F(h) - F(-h)) / (2.0 * h); };
    const double d1 = central(1e-4), d2 = central(5e-5);
    return (4.0 * d2 - d1) / 3.0;  // Richardson in h^2
}

SmallTimeExpansion pure_power(int k_dea, double coeff, double t_max = 4.0) {
    std::map<int, double> a{{k_dea, coeff}};
    return SmallTimeExpansion(std::move(a), {}, nullptr, 0.0, 0, t_max);
}

// exact Taylor expansion of sum_i mult_i e^{-lambda_i t} through t^J, with
// the true remainder as H
SmallTimeExpansion taylor_of_spectrum(const DiscreteSpectrum& spec, int J, double t_max) {
    std::map<int, double> a;
    for (int j = 0; j <= J; ++j) {
        double c = 0.0;
        for (const auto& [lambda, mult] : spec.eigenvalues) {
            double term = static_cast<double>(mult);
            for (int i = 1; i <= j; ++i) term *= -lambda / i;
            c += term;
        }
        a[3 + 2 * j] = c;  // t^j has dea index k = 3 + 2j
    }
    DiscreteSpectrum spec_copy = spec;
    std::map<int, double> a_copy = a;
    auto H = [spec_copy, a_copy](double t) {
        double v = spec_copy.heat_trace(t);
        for (const auto& [k, c] : a_copy) v -= c * std::pow(t, 0.5 * (k - 3));
        return v;
    };
    // |H| <= max_lambda^{J+1} t^{J+1} / (J+1)! * total_mult, padded
    double lmax = 0.0, mtot = 0.0;
    for (const auto& [lambda, mult] : spec.eigenvalues) {
        lmax = std::max(lmax, lambda);
        mtot += static_cast<double>(mult);
    }
    double bound = mtot;
    for (int i = 1; i <= J + 1; ++i) bound *= lmax / i;
    bound *= std::exp(lmax * t_max) * 2.0;
    // dea order: H ~ t^{(m+1)/2} with (m+1)/2 = J+1
    return SmallTimeExpansion(std::move(a), {}, H, bound, 2 * J + 1, t_max);
}

}  // namespace

TEST_CASE("mellin derivative, pure power terms, continued variant") {
    // each term class against the numerical-continuation oracle
    // t^{-1/2} (dea k = 2)
    CHECK(mellin_zero_derivative(pure_power(2, 1.0), 1.0) ==
          doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(mellin_zero_derivative(pure_power(2, 1.0), 2.0) ==
          doctest::Approx(continuation_oracle(-0.5, 2.0, false)).epsilon(1e-9));
    // t^{-1} (dea k = 1)
    CHECK(mellin_zero_derivative(pure_power(1, 1.0), 2.0) ==
          doctest::Approx(continuation_oracle(-1.0, 2.0, false)).epsilon(1e-9));
    // t^{-3/2} (dea k = 0)
    CHECK(mellin_zero_derivative(pure_power(0, 1.0), 0.7) ==
          doctest::Approx(continuation_oracle(-1.5, 0.7, false)).epsilon(1e-9));
    // constant (dea k = 3): gamma_E + log t0
    CHECK(mellin_zero_derivative(pure_power(3, 1.0), 1.0) ==
          doctest::Approx(kEulerGamma).epsilon(1e-12));
    CHECK(mellin_zero_derivative(pure_power(3, 1.0), 2.0) ==
          doctest::Approx(kEulerGamma + std::log(2.0)).epsilon(1e-12));
    CHECK(mellin_zero_derivative(pure_power(3, 1.0), 2.0) ==
          doctest::Approx(continuation_oracle(0.0, 2.0, false)).epsilon(1e-8));
    // t^{1/2} (dea k = 4): plain integral, Gamma correction vanishes
    CHECK(mellin_zero_derivative(pure_power(4, 1.0), 1.0) ==
          doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("mellin derivative, printed-lemma variant") {
    // the bookkeeping formula: +2 a_k t0^{-k/2}/k for negative powers,
    // -gamma a_0, remainder integral for positive powers
    CHECK(mellin_zero_derivative(pure_power(2, 1.0), 1.0, MellinVariant::lemma_printed) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mellin_zero_derivative(pure_power(3, 1.0), 1.0, MellinVariant::lemma_printed) ==
          doctest::Approx(-kEulerGamma).epsilon(1e-12));
    // composite fixture: t^{-3/2} + t^{-1} + t^{-1/2} + 1 + t^{1/2} at t0 = 1
    std::map<int, double> a{{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}, {4, 1.0}};
    SmallTimeExpansion exp(std::move(a), {}, nullptr, 0.0, 0, 2.0);
    CHECK(mellin_zero_derivative(exp, 1.0, MellinVariant::lemma_printed) ==
          doctest::Approx(2.0 / 3.0 + 1.0 + 2.0 - kEulerGamma + 2.0).epsilon(1e-12));
    // and the continued value of the same fixture
    CHECK(mellin_zero_derivative(exp, 1.0) ==
          doctest::Approx(-2.0 / 3.0 - 1.0 - 2.0 + kEulerGamma + 2.0).epsilon(1e-12));
}

TEST_CASE("log-term continuation against the symbolic oracle") {
    // t^{1/2} log t (b index k = 2)
    SmallTimeExpansion e1({}, {{2, 1.0}}, nullptr, 0.0, 0, 4.0);
    CHECK(mellin_zero_derivative(e1, 1.0) == doctest::Approx(-4.0).epsilon(1e-10));
    CHECK(mellin_zero_derivative(e1, 3.0) ==
          doctest::Approx(continuation_oracle(0.5, 3.0, true)).epsilon(1e-8));
    // t^{-1/2} log t (b index k = 0)
    SmallTimeExpansion e2({}, {{0, 1.0}}, nullptr, 0.0, 0, 4.0);
    CHECK(mellin_zero_derivative(e2, 2.0) ==
          doctest::Approx(continuation_oracle(-0.5, 2.0, true)).epsilon(1e-8));
    // t^0 log t has a pole at s = 0
    SmallTimeExpansion e3({}, {{1, 1.0}}, nullptr, 0.0, 0, 4.0);
    CHECK_THROWS_AS(mellin_zero_derivative(e3, 1.0), NumericalError);
}

TEST_CASE("mellin derivative is linear in the expansion") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::map<int, double> a1, a2, sum;
        for (int k : {0, 1, 2, 3, 4, 5}) {
            a1[k] = coeff(rng);
            a2[k] = coeff(rng);
            sum[k] = a1[k] + a2[k];
        }
        SmallTimeExpansion ea(std::move(a1), {}, nullptr, 0.0, 0, 2.0);
        SmallTimeExpansion eb(std::move(a2), {}, nullptr, 0.0, 0, 2.0);
        SmallTimeExpansion ec(std::move(sum), {}, nullptr, 0.0, 0, 2.0);
        const double va = mellin_zero_derivative(ea, 1.3);
        const double vb = mellin_zero_derivative(eb, 1.3);
        const double vc = mellin_zero_derivative(ec, 1.3);
        CHECK(vc == doctest::Approx(va + vb).epsilon(1e-11));
    }
}

TEST_CASE("large time integral") {
    DiscreteSpectrum one;
    one.eigenvalues = {{1.0, 1}};
    CHECK(large_time_integral(one, 1.0) == doctest::Approx(0.21938393439552027).epsilon(1e-12));
    // tail vanishes
    CHECK(large_time_integral(one, 50.0) < 1e-20);
    // scaling: value(lambda, t0) = value(1, lambda t0)
    DiscreteSpectrum three;
    three.eigenvalues = {{3.0, 1}};
    CHECK(large_time_integral(three, 0.7) == doctest::Approx(large_time_integral(one, 2.1)));
    DiscreteSpectrum bad;
    bad.eigenvalues = {{0.0, 1}};
    CHECK_THROWS_AS(large_time_integral(bad, 1.0), NumericalError);
}

TEST_CASE("regularized determinant: finite-spectrum identity and t0 independence") {
    // single eigenvalue 1 -> zeta'(0) = 0; single eigenvalue 2 -> -log 2
    DiscreteSpectrum s1;
    s1.eigenvalues = {{1.0, 1}};
    const SmallTimeExpansion e1 = taylor_of_spectrum(s1, 14, 3.0);
    CHECK(regularized_log_det(e1, s1, 1.0) == doctest::Approx(0.0).epsilon(1e-9));

    DiscreteSpectrum s2;
    s2.eigenvalues = {{2.0, 1}};
    const SmallTimeExpansion e2 = taylor_of_spectrum(s2, 16, 2.5);
    CHECK(regularized_log_det(e2, s2, 1.0) ==
          doctest::Approx(-std::log(2.0)).epsilon(1e-8));

    // t0 sweep
    const double v05 = regularized_log_det(e2, s2, 0.5);
    const double v1 = regularized_log_det(e2, s2, 1.0);
    const double v2 = regularized_log_det(e2, s2, 2.0);
    CHECK(std::abs(v05 - v1) < 1e-8);
    CHECK(std::abs(v2 - v1) < 1e-8);

    // inconsistent model: spectrum and expansion disagree
    DiscreteSpectrum wrong;
    wrong.eigenvalues = {{2.5, 1}};
    CHECK_THROWS_AS(regularized_log_det(e2, wrong, 1.0), NumericalError);
}

TEST_CASE("analytic torsion ledger") {
    CHECK(analytic_torsion({{0, 0.0}, {1, 0.0}}).log_T_R == doctest::Approx(0.0));
    CHECK(analytic_torsion({{0, 2.0}, {1, 4.0}}).log_T_R == doctest::Approx(-1.0));
    CHECK_THROWS_AS(analytic_torsion({{0, 1.0}}), AdmissionError);
    // full alternating sum (1/2) sum p (-1)^p log det_p with Hodge duals
    // matches the two-term formula
    const double a = 1.7, b = -0.4;
    const double full = 0.5 * (0.0 * 1 - 1.0 * b + 2.0 * b - 3.0 * a);
    CHECK(analytic_torsion({{0, a}, {1, b}}).log_T_R == doctest::Approx(full).epsilon(1e-14));
}

TEST_CASE("l2 log torsion") {
    CHECK(l2_log_torsion(1.0, {0, 0}) == doctest::Approx(-1.0 / (6.0 * kPi)).epsilon(1e-14));
    CHECK(l2_log_torsion(6.0 * kPi, {0, 0}) == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(l2_log_torsion(2.0, {2, 0}) == doctest::Approx(-13.0 / (3.0 * kPi)).epsilon(1e-13));
}

TEST_CASE("small eigenvalue tail") {
    DiscreteSpectrum m;
    m.eigenvalues = {{0.5, 1}, {1.0, 1}};
    auto r = small_eigenvalue_tail(m, 10.0, 1.0, 1.0, 1.0);
    CHECK(r.condition_ok);
    CHECK(r.tail == doctest::Approx(exp_int_e1(0.5) + exp_int_e1(1.0)).epsilon(1e-12));

    DiscreteSpectrum crowded;
    crowded.eigenvalues = {{1e-6, 100}};
    CHECK_FALSE(small_eigenvalue_tail(crowded, 1.0, 1.0, 1.0, 1.0).condition_ok);

    DiscreteSpectrum empty;
    auto r2 = small_eigenvalue_tail(empty, 1.0, 1.0, 1.0, 1.0);
    CHECK(r2.condition_ok);
    CHECK(r2.tail == 0.0);
}

TEST_CASE("reidemeister torsion from homology data") {
    HomologySummary trivial;
    trivial.degrees[0] = {1, 1.0};
    trivial.degrees[1] = {1, 1.0};
    CHECK(reidemeister_from_homology(trivial) == doctest::Approx(0.0));

    HomologySummary h;
    h.degrees[0] = {1, 1.0};
    h.degrees[1] = {12, 2.0};
    CHECK(reidemeister_from_homology(h) == doctest::Approx(-std::log(6.0)).epsilon(1e-14));

    HomologySummary d3;
    d3.degrees[3] = {5, 1.0};
    CHECK(reidemeister_from_homology(d3) == doctest::Approx(-std::log(5.0)).epsilon(1e-14));
}

TEST_CASE("boundary correction") {
    CHECK(boundary_correction(7, 0) == 0.0);  // flat torus boundary
    CHECK(boundary_correction(3, 2) == doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-14));
    CHECK(boundary_correction(0, 2) == 0.0);
}

TEST_CASE("expansion admission rejects a violated remainder bound") {
    auto H = [](double) { return 1.0; };  // constant, certainly not O(t^{1/2})
    CHECK_THROWS_AS(SmallTimeExpansion({}, {}, H, 0.5, 0, 2.0), AdmissionError);
}
