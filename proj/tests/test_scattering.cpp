#include <cmath>
#include <random>

#include <doctest.h>

#include "cusptrace/errors.hpp"
#include "cusptrace/scattering.hpp"
#include "cusptrace/special.hpp"

using namespace cusptrace;

namespace {

ScatteringModel identity_model(int n = 1, int cusps = 1) {
    return constant_model(Matrix::Identity(n, n), cusps);
}

}  // namespace

TEST_CASE("model admission") {
    CHECK_NOTHROW(identity_model());
    CHECK_NOTHROW(mobius_scalar_model(1.0));
    // diag(1,-1) is an involutive unitary
    Matrix d = Matrix::Identity(2, 2);
    d(1, 1) = -1.0;
    CHECK_NOTHROW(constant_model(d));
    // a non-involutive unitary violates Psi(s)Psi(-s) = I
    Matrix rot(2, 2);
    rot << 0, -1, 1, 0;
    CHECK_THROWS_AS(constant_model(rot), AdmissionError);
    // a non-unitary matrix violates the axis condition
    Matrix g = Matrix::Identity(2, 2) * 2.0;
    CHECK_THROWS_AS(constant_model(g), AdmissionError);
}

TEST_CASE("dpsi fixture consistency (finite differences)") {
    const ScatteringModel m = mobius_scalar_model(1.0);
    for (double u : {-2.0, -0.3, 0.0, 0.7, 3.0}) {
        const double h = 1e-6;
        const Matrix fd =
            (m.psi(std::complex<double>(0, u + h)) - m.psi(std::complex<double>(0, u - h))) /
            (2.0 * h);
        CHECK((fd - m.dpsi_du(u)).norm() < 1e-8);
    }
}

TEST_CASE("maass-selberg norm, degree 0") {
    const ScatteringModel id = identity_model();
    Vector v(1);
    v << 1.0;

    // constant model, Y = e, u = pi/2: 2 + 4/pi
    const double val =
        maass_selberg_norm0(id, {std::exp(1.0)}, kPi / 2.0, v);
    CHECK(val == doctest::Approx(2.0 + 4.0 / kPi).epsilon(1e-12));

    // small-u limit: 4 log Y
    const double lim = maass_selberg_norm0(id, {std::exp(1.0)}, 1e-6, v);
    CHECK(std::abs(lim - 4.0) < 1e-6);

    // v = 0
    Vector zero = Vector::Zero(1);
    CHECK(maass_selberg_norm0(id, {2.0}, 0.5, zero) == doctest::Approx(0.0));

    CHECK_THROWS_AS(maass_selberg_norm0(id, {2.0}, 0.0, v), AdmissionError);
}

TEST_CASE("maass-selberg norm0 is nonnegative for admissible fixtures") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> logy(0.0, 3.0), uu(-4.0, 4.0), re(-1.0, 1.0);

    Matrix d = Matrix::Identity(2, 2);
    d(1, 1) = -1.0;
    const std::vector<ScatteringModel> models = {
        identity_model(), mobius_scalar_model(1.0), mobius_scalar_model(2.5),
        constant_model(d)};
    for (const auto& model : models) {
        for (int trial = 0; trial < 250; ++trial) {
            std::vector<double> Y(model.cusps());
            for (auto& y : Y) y = std::exp(logy(rng));
            double u = uu(rng);
            if (std::abs(u) < 1e-9) u = 0.5;
            Vector v(model.dim());
            for (int i = 0; i < model.dim(); ++i)
                v(i) = std::complex<double>(re(rng), re(rng));
            CHECK(maass_selberg_norm0(model, Y, u, v) >= -1e-9);
        }
    }
}

TEST_CASE("maass-selberg norm, degree 1") {
    const ScatteringModel id = identity_model();
    Vector w(1);
    w << 1.0;
    CHECK(maass_selberg_norm1(id, {std::exp(2.0)}, 0.4, w) == doctest::Approx(4.0).epsilon(1e-12));
    Vector zero = Vector::Zero(1);
    CHECK(maass_selberg_norm1(id, {3.0}, 0.4, zero) == doctest::Approx(0.0));

    // additivity over cusps at equal heights: block identity on two cusps
    const ScatteringModel two = identity_model(2, 2);
    Vector both(2);
    both << 1.0, 1.0;
    const double sum = maass_selberg_norm1(two, {5.0, 5.0}, 0.4, both);
    CHECK(sum == doctest::Approx(2.0 * maass_selberg_norm1(id, {5.0}, 0.4, w)).epsilon(1e-12));
}

TEST_CASE("scattering limit: constant and mobius fixtures") {
    const TestFunction xi = gaussian_test_function();
    const ScatteringModel id = identity_model();
    const ScatteringModel mob = mobius_scalar_model(1.0);

    for (const ScatteringModel* m : {&id, &mob}) {
        const auto r = scattering_limit(*m, xi, 1e4);
        CHECK(r.limit == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(std::abs(r.value - r.limit) < 1e-3);
    }

    // identity model has the closed form value(Y) = erf(log Y)/4
    const auto r100 = scattering_limit(id, xi, 100.0);
    CHECK(r100.value == doctest::Approx(0.25 * std::erf(std::log(100.0))).epsilon(1e-10));

    // error decreases in Y; for the mobius model the decay is ~ Y^-2 and
    // resolvable in doubles across all three heights
    double prev = 1e9;
    for (double Y : {1e2, 1e3, 1e4}) {
        const auto r = scattering_limit(mob, xi, Y);
        const double err = std::abs(r.value - r.limit);
        CHECK(err < prev);
        prev = err;
    }

    // xi with xi(0) = 0 has limit 0
    const TestFunction xi0 = gaussian_u2_test_function();
    const auto r0 = scattering_limit(id, xi0, 1e3);
    CHECK(r0.limit == 0.0);
    CHECK(std::abs(r0.value) < 1e-3);

    // doubling tr Psi(0) doubles the limit
    const ScatteringModel two = identity_model(2);
    const auto r2 = scattering_limit(two, xi, 1e3);
    CHECK(r2.limit == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("winding integral") {
    const TestFunction xi = gaussian_test_function();
    // constant model: dPsi = 0
    const auto zero = winding_integral(identity_model(), xi);
    CHECK(std::abs(zero) < 1e-14);

    // mobius pole 1: density -2i/(1+u^2); integral = i e erfc(1)
    const auto mob = winding_integral(mobius_scalar_model(1.0), xi);
    CHECK(mob.real() == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(mob.imag() == doctest::Approx(0.42758357615580700).epsilon(1e-10));

    // additivity over direct sums
    const auto a = winding_integral(mobius_scalar_model(1.0), xi);
    const auto b = winding_integral(mobius_scalar_model(2.5), xi);
    const auto ab = winding_integral(
        block_diag_model({mobius_scalar_model(1.0), mobius_scalar_model(2.5)}), xi);
    CHECK(std::abs(ab - (a + b)) < 1e-10);
}

TEST_CASE("intertwiner bound check") {
    CHECK(intertwiner_bound_check(identity_model(), 0.5, 0.0));
    CHECK_FALSE(intertwiner_bound_check(identity_model(), 0.5, -1e-6));
    // mobius: Re tr(Psi^{-1} dPsi/du) = 0, so any nonnegative bound passes
    CHECK(intertwiner_bound_check(mobius_scalar_model(1.0), 0.1, 1e-12));
}

TEST_CASE("winding sum over weight blocks carries d_l multiplicities") {
    // V_{1,1}: weights -2, 0, 2 with d = 1, 2, 1; lambda_V = 12
    const RepWeights rep{1, 1};
    WeightBlockModel model;
    model.blocks.emplace(-2, mobius_scalar_model(1.0));
    model.blocks.emplace(0, mobius_scalar_model(2.0));
    model.blocks.emplace(2, mobius_scalar_model(1.0));

    auto phi = [](double x) { return std::exp(-0.1 * x); };
    // |phi(l^2 - 4 + 12 + u^2)| <= e^{-0.8} e^{-0.1 u^2} <= e^{-0.1 u^2}
    // and e^{-0.1 u^2} <= e^{2.5} e^{-|u|}
    const TestFunction envelope([](double u) { return std::exp(-0.1 * u * u); }, 1.0,
                                std::exp(2.5));
    const auto total = winding_sum_over_blocks(model, rep, phi, envelope);

    // manual assembly: sum_l d_l * winding(block_l, u -> phi(l^2 - 4 + 12 + u^2))
    std::complex<double> manual = 0.0;
    const double lambda_v = 12.0;
    for (const auto& [l, d] : std::map<int, int>{{-2, 1}, {0, 2}, {2, 1}}) {
        const double shift = l * l - 4.0 + lambda_v;
        const TestFunction w([phi, shift](double u) { return phi(shift + u * u); }, 1.0,
                             std::exp(2.5));
        const auto& block = model.blocks.at(l);
        manual += static_cast<double>(d) * winding_integral(block, w);
    }
    CHECK(std::abs(total - manual) < 1e-12);
    CHECK(std::abs(total) > 1e-4);  // not vacuous

    // a key outside the weight lattice is rejected
    WeightBlockModel bad;
    bad.blocks.emplace(1, mobius_scalar_model(1.0));  // parity mismatch for (1,1)
    CHECK_THROWS_AS(winding_sum_over_blocks(bad, rep, phi, envelope), AdmissionError);
}
