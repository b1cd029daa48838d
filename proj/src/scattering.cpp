#include "cusptrace/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "cusptrace/errors.hpp"
#include "cusptrace/special.hpp"

namespace cusptrace {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

void require_small(double residue, double scale, const char* what) {
    if (residue > 1e-8 * std::max(1.0, scale)) {
        throw AdmissionError(std::string("scattering model admission failed: ") + what +
                             " (residue " + std::to_string(residue) + ")");
    }
}

}  // namespace

ScatteringModel::ScatteringModel(int dim, int cusps, PsiFn psi, DPsiFn dpsi_du)
    : dim_(dim), cusps_(cusps), psi_(std::move(psi)), dpsi_(std::move(dpsi_du)) {
    if (dim_ < 1 || cusps_ < 1 || dim_ % cusps_ != 0)
        throw AdmissionError("scattering model needs dim divisible by the cusp count");
    if (!psi_ || !dpsi_) throw AdmissionError("scattering model needs psi and dpsi callables");
    const Matrix id = Matrix::Identity(dim_, dim_);
    for (int k = 0; k < 64; ++k) {
        const double u = -10.0 + 20.0 * k / 63.0;
        const Matrix m = psi_(kI * u);
        if (m.rows() != dim_ || m.cols() != dim_)
            throw AdmissionError("psi returns a matrix of the wrong size");
        require_small((m * psi_(-kI * u) - id).norm(), 1.0, "functional equation Psi(s)Psi(-s)=I");
        require_small((m * m.adjoint() - id).norm(), 1.0, "unitarity of Psi on Re(s)=0");
    }
}

std::complex<double> ScatteringModel::winding_density(double u) const {
    const Matrix m = psi_(kI * u);
    const Matrix d = dpsi_(u);
    return m.partialPivLu().solve(d).trace();
}

ScatteringModel constant_model(const Matrix& involution, int cusps) {
    const int n = static_cast<int>(involution.rows());
    Matrix m = involution;
    return ScatteringModel(
        n, cusps, [m](std::complex<double>) { return m; },
        [n](double) { return Matrix::Zero(n, n); });
}

ScatteringModel mobius_scalar_model(double pole) {
    if (!(pole > 0.0)) throw AdmissionError("mobius scalar model needs pole > 0");
    const double a = pole;
    return ScatteringModel(
        1, 1,
        [a](std::complex<double> s) {
            Matrix m(1, 1);
            m(0, 0) = (a - s) / (a + s);
            return m;
        },
        [a](double u) {
            Matrix m(1, 1);
            const std::complex<double> den = a + kI * u;
            m(0, 0) = -2.0 * kI * a / (den * den);
            return m;
        });
}

ScatteringModel block_diag_model(const std::vector<ScatteringModel>& blocks) {
    if (blocks.empty()) throw AdmissionError("block model needs at least one block");
    int dim = 0;
    for (const auto& b : blocks) dim += b.dim();
    auto psis = std::make_shared<std::vector<ScatteringModel>>(blocks);
    auto assemble = [psis, dim](auto eval) {
        Matrix m = Matrix::Zero(dim, dim);
        int at = 0;
        for (const auto& b : *psis) {
            m.block(at, at, b.dim(), b.dim()) = eval(b);
            at += b.dim();
        }
        return m;
    };
    return ScatteringModel(
        dim, 1,
        [assemble](std::complex<double> s) {
            return assemble([s](const ScatteringModel& b) { return b.psi(s); });
        },
        [assemble](double u) {
            return assemble([u](const ScatteringModel& b) { return b.dpsi_du(u); });
        });
}

TestFunction::TestFunction(std::function<double(double)> fn, double rate, double constant)
    : xi(std::move(fn)), decay_rate(rate), decay_constant(constant) {
    if (!xi) throw AdmissionError("test function needs a callable");
    if (!(decay_rate > 0.0) || !(decay_constant > 0.0))
        throw AdmissionError("test function needs a positive decay certificate");
    for (int i = 0; i <= 256; ++i) {
        const double u = -50.0 + 100.0 * i / 256.0;
        if (std::abs(xi(u)) > decay_constant * std::exp(-decay_rate * std::abs(u)) * (1.0 + 1e-9))
            throw AdmissionError("test function violates its decay certificate at u = " +
                                 std::to_string(u));
    }
}

double TestFunction::u_cut(double tol) const {
    return std::max(1.0, std::log(decay_constant / tol) / decay_rate);
}

TestFunction gaussian_test_function() {
    // e^{-u^2} <= e * e^{-2|u|} exactly ((|u|-1)^2 >= 0)
    return TestFunction([](double u) { return std::exp(-u * u); }, 2.0, std::exp(1.0));
}

TestFunction gaussian_u2_test_function() {
    // u^2 e^{-u^2} <= 2 e^{-|u|}: max of u^2 e^{-u^2+|u|} is ~1.47 at u~1.36
    return TestFunction([](double u) { return u * u * std::exp(-u * u); }, 1.0, 2.0);
}

namespace {

void check_norm_args(const ScatteringModel& model, const std::vector<double>& Y,
                     const Vector& v) {
    if (static_cast<int>(Y.size()) != model.cusps())
        throw AdmissionError("need one truncation height per cusp");
    for (double y : Y)
        if (y < 1.0) throw AdmissionError("truncation heights must be >= 1");
    if (v.size() != model.dim()) throw AdmissionError("vector has the wrong dimension");
}

}  // namespace

double maass_selberg_norm0(const ScatteringModel& model, const std::vector<double>& Y,
                           double u, const Vector& v) {
    check_norm_args(model, Y, v);
    if (u == 0.0)
        throw AdmissionError("u = 0: evaluate via the small-u limit (use a nonzero u)");

    const int d = model.block_dim();
    double log_part = 0.0;
    for (int j = 0; j < model.cusps(); ++j)
        log_part += 2.0 * std::log(Y[j]) * v.segment(j * d, d).squaredNorm();

    // <Psi(s)^{-1} Psi'(s) v, v> with d/ds = -i d/du on s = iu
    const Matrix psi_iu = model.psi(kI * u);
    const Vector w = psi_iu.partialPivLu().solve(static_cast<Vector>(model.dpsi_du(u) * v));
    const std::complex<double> derivative_part = -kI * v.dot(w);  // v.dot(w) = <w, v>

    // oscillatory part, per cusp
    std::complex<double> osc = 0.0;
    const std::complex<double> s = kI * u;
    const Vector pv_plus = model.psi(s) * v;
    const Vector pv_minus = model.psi(-s) * v;
    for (int j = 0; j < model.cusps(); ++j) {
        const Vector vj = v.segment(j * d, d);
        if (std::abs(u) < 1e-4) {
            // limit: 2 log Y <(Psi(0)v)_j, v_j> + 2i <(dPsi(0)v)_j, v_j>; the
            // next correction is O(u^2)
            const Vector p0v = model.psi(0.0) * v;
            const Vector d0v = model.dpsi_du(0.0) * v;
            const std::complex<double> c0 = vj.dot(p0v.segment(j * d, d));
            const std::complex<double> c1 = vj.dot(d0v.segment(j * d, d));
            osc += 2.0 * std::log(Y[j]) * c0 + 2.0 * kI * c1;
        } else {
            const std::complex<double> c_minus = vj.dot(pv_minus.segment(j * d, d));
            const std::complex<double> c_plus = vj.dot(pv_plus.segment(j * d, d));
            const std::complex<double> y_s = std::exp(s * std::log(Y[j]));
            osc += (y_s * c_minus - c_plus / y_s) / s;
        }
    }
    return log_part + derivative_part.real() + osc.real();
}

double maass_selberg_norm1(const ScatteringModel& model_phi, const std::vector<double>& Y,
                           double u, const Vector& omega) {
    check_norm_args(model_phi, Y, omega);
    const int d = model_phi.block_dim();
    double log_part = 0.0;
    for (int j = 0; j < model_phi.cusps(); ++j)
        log_part += 2.0 * std::log(Y[j]) * omega.segment(j * d, d).squaredNorm();
    const Matrix phi_iu = model_phi.psi(kI * u);
    const Vector w =
        phi_iu.partialPivLu().solve(static_cast<Vector>(model_phi.dpsi_du(u) * omega));
    const std::complex<double> derivative_part = -kI * omega.dot(w);
    return log_part + derivative_part.real();
}

ScatteringLimit scattering_limit(const ScatteringModel& model, const TestFunction& xi,
                                 double Y, const QuadOptions& opt) {
    if (Y < 1.0) throw AdmissionError("scattering limit needs Y >= 1");
    ScatteringLimit out;
    out.limit = 0.25 * xi.xi(0.0) * model.psi(0.0).trace().real();

    const double log_y = std::max(std::log(Y), 1e-3);
    const double u_max = xi.u_cut(1e-16 / (1.0 + 2.0 * log_y));
    // integrand: xi(u) [a(u) sin(2u log Y) - b(u) cos(2u log Y)] / u with
    // a + ib = tr Psi(iu); real-analytic through u = 0
    auto f = [&](double u) {
        const std::complex<double> tr = model.psi(kI * u).trace();
        if (std::abs(u) < 1e-9) {
            const std::complex<double> tr_d = model.dpsi_du(u).trace();
            return xi.xi(u) * (2.0 * log_y * tr.real() - tr_d.imag());
        }
        const double phase = 2.0 * u * log_y;
        return xi.xi(u) * (tr.real() * std::sin(phase) - tr.imag() * std::cos(phase)) / u;
    };

    // panels no wider than a quarter oscillation period
    const double panel = std::min(0.5, kPi / (4.0 * log_y));
    const int n_panels = static_cast<int>(std::ceil(2.0 * u_max / panel));
    QuadOptions popt = opt;
    popt.abs_tol = std::max(opt.abs_tol / n_panels, 1e-16);
    double total = 0.0, err = 0.0;
    for (int k = 0; k < n_panels; ++k) {
        const double a = -u_max + 2.0 * u_max * k / n_panels;
        const double b = -u_max + 2.0 * u_max * (k + 1) / n_panels;
        QuadResult q = integrate(f, a, b, popt);
        total += q.value;
        err += q.error;
    }
    out.value = total / (4.0 * kPi);
    out.quad_error = err / (4.0 * kPi);
    if (out.quad_error > 1e-6)
        throw NumericalError("oscillatory quadrature failed to converge in scattering_limit");
    return out;
}

std::complex<double> winding_integral(const ScatteringModel& model, const TestFunction& weight,
                                      const QuadOptions& opt) {
    const double u_max = weight.u_cut(1e-16);
    auto re = [&](double u) { return weight.xi(u) * model.winding_density(u).real(); };
    auto im = [&](double u) { return weight.xi(u) * model.winding_density(u).imag(); };
    QuadResult qr = integrate(re, -u_max, u_max, opt);
    QuadResult qi = integrate(im, -u_max, u_max, opt);
    require_quadrature(qr, 1e-7, "winding integral (real part)");
    require_quadrature(qi, 1e-7, "winding integral (imaginary part)");
    return -std::complex<double>(qr.value, qi.value) / (2.0 * kPi);
}

std::complex<double> winding_sum_over_blocks(const WeightBlockModel& model,
                                             const RepWeights& rep,
                                             const std::function<double(double)>& phi,
                                             const TestFunction& envelope,
                                             const QuadOptions& opt) {
    const WeightSpectrum spectrum = weight_multiplicities(rep);
    const double lambda_v = static_cast<double>(casimir(rep));
    std::complex<double> total = 0.0;
    for (const auto& [l, block] : model.blocks) {
        const auto it = spectrum.d.find(l);
        if (it == spectrum.d.end())
            throw AdmissionError("block weight " + std::to_string(l) +
                                 " is not a weight of V_{n1,n2}");
        const double shift = static_cast<double>(l) * l - 4.0 + lambda_v;
        TestFunction weight([phi, shift](double u) { return phi(shift + u * u); },
                            envelope.decay_rate, envelope.decay_constant);
        total += static_cast<double>(it->second) * winding_integral(block, weight, opt);
    }
    return total;
}

bool intertwiner_bound_check(const ScatteringModel& model, double eps, double a_bound,
                             int grid_points) {
    if (!(eps > 0.0)) throw AdmissionError("intertwiner bound check needs eps > 0");
    double sup = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_points; ++i) {
        const double u = -eps + 2.0 * eps * i / (grid_points - 1);
        sup = std::max(sup, model.winding_density(u).real());
    }
    return sup <= a_bound;
}

}  // namespace cusptrace
