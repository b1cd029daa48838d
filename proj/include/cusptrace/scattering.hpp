#pragma once

#include <complex>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "cusptrace/quadrature.hpp"
#include "cusptrace/rep_theory.hpp"

namespace cusptrace {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Intertwiner family Psi with the functional equation Psi(s) Psi(-s) = I and
// unitarity on the critical axis. Both are sampled on a 64-point grid at
// admission; violation is a hard error. `dpsi_du` is the derivative of
// u -> Psi(iu) in the real parameter u.
class ScatteringModel {
  public:
    using PsiFn = std::function<Matrix(std::complex<double>)>;
    using DPsiFn = std::function<Matrix(double)>;

    ScatteringModel(int dim, int cusps, PsiFn psi, DPsiFn dpsi_du);

    int dim() const { return dim_; }
    int cusps() const { return cusps_; }
    int block_dim() const { return dim_ / cusps_; }

    Matrix psi(std::complex<double> s) const { return psi_(s); }
    Matrix dpsi_du(double u) const { return dpsi_(u); }

    // tr(Psi(iu)^{-1} dPsi(iu)/du)
    std::complex<double> winding_density(double u) const;

  private:
    int dim_;
    int cusps_;
    PsiFn psi_;
    DPsiFn dpsi_;
};

// fixture models
ScatteringModel constant_model(const Matrix& involution, int cusps = 1);
ScatteringModel mobius_scalar_model(double pole = 1.0);
ScatteringModel block_diag_model(const std::vector<ScatteringModel>& blocks);

// Rapidly decaying test function with decay certificate |xi(u)| <= C e^{-A|u|}.
struct TestFunction {
    std::function<double(double)> xi;
    double decay_rate = 1.0;
    double decay_constant = 1.0;

    TestFunction() = default;
    TestFunction(std::function<double(double)> fn, double rate, double constant);
    double u_cut(double tol) const;
};

TestFunction gaussian_test_function();           // e^{-u^2}
TestFunction gaussian_u2_test_function();        // u^2 e^{-u^2}, vanishes at 0

// ||T^Y E(iu, v)||^2 via the degree-0 Maass-Selberg relation:
//   2 sum_j log(Y_j) |v_j|^2 + <Psi(s)^{-1} Psi'(s) v, v>
//   + sum_j (1/s)(Y_j^s <(Psi(-s)v)_j, v_j> - Y_j^{-s} <(Psi(s)v)_j, v_j>),
// s = iu. The oscillatory term has a removable singularity at u = 0 and is
// evaluated by its limit expansion below |u| < 1e-4.
double maass_selberg_norm0(const ScatteringModel& model, const std::vector<double>& Y,
                           double u, const Vector& v);

// Degree-1 relation: no oscillatory term.
double maass_selberg_norm1(const ScatteringModel& model_phi, const std::vector<double>& Y,
                           double u, const Vector& omega);

struct ScatteringLimit {
    double value = 0.0;  // the normalized oscillatory integral at finite Y
    double limit = 0.0;  // (1/4) xi(0) tr Psi(0)
    double quad_error = 0.0;
};

// value(Y) = (1/(4 pi)) int xi(u) (Y^{2iu} tr Psi(-iu) - Y^{-2iu} tr Psi(iu))
//            / (2iu) du,
// resolved with panels of width <= pi / (4 log Y); value(Y) -> limit.
ScatteringLimit scattering_limit(const ScatteringModel& model, const TestFunction& xi,
                                 double Y, const QuadOptions& opt = {});

// -(1/(2 pi)) int w(u) tr(Psi(iu)^{-1} dPsi(iu)/du) du. For unitary families
// the density is i * (phase derivative), so the result of a genuine model is
// purely imaginary; both parts are returned.
std::complex<double> winding_integral(const ScatteringModel& model, const TestFunction& weight,
                                      const QuadOptions& opt = {});

// sup over a grid in [-eps, eps] of Re tr(Psi^{-1} dPsi/du) <= a_bound.
bool intertwiner_bound_check(const ScatteringModel& model, double eps, double a_bound,
                             int grid_points = 257);

// Per-weight-block family Psi_l (the restriction of Psi to W_l), keyed by the
// M-weight l. Every key must be a weight of the representation.
struct WeightBlockModel {
    std::map<int, ScatteringModel> blocks;
};

// -(1/(2 pi)) sum_l d_l int phi(l^2 - 4 + u^2 + lambda_V)
//                         tr(Psi_l(iu)^{-1} dPsi_l(iu)/du) du,
// with the weight multiplicities d_l of V_{n1,n2}.
std::complex<double> winding_sum_over_blocks(const WeightBlockModel& model,
                                             const RepWeights& rep,
                                             const std::function<double(double)>& phi,
                                             const TestFunction& envelope,
                                             const QuadOptions& opt = {});

}  // namespace cusptrace
