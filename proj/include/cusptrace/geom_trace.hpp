#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "cusptrace/hyperbolic.hpp"
#include "cusptrace/lattice.hpp"
#include "cusptrace/quadrature.hpp"

namespace cusptrace {

// Scalar point-pair profile h(l) with a declared super-exponential decay
// certificate |h(l)| <= decay_constant * e^{-decay_rate * l}, decay_rate >= 10.
// The certificate drives lattice enumeration cutoffs and tail bounds and is
// sampled on l in [0, 100] at admission.
struct KernelProfile {
    std::function<double(double)> h;
    double decay_rate = 10.0;
    double decay_constant = 1.0;

    KernelProfile() = default;
    KernelProfile(std::function<double(double)> fn, double rate, double constant);

    // radius beyond which |h(ell(r))| <= tol under the certificate
    double r_cut(double tol) const;
};

KernelProfile gaussian_profile(double scale = 1.0);
KernelProfile exponential_profile(double rate = 10.0);

// int_0^inf r h(ell(r)) dr and int_0^inf r log(r) h(ell(r)) dr.
double profile_integral_r(const KernelProfile& p, const QuadOptions& opt = {});
double profile_integral_rlog(const KernelProfile& p, const QuadOptions& opt = {});

// vol(L) int_0^Y sum_{eta != 0} h(ell(|eta|/y)) dy/y^3 by literal lattice
// enumeration; the reference the closed form is checked against.
double unipotent_bruteforce(const ReducedLattice& lat, const KernelProfile& p, double Y,
                            double tol = 1e-6, std::int64_t budget = kDefaultCountingBudget);

enum class ClosedFormVariant { derived, printed };

// Exact finite-Y decomposition (variant derived):
//   2 pi int log(rY) r h(ell(r)) dr + kappa vol int r h(ell(r)) dr
//   + vol int r h(ell(r)) E(rY)/(rY)^2 dr
//   - 2 vol int r h(ell(r)) [int_rY^inf E rho^-3 drho] dr
// with signed E throughout; the common radius cutoff of the kappa integral
// and the tail integral cancels identically. `printed` evaluates the paper
// form (unweighted kappa integrand, single tail term from max(alpha1, rY)).
double unipotent_closed_form(const ReducedLattice& lat, const KernelProfile& p, double Y,
                             ClosedFormVariant variant = ClosedFormVariant::derived,
                             const QuadOptions& opt = {},
                             std::int64_t budget = kDefaultCountingBudget);

// 2 pi (#cusps) int r log r h dr + sum_j kappa_j vol_j int r h dr.
double cusp_regularized_terms(const std::vector<CuspGeometry>& cusps, const KernelProfile& p,
                              const QuadOptions& opt = {},
                              std::int64_t budget = kDefaultCountingBudget);

struct ManifoldSummary {
    double volume = 1.0;
    std::vector<CuspGeometry> cusps;
    std::function<double(const KernelProfile&)> loxodromic_term;  // default 0
    double identity_density = 0.0;  // Tr_Gamma k_phi / volume, supplied
};

struct TraceBreakdown {
    double identity = 0.0;
    double loxodromic = 0.0;
    double log_term = 0.0;    // 2 pi h int r log r h(ell) dr
    double kappa_term = 0.0;  // sum_j kappa_j vol_j int r h(ell) dr
    double total = 0.0;
};

TraceBreakdown regularized_trace(const ManifoldSummary& m, const KernelProfile& p,
                                 const QuadOptions& opt = {},
                                 std::int64_t budget = kDefaultCountingBudget);

// Tr_Y - Tr_R for the unipotent part at truncation heights Y:
//   sum_j [ 2 pi log Y_j int r h dr + vol_j int r h E(rY_j)/(rY_j)^2 dr
//           - 2 vol_j int r h T_j(rY_j) dr ]   (variant derived, exact)
double truncation_defect(const std::vector<CuspGeometry>& cusps, const KernelProfile& p,
                         const TruncationHeights& Y,
                         ClosedFormVariant variant = ClosedFormVariant::derived,
                         const QuadOptions& opt = {},
                         std::int64_t budget = kDefaultCountingBudget);

}  // namespace cusptrace
