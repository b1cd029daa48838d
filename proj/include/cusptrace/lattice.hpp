#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace cusptrace {

using Vec2 = std::array<double, 2>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double det(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }

// Empirical constant for the Gauss-circle bound
//   |N*(r) - pi r^2 / vol| <= C0 (r/alpha1 + alpha2/alpha1),
// fixed once after a sweep over random reduced bases (max observed ratio < 1).
inline constexpr double kGaussCircleC0 = 10.0;

inline constexpr std::int64_t kDefaultCountingBudget = 100'000'000;

struct LatticeBasis {
    Vec2 b1{1.0, 0.0};
    Vec2 b2{0.0, 1.0};
};

// Gauss/Lagrange-reduced basis of a rank-2 lattice. Invariants:
//   alpha1 <= alpha2, |<b1,b2>| <= alpha1^2 / 2,
//   covolume <= alpha1*alpha2 <= (2/sqrt 3) covolume.
struct ReducedLattice {
    Vec2 b1{1.0, 0.0};
    Vec2 b2{0.0, 1.0};
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    double covolume = 1.0;

    double uniformity_ratio() const { return covolume / (alpha1 * alpha1); }
};

ReducedLattice gauss_reduce(const LatticeBasis& basis);

ReducedLattice scale(const ReducedLattice& lat, std::int64_t n);

// Number of lattice vectors with |v| <= r, origin included.
std::int64_t count_points(const ReducedLattice& lat, double r,
                          std::int64_t budget = kDefaultCountingBudget);

// N*(r) - pi r^2 / vol, or its absolute value.
double error_term(const ReducedLattice& lat, double r, bool signed_value,
                  std::int64_t budget = kDefaultCountingBudget);

// E(r) / (r/alpha1 + alpha2/alpha1); empirically <= kGaussCircleC0.
double error_bound_ratio(const ReducedLattice& lat, double r,
                         std::int64_t budget = kDefaultCountingBudget);

enum class KappaVariant { statement, proof, conv1, derived };

struct CuspConstant {
    double kappa = 0.0;
    KappaVariant variant = KappaVariant::derived;
    // Conservative bound on the neglected tail of int E rho^-3 beyond the
    // enumerated radius, via the C0 certificate. The oscillation of E makes
    // the actual truncation error far smaller.
    double tail_bound = 0.0;
};

CuspConstant kappa(const ReducedLattice& lat, KappaVariant variant = KappaVariant::derived,
                   double quad_tol = 1e-2, std::int64_t budget = kDefaultCountingBudget);

// all four printings from a single point table
struct KappaVariants {
    double derived = 0.0;
    double statement = 0.0;
    double proof = 0.0;
    double conv1 = 0.0;
    double tail_bound = 0.0;

    double get(KappaVariant v) const;
};

KappaVariants kappa_variants(const ReducedLattice& lat, double quad_tol = 1e-2,
                             std::int64_t budget = kDefaultCountingBudget);

// Sorted radii of nonzero lattice vectors up to a cutoff, with prefix sums.
// Backs N*(R), the signed error term, and the exact stepwise evaluation of
// int_R^rmax E(rho) rho^-3 drho used by kappa and the unipotent closed form.
class LatticePointTable {
  public:
    LatticePointTable(const ReducedLattice& lat, double r_max,
                      std::int64_t budget = kDefaultCountingBudget);

    std::int64_t count_nonzero(double R) const;  // N*(R), R <= r_max
    double error_signed(double R) const;         // E(R)

    // int_R^rmax E(rho) rho^-3 drho, exact up to the radius grouping.
    double integral_e_tail(double R) const;
    // int_alpha1^rmax E(rho) rho^-3 drho.
    double integral_e_from_alpha1() const { return integral_e_tail(lat_.alpha1); }

    // C0-certificate bound on |int_rmax^inf E rho^-3|.
    double tail_bound() const;

    double r_max() const { return r_max_; }
    const ReducedLattice& lattice() const { return lat_; }

    // shell access for lattice sums
    std::size_t shell_count() const { return r2_.size(); }
    double shell_radius2(std::size_t i) const { return r2_[i]; }
    std::int64_t shell_multiplicity(std::size_t i) const {
        return cum_n_[i] - (i == 0 ? 0 : cum_n_[i - 1]);
    }
    std::size_t shells_upto(double R) const;  // one past the last shell with r <= R

  private:
    ReducedLattice lat_;
    double r_max_;
    std::vector<double> r2_;           // distinct squared radii, ascending
    std::vector<std::int64_t> cum_n_;  // cumulative multiplicity
    std::vector<double> cum_inv_;      // cumulative sum of mult / r^2
};

}  // namespace cusptrace
