#include "cusptrace/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "cusptrace/errors.hpp"
#include "cusptrace/special.hpp"

namespace cusptrace {

namespace {

double norm(const Vec2& v) { return std::hypot(v[0], v[1]); }


// Row bracketing through the quadratic form |m b1 + n b2|^2
// = A m^2 + 2B mn + C n^2; membership itself is decided componentwise so that
// boundary points get the same verdict as a direct enumeration.
struct Form {
    double A, B, C, vol;
    Vec2 b1, b2;

    double norm2(std::int64_t m, std::int64_t n) const {
        const double md = static_cast<double>(m), nd = static_cast<double>(n);
        const double x = md * b1[0] + nd * b2[0];
        const double y = md * b1[1] + nd * b2[1];
        return x * x + y * y;
    }
};

Form form_of(const ReducedLattice& lat) {
    return {dot(lat.b1, lat.b1), dot(lat.b1, lat.b2), dot(lat.b2, lat.b2),
            lat.covolume,        lat.b1,              lat.b2};
}

// Inclusive m-range for row n at radius r; discriminant/4 = A r^2 - vol^2 n^2.
bool row_range(const Form& f, std::int64_t n, double r2, std::int64_t& m_lo,
               std::int64_t& m_hi) {
    const double disc = f.A * r2 - f.vol * f.vol * static_cast<double>(n) * n;
    if (disc < 0.0) return false;
    const double s = std::sqrt(disc);
    const double center = -f.B * static_cast<double>(n) / f.A;
    m_lo = static_cast<std::int64_t>(std::ceil(center - s / f.A - 1e-9));
    m_hi = static_cast<std::int64_t>(std::floor(center + s / f.A + 1e-9));
    auto inside = [&](std::int64_t m) { return f.norm2(m, n) <= r2; };
    while (m_lo <= m_hi && !inside(m_lo)) ++m_lo;
    while (m_lo <= m_hi && !inside(m_hi)) --m_hi;
    while (inside(m_lo - 1)) --m_lo;
    while (inside(m_hi + 1)) ++m_hi;
    return m_lo <= m_hi;
}

void check_budget(const ReducedLattice& lat, double r, std::int64_t budget) {
    const double estimate =
        kPi * r * r / lat.covolume + kGaussCircleC0 * (r / lat.alpha1 + lat.alpha2 / lat.alpha1) + 1.0;
    if (estimate > static_cast<double>(budget)) throw NumericalError("counting budget exceeded");
}

}  // namespace

ReducedLattice gauss_reduce(const LatticeBasis& basis) {
    // extended precision: nearly parallel inputs make the size reduction
    // cancel catastrophically in double
    using LVec = std::array<long double, 2>;
    LVec b1{basis.b1[0], basis.b1[1]}, b2{basis.b2[0], basis.b2[1]};
    auto ldot = [](const LVec& a, const LVec& b) { return a[0] * b[0] + a[1] * b[1]; };

    const long double d0 = b1[0] * b2[1] - b1[1] * b2[0];
    const double norm1 = std::hypot(basis.b1[0], basis.b1[1]);
    const double norm2 = std::hypot(basis.b2[0], basis.b2[1]);
    if (std::abs(static_cast<double>(d0)) <= 1e-14 * norm1 * norm2)
        throw AdmissionError("degenerate lattice");

    if (ldot(b1, b1) > ldot(b2, b2)) std::swap(b1, b2);
    for (int iter = 0; iter < 512; ++iter) {
        const long double mu = std::roundl(ldot(b1, b2) / ldot(b1, b1));
        b2 = {b2[0] - mu * b1[0], b2[1] - mu * b1[1]};
        if (ldot(b2, b2) >= ldot(b1, b1)) break;
        std::swap(b1, b2);
    }
    // sign convention: <b1,b2> in [0, alpha1^2/2]
    if (ldot(b1, b2) < 0.0L) b2 = {-b2[0], -b2[1]};

    ReducedLattice out;
    out.b1 = {static_cast<double>(b1[0]), static_cast<double>(b1[1])};
    out.b2 = {static_cast<double>(b2[0]), static_cast<double>(b2[1])};
    out.alpha1 = norm(out.b1);
    out.alpha2 = norm(out.b2);
    // the reduction is unimodular, so the input determinant carries over
    out.covolume = static_cast<double>(std::abs(d0));
    return out;
}

ReducedLattice scale(const ReducedLattice& lat, std::int64_t n) {
    if (n < 1) throw AdmissionError("scale factor must be a positive integer");
    const double c = static_cast<double>(n);
    ReducedLattice out;
    out.b1 = {c * lat.b1[0], c * lat.b1[1]};
    out.b2 = {c * lat.b2[0], c * lat.b2[1]};
    out.alpha1 = c * lat.alpha1;
    out.alpha2 = c * lat.alpha2;
    out.covolume = c * c * lat.covolume;
    return out;
}

std::int64_t count_points(const ReducedLattice& lat, double r, std::int64_t budget) {
    if (r < 0.0) throw AdmissionError("count_points requires r >= 0");
    if (r < lat.alpha1) return 1;
    check_budget(lat, r, budget);
    const Form f = form_of(lat);
    const double r2 = r * r;
    const std::int64_t n_max =
        static_cast<std::int64_t>(std::floor(r * lat.alpha1 / lat.covolume)) + 1;
    std::int64_t total = 0;
    for (std::int64_t n = -n_max; n <= n_max; ++n) {
        std::int64_t lo, hi;
        if (row_range(f, n, r2, lo, hi)) total += hi - lo + 1;
    }
    return total;
}

double error_term(const ReducedLattice& lat, double r, bool signed_value, std::int64_t budget) {
    if (r < 0.0) throw AdmissionError("error_term requires r >= 0");
    const double n_star = static_cast<double>(count_points(lat, r, budget) - 1);
    const double e = n_star - kPi * r * r / lat.covolume;
    return signed_value ? e : std::abs(e);
}

double error_bound_ratio(const ReducedLattice& lat, double r, std::int64_t budget) {
    if (!(r > 0.0)) throw AdmissionError("error_bound_ratio requires r > 0");
    const double e = error_term(lat, r, false, budget);
    return e / (r / lat.alpha1 + lat.alpha2 / lat.alpha1);
}

LatticePointTable::LatticePointTable(const ReducedLattice& lat, double r_max,
                                     std::int64_t budget)
    : lat_(lat), r_max_(std::max(r_max, lat.alpha1 * (1.0 + 1e-12))) {
    check_budget(lat, r_max_, budget);
    const Form f = form_of(lat);
    const double r2max = r_max_ * r_max_;
    // enumerate half of the lattice (n > 0, plus n = 0 with m > 0); each entry
    // stands for a +/- pair
    std::vector<double> radii2;
    radii2.reserve(static_cast<size_t>(kPi * r2max / lat.covolume / 2.0) + 16);
    const std::int64_t n_max =
        static_cast<std::int64_t>(std::floor(r_max_ * lat.alpha1 / lat.covolume)) + 1;
    for (std::int64_t n = 0; n <= n_max; ++n) {
        std::int64_t lo, hi;
        if (!row_range(f, n, r2max, lo, hi)) continue;
        if (n == 0) lo = std::max<std::int64_t>(lo, 1);
        for (std::int64_t m = lo; m <= hi; ++m) radii2.push_back(f.norm2(m, n));
    }
    std::sort(radii2.begin(), radii2.end());
    // group only exact and last-ulp ties so that prefix counts agree with the
    // direct point count at every query radius
    r2_.reserve(radii2.size() / 2);
    std::vector<std::int64_t> mult;
    for (size_t i = 0; i < radii2.size();) {
        size_t j = i + 1;
        while (j < radii2.size() && radii2[j] - radii2[i] <= 4e-16 * radii2[i]) ++j;
        r2_.push_back(radii2[i]);
        mult.push_back(static_cast<std::int64_t>(2 * (j - i)));  // +/- pair
        i = j;
    }
    cum_n_.resize(r2_.size());
    cum_inv_.resize(r2_.size());
    std::int64_t cn = 0;
    double ci = 0.0;
    for (size_t i = 0; i < r2_.size(); ++i) {
        cn += mult[i];
        ci += static_cast<double>(mult[i]) / r2_[i];
        cum_n_[i] = cn;
        cum_inv_[i] = ci;
    }
}

std::size_t LatticePointTable::shells_upto(double R) const {
    const auto it = std::upper_bound(r2_.begin(), r2_.end(), R * R);
    return static_cast<std::size_t>(it - r2_.begin());
}

std::int64_t LatticePointTable::count_nonzero(double R) const {
    if (R < lat_.alpha1) return 0;
    const std::size_t idx = shells_upto(R);
    if (idx == 0) return 0;
    return cum_n_[idx - 1];
}

double LatticePointTable::error_signed(double R) const {
    if (R <= 0.0) return 0.0;
    return static_cast<double>(count_nonzero(R)) - kPi * R * R / lat_.covolume;
}

double LatticePointTable::integral_e_tail(double R) const {
    if (R >= r_max_) return 0.0;
    // below alpha1 the error term is the pure area deficit
    if (R < lat_.alpha1) {
        return integral_e_tail(lat_.alpha1) - kPi / lat_.covolume * std::log(lat_.alpha1 / R);
    }
    // int_R^rmax N* rho^-3 = N*(R)/2 (R^-2 - rmax^-2) + sum_{R<r_i<=rmax} m_i/2 (r_i^-2 - rmax^-2)
    const double inv_max2 = 1.0 / (r_max_ * r_max_);
    const size_t idx = shells_upto(R);
    const double n_at = (idx == 0) ? 0.0 : static_cast<double>(cum_n_[idx - 1]);
    const double n_all = static_cast<double>(cum_n_.back());
    const double inv_above = cum_inv_.back() - (idx == 0 ? 0.0 : cum_inv_[idx - 1]);
    const double step_part = 0.5 * n_at * (1.0 / (R * R) - inv_max2) +
                             0.5 * (inv_above - (n_all - n_at) * inv_max2);
    return step_part - kPi / lat_.covolume * std::log(r_max_ / R);
}

double LatticePointTable::tail_bound() const {
    return kGaussCircleC0 *
           (1.0 / (r_max_ * lat_.alpha1) + lat_.alpha2 / (2.0 * lat_.alpha1 * r_max_ * r_max_));
}

double KappaVariants::get(KappaVariant v) const {
    switch (v) {
        case KappaVariant::derived: return derived;
        case KappaVariant::statement: return statement;
        case KappaVariant::proof: return proof;
        case KappaVariant::conv1: return conv1;
    }
    return derived;
}

KappaVariants kappa_variants(const ReducedLattice& lat, double quad_tol,
                             std::int64_t budget) {
    if (!(quad_tol > 0.0)) throw AdmissionError("kappa requires quad_tol > 0");
    auto tail = [&](double r) {
        return 2.0 * kGaussCircleC0 *
               (1.0 / (r * lat.alpha1) + lat.alpha2 / (2.0 * lat.alpha1 * r * r));
    };
    // smallest radius with tail <= quad_tol: quadratic in 1/r
    const double p = 2.0 * kGaussCircleC0 / lat.alpha1;
    const double q = kGaussCircleC0 * lat.alpha2 / lat.alpha1;
    const double x = (-p + std::sqrt(p * p + 4.0 * q * quad_tol)) / (2.0 * q);
    const double r_needed = 1.0 / x;
    // split point at least 50*alpha2, capped by the counting budget
    const double r_budget = 0.98 * std::sqrt(static_cast<double>(budget) * lat.covolume / kPi);
    const double r_big = std::max({50.0 * lat.alpha2, 4.0 * lat.alpha1, r_needed});
    if (r_big > r_budget && tail(r_budget) > quad_tol) {
        throw NumericalError(
            "kappa tail estimate " + std::to_string(tail(std::max(r_budget, 1e-300))) +
            " exceeds quad_tol at the counting budget; raise the budget or quad_tol");
    }
    LatticePointTable table(lat, std::min(r_big, std::max(r_budget, 50.0 * lat.alpha2)),
                            budget);
    const double integral = table.integral_e_from_alpha1();
    const double log_term = kPi * (1.0 + 2.0 * std::log(lat.alpha1)) / lat.covolume;
    KappaVariants out;
    out.tail_bound = 2.0 * table.tail_bound();
    out.derived =
        2.0 * integral + kPi * (1.0 - 2.0 * std::log(lat.alpha1)) / lat.covolume;
    out.statement = 2.0 * integral - log_term;
    out.proof = integral - log_term;
    out.conv1 = integral + log_term;
    return out;
}

CuspConstant kappa(const ReducedLattice& lat, KappaVariant variant, double quad_tol,
                   std::int64_t budget) {
    const KappaVariants all = kappa_variants(lat, quad_tol, budget);
    CuspConstant out;
    out.variant = variant;
    out.kappa = all.get(variant);
    out.tail_bound = all.tail_bound;
    return out;
}

}  // namespace cusptrace
