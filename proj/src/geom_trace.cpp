#include "cusptrace/geom_trace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cusptrace/errors.hpp"
#include "cusptrace/special.hpp"

namespace cusptrace {

namespace {

// Table radius needed by the closed form and the defect: the profile kills
// the integrand beyond r_cut, and kappa wants at least 50 alpha2.
double table_radius(const ReducedLattice& lat, const KernelProfile& p, double max_Y) {
    const double rc = p.r_cut(1e-16);
    return std::max({rc * max_Y * 1.05, 50.0 * lat.alpha2, 4.0 * lat.alpha1});
}

double kappa_from_table(const LatticePointTable& table) {
    const ReducedLattice& lat = table.lattice();
    return 2.0 * table.integral_e_from_alpha1() +
           kPi * (1.0 - 2.0 * std::log(lat.alpha1)) / lat.covolume;
}

}  // namespace

KernelProfile::KernelProfile(std::function<double(double)> fn, double rate, double constant)
    : h(std::move(fn)), decay_rate(rate), decay_constant(constant) {
    if (!h) throw AdmissionError("kernel profile needs a callable");
    if (decay_rate < 10.0) throw AdmissionError("profile decay certificate needs rate >= 10");
    if (!(decay_constant > 0.0)) throw AdmissionError("profile decay constant must be positive");
    for (int i = 0; i <= 512; ++i) {
        const double l = 100.0 * i / 512.0;
        if (std::abs(h(l)) > decay_constant * std::exp(-decay_rate * l) * (1.0 + 1e-9)) {
            throw AdmissionError("profile violates its decay certificate at l = " +
                                 std::to_string(l));
        }
    }
}

double KernelProfile::r_cut(double tol) const {
    // |h(ell(r))| <= C e^{-A ell(r)}; ell(r) = 4 asinh(r/2)
    const double l_needed = std::log(decay_constant / tol) / decay_rate;
    if (l_needed <= 0.0) return 0.0;
    return 2.0 * std::sinh(0.25 * l_needed);
}

KernelProfile gaussian_profile(double scale) {
    if (!(scale > 0.0)) throw AdmissionError("gaussian profile needs scale > 0");
    const double s2 = scale * scale;
    // sup of exp(10 l - (l/s)^2) is exp(25 s^2) at l = 5 s^2
    return KernelProfile([s2](double l) { return std::exp(-l * l / s2); }, 10.0,
                         std::exp(25.0 * s2));
}

KernelProfile exponential_profile(double rate) {
    if (rate < 10.0) throw AdmissionError("exponential profile needs rate >= 10");
    return KernelProfile([rate](double l) { return std::exp(-rate * l); }, rate, 1.0);
}

double profile_integral_r(const KernelProfile& p, const QuadOptions& opt) {
    const auto& h = p.h;
    QuadResult q = integrate_half_line([&h](double r) { return r * h(ell(r)); }, 0.0, opt);
    require_quadrature(q, 1e-6, "int r h(ell(r)) dr");
    return q.value;
}

double profile_integral_rlog(const KernelProfile& p, const QuadOptions& opt) {
    const auto& h = p.h;
    QuadResult q = integrate_half_line(
        [&h](double r) { return r <= 0.0 ? 0.0 : r * std::log(r) * h(ell(r)); }, 0.0, opt);
    require_quadrature(q, 1e-6, "int r log r h(ell(r)) dr");
    return q.value;
}

double unipotent_bruteforce(const ReducedLattice& lat, const KernelProfile& p, double Y,
                            double tol, std::int64_t budget) {
    if (Y < 1.0) throw AdmissionError("unipotent integral needs Y >= 1");
    if (!(tol > 0.0)) throw AdmissionError("tolerance must be positive");

    // shells with r > c*y contribute below 1e-20 per point
    const double c_rel = std::max(3.0, p.r_cut(1e-20));
    LatticePointTable table(lat, c_rel * Y, budget);

    // start of the y-range: first shell already below 1e-20 per point
    const double l_needed = std::log(p.decay_constant * 1e20) / p.decay_rate;
    const double y_min = std::min(0.5 * Y, lat.alpha1 / (2.0 * std::sinh(0.25 * l_needed)));

    const auto& h = p.h;
    auto shell_sum = [&](double y) {
        const std::size_t n = table.shells_upto(c_rel * y);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = std::sqrt(table.shell_radius2(i));
            acc += static_cast<double>(table.shell_multiplicity(i)) * h(ell(r / y));
        }
        return acc / (y * y * y);
    };
    QuadOptions opt;
    opt.abs_tol = tol * 1e-4;
    opt.rel_tol = tol;
    opt.max_intervals = 4000;
    QuadResult q = integrate(shell_sum, y_min, Y, opt);
    if (!q.converged && q.error > tol * std::max(1.0, std::abs(q.value)))
        throw NumericalError("unipotent brute force did not reach the requested tolerance");
    return lat.covolume * q.value;
}

double unipotent_closed_form(const ReducedLattice& lat, const KernelProfile& p, double Y,
                             ClosedFormVariant variant, const QuadOptions& opt,
                             std::int64_t budget) {
    if (Y < 1.0) throw AdmissionError("unipotent integral needs Y >= 1");
    LatticePointTable table(lat, table_radius(lat, p, Y), budget);
    const double rc = p.r_cut(1e-16);
    const double vol = lat.covolume;
    const auto& h = p.h;

    QuadResult ilogY = integrate_half_line(
        [&h, Y](double r) { return r <= 0.0 ? 0.0 : r * std::log(r * Y) * h(ell(r)); }, 0.0, opt);
    require_quadrature(ilogY, 1e-6, "int r log(rY) h dr");

    if (variant == ClosedFormVariant::derived) {
        const double kappa_d = kappa_from_table(table);
        const double i_r = profile_integral_r(p, opt);
        QuadResult rem1 = integrate(
            [&](double r) {
                if (r <= 0.0 || r >= rc) return 0.0;
                const double R = r * Y;
                return r * h(ell(r)) * table.error_signed(R) / (R * R);
            },
            0.0, rc, opt);
        QuadResult rem2 = integrate(
            [&](double r) {
                if (r <= 0.0 || r >= rc) return 0.0;
                return r * h(ell(r)) * table.integral_e_tail(r * Y);
            },
            0.0, rc, opt);
        require_quadrature(rem1, 1e-5, "closed-form error-term remainder");
        require_quadrature(rem2, 1e-5, "closed-form tail remainder");
        return 2.0 * kPi * ilogY.value + kappa_d * vol * i_r + vol * rem1.value -
               2.0 * vol * rem2.value;
    }

    // the proposition as printed: unweighted kappa integrand, kappa without
    // the factor 2, single tail term cut at max(alpha1, rY), no vol factors
    // on the remainders
    const double kappa_printed = table.integral_e_from_alpha1() -
                                 kPi * (1.0 + 2.0 * std::log(lat.alpha1)) / vol;
    QuadResult i_plain = integrate_half_line([&h](double r) { return h(ell(r)); }, 0.0, opt);
    require_quadrature(i_plain, 1e-6, "int h(ell(r)) dr");
    QuadResult rem1 = integrate(
        [&](double r) {
            if (r <= 0.0 || r >= rc) return 0.0;
            const double R = r * Y;
            return r * h(ell(r)) * table.error_signed(R) / (R * R);
        },
        0.0, rc, opt);
    QuadResult rem2 = integrate(
        [&](double r) {
            if (r <= 0.0 || r >= rc) return 0.0;
            return r * h(ell(r)) * table.integral_e_tail(std::max(lat.alpha1, r * Y));
        },
        0.0, rc, opt);
    return 2.0 * kPi * ilogY.value + kappa_printed * vol * i_plain.value - rem2.value +
           rem1.value;
}

double cusp_regularized_terms(const std::vector<CuspGeometry>& cusps, const KernelProfile& p,
                              const QuadOptions& opt, std::int64_t budget) {
    if (cusps.empty()) return 0.0;
    const double i_r = profile_integral_r(p, opt);
    const double i_rlog = profile_integral_rlog(p, opt);
    double kappa_sum = 0.0;
    for (const auto& cusp : cusps) {
        const ReducedLattice& lat = cusp.lattice;
        const double r_big = std::max(50.0 * lat.alpha2, 1500.0 * lat.alpha1);
        LatticePointTable table(lat, r_big, budget);
        kappa_sum += kappa_from_table(table) * lat.covolume;
    }
    return 2.0 * kPi * static_cast<double>(cusps.size()) * i_rlog + kappa_sum * i_r;
}

TraceBreakdown regularized_trace(const ManifoldSummary& m, const KernelProfile& p,
                                 const QuadOptions& opt, std::int64_t budget) {
    if (!(m.volume > 0.0)) throw AdmissionError("manifold volume must be positive");
    TraceBreakdown out;
    out.identity = m.volume * m.identity_density;
    out.loxodromic = m.loxodromic_term ? m.loxodromic_term(p) : 0.0;
    if (!m.cusps.empty()) {
        const double i_r = profile_integral_r(p, opt);
        const double i_rlog = profile_integral_rlog(p, opt);
        out.log_term = 2.0 * kPi * static_cast<double>(m.cusps.size()) * i_rlog;
        for (const auto& cusp : m.cusps) {
            const ReducedLattice& lat = cusp.lattice;
            const double r_big = std::max({50.0 * lat.alpha2, 1500.0 * lat.alpha1});
            LatticePointTable table(lat, r_big, budget);
            out.kappa_term += kappa_from_table(table) * lat.covolume * i_r;
        }
    }
    out.total = out.identity + out.loxodromic + out.log_term + out.kappa_term;
    return out;
}

double truncation_defect(const std::vector<CuspGeometry>& cusps, const KernelProfile& p,
                         const TruncationHeights& Y, ClosedFormVariant variant,
                         const QuadOptions& opt, std::int64_t budget) {
    if (Y.Y.size() != cusps.size())
        throw AdmissionError("need one truncation height per cusp");
    const double i_r = profile_integral_r(p, opt);
    const double rc = p.r_cut(1e-16);
    const auto& h = p.h;
    double defect = 0.0;
    for (std::size_t j = 0; j < cusps.size(); ++j) {
        const double Yj = Y.Y[j];
        if (Yj < 1.0) throw AdmissionError("truncation heights must be >= 1");
        const ReducedLattice& lat = cusps[j].lattice;
        const double vol = lat.covolume;
        LatticePointTable table(lat, table_radius(lat, p, Yj), budget);
        defect += 2.0 * kPi * std::log(Yj) * i_r;
        if (variant == ClosedFormVariant::derived) {
            QuadResult t2 = integrate(
                [&](double r) {
                    if (r <= 0.0 || r >= rc) return 0.0;
                    const double R = r * Yj;
                    return r * h(ell(r)) * table.error_signed(R) / (R * R);
                },
                0.0, rc, opt);
            QuadResult t3 = integrate(
                [&](double r) {
                    if (r <= 0.0 || r >= rc) return 0.0;
                    return r * h(ell(r)) * table.integral_e_tail(r * Yj);
                },
                0.0, rc, opt);
            require_quadrature(t2, 1e-5, "defect error-term integral");
            require_quadrature(t3, 1e-5, "defect tail integral");
            defect += vol * t2.value - 2.0 * vol * t3.value;
        } else {
            // Tr_Y - Tr_R as displayed: + vol int r h int_max(alpha1, rY) E
            // rho^-3, + vol int E(rY)/(rY)^2 h (no r weight)
            QuadResult t3 = integrate(
                [&](double r) {
                    if (r <= 0.0 || r >= rc) return 0.0;
                    return r * h(ell(r)) * table.integral_e_tail(std::max(lat.alpha1, r * Yj));
                },
                0.0, rc, opt);
            QuadResult t2 = integrate(
                [&](double r) {
                    if (r <= 0.0 || r >= rc) return 0.0;
                    const double R = r * Yj;
                    return h(ell(r)) * table.error_signed(R) / (R * R);
                },
                0.0, rc, opt);
            defect += vol * t3.value + vol * t2.value;
        }
    }
    return defect;
}

}  // namespace cusptrace
