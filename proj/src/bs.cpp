#include "cusptrace/bs.hpp"

#include <algorithm>
#include <cmath>

#include "cusptrace/errors.hpp"
#include "cusptrace/lattice.hpp"

namespace cusptrace {

double CuspedManifoldDescriptor::sum_alpha_ratio() const {
    double s = 0.0;
    for (const auto& c : cusps) s += c.lattice.alpha2 / c.lattice.alpha1;
    return s;
}

double CuspedManifoldDescriptor::sum_alpha_ratio_squared() const {
    double s = 0.0;
    for (const auto& c : cusps) {
        const double q = c.lattice.alpha2 / c.lattice.alpha1;
        s += q * q;
    }
    return s;
}

double CuspedManifoldDescriptor::sum_log_alpha1() const {
    double s = 0.0;
    for (const auto& c : cusps) s += std::log(c.lattice.alpha1 * c.height_normalization);
    return s;
}

void TowerDescriptor::validate() const {
    if (members.empty()) throw AdmissionError("tower must be nonempty");
    double prev = 0.0;
    for (const auto& m : members) {
        if (!(m.volume > 0.0)) throw AdmissionError("tower volumes must be positive");
        if (m.volume < prev * (1.0 - 1e-12))
            throw AdmissionError("tower volumes must be nondecreasing");
        prev = m.volume;
        std::int64_t last = -1;
        for (const auto& [R, count] : m.geodesic_counts) {
            if (count < last) throw AdmissionError("geodesic counts must be nondecreasing in R");
            last = count;
        }
    }
}

std::string to_string(TrendVerdict v) {
    switch (v) {
        case TrendVerdict::trending_to_zero: return "trending-to-zero";
        case TrendVerdict::not_trending: return "not-trending";
        case TrendVerdict::no_data: return "no-data";
    }
    return "no-data";
}

namespace {

// slope of log(ratio) against log(volume); shifts of either axis cancel, so
// the verdict is invariant under a global rescaling of the volumes
BsConditionReport make_condition(std::string name, std::vector<double> ratios,
                                 const std::vector<double>& volumes, double slope_threshold) {
    BsConditionReport rep;
    rep.name = std::move(name);
    rep.ratios = std::move(ratios);
    const std::size_t n = rep.ratios.size();

    bool any_zero = false;
    for (double r : rep.ratios)
        if (r <= 0.0) any_zero = true;

    if (any_zero) {
        // identically zero sequences satisfy o(vol) trivially; otherwise the
        // log-regression is undefined and only the endpoint test remains
        const bool all_zero =
            std::all_of(rep.ratios.begin(), rep.ratios.end(), [](double r) { return r == 0.0; });
        rep.slope = 0.0;
        rep.verdict = all_zero ? TrendVerdict::trending_to_zero
                               : (rep.ratios.back() < rep.ratios.front()
                                      ? TrendVerdict::trending_to_zero
                                      : TrendVerdict::not_trending);
        return rep;
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(volumes[i]);
        const double y = std::log(rep.ratios[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    rep.slope = (std::abs(denom) < 1e-12 * std::max(1.0, sxx)) ? 0.0
                                                               : (n * sxy - sx * sy) / denom;
    const bool decreasing_endpoints = rep.ratios.back() < rep.ratios.front();
    rep.verdict = (rep.slope <= -slope_threshold && decreasing_endpoints)
                      ? TrendVerdict::trending_to_zero
                      : TrendVerdict::not_trending;
    return rep;
}

}  // namespace

BsReport bs_report(const TowerDescriptor& t, const std::vector<double>& R_list,
                   double slope_threshold) {
    t.validate();
    if (t.members.size() < 2) throw AdmissionError("bs_report needs a tower of length >= 2");
    BsReport out;
    for (const auto& m : t.members) out.volumes.push_back(m.volume);

    const std::size_t n = t.members.size();
    std::vector<double> sumcusp(n), square(n), cusps(n), logalpha(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& m = t.members[i];
        sumcusp[i] = m.sum_alpha_ratio() / m.volume;
        square[i] = m.sum_alpha_ratio_squared() / m.volume;
        cusps[i] = static_cast<double>(m.cusps.size()) / m.volume;
        logalpha[i] = m.sum_log_alpha1() / m.volume;
    }
    out.conditions.push_back(make_condition("sumcusp", sumcusp, out.volumes, slope_threshold));
    out.conditions.push_back(make_condition("square", square, out.volumes, slope_threshold));
    out.conditions.push_back(make_condition("cusps", cusps, out.volumes, slope_threshold));
    out.conditions.push_back(
        make_condition("log_alpha1", logalpha, out.volumes, slope_threshold));

    for (double R : R_list) {
        BsConditionReport rep;
        rep.name = "geodesics_R=" + std::to_string(R);
        bool have_all = true;
        std::vector<double> ratios(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto it = t.members[i].geodesic_counts.find(R);
            if (it == t.members[i].geodesic_counts.end()) {
                have_all = false;
                break;
            }
            ratios[i] = static_cast<double>(it->second) / t.members[i].volume;
        }
        if (!have_all) {
            rep.verdict = TrendVerdict::no_data;
            out.conditions.push_back(rep);
        } else {
            out.conditions.push_back(
                make_condition(rep.name, ratios, out.volumes, slope_threshold));
        }
    }
    return out;
}

std::vector<bool> cusp_uniformity(const TowerDescriptor& t, double C) {
    if (!(C > 0.0)) throw AdmissionError("cusp uniformity needs C > 0");
    t.validate();
    std::vector<bool> flags;
    flags.reserve(t.members.size());
    for (const auto& m : t.members) {
        bool ok = true;
        for (const auto& c : m.cusps) {
            if (c.lattice.covolume > C * c.lattice.alpha1 * c.lattice.alpha1) ok = false;
        }
        flags.push_back(ok);
    }
    return flags;
}

TruncationHeights truncation_schedule(const CuspedManifoldDescriptor& m,
                                      std::optional<double> square_sum) {
    TruncationHeights out;
    if (m.cusps.empty()) return out;
    const double s = square_sum.value_or(m.sum_alpha_ratio_squared());
    if (!(s > 0.0)) throw AdmissionError("truncation schedule needs square_sum > 0");
    const double a = std::pow(m.volume / s, 0.1);
    out.Y.reserve(m.cusps.size());
    for (const auto& c : m.cusps) out.Y.push_back(std::max(1.0, c.lattice.alpha1 * a));
    return out;
}

TowerDescriptor congruence_tower(const CuspedManifoldDescriptor& base, int levels,
                                 const std::function<std::int64_t(int)>& index_model,
                                 const std::function<std::int64_t(int)>& cusp_model) {
    if (levels < 1) throw AdmissionError("tower needs at least one level");
    if (!index_model || !cusp_model) throw AdmissionError("tower needs index and cusp models");
    TowerDescriptor tower;
    std::int64_t prev_index = 0;
    for (int n = 1; n <= levels; ++n) {
        const std::int64_t index = index_model(n);
        const std::int64_t reps = cusp_model(n);
        if (index < 1 || reps < 1) throw AdmissionError("index and cusp models must be >= 1");
        if (index < prev_index) throw AdmissionError("index model must be nondecreasing");
        prev_index = index;
        CuspedManifoldDescriptor member;
        member.volume = base.volume * static_cast<double>(index);
        for (const auto& c : base.cusps) {
            CuspGeometry scaled{scale(c.lattice, n), c.height_normalization};
            for (std::int64_t k = 0; k < reps; ++k) member.cusps.push_back(scaled);
        }
        tower.members.push_back(std::move(member));
    }
    return tower;
}

}  // namespace cusptrace
