#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cusptrace/hyperbolic.hpp"

namespace cusptrace {

struct CuspedManifoldDescriptor {
    double volume = 1.0;
    std::vector<CuspGeometry> cusps;
    std::map<double, std::int64_t> geodesic_counts;  // R -> #closed geodesics of length <= R

    double sum_alpha_ratio() const;         // sum alpha2/alpha1
    double sum_alpha_ratio_squared() const; // sum (alpha2/alpha1)^2
    double sum_log_alpha1() const;
};

struct TowerDescriptor {
    std::vector<CuspedManifoldDescriptor> members;

    void validate() const;  // nonempty, positive nondecreasing volumes
};

enum class TrendVerdict { trending_to_zero, not_trending, no_data };

std::string to_string(TrendVerdict v);

struct BsConditionReport {
    std::string name;
    std::vector<double> ratios;  // one per member; quantity / volume
    double slope = 0.0;          // least-squares slope of log ratio vs log volume
    TrendVerdict verdict = TrendVerdict::no_data;
};

struct BsReport {
    std::vector<double> volumes;
    std::vector<BsConditionReport> conditions;
};

// Ratios and finite-sequence trend verdicts for the convergence conditions:
// sum(alpha2/alpha1)/vol, sum(alpha2/alpha1)^2/vol, cusps/vol,
// sum log alpha1 / vol, and geodesic_counts(R)/vol for each requested R.
// Verdict: trending iff slope <= -slope_threshold and last ratio < first.
BsReport bs_report(const TowerDescriptor& t, const std::vector<double>& R_list,
                   double slope_threshold = 0.1);

// vol(L) <= C alpha1(L)^2 for every cusp of a member.
std::vector<bool> cusp_uniformity(const TowerDescriptor& t, double C);

// a = (volume / square_sum)^{1/10}; Y_j = max(1, alpha1_j * a).
TruncationHeights truncation_schedule(const CuspedManifoldDescriptor& m,
                                      std::optional<double> square_sum = std::nullopt);

// Synthetic congruence-style tower: member n scales every base cusp lattice
// by n, repeats it cusp_model(n) times, and multiplies the volume by
// index_model(n).
TowerDescriptor congruence_tower(const CuspedManifoldDescriptor& base, int levels,
                                 const std::function<std::int64_t(int)>& index_model,
                                 const std::function<std::int64_t(int)>& cusp_model);

}  // namespace cusptrace
