#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cusptrace/bs.hpp"
#include "cusptrace/geom_trace.hpp"
#include "cusptrace/lattice.hpp"
#include "cusptrace/mellin.hpp"
#include "cusptrace/scattering.hpp"

namespace cusptrace {

using Json = nlohmann::json;

enum class OutputFormat { csv, json };

struct RunConfig {
    double quad_abs_tol = 1e-10;
    double quad_rel_tol = 1e-8;
    double t0 = 1.0;
    double slope_threshold = 0.1;
    std::int64_t counting_budget = kDefaultCountingBudget;
    OutputFormat output_format = OutputFormat::csv;
    double consistency_tol = 1e-6;
    double kappa_tol = 1e-2;
    std::uint64_t seed = 0;
    int jobs = 1;

    QuadOptions quad() const { return QuadOptions{quad_abs_tol, quad_rel_tol, 8192}; }
    void validate() const;
};

Json load_json_file(const std::string& path);
RunConfig parse_config(const Json& j);

// {"b1": [x, y], "b2": [x, y]}
LatticeBasis parse_lattice(const Json& j);
std::vector<LatticeBasis> parse_lattice_batch(const Json& j);  // single or {"lattices": [...]}

// {"profile": "gaussian", "scale": s} | {"profile": "exp", "rate": A}
KernelProfile parse_profile(const Json& j);

// {"volume": v, "identity_density": d, "loxodromic_value": x,
//  "cusps": [lattice descriptors]}
ManifoldSummary parse_manifold(const Json& j);

// {"a": {"k": coeff}, "b": {"k": coeff}, "spectrum": [[lambda, mult], ...],
//  "t0": x, "H_order": m, "H_bound": C}
// The remainder is the difference between the spectrum's heat trace and the
// declared series, so the descriptor is self-contained.
struct TraceModel {
    SmallTimeExpansion expansion;
    DiscreteSpectrum spectrum;
    double t0 = 1.0;
};
TraceModel parse_trace_model(const Json& j);

// {"type": "constant", "matrix": [[..],..]} | {"type": "mobius_scalar", "pole": p}
// | {"type": "block", "blocks": [model, ...] or {"l": model, ...}}
ScatteringModel parse_scattering_model(const Json& j);

// weight-keyed blocks {"l": model, ...} for the d_l-weighted aggregates
WeightBlockModel parse_weight_block_model(const Json& j);

// [{"volume": v, "cusps": [...], "geodesic_counts": {"R": n}}, ...]
TowerDescriptor parse_tower(const Json& j);
Json tower_to_json(const TowerDescriptor& t);

// deterministic float formatting: 17 significant digits for JSON payloads,
// 12 for CSV cells
std::string format_json_double(double x);
std::string format_csv_double(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::string to_string() const;
};

}  // namespace cusptrace
