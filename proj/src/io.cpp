#include "cusptrace/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cusptrace/errors.hpp"

namespace cusptrace {

namespace {

double require_number(const Json& j, const std::string& field) {
    if (!j.contains(field) || !j[field].is_number())
        throw ParseError("missing or non-numeric field \"" + field + "\"");
    return j[field].get<double>();
}

Vec2 parse_vec2(const Json& j, const std::string& field) {
    if (!j.contains(field) || !j[field].is_array() || j[field].size() != 2 ||
        !j[field][0].is_number() || !j[field][1].is_number())
        throw ParseError("field \"" + field + "\" must be a [x, y] pair of numbers");
    return Vec2{j[field][0].get<double>(), j[field][1].get<double>()};
}

}  // namespace

void RunConfig::validate() const {
    if (!(quad_abs_tol > 0.0) || !(quad_rel_tol > 0.0) || !(t0 > 0.0) ||
        !(slope_threshold > 0.0) || !(consistency_tol > 0.0) || !(kappa_tol > 0.0))
        throw ParseError("config tolerances must be positive");
    if (counting_budget < 10'000) throw ParseError("counting_budget must be >= 1e4");
    if (jobs < 1) throw ParseError("jobs must be >= 1");
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

RunConfig parse_config(const Json& j) {
    RunConfig cfg;
    if (j.contains("quad_abs_tol")) cfg.quad_abs_tol = require_number(j, "quad_abs_tol");
    if (j.contains("quad_rel_tol")) cfg.quad_rel_tol = require_number(j, "quad_rel_tol");
    if (j.contains("t0")) cfg.t0 = require_number(j, "t0");
    if (j.contains("slope_threshold"))
        cfg.slope_threshold = require_number(j, "slope_threshold");
    if (j.contains("counting_budget"))
        cfg.counting_budget = static_cast<std::int64_t>(require_number(j, "counting_budget"));
    if (j.contains("consistency_tol"))
        cfg.consistency_tol = require_number(j, "consistency_tol");
    if (j.contains("kappa_tol")) cfg.kappa_tol = require_number(j, "kappa_tol");
    if (j.contains("seed")) cfg.seed = static_cast<std::uint64_t>(require_number(j, "seed"));
    if (j.contains("jobs")) cfg.jobs = static_cast<int>(require_number(j, "jobs"));
    if (j.contains("output_format")) {
        const std::string f = j["output_format"].get<std::string>();
        if (f == "csv")
            cfg.output_format = OutputFormat::csv;
        else if (f == "json")
            cfg.output_format = OutputFormat::json;
        else
            throw ParseError("output_format must be \"csv\" or \"json\"");
    }
    cfg.validate();
    return cfg;
}

LatticeBasis parse_lattice(const Json& j) {
    LatticeBasis basis;
    basis.b1 = parse_vec2(j, "b1");
    basis.b2 = parse_vec2(j, "b2");
    return basis;
}

std::vector<LatticeBasis> parse_lattice_batch(const Json& j) {
    std::vector<LatticeBasis> out;
    if (j.contains("lattices")) {
        if (!j["lattices"].is_array()) throw ParseError("\"lattices\" must be an array");
        for (const auto& item : j["lattices"]) out.push_back(parse_lattice(item));
    } else {
        out.push_back(parse_lattice(j));
    }
    return out;
}

KernelProfile parse_profile(const Json& j) {
    if (!j.contains("profile") || !j["profile"].is_string())
        throw ParseError("profile descriptor needs a \"profile\" name");
    const std::string name = j["profile"].get<std::string>();
    if (name == "gaussian") {
        const double scale = j.contains("scale") ? require_number(j, "scale") : 1.0;
        return gaussian_profile(scale);
    }
    if (name == "exp") {
        const double rate = j.contains("rate") ? require_number(j, "rate") : 10.0;
        return exponential_profile(rate);
    }
    throw ParseError("unknown profile \"" + name + "\" (expected gaussian or exp)");
}

ManifoldSummary parse_manifold(const Json& j) {
    ManifoldSummary m;
    m.volume = require_number(j, "volume");
    if (j.contains("identity_density")) m.identity_density = require_number(j, "identity_density");
    if (j.contains("loxodromic_value")) {
        const double v = require_number(j, "loxodromic_value");
        m.loxodromic_term = [v](const KernelProfile&) { return v; };
    }
    if (j.contains("cusps")) {
        if (!j["cusps"].is_array()) throw ParseError("\"cusps\" must be an array");
        for (const auto& c : j["cusps"]) {
            CuspGeometry g;
            g.lattice = gauss_reduce(parse_lattice(c));
            if (c.contains("height_normalization"))
                g.height_normalization = require_number(c, "height_normalization");
            m.cusps.push_back(g);
        }
    }
    return m;
}

TraceModel parse_trace_model(const Json& j) {
    TraceModel model;
    if (j.contains("t0")) model.t0 = require_number(j, "t0");

    if (j.contains("spectrum")) {
        if (!j["spectrum"].is_array()) throw ParseError("\"spectrum\" must be an array");
        for (const auto& pair : j["spectrum"]) {
            if (!pair.is_array() || pair.size() != 2)
                throw ParseError("\"spectrum\" entries must be [lambda, mult] pairs");
            model.spectrum.eigenvalues.emplace_back(
                pair[0].get<double>(), static_cast<std::int64_t>(pair[1].get<double>()));
        }
        model.spectrum.validate();
    }

    std::map<int, double> a, b;
    auto read_map = [](const Json& src, const char* name, std::map<int, double>& dst) {
        if (!src.is_object()) throw ParseError(std::string("\"") + name + "\" must be an object");
        for (const auto& [key, val] : src.items()) {
            try {
                dst[std::stoi(key)] = val.get<double>();
            } catch (const std::exception&) {
                throw ParseError(std::string("bad key in \"") + name + "\": " + key);
            }
        }
    };
    if (j.contains("a")) read_map(j["a"], "a", a);
    if (j.contains("b")) read_map(j["b"], "b", b);

    const int order = j.contains("H_order") ? static_cast<int>(require_number(j, "H_order")) : 0;
    const double bound = j.contains("H_bound") ? require_number(j, "H_bound") : 0.0;
    const double t_max = std::max(2.0 * model.t0, 2.0);

    // remainder: what the declared series misses of the spectrum's heat trace
    DiscreteSpectrum spec_copy = model.spectrum;
    std::map<int, double> a_copy = a, b_copy = b;
    auto H = [spec_copy, a_copy, b_copy](double t) {
        double v = spec_copy.heat_trace(t);
        const double lt = std::log(t);
        for (const auto& [k, c] : a_copy) v -= c * std::pow(t, 0.5 * (k - 3));
        for (const auto& [k, c] : b_copy) v -= c * std::pow(t, 0.5 * (k - 1)) * lt;
        return v;
    };
    model.expansion = SmallTimeExpansion(std::move(a), std::move(b), H, bound, order, t_max);
    return model;
}

ScatteringModel parse_scattering_model(const Json& j) {
    if (!j.contains("type") || !j["type"].is_string())
        throw ParseError("scattering model needs a \"type\"");
    const std::string type = j["type"].get<std::string>();
    if (type == "constant") {
        if (!j.contains("matrix") || !j["matrix"].is_array())
            throw ParseError("constant model needs a \"matrix\"");
        const auto& rows = j["matrix"];
        const int n = static_cast<int>(rows.size());
        Matrix m(n, n);
        for (int r = 0; r < n; ++r) {
            if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != n)
                throw ParseError("\"matrix\" must be square");
            for (int c = 0; c < n; ++c) m(r, c) = rows[r][c].get<double>();
        }
        const int cusps = j.contains("cusps") ? static_cast<int>(require_number(j, "cusps")) : 1;
        return constant_model(m, cusps);
    }
    if (type == "mobius_scalar") {
        const double pole = j.contains("pole") ? require_number(j, "pole") : 1.0;
        return mobius_scalar_model(pole);
    }
    if (type == "block") {
        if (!j.contains("blocks") || j["blocks"].empty())
            throw ParseError("block model needs a nonempty \"blocks\" array or object");
        std::vector<ScatteringModel> blocks;
        if (j["blocks"].is_array()) {
            for (const auto& b : j["blocks"]) blocks.push_back(parse_scattering_model(b));
        } else if (j["blocks"].is_object()) {
            // weight-keyed form {l: model}; the direct sum runs over ascending l
            for (const auto& [key, val] : j["blocks"].items()) {
                (void)key;
                blocks.push_back(parse_scattering_model(val));
            }
        } else {
            throw ParseError("\"blocks\" must be an array or an object keyed by weight");
        }
        return block_diag_model(blocks);
    }
    throw ParseError("unknown scattering model type \"" + type + "\"");
}

WeightBlockModel parse_weight_block_model(const Json& j) {
    if (!j.contains("blocks") || !j["blocks"].is_object() || j["blocks"].empty())
        throw ParseError("weight block model needs a nonempty \"blocks\" object");
    WeightBlockModel out;
    for (const auto& [key, val] : j["blocks"].items()) {
        int l = 0;
        try {
            l = std::stoi(key);
        } catch (const std::exception&) {
            throw ParseError("block key must be an integer weight, got \"" + key + "\"");
        }
        out.blocks.emplace(l, parse_scattering_model(val));
    }
    return out;
}

TowerDescriptor parse_tower(const Json& j) {
    const Json& arr = j.is_array() ? j : (j.contains("members") ? j["members"] : j);
    if (!arr.is_array()) throw ParseError("tower file must be an array of members");
    TowerDescriptor t;
    for (const auto& m : arr) {
        CuspedManifoldDescriptor d;
        d.volume = require_number(m, "volume");
        if (m.contains("cusps")) {
            for (const auto& c : m["cusps"]) {
                CuspGeometry g;
                g.lattice = gauss_reduce(parse_lattice(c));
                if (c.contains("height_normalization"))
                    g.height_normalization = require_number(c, "height_normalization");
                d.cusps.push_back(g);
            }
        }
        if (m.contains("geodesic_counts")) {
            for (const auto& [key, val] : m["geodesic_counts"].items()) {
                try {
                    d.geodesic_counts[std::stod(key)] =
                        static_cast<std::int64_t>(val.get<double>());
                } catch (const std::exception&) {
                    throw ParseError("bad geodesic_counts key: " + key);
                }
            }
        }
        t.members.push_back(std::move(d));
    }
    t.validate();
    return t;
}

Json tower_to_json(const TowerDescriptor& t) {
    Json arr = Json::array();
    for (const auto& m : t.members) {
        Json member;
        member["volume"] = m.volume;
        Json cusps = Json::array();
        for (const auto& c : m.cusps) {
            Json lat;
            lat["b1"] = {c.lattice.b1[0], c.lattice.b1[1]};
            lat["b2"] = {c.lattice.b2[0], c.lattice.b2[1]};
            if (c.height_normalization != 1.0)
                lat["height_normalization"] = c.height_normalization;
            cusps.push_back(lat);
        }
        member["cusps"] = cusps;
        if (!m.geodesic_counts.empty()) {
            Json counts;
            for (const auto& [R, n] : m.geodesic_counts)
                counts[format_json_double(R)] = n;
            member["geodesic_counts"] = counts;
        }
        arr.push_back(member);
    }
    return arr;
}

std::string format_json_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string format_csv_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string CsvTable::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 == header.size() ? "\n" : ",");
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 == row.size() ? "\n" : ",");
    return out.str();
}

}  // namespace cusptrace
