// cusptrace: batch front end for the cusped-manifold spectral numerics library.
// Subcommands: lattice, rep, trace, torsion, ms-limit, bs-report, tower-gen.
// Exit codes: 0 success, 2 parse error, 3 numerical failure, 4 admission failure.

#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cusptrace/bs.hpp"
#include "cusptrace/errors.hpp"
#include "cusptrace/geom_trace.hpp"
#include "cusptrace/hyperbolic.hpp"
#include "cusptrace/io.hpp"
#include "cusptrace/lattice.hpp"
#include "cusptrace/mellin.hpp"
#include "cusptrace/rep_theory.hpp"
#include "cusptrace/scattering.hpp"

namespace ct = cusptrace;

namespace {

// runs fn over [0, n) with up to `jobs` threads; results keep input order
template <typename Fn>
auto ordered_parallel(std::size_t n, int jobs, Fn fn) {
    using R = decltype(fn(std::size_t{0}));
    std::vector<R> results(n);
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
        return results;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            results[i] = fn(i);
        }
    };
    std::vector<std::future<void>> pool;
    for (int t = 0; t < jobs; ++t) pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();
    return results;
}

void emit(const ct::RunConfig& cfg, const ct::CsvTable& table, const ct::Json& as_json) {
    if (cfg.output_format == ct::OutputFormat::csv)
        std::cout << table.to_string();
    else
        std::cout << as_json.dump(2) << "\n";
}

ct::Json row_object(const std::vector<std::string>& header, const std::vector<double>& row) {
    ct::Json obj;
    for (std::size_t i = 0; i < header.size(); ++i)
        obj[header[i]] = ct::format_json_double(row[i]);
    return obj;
}

int cmd_lattice(const ct::RunConfig& cfg, const std::string& input,
                const std::vector<double>& radii) {
    const ct::Json j = ct::load_json_file(input);
    const auto bases = ct::parse_lattice_batch(j);
    std::vector<double> rs = radii;
    if (j.contains("radii")) {
        rs.clear();
        for (const auto& r : j["radii"]) rs.push_back(r.get<double>());
    }

    auto one = [&](std::size_t i) {
        const ct::ReducedLattice lat = ct::gauss_reduce(bases[i]);
        std::vector<double> row{lat.alpha1, lat.alpha2, lat.covolume, lat.uniformity_ratio(),
                                lat.alpha2 / lat.alpha1};
        for (auto variant : {ct::KappaVariant::derived, ct::KappaVariant::statement,
                             ct::KappaVariant::proof, ct::KappaVariant::conv1})
            row.push_back(ct::kappa(lat, variant, cfg.kappa_tol, cfg.counting_budget).kappa);
        for (double r : rs) row.push_back(ct::error_term(lat, r, true, cfg.counting_budget));
        return row;
    };
    const auto rows = ordered_parallel(bases.size(), cfg.jobs, one);

    std::vector<std::string> header{"alpha1",        "alpha2",      "covolume",
                                    "uniformity",    "alpha_ratio", "kappa_derived",
                                    "kappa_statement", "kappa_proof", "kappa_conv1"};
    for (double r : rs) header.push_back("E_signed_r=" + ct::format_csv_double(r));
    ct::CsvTable table;
    table.header = header;
    ct::Json jrows = ct::Json::array();
    for (const auto& row : rows) {
        std::vector<std::string> cells;
        for (double v : row) cells.push_back(ct::format_csv_double(v));
        table.rows.push_back(cells);
        jrows.push_back(row_object(header, row));
    }
    emit(cfg, table, jrows);
    return 0;
}

int cmd_rep(const ct::RunConfig& cfg, int n1, int n2) {
    const ct::RepWeights w{n1, n2};
    const auto spec = ct::weight_multiplicities(w);
    ct::CsvTable table;
    table.header = {"quantity", "value"};
    ct::Json obj;
    auto push = [&](const std::string& name, const std::string& value) {
        table.rows.push_back({name, value});
        obj[name] = value;
    };
    push("dimension", std::to_string(ct::dimension(w)));
    push("casimir", std::to_string(ct::casimir(w)));
    push("l2_torsion_coefficient", ct::format_csv_double(ct::l2_torsion_coefficient(w)));
    if (n1 != n2) {
        push("spectral_gap_p0", ct::format_csv_double(ct::spectral_gap(w, 0)));
        push("spectral_gap_p1", ct::format_csv_double(ct::spectral_gap(w, 1)));
    } else {
        push("spectral_gap_p0", "n/a (not strongly acyclic)");
        push("spectral_gap_p1", "n/a (not strongly acyclic)");
    }
    std::string weights;
    for (const auto& [m, d] : spec.d) weights += std::to_string(m) + ":" + std::to_string(d) + " ";
    push("weight_multiplicities", weights);
    emit(cfg, table, obj);
    return 0;
}

int cmd_trace(const ct::RunConfig& cfg, const std::string& manifold_file,
              const std::string& profile_file, bool oracle) {
    const ct::ManifoldSummary m = ct::parse_manifold(ct::load_json_file(manifold_file));
    const ct::KernelProfile p = ct::parse_profile(ct::load_json_file(profile_file));
    const auto opt = cfg.quad();

    const ct::TraceBreakdown br = ct::regularized_trace(m, p, opt, cfg.counting_budget);

    ct::CuspedManifoldDescriptor desc;
    desc.volume = m.volume;
    desc.cusps = m.cusps;
    const ct::TruncationHeights Y = ct::truncation_schedule(desc);
    const double defect =
        m.cusps.empty() ? 0.0
                        : ct::truncation_defect(m.cusps, p, Y, ct::ClosedFormVariant::derived,
                                                opt, cfg.counting_budget);

    ct::CsvTable table;
    table.header = {"term", "value"};
    ct::Json obj;
    auto push = [&](const std::string& name, double v) {
        table.rows.push_back({name, ct::format_csv_double(v)});
        obj[name] = ct::format_json_double(v);
    };
    push("identity", br.identity);
    push("loxodromic", br.loxodromic);
    push("log_term", br.log_term);
    push("kappa_term", br.kappa_term);
    push("regularized_trace", br.total);
    push("truncation_defect", defect);
    for (std::size_t jx = 0; jx < Y.Y.size(); ++jx)
        push("schedule_Y" + std::to_string(jx), Y.Y[jx]);
    if (oracle) {
        for (std::size_t jx = 0; jx < m.cusps.size(); ++jx) {
            const auto& lat = m.cusps[jx].lattice;
            const double Yj = Y.Y[jx];
            const double bf = ct::unipotent_bruteforce(lat, p, Yj, 1e-5, cfg.counting_budget);
            const double cf = ct::unipotent_closed_form(lat, p, Yj,
                                                        ct::ClosedFormVariant::derived, opt,
                                                        cfg.counting_budget);
            push("oracle_bruteforce_cusp" + std::to_string(jx), bf);
            push("oracle_closedform_cusp" + std::to_string(jx), cf);
            push("oracle_rel_dev_cusp" + std::to_string(jx),
                 std::abs(cf - bf) / std::max(1e-300, std::abs(bf)));
        }
    }
    emit(cfg, table, obj);
    return 0;
}

int cmd_torsion(const ct::RunConfig& cfg, const std::string& input, int n1, int n2,
                double volume) {
    const ct::Json j = ct::load_json_file(input);
    if (!j.contains("degrees") || !j["degrees"].is_object())
        throw ct::ParseError("torsion input needs a \"degrees\" object");
    const double t0 = j.contains("t0") ? j["t0"].get<double>() : cfg.t0;

    std::map<int, double> log_dets;
    std::map<int, double> spreads;
    for (const auto& [key, val] : j["degrees"].items()) {
        const int p = std::stoi(key);
        ct::TraceModel model = ct::parse_trace_model(val);
        const double base = ct::regularized_log_det(model.expansion, model.spectrum, t0,
                                                    cfg.consistency_tol, cfg.quad());
        double lo = base, hi = base;
        for (double t : {0.5 * t0, 2.0 * t0}) {
            const double v = ct::regularized_log_det(model.expansion, model.spectrum, t,
                                                     cfg.consistency_tol, cfg.quad());
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        log_dets[p] = base;
        spreads[p] = hi - lo;
    }
    const ct::TorsionLedger ledger = ct::analytic_torsion(log_dets, t0);
    const ct::RepWeights w{n1, n2};
    const double l2 = ct::l2_log_torsion(volume, w);

    ct::CsvTable table;
    table.header = {"quantity", "value"};
    ct::Json obj;
    auto push = [&](const std::string& name, double v) {
        table.rows.push_back({name, ct::format_csv_double(v)});
        obj[name] = ct::format_json_double(v);
    };
    for (const auto& [p, v] : ledger.log_det) {
        push("log_det_R_p" + std::to_string(p), v);
        push("t0_sweep_spread_p" + std::to_string(p), spreads[p]);
    }
    push("log_T_R", ledger.log_T_R);
    push("vol_t2", l2);
    push("log_T_R_minus_vol_t2", ledger.log_T_R - l2);
    emit(cfg, table, obj);
    return 0;
}

int cmd_ms_limit(const ct::RunConfig& cfg, const std::string& model_file,
                 const std::vector<double>& Ys) {
    const ct::ScatteringModel model =
        ct::parse_scattering_model(ct::load_json_file(model_file));
    const ct::TestFunction xi = ct::gaussian_test_function();
    ct::CsvTable table;
    table.header = {"Y", "value", "limit", "abs_error"};
    ct::Json rows = ct::Json::array();
    for (double Y : Ys) {
        const auto r = ct::scattering_limit(model, xi, Y, cfg.quad());
        table.rows.push_back({ct::format_csv_double(Y), ct::format_csv_double(r.value),
                              ct::format_csv_double(r.limit),
                              ct::format_csv_double(std::abs(r.value - r.limit))});
        ct::Json obj;
        obj["Y"] = ct::format_json_double(Y);
        obj["value"] = ct::format_json_double(r.value);
        obj["limit"] = ct::format_json_double(r.limit);
        obj["abs_error"] = ct::format_json_double(std::abs(r.value - r.limit));
        rows.push_back(obj);
    }
    emit(cfg, table, rows);
    return 0;
}

int cmd_bs_report(const ct::RunConfig& cfg, const std::string& tower_file,
                  const std::vector<double>& R_list) {
    const ct::TowerDescriptor tower = ct::parse_tower(ct::load_json_file(tower_file));
    const ct::BsReport report = ct::bs_report(tower, R_list, cfg.slope_threshold);

    ct::CsvTable table;
    table.header = {"member", "volume"};
    for (const auto& cond : report.conditions) table.header.push_back(cond.name);
    for (std::size_t i = 0; i < report.volumes.size(); ++i) {
        std::vector<std::string> row{std::to_string(i + 1),
                                     ct::format_csv_double(report.volumes[i])};
        for (const auto& cond : report.conditions)
            row.push_back(cond.verdict == ct::TrendVerdict::no_data
                              ? "no-data"
                              : ct::format_csv_double(cond.ratios[i]));
        table.rows.push_back(row);
    }
    ct::Json verdicts;
    for (const auto& cond : report.conditions) {
        ct::Json v;
        v["verdict"] = ct::to_string(cond.verdict);
        v["slope"] = ct::format_json_double(cond.slope);
        verdicts[cond.name] = v;
    }
    if (cfg.output_format == ct::OutputFormat::csv) {
        std::cout << table.to_string();
        std::cout << verdicts.dump(2) << "\n";
    } else {
        ct::Json full;
        ct::Json rows = ct::Json::array();
        for (std::size_t i = 0; i < report.volumes.size(); ++i) {
            ct::Json row;
            row["member"] = i + 1;
            row["volume"] = ct::format_json_double(report.volumes[i]);
            for (const auto& cond : report.conditions)
                if (cond.verdict != ct::TrendVerdict::no_data)
                    row[cond.name] = ct::format_json_double(cond.ratios[i]);
            rows.push_back(row);
        }
        full["members"] = rows;
        full["verdicts"] = verdicts;
        std::cout << full.dump(2) << "\n";
    }
    return 0;
}

std::function<std::int64_t(int)> parse_growth_model(const std::string& name) {
    if (name == "n2") return [](int n) { return static_cast<std::int64_t>(n) * n; };
    if (name == "n4") {
        return [](int n) {
            const std::int64_t m = static_cast<std::int64_t>(n) * n;
            return m * m;
        };
    }
    if (name == "const") return [](int) { return std::int64_t{1}; };
    throw ct::ParseError("unknown growth model \"" + name + "\" (expected n2, n4, const)");
}

int cmd_tower_gen(const ct::RunConfig& cfg, const std::string& base_file, int levels,
                  const std::string& index_model, const std::string& cusp_model,
                  double volume) {
    const ct::Json j = ct::load_json_file(base_file);
    ct::CuspedManifoldDescriptor base;
    base.volume = volume;
    for (const auto& basis : ct::parse_lattice_batch(j))
        base.cusps.push_back(ct::CuspGeometry{ct::gauss_reduce(basis), 1.0});
    const ct::TowerDescriptor tower = ct::congruence_tower(
        base, levels, parse_growth_model(index_model), parse_growth_model(cusp_model));
    (void)cfg;
    std::cout << ct::tower_to_json(tower).dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"regularized traces, torsion regularization and BS diagnostics "
                 "for cusped hyperbolic 3-manifold models"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output = "csv";
    int jobs = 1;
    std::uint64_t seed = 0;
    bool oracle = false;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--output", output, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--jobs", jobs, "max concurrent descriptor entries")->check(CLI::Range(1, 256));
    app.add_option("--seed", seed, "seed for seeded fixtures");
    app.add_flag("--oracle", oracle, "add brute-force oracle columns where supported");

    std::string input_file, profile_file, model_file, tower_file, base_file;
    std::vector<double> radii, Ys{1e2, 1e3, 1e4}, R_list;
    int n1 = 2, n2 = 0, levels = 8;
    double volume = 1.0;
    std::string index_model = "n4", cusp_model = "n2";

    auto* lattice = app.add_subcommand("lattice", "lattice invariants and kappa variants");
    lattice->add_option("input", input_file, "lattice descriptor file")->required();
    lattice->add_option("--radii", radii, "radii for the error term");

    auto* rep = app.add_subcommand("rep", "representation constants");
    rep->add_option("--n1", n1, "first highest weight")->required();
    rep->add_option("--n2", n2, "second highest weight")->required();

    auto* trace = app.add_subcommand("trace", "regularized trace breakdown");
    trace->add_option("manifold", input_file, "manifold summary file")->required();
    trace->add_option("--profile", profile_file, "kernel profile file")->required();

    auto* torsion = app.add_subcommand("torsion", "regularized determinants and torsion");
    torsion->add_option("input", input_file, "expansion+spectrum file")->required();
    torsion->add_option("--n1", n1, "first highest weight")->required();
    torsion->add_option("--n2", n2, "second highest weight")->required();
    torsion->add_option("--volume", volume, "manifold volume for the L2 column");

    auto* ms = app.add_subcommand("ms-limit", "scattering limit of the truncation term");
    ms->add_option("model", model_file, "scattering model file")->required();
    ms->add_option("--Y", Ys, "truncation heights");

    auto* bs = app.add_subcommand("bs-report", "Benjamini-Schramm diagnostics");
    bs->add_option("tower", tower_file, "tower descriptor file")->required();
    bs->add_option("--R", R_list, "geodesic length thresholds");

    auto* gen = app.add_subcommand("tower-gen", "synthetic congruence tower");
    gen->add_option("base", base_file, "base cusp lattice file")->required();
    gen->add_option("--levels", levels, "number of members");
    gen->add_option("--index-model", index_model, "volume growth (n2|n4|const)");
    gen->add_option("--cusp-model", cusp_model, "cusp count growth (n2|n4|const)");
    gen->add_option("--volume", volume, "base volume");

    CLI11_PARSE(app, argc, argv);

    try {
        ct::RunConfig cfg;
        if (!config_path.empty()) cfg = ct::parse_config(ct::load_json_file(config_path));
        cfg.output_format = (output == "json") ? ct::OutputFormat::json : ct::OutputFormat::csv;
        cfg.jobs = jobs;
        cfg.seed = seed;
        cfg.validate();

        if (lattice->parsed()) return cmd_lattice(cfg, input_file, radii);
        if (rep->parsed()) return cmd_rep(cfg, n1, n2);
        if (trace->parsed()) return cmd_trace(cfg, input_file, profile_file, oracle);
        if (torsion->parsed()) return cmd_torsion(cfg, input_file, n1, n2, volume);
        if (ms->parsed()) return cmd_ms_limit(cfg, model_file, Ys);
        if (bs->parsed()) return cmd_bs_report(cfg, tower_file, R_list);
        if (gen->parsed())
            return cmd_tower_gen(cfg, base_file, levels, index_model, cusp_model, volume);
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const ct::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ct::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const ct::AdmissionError& e) {
        std::cerr << "admission failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
