// uwacap: underwater acoustic link capacity toolkit.
//
// Subcommands: psd (noise spectrum at one frequency), solve (one link),
// sweep (grid of links to CSV), fit (closed-form surrogate from a sweep),
// report (full coefficient tables and plot data).
//
// Exit codes: 0 success, 1 usage, 2 solver failure, 3 schema/config error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "uwac/config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using namespace uwac;

std::string g10(double v) {
    char b[32];
    std::snprintf(b, sizeof(b), "%.10g", v);
    return b;
}

std::string g5(double v) {
    char b[32];
    std::snprintf(b, sizeof(b), "%.5g", v);
    return b;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::string render_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<size_t> width;
    for (const auto& row : rows) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (size_t i = 0; i < row.size(); ++i) {
            width[i] = std::max(width[i], row[i].size());
        }
    }
    std::string out;
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            out += row[i];
            if (i + 1 < row.size()) {
                out.append(width[i] - row[i].size() + 2, ' ');
            }
        }
        out += '\n';
    }
    return out;
}

json solution_json(const LinkSolution& s) {
    json band = json::array();
    for (const auto& iv : s.band.intervals) {
        band.push_back({{"lo_khz", iv.lo_khz}, {"hi_khz", iv.hi_khz}});
    }
    return json{{"l_km", s.l_km},
                {"c_target_kbps", s.c_target_kbps},
                {"k_level", s.k_level},
                {"k_level_db", s.k_level_db},
                {"band", band},
                {"f_ini", s.f_ini.value},
                {"f_end", s.f_end.value},
                {"bandwidth_khz", s.bandwidth_khz},
                {"band_width_sum_khz", s.band_width_sum_khz},
                {"power_linear", s.power_linear},
                {"power_db", s.power_db},
                {"capacity_kbps", s.capacity_kbps},
                {"f0", s.f0.value}};
}

Quantity parse_quantity(const std::string& s) {
    if (s == "P" || s == "power") return Quantity::power;
    if (s == "fend" || s == "f_end") return Quantity::f_end;
    if (s == "B" || s == "bandwidth") return Quantity::bandwidth;
    throw std::domain_error("unknown quantity '" + s + "' (use P, fend, or B)");
}

/// Case ranges at a configurable density; matches the presets at 40 points.
SweepSpec case_spec(int which, int points) {
    SweepSpec s;
    if (which == 1) {
        s.l_values_km = log_spaced(0.1, 10.0, points);
        s.c_values_kbps = log_spaced(0.02, 2.0, points);
    } else {
        s.l_values_km = log_spaced(1.0, 100.0, points);
        s.c_values_kbps = log_spaced(1.0, 100.0, points);
    }
    return s;
}

int cmd_psd(const RunConfig& cfg, double freq) {
    const FrequencyKHz f(freq);
    const NoiseComponents nc = noise_components(f, cfg.env);
    std::string out;
    out += "# schema: uwacap-psd-v1\n";
    out += "# config_hash: " + config_hash(cfg) + "\n";
    out += "component,psd_dB,psd_linear\n";
    const auto line = [&](const char* name, double linear) {
        out += name;
        out += ',';
        out += g10(10.0 * std::log10(linear));
        out += ',';
        out += g10(linear);
        out += '\n';
    };
    line("turbulence", nc.turbulence);
    line("shipping", nc.shipping);
    line("wind", nc.wind);
    line("thermal", nc.thermal);
    line("total", nc.total());
    std::fputs(out.c_str(), stdout);
    return 0;
}

int cmd_solve(const RunConfig& cfg, double l, double c) {
    const WaterfillingSolver solver(cfg.env, cfg.solver);
    const LinkSolution sol = solver.solve(LinkQuery(DistanceKm(l), c));
    json out = solution_json(sol);
    out["schema"] = "uwacap-solution-v1";
    out["config_hash"] = config_hash(cfg);
    std::fputs((out.dump(2) + "\n").c_str(), stdout);
    return 0;
}

int cmd_sweep(const RunConfig& cfg, const std::string& out_path) {
    const SweepSpec spec = cfg.sweep.make_spec();
    const WaterfillingSolver solver(cfg.env, cfg.solver);
    const SweepResult result = run_sweep(solver, spec, cfg.sweep.threads);
    fs::path path = out_path.empty()
                        ? fs::path(cfg.output_dir) /
                              ("sweep_" + (cfg.sweep.case_preset.empty()
                                               ? std::string("custom")
                                               : cfg.sweep.case_preset) +
                               ".csv")
                        : fs::path(out_path);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_sweep_csv(path.string(), result, config_hash(cfg));
    std::fputs(("wrote " + path.string() + " (" + std::to_string(result.rows.size()) +
                " rows)\n")
                   .c_str(),
               stdout);
    return 0;
}

std::string fit_csv_text(const CoefficientModel& m, const std::string& hash,
                         const std::string& input_hash) {
    // Column layout follows the emitted-order contract: alphas (a2) first,
    // highest order first, then betas (a1), then the stage MSE.
    std::string out;
    out += "# schema: uwacap-fit-v1\n";
    out += "# config_hash: " + hash + "\n";
    if (!input_hash.empty()) out += "# input_hash: " + input_hash + "\n";
    out += "quantity,level,c1,c2,c3,c4,mse\n";
    const auto row = [&](const char* level, const std::vector<double>& cs,
                         double mse) {
        out += quantity_label(m.quantity);
        out += ',';
        out += level;
        for (size_t i = 0; i < 4; ++i) {
            out += ',';
            if (i < cs.size()) out += g10(cs[i]);
        }
        out += ',';
        out += g10(mse);
        out += '\n';
    };
    row("a2", m.a2_coeffs, m.mse_a2);
    row("a1", m.a1_coeffs, m.mse_a1);
    return out;
}

int cmd_fit(const RunConfig& cfg, const std::string& input,
            const std::string& quantity_name, const std::string& out_path) {
    const Quantity q = parse_quantity(quantity_name);
    std::string input_hash;
    const SweepResult table = read_sweep_csv(input, &input_hash);
    const PowerLawFit plf = fit_power_law(table, q);
    const CoefficientModel cm = fit_coefficient_model(plf, cfg.fit);

    fs::path path = out_path.empty()
                        ? fs::path(cfg.output_dir) /
                              ("fit_" + std::string(quantity_label(q)) + ".csv")
                        : fs::path(out_path);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const std::string hash = config_hash(cfg);
    write_text(path, fit_csv_text(cm, hash, input_hash));

    std::vector<std::vector<std::string>> rows;
    rows.push_back({"level", "c1", "c2", "c3", "c4", "mse"});
    std::vector<std::string> a2row = {"a2 (alpha)"};
    for (double c : cm.a2_coeffs) a2row.push_back(g5(c));
    while (a2row.size() < 5) a2row.push_back("");
    a2row.push_back(g5(cm.mse_a2));
    rows.push_back(a2row);
    std::vector<std::string> a1row = {"a1 (beta)"};
    for (double c : cm.a1_coeffs) a1row.push_back(g5(c));
    while (a1row.size() < 5) a1row.push_back("");
    a1row.push_back(g5(cm.mse_a1));
    rows.push_back(a1row);

    std::string out;
    out += "quantity " + std::string(quantity_label(q)) + ", " +
           std::to_string(plf.pairs.size()) + " capacity targets\n";
    out += "config_hash: " + hash + "\n";
    out += render_table(rows);
    out += "wrote " + path.string() + "\n";
    std::fputs(out.c_str(), stdout);
    return 0;
}

constexpr double kReportWinds[] = {0.0, 2.0, 5.0, 10.0, 20.0};
constexpr double kReportShippings[] = {0.0, 0.5, 1.0};

int cmd_report(const RunConfig& cfg, int points, const std::string& sweeps_dir,
               const std::string& out_dir_flag) {
    const fs::path out_dir =
        out_dir_flag.empty() ? fs::path(cfg.output_dir) : fs::path(out_dir_flag);
    const fs::path cache = sweeps_dir.empty() ? out_dir / "sweeps" : fs::path(sweeps_dir);
    fs::create_directories(out_dir);
    fs::create_directories(cache);

    // Sweeps are cached as CSV and always re-read from disk, so a fresh run
    // and a cached rerun fit identical (round-tripped) numbers.
    const auto get_sweep = [&](int case_n, const EnvironmentParams& env) {
        char stem[160];
        std::snprintf(stem, sizeof(stem), "sweep_case%d_k%g_s%g_w%g_n%d", case_n,
                      env.spreading_k, env.shipping_s, env.wind_w, points);
        const fs::path path = cache / (std::string(stem) + ".csv");
        if (!fs::exists(path)) {
            RunConfig sweep_cfg = cfg;
            sweep_cfg.env = env;
            const WaterfillingSolver solver(env, cfg.solver);
            const SweepResult r = run_sweep(solver, case_spec(case_n, points),
                                            cfg.sweep.threads);
            write_sweep_csv(path.string(), r, config_hash(sweep_cfg));
        }
        return read_sweep_csv(path.string());
    };

    const auto fit_quantity = [&](const SweepResult& table, Quantity q) {
        return fit_coefficient_model(fit_power_law(table, q), cfg.fit);
    };

    const std::string hash = config_hash(cfg);
    const Quantity quantities[] = {Quantity::power, Quantity::f_end,
                                   Quantity::bandwidth};
    std::vector<std::string> manifest;
    std::string report_text;
    report_text += "underwater acoustic link coefficient report\n";
    report_text += "schema: uwacap-report-v1\n";
    report_text += "config_hash: " + hash + "\n";
    report_text += "grid: " + std::to_string(points) + "x" + std::to_string(points) +
                   " per case\n\n";

    const auto emit = [&](const std::string& name, const std::string& csv,
                          const std::string& title,
                          const std::vector<std::vector<std::string>>& table) {
        write_text(out_dir / name, csv);
        manifest.push_back(name);
        report_text += title + "\n" + render_table(table) + "\n";
    };

    // Per-case coefficient tables and plot data.
    for (int case_n = 1; case_n <= 2; ++case_n) {
        const SweepResult table = get_sweep(case_n, cfg.env);
        std::string a2_csv = "# schema: uwacap-table-v1\n# config_hash: " + hash +
                             "\nquantity,alpha1,alpha2,alpha3,alpha4,mse\n";
        std::string a1_csv = "# schema: uwacap-table-v1\n# config_hash: " + hash +
                             "\nquantity,beta1,beta2,beta3,mse\n";
        std::vector<std::vector<std::string>> a2_rows = {
            {"quantity", "alpha1", "alpha2", "alpha3", "alpha4", "mse"}};
        std::vector<std::vector<std::string>> a1_rows = {
            {"quantity", "beta1", "beta2", "beta3", "mse"}};
        for (Quantity q : quantities) {
            const PowerLawFit plf = fit_power_law(table, q);
            const CoefficientModel cm = fit_coefficient_model(plf, cfg.fit);
            // a2 rows are padded on the left to the four-column layout.
            std::vector<std::string> vals;
            for (size_t i = cm.a2_coeffs.size(); i < 4; ++i) vals.push_back("0");
            for (double c : cm.a2_coeffs) vals.push_back(g10(c));
            a2_csv += std::string(quantity_label(q)) + "," + vals[0] + "," + vals[1] +
                      "," + vals[2] + "," + vals[3] + "," + g10(cm.mse_a2) + "\n";
            a2_rows.push_back({quantity_label(q), g5(std::strtod(vals[0].c_str(), nullptr)),
                               g5(std::strtod(vals[1].c_str(), nullptr)),
                               g5(std::strtod(vals[2].c_str(), nullptr)),
                               g5(std::strtod(vals[3].c_str(), nullptr)),
                               g5(cm.mse_a2)});
            a1_csv += std::string(quantity_label(q)) + "," + g10(cm.a1_coeffs[0]) + "," +
                      g10(cm.a1_coeffs[1]) + "," + g10(cm.a1_coeffs[2]) + "," +
                      g10(cm.mse_a1) + "\n";
            a1_rows.push_back({quantity_label(q), g5(cm.a1_coeffs[0]),
                               g5(cm.a1_coeffs[1]), g5(cm.a1_coeffs[2]),
                               g5(cm.mse_a1)});

            std::string plot = "# schema: uwacap-plot-v1\n# config_hash: " + hash +
                               "\nc_kbps,a1_db,a2,a1_model,a2_model\n";
            for (const PowerLawPair& p : plf.pairs) {
                plot += g10(p.c_kbps) + "," + g10(p.a1_db) + "," + g10(p.a2) + "," +
                        g10(model_a1(cm, p.c_kbps)) + "," +
                        g10(model_a2(cm, p.c_kbps)) + "\n";
            }
            const std::string plot_name = "plot_" + std::string(quantity_label(q)) +
                                          "_case" + std::to_string(case_n) + ".csv";
            write_text(out_dir / plot_name, plot);
            manifest.push_back(plot_name);
        }
        const std::string suffix = std::to_string(case_n);
        const std::string range = case_n == 1 ? "l 0.1-10 km, C 0.02-2 kbit/s"
                                              : "l 1-100 km, C 1-100 kbit/s";
        emit("table" + std::to_string(case_n * 2 - 1) + ".csv", a2_csv,
             "a2 coefficients, case " + suffix + " (" + range + ")", a2_rows);
        emit("table" + std::to_string(case_n * 2) + ".csv", a1_csv,
             "a1 coefficients, case " + suffix + " (" + range + ")", a1_rows);
    }

    // Power-model coefficients across wind and shipping settings (case 1).
    std::map<std::pair<double, double>, CoefficientModel> power_models;
    const auto power_model_at = [&](double w, double s) {
        const auto key = std::make_pair(w, s);
        auto it = power_models.find(key);
        if (it == power_models.end()) {
            EnvironmentParams env = cfg.env;
            env.wind_w = w;
            env.shipping_s = s;
            it = power_models
                     .emplace(key, fit_quantity(get_sweep(1, env), Quantity::power))
                     .first;
        }
        return it->second;
    };

    std::string t5_csv = "# schema: uwacap-table-v1\n# config_hash: " + hash +
                         "\nw,s,alpha1,alpha2,alpha3,beta1,beta2,beta3\n";
    std::vector<std::vector<std::string>> t5_rows = {
        {"w", "s", "alpha1", "alpha2", "alpha3", "beta1", "beta2", "beta3"}};
    for (double w : kReportWinds) {
        for (double s : kReportShippings) {
            const CoefficientModel m = power_model_at(w, s);
            t5_csv += g10(w) + "," + g10(s);
            std::vector<std::string> row = {g5(w), g5(s)};
            for (double c : m.a2_coeffs) {
                t5_csv += "," + g10(c);
                row.push_back(g5(c));
            }
            for (double c : m.a1_coeffs) {
                t5_csv += "," + g10(c);
                row.push_back(g5(c));
            }
            t5_csv += "\n";
            t5_rows.push_back(row);
        }
    }
    emit("table5.csv", t5_csv,
         "power-model coefficients by wind and shipping (case 1)", t5_rows);

    // Wind meta-model at the configured shipping activity.
    std::vector<double> winds(std::begin(kReportWinds), std::end(kReportWinds));
    std::vector<CoefficientModel> wind_inputs;
    for (double w : winds) wind_inputs.push_back(power_model_at(w, cfg.env.shipping_s));
    const WindModel wm = fit_wind_model(winds, wind_inputs);
    std::string t6_csv = "# schema: uwacap-table-v1\n# config_hash: " + hash +
                         "\ncoefficient,gamma1,gamma2,gamma3,mse\n";
    std::vector<std::vector<std::string>> t6_rows = {
        {"coefficient", "gamma1", "gamma2", "gamma3", "mse"}};
    for (size_t t = 0; t < WindModel::kTracks; ++t) {
        t6_csv += std::string(wind_track_name(t)) + "," + g10(wm.gamma[t][0]) + "," +
                  g10(wm.gamma[t][1]) + "," + g10(wm.gamma[t][2]) + "," +
                  g10(wm.mse[t]) + "\n";
        t6_rows.push_back({wind_track_name(t), g5(wm.gamma[t][0]), g5(wm.gamma[t][1]),
                           g5(wm.gamma[t][2]), g5(wm.mse[t])});
    }
    emit("table6.csv", t6_csv,
         "wind dependence of the power-model coefficients (s = " +
             g5(cfg.env.shipping_s) + ")",
         t6_rows);

    report_text += "files:\n";
    for (const std::string& name : manifest) report_text += "  " + name + "\n";
    write_text(out_dir / "report.txt", report_text);
    std::fputs(("wrote " + (out_dir / "report.txt").string() + " and " +
                std::to_string(manifest.size()) + " data files\n")
                   .c_str(),
               stdout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"underwater acoustic link capacity toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file");
    double k_flag = 0, s_flag = 0, w_flag = 0;
    auto* k_opt = app.add_option("--k", k_flag, "spreading factor");
    auto* s_opt = app.add_option("--s", s_flag, "shipping activity, 0..1");
    auto* w_opt = app.add_option("--w", w_flag, "wind speed, m/s");
    int grid_points_flag = 0;
    auto* gp_opt = app.add_option("--grid-points", grid_points_flag,
                                  "frequency grid points");
    double f_min_flag = 0, f_max_flag = 0, rel_tol_flag = 0;
    auto* fmin_opt = app.add_option("--f-min", f_min_flag, "grid start, kHz");
    auto* fmax_opt = app.add_option("--f-max", f_max_flag, "grid end, kHz");
    auto* tol_opt = app.add_option("--rel-tol", rel_tol_flag,
                                   "capacity relative tolerance");
    std::string root_mode_flag, quadrature_flag;
    auto* mode_opt = app.add_option("--root-mode", root_mode_flag,
                                    "bisection or epsilon_increment");
    auto* quad_opt = app.add_option("--quadrature", quadrature_flag,
                                    "trapezoid or simpson");
    int threads_flag = -1;
    auto* threads_opt = app.add_option("--threads", threads_flag,
                                       "sweep worker threads, 0 = auto");
    std::string out_dir_flag;
    auto* outdir_opt = app.add_option("--out-dir", out_dir_flag, "output directory");

    auto* psd = app.add_subcommand("psd", "ambient noise components at a frequency");
    double psd_freq = 0;
    psd->add_option("--freq", psd_freq, "frequency, kHz")->required();

    auto* solve = app.add_subcommand("solve", "waterfilling solution for one link");
    double solve_l = 0, solve_c = 0;
    solve->add_option("--l", solve_l, "distance, km")->required();
    solve->add_option("--c", solve_c, "target capacity, kbit/s")->required();

    auto* sweep = app.add_subcommand("sweep", "solve a grid of links to CSV");
    std::string sweep_case, sweep_out;
    sweep->add_option("--case", sweep_case, "case1 or case2");
    sweep->add_option("--out", sweep_out, "output CSV path");

    auto* fit = app.add_subcommand("fit", "fit the closed-form surrogate to a sweep");
    std::string fit_input, fit_quantity, fit_out;
    fit->add_option("--input", fit_input, "sweep CSV")->required();
    fit->add_option("--quantity", fit_quantity, "P, fend, or B")->required();
    fit->add_option("--out", fit_out, "coefficient CSV path");
    bool fit_shifted = false;
    fit->add_flag("--shifted-a1", fit_shifted,
                  "use 10log10(C+1) for both power a1 regressors");

    auto* report = app.add_subcommand("report", "regenerate coefficient tables");
    int report_points = 40;
    report->add_option("--points", report_points, "grid points per axis");
    std::string report_sweeps;
    report->add_option("--sweeps", report_sweeps, "sweep cache directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_run_config(config_path);
        if (k_opt->count()) cfg.env.spreading_k = k_flag;
        if (s_opt->count()) cfg.env.shipping_s = s_flag;
        if (w_opt->count()) cfg.env.wind_w = w_flag;
        if (gp_opt->count()) cfg.solver.grid_points = grid_points_flag;
        if (fmin_opt->count()) cfg.solver.f_min_khz = f_min_flag;
        if (fmax_opt->count()) cfg.solver.f_max_khz = f_max_flag;
        if (tol_opt->count()) cfg.solver.capacity_rel_tol = rel_tol_flag;
        if (mode_opt->count()) {
            if (root_mode_flag == "bisection") {
                cfg.solver.root_mode = SolverSettings::RootMode::bisection;
            } else if (root_mode_flag == "epsilon_increment") {
                cfg.solver.root_mode = SolverSettings::RootMode::epsilon_increment;
            } else {
                throw ConfigError("root_mode must be 'bisection' or "
                                  "'epsilon_increment'");
            }
        }
        if (quad_opt->count()) {
            if (quadrature_flag == "trapezoid") {
                cfg.solver.quadrature = SolverSettings::Quadrature::trapezoid;
            } else if (quadrature_flag == "simpson") {
                cfg.solver.quadrature = SolverSettings::Quadrature::simpson;
            } else {
                throw ConfigError("quadrature must be 'trapezoid' or 'simpson'");
            }
        }
        if (threads_opt->count()) {
            if (threads_flag < 0) throw ConfigError("threads must be >= 0");
            cfg.sweep.threads = static_cast<unsigned>(threads_flag);
        }
        if (outdir_opt->count()) cfg.output_dir = out_dir_flag;
        if (sweep->parsed() && !sweep_case.empty()) {
            cfg.sweep.case_preset = sweep_case;
            cfg.sweep.has_axes = false;
        }
        if (fit->parsed() && fit_shifted) cfg.fit.power_a1_c_plus_one = true;
        cfg.validate();

        if (!cfg.env.spreading_in_typical_range()) {
            std::fprintf(stderr,
                         "warning: spreading factor k=%g outside the typical "
                         "[1, 2] range\n",
                         cfg.env.spreading_k);
        }

        if (psd->parsed()) return cmd_psd(cfg, psd_freq);
        if (solve->parsed()) return cmd_solve(cfg, solve_l, solve_c);
        if (sweep->parsed()) return cmd_sweep(cfg, sweep_out);
        if (fit->parsed()) return cmd_fit(cfg, fit_input, fit_quantity, fit_out);
        if (report->parsed()) {
            if (report_points < 4 || report_points > 400) {
                throw std::domain_error("report points must be in [4, 400]");
            }
            return cmd_report(cfg, report_points, report_sweeps, out_dir_flag);
        }
        return 1;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 3;
    } catch (const CsvSchemaError& e) {
        std::fprintf(stderr, "schema error: %s\n", e.what());
        return 3;
    } catch (const CapacityUnreachableError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 2;
    } catch (const SweepCellError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
