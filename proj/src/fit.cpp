#include "uwac/fit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace uwac {

namespace {

double dbx(double v) { return 10.0 * std::log10(v); }

std::vector<std::vector<double>> a1_basis_rows(Quantity q, bool c_plus_one,
                                               const std::vector<double>& cs) {
    std::vector<std::vector<double>> rows;
    rows.reserve(cs.size());
    for (double c : cs) {
        const double x = dbx(c);
        const double z = dbx(c + 1.0);
        if (q == Quantity::power) {
            const double lin = c_plus_one ? z : x;
            rows.push_back({z * z, lin, 1.0});
        } else {
            rows.push_back({x * x, x, 1.0});
        }
    }
    return rows;
}

std::vector<std::vector<double>> a2_basis_rows(Quantity q,
                                               const std::vector<double>& cs) {
    std::vector<std::vector<double>> rows;
    rows.reserve(cs.size());
    for (double c : cs) {
        const double x = dbx(c);
        switch (q) {
            case Quantity::power:
                rows.push_back({c * c, c, 1.0});
                break;
            case Quantity::f_end:
                rows.push_back({x * x, x, 1.0});
                break;
            case Quantity::bandwidth:
                rows.push_back({x * x * x, x * x, x, 1.0});
                break;
        }
    }
    return rows;
}

}  // namespace

const char* quantity_label(Quantity q) {
    switch (q) {
        case Quantity::power: return "P";
        case Quantity::f_end: return "f_end";
        case Quantity::bandwidth: return "B";
    }
    return "?";
}

OlsFit ols_fit(const std::vector<std::vector<double>>& rows,
               const std::vector<double>& y, const std::string& basis_name) {
    if (rows.empty() || rows.size() != y.size()) {
        throw std::domain_error("regression for " + basis_name +
                                " needs matching nonempty rows");
    }
    const size_t n = rows.size();
    const size_t p = rows.front().size();
    if (n < p) {
        throw std::domain_error("regression for " + basis_name +
                                " is underdetermined");
    }
    Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    Eigen::VectorXd Y(static_cast<Eigen::Index>(n));
    for (size_t i = 0; i < n; ++i) {
        if (rows[i].size() != p) {
            throw std::domain_error("ragged regressor rows for " + basis_name);
        }
        for (size_t j = 0; j < p; ++j) {
            X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
        Y(static_cast<Eigen::Index>(i)) = y[i];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < static_cast<Eigen::Index>(p)) {
        throw std::runtime_error("rank-deficient regression for basis " + basis_name);
    }
    const Eigen::VectorXd beta = qr.solve(Y);
    OlsFit fit;
    fit.coeffs.assign(beta.data(), beta.data() + p);
    fit.mse = (X * beta - Y).squaredNorm() / static_cast<double>(n);
    return fit;
}

PowerLawFit fit_power_law(const SweepResult& table, Quantity q) {
    std::map<double, std::vector<std::pair<double, double>>> groups;  // C -> (x, y)
    for (const SweepRow& row : table.rows) {
        double value = 0.0;
        switch (q) {
            case Quantity::power: value = row.p_db; break;
            case Quantity::f_end: value = dbx(row.f_end_khz); break;
            case Quantity::bandwidth: value = dbx(row.b_khz); break;
        }
        if (!std::isfinite(value)) {
            throw std::domain_error(
                std::string("cannot fit ") + quantity_label(q) +
                ": non-finite value at l=" + std::to_string(row.l_km) +
                " km, C=" + std::to_string(row.c_kbps));
        }
        groups[row.c_kbps].push_back({dbx(row.l_km), value});
    }
    PowerLawFit fit;
    fit.quantity = q;
    for (const auto& [c, pts] : groups) {
        std::set<double> distinct;
        for (const auto& [x, y] : pts) distinct.insert(x);
        if (distinct.size() < 3) {
            throw std::domain_error(
                "need at least 3 distinct distances per capacity target, got " +
                std::to_string(distinct.size()) + " at C=" + std::to_string(c));
        }
        std::vector<std::vector<double>> rows;
        std::vector<double> ys;
        rows.reserve(pts.size());
        ys.reserve(pts.size());
        for (const auto& [x, y] : pts) {
            rows.push_back({x, 1.0});
            ys.push_back(y);
        }
        const OlsFit line = ols_fit(rows, ys, "distance line");
        PowerLawPair pair;
        pair.c_kbps = c;
        pair.a2 = line.coeffs[0];
        pair.a1_db = line.coeffs[1];
        pair.mse = line.mse;
        pair.samples = pts.size();
        fit.pairs.push_back(pair);
    }
    return fit;
}

CoefficientModel fit_coefficient_model(const PowerLawFit& fit,
                                       const FitOptions& options) {
    std::vector<double> cs;
    std::vector<double> a1s;
    std::vector<double> a2s;
    for (const PowerLawPair& p : fit.pairs) {
        cs.push_back(p.c_kbps);
        a1s.push_back(p.a1_db);
        a2s.push_back(p.a2);
    }
    const auto rows_a1 = a1_basis_rows(fit.quantity, options.power_a1_c_plus_one, cs);
    const auto rows_a2 = a2_basis_rows(fit.quantity, cs);
    const size_t need = std::max(rows_a1.empty() ? 0 : rows_a1.front().size(),
                                 rows_a2.empty() ? 0 : rows_a2.front().size()) + 1;
    if (cs.size() < need) {
        throw std::domain_error("need at least " + std::to_string(need) +
                                " distinct capacity targets for the basis fit");
    }
    const std::string label = quantity_label(fit.quantity);
    const OlsFit f1 = ols_fit(rows_a1, a1s, label + " a1");
    const OlsFit f2 = ols_fit(rows_a2, a2s, label + " a2");
    CoefficientModel m;
    m.quantity = fit.quantity;
    m.a1_coeffs = f1.coeffs;
    m.a2_coeffs = f2.coeffs;
    m.power_a1_c_plus_one = options.power_a1_c_plus_one;
    m.mse_a1 = f1.mse;
    m.mse_a2 = f2.mse;
    return m;
}

double model_a1(const CoefficientModel& m, double c_kbps) {
    const double x = dbx(c_kbps);
    const double z = dbx(c_kbps + 1.0);
    if (m.quantity == Quantity::power) {
        const double lin = m.power_a1_c_plus_one ? z : x;
        return m.a1_coeffs[0] * z * z + m.a1_coeffs[1] * lin + m.a1_coeffs[2];
    }
    return m.a1_coeffs[0] * x * x + m.a1_coeffs[1] * x + m.a1_coeffs[2];
}

double model_a2(const CoefficientModel& m, double c_kbps) {
    const double x = dbx(c_kbps);
    switch (m.quantity) {
        case Quantity::power:
            return m.a2_coeffs[0] * c_kbps * c_kbps + m.a2_coeffs[1] * c_kbps +
                   m.a2_coeffs[2];
        case Quantity::f_end:
            return m.a2_coeffs[0] * x * x + m.a2_coeffs[1] * x + m.a2_coeffs[2];
        case Quantity::bandwidth:
            return m.a2_coeffs[0] * x * x * x + m.a2_coeffs[1] * x * x +
                   m.a2_coeffs[2] * x + m.a2_coeffs[3];
    }
    return 0.0;
}

double model_eval(const CoefficientModel& m, double l_km, double c_kbps) {
    if (!(l_km > 0.0) || !(c_kbps > 0.0)) {
        throw std::domain_error("surrogate needs l > 0 and C > 0");
    }
    return std::pow(10.0, model_a1(m, c_kbps) / 10.0) *
           std::pow(l_km, model_a2(m, c_kbps));
}

double model_eval_db(const CoefficientModel& m, double l_km, double c_kbps) {
    if (!(l_km > 0.0) || !(c_kbps > 0.0)) {
        throw std::domain_error("surrogate needs l > 0 and C > 0");
    }
    return model_a1(m, c_kbps) + model_a2(m, c_kbps) * dbx(l_km);
}

const char* wind_track_name(size_t track) {
    static const char* names[WindModel::kTracks] = {"alpha1", "alpha2", "alpha3",
                                                    "beta1",  "beta2",  "beta3"};
    if (track >= WindModel::kTracks) throw std::out_of_range("wind track");
    return names[track];
}

WindModel fit_wind_model(const std::vector<double>& wind_speeds,
                         const std::vector<CoefficientModel>& power_models) {
    if (wind_speeds.size() != power_models.size()) {
        throw std::domain_error("one power model per wind speed required");
    }
    if (wind_speeds.size() < 4) {
        throw std::domain_error("wind model needs at least 4 wind speeds");
    }
    for (const CoefficientModel& m : power_models) {
        if (m.quantity != Quantity::power || m.a2_coeffs.size() != 3 ||
            m.a1_coeffs.size() != 3) {
            throw std::domain_error("wind model expects three-term power models");
        }
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(wind_speeds.size());
    for (double w : wind_speeds) {
        if (!std::isfinite(w) || w < 0.0) {
            throw std::domain_error("wind speeds must be finite and >= 0");
        }
        const double u = dbx(w + 1.0);
        rows.push_back({u * u, u, 1.0});
    }
    WindModel model;
    for (size_t t = 0; t < WindModel::kTracks; ++t) {
        std::vector<double> y;
        y.reserve(power_models.size());
        for (const CoefficientModel& m : power_models) {
            y.push_back(t < 3 ? m.a2_coeffs[t] : m.a1_coeffs[t - 3]);
        }
        const OlsFit f = ols_fit(rows, y, std::string("wind ") + wind_track_name(t));
        std::copy(f.coeffs.begin(), f.coeffs.end(), model.gamma[t].begin());
        model.mse[t] = f.mse;
    }
    return model;
}

double wind_eval(const WindModel& m, size_t track, double w) {
    if (track >= WindModel::kTracks) throw std::out_of_range("wind track");
    if (!std::isfinite(w) || w < 0.0) {
        throw std::domain_error("wind speed must be finite and >= 0");
    }
    const double u = dbx(w + 1.0);
    return m.gamma[track][0] * u * u + m.gamma[track][1] * u + m.gamma[track][2];
}

ShippingSensitivity shipping_sensitivity_report(
    const std::vector<CoefficientModel>& models_by_s) {
    if (models_by_s.size() < 2) {
        throw std::domain_error("sensitivity needs at least two models");
    }
    for (const CoefficientModel& m : models_by_s) {
        if (m.quantity != Quantity::power || m.a2_coeffs.size() != 3 ||
            m.a1_coeffs.size() != 3) {
            throw std::domain_error("sensitivity expects three-term power models");
        }
    }
    const size_t mid = models_by_s.size() / 2;
    ShippingSensitivity report;
    for (size_t t = 0; t < WindModel::kTracks; ++t) {
        ShippingSensitivity::Track track;
        track.name = wind_track_name(t);
        for (const CoefficientModel& m : models_by_s) {
            track.values.push_back(t < 3 ? m.a2_coeffs[t] : m.a1_coeffs[t - 3]);
        }
        const double ref = track.values[mid];
        for (double v : track.values) {
            const double dev = std::abs(v - ref);
            track.max_abs_dev = std::max(track.max_abs_dev, dev);
            if (ref != 0.0) {
                track.max_rel_dev = std::max(track.max_rel_dev, dev / std::abs(ref));
            } else if (dev > 0.0) {
                track.max_rel_dev = std::numeric_limits<double>::infinity();
            }
        }
        report.worst_rel_dev = std::max(report.worst_rel_dev, track.max_rel_dev);
        report.tracks.push_back(std::move(track));
    }
    return report;
}

}  // namespace uwac
