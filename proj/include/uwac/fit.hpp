#pragma once

#include <array>
#include <string>
#include <vector>

#include "uwac/sweep.hpp"

namespace uwac {

/// Quantities the closed-form surrogate covers. Each one follows the same
/// two-level shape: value(l,C) = 10^(a1(C)/10) * l^a2(C), with a1 and a2
/// themselves fitted to small polynomial bases in C.
enum class Quantity { power, f_end, bandwidth };

const char* quantity_label(Quantity q);

/// Ordinary least squares on caller-built regressor rows. Throws when the
/// design matrix is rank deficient, naming the offending basis.
struct OlsFit {
    std::vector<double> coeffs;
    double mse = 0.0;
};

OlsFit ols_fit(const std::vector<std::vector<double>>& rows,
               const std::vector<double>& y, const std::string& basis_name);

/// Per-capacity regression of 10log10(value) on 10log10(l): intercept a1 in
/// dB, slope a2 the distance exponent.
struct PowerLawPair {
    double c_kbps = 0.0;
    double a1_db = 0.0;
    double a2 = 0.0;
    double mse = 0.0;
    size_t samples = 0;
};

struct PowerLawFit {
    Quantity quantity = Quantity::power;
    std::vector<PowerLawPair> pairs;  // ascending in C
};

PowerLawFit fit_power_law(const SweepResult& table, Quantity q);

struct FitOptions {
    /// The power quantity's a1 basis mixes 10log10(C) and 10log10(C+1)
    /// regressors by default; this switch uses the shifted form in both.
    bool power_a1_c_plus_one = false;
};

/// Second-level model: a1(C) and a2(C) compressed onto fixed bases.
/// Coefficients are stored highest order first (alpha1..., beta1...).
/// Bases by quantity, x = 10log10(C), z = 10log10(C+1):
///   power:     a1 {z^2, x, 1}        a2 {C^2, C, 1}
///   f_end:     a1 {x^2, x, 1}        a2 {x^2, x, 1}
///   bandwidth: a1 {x^2, x, 1}        a2 {x^3, x^2, x, 1}
struct CoefficientModel {
    Quantity quantity = Quantity::power;
    std::vector<double> a1_coeffs;  // beta
    std::vector<double> a2_coeffs;  // alpha
    bool power_a1_c_plus_one = false;
    double mse_a1 = 0.0;
    double mse_a2 = 0.0;
};

CoefficientModel fit_coefficient_model(const PowerLawFit& fit,
                                       const FitOptions& options = {});

double model_a1(const CoefficientModel& m, double c_kbps);
double model_a2(const CoefficientModel& m, double c_kbps);

/// Surrogate in natural units: 10^(a1(C)/10) * l^a2(C).
double model_eval(const CoefficientModel& m, double l_km, double c_kbps);
/// Same surrogate in dB: a1(C) + a2(C) * 10log10(l).
double model_eval_db(const CoefficientModel& m, double l_km, double c_kbps);

/// Wind dependence of the six power-model coefficients, each regressed on
/// {u^2, u, 1} with u = 10log10(w+1). Track order: alpha1..3 then beta1..3.
struct WindModel {
    static constexpr size_t kTracks = 6;
    std::array<std::array<double, 3>, kTracks> gamma{};  // highest order first
    std::array<double, kTracks> mse{};
};

const char* wind_track_name(size_t track);

WindModel fit_wind_model(const std::vector<double>& wind_speeds,
                         const std::vector<CoefficientModel>& power_models);

double wind_eval(const WindModel& m, size_t track, double w);

/// Spread of the six power-model coefficients across shipping-activity
/// settings, measured against the middle model.
struct ShippingSensitivity {
    struct Track {
        std::string name;
        std::vector<double> values;  // one per input model, input order
        double max_abs_dev = 0.0;
        double max_rel_dev = 0.0;
    };
    std::vector<Track> tracks;
    double worst_rel_dev = 0.0;
};

ShippingSensitivity shipping_sensitivity_report(
    const std::vector<CoefficientModel>& models_by_s);

}  // namespace uwac
