#pragma once

#include <stdexcept>
#include <string>
#include <vector>

// Acoustic channel physics: absorption, spreading + absorption path loss,
// and the four-source ambient noise spectrum. Everything here is a pure
// function of its inputs.
//
// Conventions used throughout the library:
//   - frequencies in kHz, distances in km (path-loss reference 1 km),
//   - noise psd in linear uPa^2/Hz relative units, dB = 10*log10(linear),
//   - absorption in dB/km.

namespace uwac {

/// Frequency in kHz. Constructing from a non-finite or non-positive value
/// throws std::domain_error. Default-constructed (0) means "unset" and is
/// only used for fields of empty solutions.
struct FrequencyKHz {
    double value = 0.0;

    FrequencyKHz() = default;
    explicit FrequencyKHz(double khz);
};

/// Distance in km, validated the same way as FrequencyKHz.
struct DistanceKm {
    double value = 0.0;

    DistanceKm() = default;
    explicit DistanceKm(double km);
};

/// Linear noise power spectral density, uPa^2/Hz in relative units.
struct PsdLinear {
    double value = 0.0;
};

/// Environment of a link: spreading geometry and noise parameters.
struct EnvironmentParams {
    double spreading_k = 1.5;  // 1 cylindrical, 2 spherical, 1.5 practical
    double shipping_s = 0.5;   // shipping activity, 0 (low) .. 1 (high)
    double wind_w = 0.0;       // wind speed, m/s

    /// Throws std::domain_error on hard violations (s outside [0,1],
    /// w < 0, non-finite values). k outside [1,2] is legal but unusual;
    /// see spreading_in_typical_range().
    void validate() const;

    bool spreading_in_typical_range() const {
        return spreading_k >= 1.0 && spreading_k <= 2.0;
    }
};

/// Per-source ambient noise psd, linear uPa^2/Hz.
struct NoiseComponents {
    double turbulence = 0.0;
    double shipping = 0.0;
    double wind = 0.0;
    double thermal = 0.0;

    double total() const { return turbulence + shipping + wind + thermal; }
};

/// Thorp absorption coefficient in dB/km, f in kHz. Uses the low-frequency
/// variant below kThorpCrossoverKHz; the two formulas differ by ~1e-3 dB/km
/// at the seam.
double absorption_db_per_km(FrequencyKHz f);

/// Crossover between the low-frequency absorption model and Thorp's formula.
inline constexpr double kThorpCrossoverKHz = 0.3;

/// Path loss l^k * a(f)^l in dB: k*10*log10(l) + a_dB(f)*l, with l in km
/// (so the spreading term vanishes at the 1 km reference). Always finite.
double path_loss_db(DistanceKm l, FrequencyKHz f, const EnvironmentParams& env);

/// Linear path loss 10^(path_loss_db/10). Overflows to +inf for extreme
/// distance/frequency combinations; use path_loss_db when composing.
double path_loss_linear(DistanceKm l, FrequencyKHz f, const EnvironmentParams& env);

/// The four noise sources in linear units. Each component is positive for
/// every f > 0.
NoiseComponents noise_components(FrequencyKHz f, const EnvironmentParams& env);

/// Total ambient noise psd, components summed in linear scale.
PsdLinear noise_psd_linear(FrequencyKHz f, const EnvironmentParams& env);

/// 10*log10 of the total ambient noise psd.
double noise_psd_db(FrequencyKHz f, const EnvironmentParams& env);

/// 10*log10(A(l,f) * N(f)). The solver's objective curve, kept in dB
/// because the linear product overflows double range at high f*l.
double an_product_db(DistanceKm l, FrequencyKHz f, const EnvironmentParams& env);

/// Linear A*N product; +inf where not representable.
double an_product(DistanceKm l, FrequencyKHz f, const EnvironmentParams& env);

/// Log-spaced frequency grid over [f_min_khz, f_max_khz], endpoints included.
struct FrequencyGrid {
    double f_min_khz = 0.01;
    double f_max_khz = 1000.0;
    int points = 2000;

    std::vector<double> freqs_khz;

    static FrequencyGrid make(double f_min_khz = 0.01, double f_max_khz = 1000.0,
                              int points = 2000);

    bool built() const { return !freqs_khz.empty(); }
};

/// argmin over the grid of the A*N product; ties broken toward the lower
/// frequency. Invariant to the spreading factor k.
FrequencyKHz optimal_frequency(DistanceKm l, const EnvironmentParams& env,
                               const FrequencyGrid& grid);

}  // namespace uwac
