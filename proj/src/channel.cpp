#include "uwac/channel.hpp"

#include <algorithm>
#include <cmath>

namespace uwac {

namespace {

void require_finite_positive(double v, const char* what) {
    if (!std::isfinite(v) || v <= 0.0) {
        throw std::domain_error(std::string(what) + " must be finite and > 0, got " +
                                std::to_string(v));
    }
}

}  // namespace

FrequencyKHz::FrequencyKHz(double khz) : value(khz) {
    require_finite_positive(khz, "frequency [kHz]");
}

DistanceKm::DistanceKm(double km) : value(km) {
    require_finite_positive(km, "distance [km]");
}

void EnvironmentParams::validate() const {
    if (!std::isfinite(spreading_k) || spreading_k <= 0.0) {
        throw std::domain_error("spreading factor k must be finite and > 0");
    }
    if (!std::isfinite(shipping_s) || shipping_s < 0.0 || shipping_s > 1.0) {
        throw std::domain_error("shipping activity s must be in [0,1], got " +
                                std::to_string(shipping_s));
    }
    if (!std::isfinite(wind_w) || wind_w < 0.0) {
        throw std::domain_error("wind speed w must be >= 0 m/s, got " +
                                std::to_string(wind_w));
    }
}

double absorption_db_per_km(FrequencyKHz f) {
    require_finite_positive(f.value, "frequency [kHz]");
    const double fsq = f.value * f.value;
    if (f.value >= kThorpCrossoverKHz) {
        return 0.11 * fsq / (1.0 + fsq) + 44.0 * fsq / (4100.0 + fsq) +
               2.75e-4 * fsq + 0.003;
    }
    return 0.11 * fsq / (1.0 + fsq) + 0.011 * fsq + 0.002;
}

double path_loss_db(DistanceKm l, FrequencyKHz f, const EnvironmentParams& env) {
    require_finite_positive(l.value, "distance [km]");
    env.validate();
    return env.spreading_k * 10.0 * std::log10(l.value) +
           absorption_db_per_km(f) * l.value;
}

double path_loss_linear(DistanceKm l, FrequencyKHz f, const EnvironmentParams& env) {
    return std::pow(10.0, path_loss_db(l, f, env) / 10.0);
}

NoiseComponents noise_components(FrequencyKHz f, const EnvironmentParams& env) {
    require_finite_positive(f.value, "frequency [kHz]");
    env.validate();
    const double logf = std::log10(f.value);
    NoiseComponents n;
    n.turbulence = std::pow(10.0, 1.7 - 3.0 * logf);
    n.shipping = std::pow(10.0, 4.0 + 2.0 * (env.shipping_s - 0.5) + 2.6 * logf -
                                    6.0 * std::log10(f.value + 0.03));
    n.wind = std::pow(10.0, 5.0 + 0.75 * std::sqrt(env.wind_w) + 2.0 * logf -
                                4.0 * std::log10(f.value + 0.4));
    n.thermal = std::pow(10.0, -1.5 + 2.0 * logf);
    return n;
}

PsdLinear noise_psd_linear(FrequencyKHz f, const EnvironmentParams& env) {
    return PsdLinear{noise_components(f, env).total()};
}

double noise_psd_db(FrequencyKHz f, const EnvironmentParams& env) {
    return 10.0 * std::log10(noise_components(f, env).total());
}

double an_product_db(DistanceKm l, FrequencyKHz f, const EnvironmentParams& env) {
    return path_loss_db(l, f, env) + noise_psd_db(f, env);
}

double an_product(DistanceKm l, FrequencyKHz f, const EnvironmentParams& env) {
    return std::pow(10.0, an_product_db(l, f, env) / 10.0);
}

FrequencyGrid FrequencyGrid::make(double f_min_khz, double f_max_khz, int points) {
    require_finite_positive(f_min_khz, "grid f_min [kHz]");
    require_finite_positive(f_max_khz, "grid f_max [kHz]");
    if (f_max_khz <= f_min_khz) {
        throw std::domain_error("grid f_max must exceed f_min");
    }
    if (points < 2) {
        throw std::domain_error("frequency grid needs at least 2 points");
    }
    FrequencyGrid g;
    g.f_min_khz = f_min_khz;
    g.f_max_khz = f_max_khz;
    g.points = points;
    g.freqs_khz.resize(static_cast<size_t>(points));
    const double lo = std::log10(f_min_khz);
    const double hi = std::log10(f_max_khz);
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        g.freqs_khz[static_cast<size_t>(i)] = std::pow(10.0, lo + t * (hi - lo));
    }
    g.freqs_khz.front() = f_min_khz;
    g.freqs_khz.back() = f_max_khz;
    return g;
}

FrequencyKHz optimal_frequency(DistanceKm l, const EnvironmentParams& env,
                               const FrequencyGrid& grid) {
    if (!grid.built()) {
        throw std::domain_error("frequency grid not built");
    }
    require_finite_positive(l.value, "distance [km]");
    env.validate();
    size_t best = 0;
    double best_db = an_product_db(l, FrequencyKHz(grid.freqs_khz[0]), env);
    for (size_t i = 1; i < grid.freqs_khz.size(); ++i) {
        const double v = an_product_db(l, FrequencyKHz(grid.freqs_khz[i]), env);
        if (v < best_db) {
            best_db = v;
            best = i;
        }
    }
    return FrequencyKHz(grid.freqs_khz[best]);
}

}  // namespace uwac
