#include "uwac/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace uwac {

namespace {

constexpr double kCapacityPerDb = 0.33219280948873623;  // log2(10)/10
constexpr double kLn10Over10 = 0.23025850929940457;     // ln(10)/10
constexpr double kDbPerDoubling = 3.0102999566398120;   // 10*log10(2)

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double v) { return 10.0 * std::log10(v); }

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double sum = 0.0;
    for (size_t i = 0; i + 1 < x.size(); ++i) {
        sum += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
    }
    return sum;
}

// Composite Simpson on non-uniform nodes (quadratic through point triples);
// trailing odd panel falls back to trapezoid.
double simpson(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    if (n < 3) return trapezoid(x, y);
    double sum = 0.0;
    size_t i = 0;
    for (; i + 2 < n; i += 2) {
        const double h0 = x[i + 1] - x[i];
        const double h1 = x[i + 2] - x[i + 1];
        const double h = h0 + h1;
        sum += h / 6.0 *
               ((2.0 - h1 / h0) * y[i] + h * h / (h0 * h1) * y[i + 1] +
                (2.0 - h0 / h1) * y[i + 2]);
    }
    if (i + 1 < n) {
        sum += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
    }
    return sum;
}

}  // namespace

double TransmissionBand::lo_khz() const {
    if (intervals.empty()) throw std::logic_error("empty transmission band");
    return intervals.front().lo_khz;
}

double TransmissionBand::hi_khz() const {
    if (intervals.empty()) throw std::logic_error("empty transmission band");
    return intervals.back().hi_khz;
}

double TransmissionBand::total_width_khz() const {
    double w = 0.0;
    for (const auto& iv : intervals) w += iv.width();
    return w;
}

void TransmissionBand::validate() const {
    for (size_t i = 0; i < intervals.size(); ++i) {
        const auto& iv = intervals[i];
        if (!(iv.lo_khz > 0.0) || !(iv.hi_khz > iv.lo_khz)) {
            throw std::logic_error("band interval not ordered positive");
        }
        if (i > 0 && !(iv.lo_khz > intervals[i - 1].hi_khz)) {
            throw std::logic_error("band intervals overlap or are unsorted");
        }
    }
}

LinkQuery::LinkQuery(DistanceKm l_, double c_kbps) : l(l_), c_target_kbps(c_kbps) {
    if (!std::isfinite(c_kbps) || c_kbps < 0.0) {
        throw std::domain_error("target capacity must be finite and >= 0 kbit/s");
    }
}

void LinkSolution::validate() const {
    band.validate();
    if (!(power_linear >= 0.0)) {
        throw std::logic_error("negative transmit power");
    }
    if (!band.empty()) {
        if (!(f_ini.value <= f0.value && f0.value <= f_end.value)) {
            throw std::logic_error("optimal frequency outside the band span");
        }
        if (!(bandwidth_khz >= 0.0) || !(band_width_sum_khz > 0.0)) {
            throw std::logic_error("inconsistent bandwidth fields");
        }
    }
}

CapacityUnreachableError::CapacityUnreachableError(double l_km, double c_target_kbps,
                                                   double achieved_kbps)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "capacity unreachable: target " << c_target_kbps << " kbit/s at "
             << l_km << " km; maximum achievable at the waterfilling cap is "
             << achieved_kbps << " kbit/s";
          return os.str();
      }()),
      achieved_(achieved_kbps) {}

void SolverSettings::validate() const {
    if (!(f_min_khz > 0.0) || !(f_max_khz > f_min_khz)) {
        throw std::domain_error("frequency range needs 0 < f_min < f_max");
    }
    if (grid_points < 16) {
        throw std::domain_error("grid_points must be at least 16");
    }
    if (!(capacity_rel_tol > 0.0) || !(capacity_abs_tol_kbps > 0.0)) {
        throw std::domain_error("capacity tolerances must be > 0");
    }
    if (!(band_edge_rel_tol > 0.0) || !(band_edge_rel_tol < 0.1)) {
        throw std::domain_error("band edge tolerance out of range");
    }
    if (!(k_max_factor > 1.0)) {
        throw std::domain_error("k_max_factor must exceed 1");
    }
    if (!(epsilon_db > 0.0)) {
        throw std::domain_error("epsilon step must be > 0 dB");
    }
    if (max_iterations < 8) {
        throw std::domain_error("max_iterations too small");
    }
}

WaterfillingSolver::WaterfillingSolver(EnvironmentParams env, SolverSettings settings)
    : env_(env), settings_(settings) {
    env_.validate();
    settings_.validate();
    grid_ = FrequencyGrid::make(settings_.f_min_khz, settings_.f_max_khz,
                                settings_.grid_points);
    const size_t n = grid_.freqs_khz.size();
    absorb_db_.resize(n);
    noise_db_.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const FrequencyKHz f(grid_.freqs_khz[i]);
        absorb_db_[i] = absorption_db_per_km(f);
        noise_db_[i] = noise_psd_db(f, env_);
    }
}

double WaterfillingSolver::an_db_at(double l_km, double f_khz) const {
    const double spread = env_.spreading_k * 10.0 * std::log10(l_km);
    const FrequencyKHz f(f_khz);
    return spread + absorption_db_per_km(f) * l_km + noise_psd_db(f, env_);
}

double WaterfillingSolver::an_db(DistanceKm l, FrequencyKHz f) const {
    return an_db_at(l.value, f.value);
}

std::vector<double> WaterfillingSolver::an_curve_db(double l_km) const {
    const double spread = env_.spreading_k * 10.0 * std::log10(l_km);
    std::vector<double> curve(grid_.freqs_khz.size());
    for (size_t i = 0; i < curve.size(); ++i) {
        curve[i] = spread + absorb_db_[i] * l_km + noise_db_[i];
    }
    return curve;
}

double WaterfillingSolver::min_an_db(DistanceKm l) const {
    const auto curve = an_curve_db(l.value);
    return *std::min_element(curve.begin(), curve.end());
}

FrequencyKHz WaterfillingSolver::optimal_frequency(DistanceKm l) const {
    const auto curve = an_curve_db(l.value);
    const size_t idx = static_cast<size_t>(
        std::min_element(curve.begin(), curve.end()) - curve.begin());
    return FrequencyKHz(grid_.freqs_khz[idx]);
}

double WaterfillingSolver::refine_edge(double l_km, double k_db, double f_out,
                                       double f_in) const {
    // Bracket invariant: A*N > K at f_out, A*N <= K at f_in.
    double a = f_out;
    double b = f_in;
    for (int it = 0; it < 200; ++it) {
        if (std::abs(b - a) <= settings_.band_edge_rel_tol * std::max(std::abs(a), std::abs(b))) {
            break;
        }
        const double m = 0.5 * (a + b);
        if (an_db_at(l_km, m) <= k_db) {
            b = m;
        } else {
            a = m;
        }
    }
    return 0.5 * (a + b);
}

TransmissionBand WaterfillingSolver::band_from_curve(double l_km,
                                                     const std::vector<double>& curve_db,
                                                     double k_db) const {
    TransmissionBand band;
    const size_t n = curve_db.size();
    size_t i = 0;
    while (i < n) {
        if (curve_db[i] > k_db) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j + 1 < n && curve_db[j + 1] <= k_db) ++j;
        BandInterval iv;
        iv.lo_khz = (i == 0) ? grid_.freqs_khz.front()
                             : refine_edge(l_km, k_db, grid_.freqs_khz[i - 1],
                                           grid_.freqs_khz[i]);
        iv.hi_khz = (j + 1 == n) ? grid_.freqs_khz.back()
                                 : refine_edge(l_km, k_db, grid_.freqs_khz[j + 1],
                                               grid_.freqs_khz[j]);
        band.intervals.push_back(iv);
        i = j + 1;
    }
    return band;
}

double WaterfillingSolver::integrate_band(double l_km, double k_db,
                                          const TransmissionBand& band,
                                          bool capacity) const {
    if (band.empty()) return 0.0;
    const double k_level = db_to_linear(k_db);
    double total = 0.0;
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& iv : band.intervals) {
        xs.clear();
        ys.clear();
        xs.push_back(iv.lo_khz);
        auto it = std::upper_bound(grid_.freqs_khz.begin(), grid_.freqs_khz.end(),
                                   iv.lo_khz);
        for (; it != grid_.freqs_khz.end() && *it < iv.hi_khz; ++it) {
            xs.push_back(*it);
        }
        xs.push_back(iv.hi_khz);
        ys.resize(xs.size());
        for (size_t i = 0; i < xs.size(); ++i) {
            const double delta_db = std::max(0.0, k_db - an_db_at(l_km, xs[i]));
            ys[i] = capacity ? delta_db * kCapacityPerDb
                             : k_level * (-std::expm1(-delta_db * kLn10Over10));
        }
        total += (settings_.quadrature == SolverSettings::Quadrature::simpson)
                     ? simpson(xs, ys)
                     : trapezoid(xs, ys);
    }
    return total;
}

TransmissionBand WaterfillingSolver::band_for_k(DistanceKm l, double k_level) const {
    if (std::isnan(k_level) || k_level <= 0.0) {
        throw std::domain_error("waterfilling level must be > 0");
    }
    const auto curve = an_curve_db(l.value);
    return band_from_curve(l.value, curve, linear_to_db(k_level));
}

double WaterfillingSolver::capacity_for_k(DistanceKm l, double k_level,
                                          const TransmissionBand& band) const {
    if (std::isnan(k_level) || k_level <= 0.0) {
        throw std::domain_error("waterfilling level must be > 0");
    }
    return integrate_band(l.value, linear_to_db(k_level), band, true);
}

double WaterfillingSolver::power_for_k(DistanceKm l, double k_level,
                                       const TransmissionBand& band) const {
    if (std::isnan(k_level) || k_level <= 0.0) {
        throw std::domain_error("waterfilling level must be > 0");
    }
    return integrate_band(l.value, linear_to_db(k_level), band, false);
}

LinkSolution WaterfillingSolver::assemble(double l_km, double c_target, double k_db,
                                          const std::vector<double>& curve_db) const {
    LinkSolution sol;
    sol.l_km = l_km;
    sol.c_target_kbps = c_target;
    sol.k_level_db = k_db;
    sol.k_level = db_to_linear(k_db);
    const size_t idx = static_cast<size_t>(
        std::min_element(curve_db.begin(), curve_db.end()) - curve_db.begin());
    sol.f0 = FrequencyKHz(grid_.freqs_khz[idx]);
    if (c_target > 0.0) {
        sol.band = band_from_curve(l_km, curve_db, k_db);
        sol.capacity_kbps = integrate_band(l_km, k_db, sol.band, true);
        sol.power_linear = integrate_band(l_km, k_db, sol.band, false);
    }
    if (!sol.band.empty()) {
        sol.f_ini = FrequencyKHz(sol.band.lo_khz());
        sol.f_end = FrequencyKHz(sol.band.hi_khz());
        sol.bandwidth_khz = sol.f_end.value - sol.f_ini.value;
        sol.band_width_sum_khz = sol.band.total_width_khz();
    }
    sol.power_db = linear_to_db(sol.power_linear);  // -inf when P = 0
    sol.validate();
    return sol;
}

LinkSolution WaterfillingSolver::solve(const LinkQuery& q) const {
    const double l_km = q.l.value;
    if (!(l_km > 0.0)) {
        throw std::domain_error("link distance must be set and > 0 km");
    }
    const auto curve = an_curve_db(l_km);
    const double min_db = *std::min_element(curve.begin(), curve.end());

    if (q.c_target_kbps == 0.0) {
        return assemble(l_km, 0.0, min_db, curve);
    }

    const double target = q.c_target_kbps;
    const double tol = std::max(settings_.capacity_rel_tol * target,
                                settings_.capacity_abs_tol_kbps);
    const double cap_db = min_db + 10.0 * std::log10(settings_.k_max_factor);

    const auto capacity_at = [&](double k_db) {
        return integrate_band(l_km, k_db, band_from_curve(l_km, curve, k_db), true);
    };

    if (settings_.root_mode == SolverSettings::RootMode::epsilon_increment) {
        // Literal incremental search: raise K by a fixed dB step until the
        // target capacity is met. Stops at the first level at or above target.
        double k_db = min_db;
        while (true) {
            k_db = std::min(k_db + settings_.epsilon_db, cap_db);
            const double c = capacity_at(k_db);
            if (c >= target) {
                return assemble(l_km, target, k_db, curve);
            }
            if (k_db >= cap_db) {
                throw CapacityUnreachableError(l_km, target, c);
            }
        }
    }

    // Bracket by doubling K, then bisect on the monotone K -> capacity map.
    double lo_db = min_db;
    double hi_db = min_db;
    double c_hi = 0.0;
    while (true) {
        hi_db = std::min(hi_db + kDbPerDoubling, cap_db);
        c_hi = capacity_at(hi_db);
        if (c_hi >= target) break;
        if (hi_db >= cap_db) {
            throw CapacityUnreachableError(l_km, target, c_hi);
        }
        lo_db = hi_db;
    }
    if (std::abs(c_hi - target) <= tol) {
        return assemble(l_km, target, hi_db, curve);
    }
    // The edge refinement quantizes the capacity map at a scale that can
    // exceed a tight capacity tolerance, so a collapsed K bracket also
    // terminates: the midpoint is then the root of the discretized map.
    constexpr double kBracketCollapseDb = 1e-11;
    for (int it = 0; it < settings_.max_iterations; ++it) {
        const double mid_db = 0.5 * (lo_db + hi_db);
        const double c_mid = capacity_at(mid_db);
        if (std::abs(c_mid - target) <= tol || hi_db - lo_db <= kBracketCollapseDb) {
            return assemble(l_km, target, mid_db, curve);
        }
        if (c_mid < target) {
            lo_db = mid_db;
        } else {
            hi_db = mid_db;
        }
    }
    throw std::runtime_error("waterfilling bisection failed to converge");
}

LinkSolution rescale_spreading(const LinkSolution& sol, DistanceKm l, double k_from,
                               double k_to) {
    if (!std::isfinite(k_from) || !std::isfinite(k_to)) {
        throw std::domain_error("spreading factors must be finite");
    }
    const double factor = std::pow(l.value, k_to - k_from);
    const double factor_db = (k_to - k_from) * 10.0 * std::log10(l.value);
    LinkSolution out = sol;
    out.k_level *= factor;
    out.k_level_db += factor_db;
    out.power_linear *= factor;
    out.power_db += factor_db;  // -inf stays -inf for zero-power solutions
    return out;
}

}  // namespace uwac
