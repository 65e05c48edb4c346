#pragma once

#include <vector>

#include "uwac/channel.hpp"

// Waterfilling over the colored-noise acoustic channel. For a link of
// distance l and target capacity C the solver finds the level K such that
//
//   C = integral over B of log2(K / (A(l,f) N(f))) df      [kHz -> kbit/s]
//   P = integral over B of (K - A(l,f) N(f)) df
//
// where B = { f : A(l,f) N(f) <= K }. The A*N curve is handled in dB
// internally; the linear product overflows double range at high f*l.

namespace uwac {

/// One closed frequency interval of the transmission band, in kHz.
struct BandInterval {
    double lo_khz = 0.0;
    double hi_khz = 0.0;

    double width() const { return hi_khz - lo_khz; }
};

/// Union of disjoint intervals, sorted ascending. Empty when C = 0.
struct TransmissionBand {
    std::vector<BandInterval> intervals;

    bool empty() const { return intervals.empty(); }
    double lo_khz() const;             // lowest edge; throws when empty
    double hi_khz() const;             // highest edge; throws when empty
    double total_width_khz() const;    // sum of interval widths
    void validate() const;             // sorted, disjoint, lo < hi each
};

/// One solve request.
struct LinkQuery {
    DistanceKm l;
    double c_target_kbps = 0.0;

    LinkQuery() = default;
    LinkQuery(DistanceKm l_, double c_kbps);
};

/// Full waterfilling result for one (l, C) pair.
struct LinkSolution {
    double l_km = 0.0;
    double c_target_kbps = 0.0;

    double k_level = 0.0;     // waterfilling level, linear A*N units
    double k_level_db = 0.0;  // 10*log10(k_level)
    TransmissionBand band;
    FrequencyKHz f_ini;       // lowest band edge (0 when band is empty)
    FrequencyKHz f_end;       // highest band edge (0 when band is empty)
    double bandwidth_khz = 0.0;      // f_end - f_ini
    double band_width_sum_khz = 0.0; // sum of interval widths
    double power_linear = 0.0;
    double power_db = 0.0;    // 10*log10(power_linear); -inf when P = 0
    double capacity_kbps = 0.0;      // achieved capacity
    FrequencyKHz f0;          // argmin of A*N

    /// Structural invariants: band well formed, power >= 0,
    /// f_ini <= f0 <= f_end when the band is nonempty.
    void validate() const;
};

/// Raised when the target capacity is not reachable below the K cap.
class CapacityUnreachableError : public std::runtime_error {
public:
    CapacityUnreachableError(double l_km, double c_target_kbps,
                             double achieved_kbps);

    double achieved_kbps() const { return achieved_; }

private:
    double achieved_;
};

struct SolverSettings {
    double f_min_khz = 0.01;
    double f_max_khz = 1000.0;
    int grid_points = 2000;

    // Defaults are tighter than the 1e-6 the rest of the toolchain assumes,
    // so spreading-factor cross-checks keep margin.
    double capacity_rel_tol = 1e-9;
    double capacity_abs_tol_kbps = 1e-12;
    double band_edge_rel_tol = 1e-6;  // relative frequency tolerance
    double k_max_factor = 1e30;       // K cap = min(A*N) * k_max_factor

    enum class RootMode { bisection, epsilon_increment };
    RootMode root_mode = RootMode::bisection;
    double epsilon_db = 0.01;  // step for epsilon_increment mode

    enum class Quadrature { trapezoid, simpson };
    Quadrature quadrature = Quadrature::trapezoid;

    int max_iterations = 400;

    void validate() const;
};

/// Stateless once constructed; const methods are safe to call from many
/// threads concurrently.
class WaterfillingSolver {
public:
    explicit WaterfillingSolver(EnvironmentParams env = {},
                                SolverSettings settings = {});

    const EnvironmentParams& env() const { return env_; }
    const SolverSettings& settings() const { return settings_; }
    const FrequencyGrid& grid() const { return grid_; }

    /// Find K, band, power and band edges for the query. Throws
    /// CapacityUnreachableError if C is not reachable below the K cap.
    LinkSolution solve(const LinkQuery& q) const;

    /// Frequencies where A(l,f)N(f) <= k_level, as contiguous grid runs with
    /// edges refined by bisection between adjacent grid points. k_level below
    /// the curve minimum yields an empty band.
    TransmissionBand band_for_k(DistanceKm l, double k_level) const;

    /// Capacity in kbit/s carried by `band` at level k_level.
    double capacity_for_k(DistanceKm l, double k_level,
                          const TransmissionBand& band) const;

    /// Linear transmit power over `band` at level k_level.
    double power_for_k(DistanceKm l, double k_level,
                       const TransmissionBand& band) const;

    /// argmin of A*N on the solver grid; ties toward lower frequency.
    FrequencyKHz optimal_frequency(DistanceKm l) const;

    /// min over the grid of 10*log10(A*N).
    double min_an_db(DistanceKm l) const;

    /// 10*log10(A(l,f) N(f)) at an arbitrary frequency.
    double an_db(DistanceKm l, FrequencyKHz f) const;

private:
    EnvironmentParams env_;
    SolverSettings settings_;
    FrequencyGrid grid_;
    std::vector<double> absorb_db_;  // absorption at grid points, dB/km
    std::vector<double> noise_db_;   // 10*log10 N at grid points

    std::vector<double> an_curve_db(double l_km) const;
    double an_db_at(double l_km, double f_khz) const;
    TransmissionBand band_from_curve(double l_km,
                                     const std::vector<double>& curve_db,
                                     double k_db) const;
    double refine_edge(double l_km, double k_db, double f_out, double f_in) const;
    double integrate_band(double l_km, double k_db,
                          const TransmissionBand& band, bool capacity) const;
    LinkSolution assemble(double l_km, double c_target, double k_db,
                          const std::vector<double>& curve_db) const;
};

/// Rescale a solution computed with spreading factor k_from to k_to at the
/// same distance: K and P gain the factor l^(k_to - k_from); band, edges,
/// bandwidth and capacity are unchanged.
LinkSolution rescale_spreading(const LinkSolution& sol, DistanceKm l,
                               double k_from, double k_to);

}  // namespace uwac
