#pragma once

#include <string>
#include <vector>

#include "uwac/solver.hpp"

namespace uwac {

/// Cartesian grid of link queries: every distance paired with every capacity
/// target. Rows come back in row-major order (distance outer, capacity inner)
/// no matter how many worker threads ran the cells.
struct SweepSpec {
    std::vector<double> l_values_km;
    std::vector<double> c_values_kbps;

    void validate() const;

    /// Short-range preset: 40x40 log-spaced, 0.1-10 km, 0.02-2 kbit/s.
    static SweepSpec case1();
    /// Long-range preset: 40x40 log-spaced, 1-100 km, 1-100 kbit/s.
    static SweepSpec case2();
};

/// n log-spaced values with exact endpoints.
std::vector<double> log_spaced(double lo, double hi, int n);

/// One solved grid cell, flattened to the CSV column set.
struct SweepRow {
    double l_km = 0.0;
    double c_kbps = 0.0;
    double p_db = 0.0;
    double f_ini_khz = 0.0;
    double f_end_khz = 0.0;
    double b_khz = 0.0;
    double k_db = 0.0;
    double f0_khz = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

/// A cell that failed to solve, reported with its grid coordinates.
class SweepCellError : public std::runtime_error {
  public:
    SweepCellError(double l_km, double c_kbps, const std::string& what);
    double l_km() const { return l_km_; }
    double c_kbps() const { return c_kbps_; }

  private:
    double l_km_;
    double c_kbps_;
};

/// Solves every cell. threads = 0 picks the hardware thread count. If several
/// cells fail, the one with the lowest row index is reported.
SweepResult run_sweep(const WaterfillingSolver& solver, const SweepSpec& spec,
                      unsigned threads = 0);

/// Malformed or mismatched CSV input.
class CsvSchemaError : public std::runtime_error {
  public:
    explicit CsvSchemaError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr const char* kSweepCsvSchema = "uwacap-sweep-v1";
inline constexpr const char* kSweepCsvHeader =
    "l_km,C_kbps,P_dB,f_ini_kHz,f_end_kHz,B_kHz,K_dB,f0_kHz";

/// Writes schema and config-hash comment lines, the fixed header, then one
/// row per cell with %.10g fields. Output is byte-stable for equal inputs.
void write_sweep_csv(const std::string& path, const SweepResult& result,
                     const std::string& config_hash);

std::string sweep_csv_text(const SweepResult& result, const std::string& config_hash);

/// Parses a sweep CSV, enforcing the schema comment and header. The config
/// hash comment, when present, is returned through config_hash.
SweepResult read_sweep_csv(const std::string& path, std::string* config_hash = nullptr);

SweepResult parse_sweep_csv(const std::string& text, std::string* config_hash = nullptr);

}  // namespace uwac
