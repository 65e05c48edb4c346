#include "uwac/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace uwac {

namespace {

std::string format_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

void SweepSpec::validate() const {
    if (l_values_km.empty() || c_values_kbps.empty()) {
        throw std::domain_error("sweep grid must have at least one cell");
    }
    for (double l : l_values_km) {
        if (!std::isfinite(l) || l <= 0.0) {
            throw std::domain_error("sweep distances must be finite and > 0 km");
        }
    }
    for (double c : c_values_kbps) {
        if (!std::isfinite(c) || c < 0.0) {
            throw std::domain_error("sweep capacity targets must be finite and >= 0");
        }
    }
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) {
        throw std::domain_error("log spacing needs 0 < lo < hi and n >= 2");
    }
    std::vector<double> v(static_cast<size_t>(n));
    const double la = std::log10(lo);
    const double lb = std::log10(hi);
    for (int i = 0; i < n; ++i) {
        v[static_cast<size_t>(i)] = std::pow(10.0, la + (lb - la) * i / (n - 1));
    }
    v.front() = lo;
    v.back() = hi;
    return v;
}

SweepSpec SweepSpec::case1() {
    SweepSpec s;
    s.l_values_km = log_spaced(0.1, 10.0, 40);
    s.c_values_kbps = log_spaced(0.02, 2.0, 40);
    return s;
}

SweepSpec SweepSpec::case2() {
    SweepSpec s;
    s.l_values_km = log_spaced(1.0, 100.0, 40);
    s.c_values_kbps = log_spaced(1.0, 100.0, 40);
    return s;
}

SweepCellError::SweepCellError(double l_km, double c_kbps, const std::string& what)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "sweep cell l=" << l_km << " km, C=" << c_kbps << " kbit/s: " << what;
          return os.str();
      }()),
      l_km_(l_km),
      c_kbps_(c_kbps) {}

SweepResult run_sweep(const WaterfillingSolver& solver, const SweepSpec& spec,
                      unsigned threads) {
    spec.validate();
    const size_t nl = spec.l_values_km.size();
    const size_t nc = spec.c_values_kbps.size();
    const size_t cells = nl * nc;

    SweepResult result;
    result.rows.resize(cells);

    struct CellFailure {
        size_t index;
        std::string message;
    };
    std::optional<CellFailure> failure;
    std::mutex failure_mutex;
    std::atomic<size_t> next{0};

    const auto worker = [&] {
        while (true) {
            const size_t idx = next.fetch_add(1);
            if (idx >= cells) return;
            const double l = spec.l_values_km[idx / nc];
            const double c = spec.c_values_kbps[idx % nc];
            try {
                const LinkSolution sol = solver.solve(LinkQuery(DistanceKm(l), c));
                SweepRow& row = result.rows[idx];
                row.l_km = l;
                row.c_kbps = c;
                row.p_db = sol.power_db;
                row.f_ini_khz = sol.f_ini.value;
                row.f_end_khz = sol.f_end.value;
                row.b_khz = sol.bandwidth_khz;
                row.k_db = sol.k_level_db;
                row.f0_khz = sol.f0.value;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure || idx < failure->index) {
                    failure = CellFailure{idx, e.what()};
                }
            }
        }
    };

    unsigned n_threads = threads ? threads : std::thread::hardware_concurrency();
    if (n_threads == 0) n_threads = 1;
    n_threads = static_cast<unsigned>(
        std::min<size_t>(n_threads, cells));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    if (failure) {
        const size_t idx = failure->index;
        throw SweepCellError(spec.l_values_km[idx / nc], spec.c_values_kbps[idx % nc],
                             failure->message);
    }
    return result;
}

std::string sweep_csv_text(const SweepResult& result, const std::string& config_hash) {
    std::string out;
    out += "# schema: ";
    out += kSweepCsvSchema;
    out += '\n';
    out += "# config_hash: ";
    out += config_hash.empty() ? "none" : config_hash;
    out += '\n';
    out += kSweepCsvHeader;
    out += '\n';
    for (const SweepRow& r : result.rows) {
        out += format_g(r.l_km);
        out += ',';
        out += format_g(r.c_kbps);
        out += ',';
        out += format_g(r.p_db);
        out += ',';
        out += format_g(r.f_ini_khz);
        out += ',';
        out += format_g(r.f_end_khz);
        out += ',';
        out += format_g(r.b_khz);
        out += ',';
        out += format_g(r.k_db);
        out += ',';
        out += format_g(r.f0_khz);
        out += '\n';
    }
    return out;
}

void write_sweep_csv(const std::string& path, const SweepResult& result,
                     const std::string& config_hash) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    const std::string text = sweep_csv_text(result, config_hash);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) {
        throw std::runtime_error("write failed: " + path);
    }
}

namespace {

bool parse_fields(const std::string& line, SweepRow& row) {
    double* slots[8] = {&row.l_km,      &row.c_kbps,    &row.p_db,
                        &row.f_ini_khz, &row.f_end_khz, &row.b_khz,
                        &row.k_db,      &row.f0_khz};
    const char* p = line.c_str();
    for (int i = 0; i < 8; ++i) {
        char* end = nullptr;
        *slots[i] = std::strtod(p, &end);
        if (end == p) return false;
        p = end;
        if (i < 7) {
            if (*p != ',') return false;
            ++p;
        }
    }
    return *p == '\0' || *p == '\r';
}

}  // namespace

SweepResult parse_sweep_csv(const std::string& text, std::string* config_hash) {
    SweepResult result;
    bool schema_seen = false;
    bool header_seen = false;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            static const std::string schema_tag = "# schema: ";
            static const std::string hash_tag = "# config_hash: ";
            if (line.rfind(schema_tag, 0) == 0) {
                const std::string got = line.substr(schema_tag.size());
                if (got != kSweepCsvSchema) {
                    throw CsvSchemaError("unsupported sweep schema: " + got);
                }
                schema_seen = true;
            } else if (line.rfind(hash_tag, 0) == 0 && config_hash) {
                *config_hash = line.substr(hash_tag.size());
            }
            continue;
        }
        if (!header_seen) {
            if (!schema_seen) {
                throw CsvSchemaError("missing schema comment before header");
            }
            if (line != kSweepCsvHeader) {
                throw CsvSchemaError("unexpected sweep header: " + line);
            }
            header_seen = true;
            continue;
        }
        SweepRow row;
        if (!parse_fields(line, row)) {
            throw CsvSchemaError("malformed sweep row at line " +
                                 std::to_string(line_no));
        }
        result.rows.push_back(row);
    }
    if (!header_seen) {
        throw CsvSchemaError("sweep CSV has no header row");
    }
    return result;
}

SweepResult read_sweep_csv(const std::string& path, std::string* config_hash) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open for reading: " + path);
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_sweep_csv(buf.str(), config_hash);
}

}  // namespace uwac
