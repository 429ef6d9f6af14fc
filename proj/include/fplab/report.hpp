#pragma once

#include "fplab/cell.hpp"
#include "fplab/degenerate.hpp"
#include "fplab/fp_solver.hpp"
#include "fplab/homogenized.hpp"
#include "fplab/oned.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace fplab {

inline constexpr std::size_t kBatterySize = 4;
inline const std::array<const char*, kBatterySize> kBatteryNames{"one", "x1", "cos_pi_x1", "cos_pi_x1_cos_pi_x2"};

// One swept parameter value. Distances are nodal L2(Omega x (0, T)) norms with
// trapezoid weights in space and over the stored frames in time.
struct ConvergenceRow {
    std::string key;        // unique within a report
    std::string parameter;  // "eps" or "delta"
    double eps = 0.0;       // 0 on delta rows
    double delta = 0.0;     // 0 for the degenerate (delta = 0) problem
    double eta = 0.0;
    std::string regime;
    double l2_gap = 0.0;       // to the report's target
    double target_norm = 0.0;  // of the target
    double cross_gap = 0.0;    // to the other scheme's limit (report.cross_target)
    double outer_norm = 0.0;   // of u on the outer nodes
    double weak_gap = 0.0;     // max over the battery of |int (u - target) phi| at T
    double measure_gap = 0.0;  // same for the total measure against the limiting density
    std::array<double, kBatterySize> weak{};         // int u(T) phi
    std::array<double, kBatterySize> weak_target{};  // int target(T) phi
    double fitted_rate = 0.0;   // zeroth-order coefficient fitted from the bulk mass (scheme one)
    double v0_norm = 0.0;       // sup_t ||v0(t)||_L2 (delta rows)
    double delta_spread = 0.0;  // distance to the row of the first delta at the same eps
    double runtime = 0.0;       // seconds; JSON only, so that CSV bytes are reproducible
};

struct ConvergenceReport {
    std::string scheme;  // "one" or "two"
    std::string regime;
    std::string target;
    std::string cross_target;
    std::string metric = "l2";  // "l2" or "weak": which distance the commutation verdict uses
    double theta = 0.0;
    double k2theta = 0.0;
    std::vector<ConvergenceRow> rows;
    std::map<std::string, double> summary;
};

void check_report(const ConvergenceReport& r);  // unique row keys

std::string report_csv(const ConvergenceReport& r);
std::string report_to_json(const ConvergenceReport& r);
ConvergenceReport report_from_json(const std::string& text);

// Writes text to path, creating parent directories; throws IoError with the path.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

// CSV builder: RFC 4180 quoting, "%.12e" numbers, fixed header.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);
    CsvTable& add(double x);
    CsvTable& add(long long x);
    CsvTable& add(int x) { return add(static_cast<long long>(x)); }
    CsvTable& add(std::size_t x) { return add(static_cast<long long>(x)); }
    CsvTable& add(const std::string& s);
    void end_row();
    const std::string& text() const { return out_; }
    std::size_t rows() const { return rows_; }

private:
    std::size_t columns_;
    std::size_t filled_ = 0;
    std::size_t rows_ = 0;
    std::string out_;

    void cell(const std::string& s);
};

std::string format_number(double x);
std::string csv_quote(const std::string& s);

// (t, node_index, x..., u, v[, m0]) for every `every`-th stored frame.
std::string snapshots_csv(const SolutionField& s, int every = 1, const std::vector<std::vector<double>>* m0 = nullptr);
std::string diagnostics_csv(const std::vector<DiagnosticsRow>& d);
std::string degenerate_csv(const std::vector<DegenerateBalanceRow>& b);
std::string cell_csv(const CapacityEstimate& e);
std::string cell_json(const CapacityEstimate& e);
std::string oned_csv(const OneDSolution& s, const std::vector<double>& abel);
std::string blowup_csv(const BlowupResult& r);
std::string blowup_snapshots_csv(const BlowupResult& r);

} // namespace fplab
