#include "fplab/report.hpp"
#include "fplab/errors.hpp"

#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace fplab {

using nlohmann::json;

std::string format_number(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", x);
    return buf;
}

std::string csv_quote(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size())
{
    require(!header.empty(), "CSV header must not be empty");
    for (const auto& h : header) cell(csv_quote(h));
    end_row();
    rows_ = 0;
}

void CsvTable::cell(const std::string& s)
{
    if (filled_ == columns_) throw std::logic_error("CSV row has too many cells");
    if (filled_ > 0) out_ += ',';
    out_ += s;
    ++filled_;
}

CsvTable& CsvTable::add(double x)
{
    cell(format_number(x));
    return *this;
}

CsvTable& CsvTable::add(long long x)
{
    cell(std::to_string(x));
    return *this;
}

CsvTable& CsvTable::add(const std::string& s)
{
    cell(csv_quote(s));
    return *this;
}

void CsvTable::end_row()
{
    if (filled_ != columns_) throw std::logic_error("CSV row has too few cells");
    out_ += "\r\n";
    filled_ = 0;
    ++rows_;
}

void write_text(const std::string& path, const std::string& text)
{
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create directory for '" + path + "': " + ec.message());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void check_report(const ConvergenceReport& r)
{
    std::set<std::string> keys;
    for (const auto& row : r.rows)
        if (!keys.insert(row.key).second) throw ValidationError("duplicate report row key '" + row.key + "'");
}

std::string report_csv(const ConvergenceReport& r)
{
    check_report(r);
    std::vector<std::string> header{"scheme",   "regime",      "target",      "key",        "parameter",  "eps",
                                    "delta",    "eta",         "l2_gap",      "target_norm", "cross_gap", "outer_norm",
                                    "weak_gap", "measure_gap", "fitted_rate", "v0_norm",    "delta_spread"};
    for (const char* n : kBatteryNames) header.push_back(std::string("weak_") + n);
    for (const char* n : kBatteryNames) header.push_back(std::string("weak_target_") + n);
    CsvTable t(header);
    for (const auto& row : r.rows) {
        t.add(r.scheme).add(row.regime).add(r.target).add(row.key).add(row.parameter);
        t.add(row.eps).add(row.delta).add(row.eta).add(row.l2_gap).add(row.target_norm).add(row.cross_gap);
        t.add(row.outer_norm).add(row.weak_gap).add(row.measure_gap).add(row.fitted_rate).add(row.v0_norm);
        t.add(row.delta_spread);
        for (double w : row.weak) t.add(w);
        for (double w : row.weak_target) t.add(w);
        t.end_row();
    }
    return t.text();
}

namespace {

json row_json(const ConvergenceRow& r)
{
    return {{"key", r.key},
            {"parameter", r.parameter},
            {"eps", r.eps},
            {"delta", r.delta},
            {"eta", r.eta},
            {"regime", r.regime},
            {"l2_gap", r.l2_gap},
            {"target_norm", r.target_norm},
            {"cross_gap", r.cross_gap},
            {"outer_norm", r.outer_norm},
            {"weak_gap", r.weak_gap},
            {"measure_gap", r.measure_gap},
            {"weak", r.weak},
            {"weak_target", r.weak_target},
            {"fitted_rate", r.fitted_rate},
            {"v0_norm", r.v0_norm},
            {"delta_spread", r.delta_spread},
            {"runtime", r.runtime}};
}

template <class T>
T field(const json& j, const char* key)
{
    if (!j.contains(key)) throw ValidationError(std::string("report JSON: missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("report JSON: bad field '") + key + "': " + e.what());
    }
}

} // namespace

std::string report_to_json(const ConvergenceReport& r)
{
    check_report(r);
    json j;
    j["schema"] = "fplab.convergence.v1";
    j["scheme"] = r.scheme;
    j["regime"] = r.regime;
    j["target"] = r.target;
    j["cross_target"] = r.cross_target;
    j["metric"] = r.metric;
    j["theta"] = r.theta;
    j["k2theta"] = r.k2theta;
    j["rows"] = json::array();
    for (const auto& row : r.rows) j["rows"].push_back(row_json(row));
    j["summary"] = r.summary;
    return j.dump(2);
}

ConvergenceReport report_from_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("report is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || field<std::string>(j, "schema") != "fplab.convergence.v1")
        throw ValidationError("report JSON: unknown schema");
    ConvergenceReport r;
    r.scheme = field<std::string>(j, "scheme");
    r.regime = field<std::string>(j, "regime");
    r.target = field<std::string>(j, "target");
    r.cross_target = field<std::string>(j, "cross_target");
    r.metric = field<std::string>(j, "metric");
    r.theta = field<double>(j, "theta");
    r.k2theta = field<double>(j, "k2theta");
    for (const auto& e : field<json>(j, "rows")) {
        ConvergenceRow row;
        row.key = field<std::string>(e, "key");
        row.parameter = field<std::string>(e, "parameter");
        row.eps = field<double>(e, "eps");
        row.delta = field<double>(e, "delta");
        row.eta = field<double>(e, "eta");
        row.regime = field<std::string>(e, "regime");
        row.l2_gap = field<double>(e, "l2_gap");
        row.target_norm = field<double>(e, "target_norm");
        row.cross_gap = field<double>(e, "cross_gap");
        row.outer_norm = field<double>(e, "outer_norm");
        row.weak_gap = field<double>(e, "weak_gap");
        row.measure_gap = field<double>(e, "measure_gap");
        row.weak = field<std::array<double, kBatterySize>>(e, "weak");
        row.weak_target = field<std::array<double, kBatterySize>>(e, "weak_target");
        row.fitted_rate = field<double>(e, "fitted_rate");
        row.v0_norm = field<double>(e, "v0_norm");
        row.delta_spread = field<double>(e, "delta_spread");
        row.runtime = field<double>(e, "runtime");
        r.rows.push_back(std::move(row));
    }
    r.summary = field<std::map<std::string, double>>(j, "summary");
    check_report(r);
    return r;
}

std::string snapshots_csv(const SolutionField& s, int every, const std::vector<std::vector<double>>* m0)
{
    require(every >= 1, "snapshot thinning must be positive");
    const Grid& g = s.grid;
    std::vector<std::string> header{"t", "node_index"};
    const char* axes[] = {"x1", "x2", "x3"};
    for (int a = 0; a < g.dim(); ++a) header.push_back(axes[a]);
    header.push_back("u");
    header.push_back("v");
    if (m0) {
        require(m0->size() == s.frames(), "m0 frame count mismatch");
        header.push_back("m0");
    }
    CsvTable t(header);
    for (std::size_t k = 0; k < s.frames(); ++k) {
        if (k % static_cast<std::size_t>(every) != 0 && k + 1 != s.frames()) continue;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Point x = g.coords(i);
            t.add(s.times[k]).add(i);
            for (int a = 0; a < g.dim(); ++a) t.add(x[a]);
            t.add(s.u[k][i]).add(s.v[k][i]);
            if (m0) t.add((*m0)[k][i]);
            t.end_row();
        }
    }
    return t.text();
}

std::string diagnostics_csv(const std::vector<DiagnosticsRow>& d)
{
    CsvTable t({"t", "mass", "l1", "min_u", "max_u", "energy_grad_cum"});
    for (const auto& r : d) {
        t.add(r.t).add(r.mass).add(r.l1).add(r.min_u).add(r.max_u).add(r.energy_grad_cum);
        t.end_row();
    }
    return t.text();
}

std::string degenerate_csv(const std::vector<DegenerateBalanceRow>& b)
{
    CsvTable t({"t", "outer_mass", "inner_mass", "boundary_measure", "total", "residual"});
    for (const auto& r : b) {
        t.add(r.t).add(r.outer_mass).add(r.inner_mass).add(r.boundary_measure).add(r.total).add(r.residual);
        t.end_row();
    }
    return t.text();
}

std::string cell_csv(const CapacityEstimate& e)
{
    CsvTable t({"R", "h", "Theta_R"});
    for (const auto& r : e.runs) {
        t.add(r.R).add(r.h).add(r.theta_R);
        t.end_row();
    }
    return t.text();
}

std::string cell_json(const CapacityEstimate& e)
{
    json j;
    j["theta"] = e.theta;
    j["error_estimate"] = e.error_estimate;
    j["fits"] = json::array();
    for (const auto& f : e.fits) j["fits"].push_back({{"theta", f.theta}, {"slope", f.slope}, {"error_estimate", f.error_estimate}});
    return j.dump(2);
}

std::string oned_csv(const OneDSolution& s, const std::vector<double>& abel)
{
    require(abel.size() == s.times.size(), "Abel residual length mismatch");
    CsvTable t({"t", "u_minus", "u_plus", "flux_minus", "mass", "abel_residual"});
    for (std::size_t k = 0; k < s.times.size(); ++k) {
        t.add(s.times[k]).add(s.u_minus[k]).add(s.u_plus[k]).add(s.flux_minus[k]).add(s.mass[k]).add(abel[k]);
        t.end_row();
    }
    return t.text();
}

std::string blowup_csv(const BlowupResult& r)
{
    CsvTable t({"j", "x_j", "t_j", "peak_u", "threshold", "v_max", "l1", "reached"});
    for (const auto& s : r.stages) {
        t.add(s.j).add(s.x).add(s.t).add(s.peak).add(s.threshold).add(s.v_max).add(s.l1).add(s.reached ? 1 : 0);
        t.end_row();
    }
    return t.text();
}

std::string blowup_snapshots_csv(const BlowupResult& r)
{
    CsvTable t({"j", "node_index", "x", "u"});
    for (std::size_t k = 0; k < r.snapshots.size(); ++k)
        for (std::size_t i = 0; i < r.x.size(); ++i) {
            t.add(k + 1).add(i).add(r.x[i]).add(r.snapshots[k][i]);
            t.end_row();
        }
    return t.text();
}

} // namespace fplab
