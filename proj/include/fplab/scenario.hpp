#pragma once

#include "fplab/cell.hpp"
#include "fplab/coefficients.hpp"
#include "fplab/fp_solver.hpp"
#include "fplab/geometry.hpp"
#include "fplab/homogenized.hpp"
#include "fplab/oned.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fplab {

// Nodal profile used for initial data and for the spatial part of sources.
//   constant: value
//   cosine:   value + amplitude * prod_a cos(pi * modes[a] * s_a), s box-relative
//   gaussian: value + amplitude * exp(-|x - centre|^2 / (2 width^2))
struct FieldSpec {
    std::string kind = "constant";
    double value = 1.0;
    double amplitude = 0.0;
    std::array<int, 3> modes{1, 1, 0};
    Point centre{0.5, 0.5, 0.5};
    double width = 0.1;

    std::vector<double> sample(const Grid& grid) const;
};

struct SourceTermSpec {
    FieldSpec space;
    SourceTerm::Profile profile = SourceTerm::Profile::Constant;
    double rate = 1.0;
};

struct SourceSpec {
    std::vector<SourceTermSpec> terms;

    Source build(const Grid& grid) const;
};

// eta(eps) = c * eps^p, or a constant value.
struct EtaRule {
    bool constant = true;
    double c = 1.0;
    double p = 0.0;
    double value = 1.0;

    double eta(double eps) const;
};

struct CellSection {
    std::vector<double> radii{2.0, 4.0, 8.0};
    std::vector<double> spacings{1.0 / 8.0, 1.0 / 12.0};
    CellBoundary boundary = CellBoundary::CutEdge;
    std::optional<double> theta;  // skips the cell solve when given
};

struct HomogSection {
    HomogenizedVariant variant = HomogenizedVariant::PD;
    double delta = 1.0;                 // PD_delta
    std::optional<double> capacitary;   // k^2 Theta for DMD; from the regime and the cell module otherwise
};

struct OneDSection {
    TwoPhaseSpec spec;
    std::vector<double> h{1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0};
    std::vector<double> dt{1.0 / 256.0, 1.0 / 1024.0, 1.0 / 4096.0};
};

struct BlowupSection {
    double alpha = 1.0;
    int j_max = 3;
    BlowupOptions options;
};

struct OutputSection {
    bool snapshots = true;
    int snapshot_every = 1;  // keep every n-th stored frame in snapshot CSVs
};

struct ScenarioConfig {
    Box box;
    int cells = 48;
    std::vector<double> eps{0.5, 0.25, 1.0 / 6.0, 0.125};
    std::vector<double> delta{1e-1, 1e-2, 1e-3};
    EtaRule eta;
    std::optional<Regime> regime_override;
    Shape shape = Ball{0.25};
    CoefficientSpec coefficient = CoefficientSpec::constant(1.0);
    FieldSpec initial;
    SourceSpec source;
    double T = 0.25;
    int steps = 400;
    int store_every = 16;
    bool point_model = true;
    CellBoundary interface = CellBoundary::Staircase;  // interface treatment of the degenerate problem
    CgOptions cg;
    int workers = 0;  // 0: hardware concurrency
    CellSection cell;
    HomogSection homog;
    OneDSection oned;
    BlowupSection blowup;
    OutputSection output;

    Grid grid() const;
    TimeGrid time() const;
    ScalingRegime regime() const;
    ResolutionPolicy policy() const;
};

// Parses and validates a scenario; unknown keys and violated constraints throw ValidationError.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::string& path);
std::string scenario_to_json(const ScenarioConfig& config);
void validate(const ScenarioConfig& config);

} // namespace fplab
