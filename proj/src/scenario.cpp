#include "fplab/scenario.hpp"
#include "fplab/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace fplab {

using nlohmann::json;

std::vector<double> FieldSpec::sample(const Grid& grid) const
{
    std::vector<double> out(grid.size(), value);
    if (kind == "constant") return out;
    const Box& b = grid.box();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Point x = grid.coords(i);
        if (kind == "cosine") {
            double prod = 1.0;
            for (int a = 0; a < grid.dim(); ++a)
                prod *= std::cos(std::numbers::pi * modes[a] * (x[a] - b.lo[a]) / b.side(a));
            out[i] += amplitude * prod;
        } else {
            double r2 = 0.0;
            for (int a = 0; a < grid.dim(); ++a) r2 += (x[a] - centre[a]) * (x[a] - centre[a]);
            out[i] += amplitude * std::exp(-r2 / (2.0 * width * width));
        }
    }
    return out;
}

Source SourceSpec::build(const Grid& grid) const
{
    Source s;
    for (const auto& t : terms) s.terms.push_back({t.profile, t.rate, t.space.sample(grid)});
    return s;
}

double EtaRule::eta(double eps) const { return constant ? value : c * std::pow(eps, p); }

Grid ScenarioConfig::grid() const { return Grid::with_cells(box, cells); }

TimeGrid ScenarioConfig::time() const
{
    TimeGrid t;
    t.T = T;
    t.steps = steps;
    return t;
}

ScalingRegime ScenarioConfig::regime() const
{
    ScalingRegime r = eta.constant ? classify_regime(1.0, 0.0, box.dim) : classify_regime(eta.c, eta.p, box.dim);
    if (regime_override) {
        if (*regime_override != r.regime)
            throw ValidationError("regime override '" + regime_name(*regime_override) +
                                  "' contradicts the eta rule, which gives '" + regime_name(r.regime) + "'");
    }
    return r;
}

ResolutionPolicy ScenarioConfig::policy() const
{
    ResolutionPolicy p;
    p.allow_point_model = point_model;
    if (cell.theta) p.reference_capacity = *cell.theta;
    return p;
}

namespace {

// Reads known keys and rejects anything else, with the JSON path in messages.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) throw ValidationError(path_ + ": expected an object");
    }
    ~Reader() = default;

    bool has(const std::string& key)
    {
        seen_.insert(key);
        return j_.contains(key);
    }
    const json& at(const std::string& key)
    {
        seen_.insert(key);
        if (!j_.contains(key)) throw ValidationError(path_ + "." + key + ": missing");
        return j_.at(key);
    }
    std::string where(const std::string& key) const { return path_ + "." + key; }

    double number(const std::string& key, double fallback)
    {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_number()) throw ValidationError(where(key) + ": expected a number");
        return v.get<double>();
    }
    int integer(const std::string& key, int fallback)
    {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_number_integer()) throw ValidationError(where(key) + ": expected an integer");
        return v.get<int>();
    }
    bool boolean(const std::string& key, bool fallback)
    {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_boolean()) throw ValidationError(where(key) + ": expected true or false");
        return v.get<bool>();
    }
    std::string string(const std::string& key, const std::string& fallback)
    {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_string()) throw ValidationError(where(key) + ": expected a string");
        return v.get<std::string>();
    }
    std::vector<double> numbers(const std::string& key, std::vector<double> fallback)
    {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_array()) throw ValidationError(where(key) + ": expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) throw ValidationError(where(key) + ": expected an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }
    Point point(const std::string& key, Point fallback)
    {
        if (!has(key)) return fallback;
        const auto v = numbers(key, {});
        if (v.empty() || v.size() > 3) throw ValidationError(where(key) + ": expected 1 to 3 components");
        Point p{0.0, 0.0, 0.0};
        std::copy(v.begin(), v.end(), p.begin());
        return p;
    }
    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ValidationError(path_ + ": unknown key '" + it.key() + "'");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

FieldSpec read_field(const json& j, const std::string& path)
{
    Reader r(j, path);
    FieldSpec f;
    f.kind = r.string("kind", "constant");
    if (f.kind != "constant" && f.kind != "cosine" && f.kind != "gaussian")
        throw ValidationError(r.where("kind") + ": unknown field kind '" + f.kind + "' (constant, cosine, gaussian)");
    f.value = r.number("value", 1.0);
    f.amplitude = r.number("amplitude", 0.0);
    if (r.has("modes")) {
        const auto m = r.numbers("modes", {});
        if (m.empty() || m.size() > 3) throw ValidationError(r.where("modes") + ": expected 1 to 3 integers");
        f.modes = {0, 0, 0};
        for (std::size_t a = 0; a < m.size(); ++a) {
            if (m[a] != std::floor(m[a])) throw ValidationError(r.where("modes") + ": expected integers");
            f.modes[a] = static_cast<int>(m[a]);
        }
    }
    f.centre = r.point("centre", f.centre);
    f.width = r.number("width", f.width);
    require(f.width > 0.0, r.where("width") + ": must be positive");
    r.finish();
    return f;
}

SourceTerm::Profile parse_profile(const std::string& s, const std::string& where)
{
    if (s == "constant") return SourceTerm::Profile::Constant;
    if (s == "linear") return SourceTerm::Profile::Linear;
    if (s == "sine") return SourceTerm::Profile::Sine;
    if (s == "exponential") return SourceTerm::Profile::Exponential;
    throw ValidationError(where + ": unknown time profile '" + s + "' (constant, linear, sine, exponential)");
}

std::string profile_name(SourceTerm::Profile p)
{
    switch (p) {
    case SourceTerm::Profile::Constant: return "constant";
    case SourceTerm::Profile::Linear: return "linear";
    case SourceTerm::Profile::Sine: return "sine";
    case SourceTerm::Profile::Exponential: return "exponential";
    }
    return "constant";
}

Shape read_shape(const json& j, const std::string& path, int dim)
{
    Reader r(j, path);
    const std::string type = r.string("type", "ball");
    Shape s;
    if (type == "ball") {
        Ball b;
        b.radius = r.number("rho", 0.25);
        require(b.radius > 0.0 && b.radius < 0.5, r.where("rho") + ": must lie in (0, 1/2)");
        s = b;
    } else if (type == "box") {
        AxisBox b;
        b.half_width = r.point("half_width", b.half_width);
        for (int a = 0; a < dim; ++a)
            require(b.half_width[a] > 0.0 && b.half_width[a] < 0.5, r.where("half_width") + ": components must lie in (0, 1/2)");
        s = b;
    } else {
        throw ValidationError(r.where("type") + ": unknown shape '" + type + "' (ball, box)");
    }
    r.finish();
    return s;
}

CoefficientSpec read_coefficient(const json& j, const std::string& path)
{
    Reader r(j, path);
    const std::string kind = r.string("kind", "constant");
    CoefficientSpec c;
    if (kind == "constant") {
        c = CoefficientSpec::constant(r.number("value", 1.0));
    } else if (kind == "separable") {
        c = CoefficientSpec::separable(r.string("a", "one"), r.string("p", "one"));
    } else {
        throw ValidationError(r.where("kind") + ": unknown coefficient kind '" + kind + "' (constant, separable)");
    }
    r.finish();
    return c;
}

json field_json(const FieldSpec& f)
{
    return {{"kind", f.kind},
            {"value", f.value},
            {"amplitude", f.amplitude},
            {"modes", {f.modes[0], f.modes[1], f.modes[2]}},
            {"centre", {f.centre[0], f.centre[1], f.centre[2]}},
            {"width", f.width}};
}

} // namespace

void validate(const ScenarioConfig& c)
{
    const int dim = c.box.dim;
    require(dim >= 1 && dim <= 3, "dim must be 1, 2 or 3");
    for (int a = 0; a < dim; ++a) require(c.box.hi[a] > c.box.lo[a], "box: hi must exceed lo");
    require(c.cells >= 2, "cells must be at least 2");
    require(!c.eps.empty(), "eps list must not be empty");
    for (std::size_t i = 0; i < c.eps.size(); ++i) {
        require(c.eps[i] > 0.0, "eps values must be positive");
        if (i > 0) require(c.eps[i] < c.eps[i - 1], "eps list must be sorted strictly decreasing");
    }
    for (std::size_t i = 0; i < c.delta.size(); ++i) {
        require(c.delta[i] > 0.0 && c.delta[i] <= 1.0, "delta values must lie in (0, 1]");
        if (i > 0) require(c.delta[i] < c.delta[i - 1], "delta list must be sorted strictly decreasing");
    }
    if (c.eta.constant)
        require(c.eta.value > 0.0 && c.eta.value <= 1.0, "eta value must lie in (0, 1]");
    else
        require(c.eta.c > 0.0 && c.eta.p >= 0.0, "eta rule needs c > 0 and p >= 0");
    require(c.T > 0.0, "T must be positive");
    require(c.steps >= 1, "steps must be positive");
    require(c.store_every >= 1, "store_every must be positive");
    require(c.cg.tol > 0.0 && c.cg.tol < 1.0, "cg.tol must lie in (0, 1)");
    require(c.workers >= 0, "workers must be non-negative");
    validate(c.coefficient, dim);
    require(c.cell.radii.size() >= 3, "cell.radii needs at least three radii");
    require(!c.cell.spacings.empty(), "cell.spacings must not be empty");
    for (double h : c.cell.spacings) require(h > 0.0, "cell.spacings must be positive");
    if (c.cell.theta) require(*c.cell.theta > 0.0, "cell.theta must be positive");
    require(c.homog.delta > 0.0 && c.homog.delta <= 1.0, "homog.delta must lie in (0, 1]");
    if (c.homog.capacitary) require(*c.homog.capacitary > 0.0, "homog.capacitary must be positive");
    require(c.oned.h.size() == c.oned.dt.size() && !c.oned.h.empty(), "oned.h and oned.dt must have equal, nonzero length");
    require(c.oned.spec.beta1 > 0.0 && c.oned.spec.beta2 > 0.0, "oned beta values must be positive");
    require(c.oned.spec.T > 0.0, "oned.T must be positive");
    require(c.blowup.j_max >= 1 && c.blowup.j_max <= 4, "blowup.j_max must lie in 1..4");
    require(c.blowup.alpha > 0.0, "blowup.alpha must be positive");
    require(c.output.snapshot_every >= 1, "output.snapshot_every must be positive");
    if (c.initial.kind == "cosine" || c.initial.kind == "gaussian")
        require(c.initial.value - std::abs(c.initial.amplitude) >= 0.0, "initial data must be non-negative");
    else
        require(c.initial.value >= 0.0, "initial data must be non-negative");
    c.regime();
}

ScenarioConfig parse_scenario(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("scenario is not valid JSON: ") + e.what());
    }
    Reader r(j, "$");
    ScenarioConfig c;
    c.box.dim = r.integer("dim", 3);
    require(c.box.dim >= 1 && c.box.dim <= 3, "$.dim: must be 1, 2 or 3");
    if (r.has("box")) {
        Reader b(r.at("box"), "$.box");
        c.box.lo = b.point("lo", c.box.lo);
        c.box.hi = b.point("hi", c.box.hi);
        b.finish();
    }
    c.cells = r.integer("cells", c.cells);
    c.eps = r.numbers("eps", c.eps);
    c.delta = r.numbers("delta", c.delta);
    if (r.has("eta")) {
        Reader e(r.at("eta"), "$.eta");
        const std::string rule = e.string("rule", "constant");
        if (rule == "constant") {
            c.eta.constant = true;
            c.eta.value = e.number("value", 1.0);
        } else if (rule == "power") {
            c.eta.constant = false;
            c.eta.c = e.number("c", 1.0);
            c.eta.p = e.number("p", 0.0);
        } else {
            throw ValidationError("$.eta.rule: unknown rule '" + rule + "' (constant, power)");
        }
        e.finish();
    }
    if (r.has("regime")) c.regime_override = parse_regime(r.string("regime", ""));
    if (r.has("shape")) c.shape = read_shape(r.at("shape"), "$.shape", c.box.dim);
    if (r.has("coefficient")) c.coefficient = read_coefficient(r.at("coefficient"), "$.coefficient");
    if (r.has("initial")) c.initial = read_field(r.at("initial"), "$.initial");
    if (r.has("source")) {
        const json& s = r.at("source");
        if (!s.is_array()) throw ValidationError("$.source: expected an array of terms");
        for (std::size_t k = 0; k < s.size(); ++k) {
            const std::string path = "$.source[" + std::to_string(k) + "]";
            Reader t(s[k], path);
            SourceTermSpec term;
            term.space = read_field(t.at("space"), path + ".space");
            term.profile = parse_profile(t.string("profile", "constant"), path + ".profile");
            term.rate = t.number("rate", 1.0);
            if (term.profile == SourceTerm::Profile::Sine) require(term.rate != 0.0, path + ".rate: must be nonzero");
            t.finish();
            c.source.terms.push_back(term);
        }
    }
    c.T = r.number("T", c.T);
    c.steps = r.integer("steps", c.steps);
    c.store_every = r.integer("store_every", c.store_every);
    c.point_model = r.boolean("point_model", c.point_model);
    if (r.has("interface")) {
        const std::string itf = r.string("interface", "staircase");
        if (itf == "cut_edge")
            c.interface = CellBoundary::CutEdge;
        else if (itf == "staircase")
            c.interface = CellBoundary::Staircase;
        else
            throw ValidationError("$.interface: unknown value '" + itf + "' (cut_edge, staircase)");
    }
    if (r.has("cg")) {
        Reader g(r.at("cg"), "$.cg");
        c.cg.tol = g.number("tol", c.cg.tol);
        c.cg.max_iter = g.integer("max_iter", c.cg.max_iter);
        c.cg.jacobi = g.boolean("jacobi", c.cg.jacobi);
        g.finish();
    }
    c.workers = r.integer("workers", c.workers);
    if (r.has("cell")) {
        Reader s(r.at("cell"), "$.cell");
        c.cell.radii = s.numbers("radii", c.cell.radii);
        c.cell.spacings = s.numbers("spacings", c.cell.spacings);
        const std::string bnd = s.string("boundary", "cut_edge");
        if (bnd == "cut_edge")
            c.cell.boundary = CellBoundary::CutEdge;
        else if (bnd == "staircase")
            c.cell.boundary = CellBoundary::Staircase;
        else
            throw ValidationError("$.cell.boundary: unknown value '" + bnd + "' (cut_edge, staircase)");
        if (s.has("theta")) c.cell.theta = s.number("theta", 0.0);
        s.finish();
    }
    if (r.has("homog")) {
        Reader s(r.at("homog"), "$.homog");
        c.homog.variant = parse_variant(s.string("variant", "PD"));
        c.homog.delta = s.number("delta", c.homog.delta);
        if (s.has("capacitary")) c.homog.capacitary = s.number("capacitary", 0.0);
        s.finish();
    }
    if (r.has("oned")) {
        Reader s(r.at("oned"), "$.oned");
        c.oned.spec.alpha = s.number("alpha", c.oned.spec.alpha);
        c.oned.spec.beta1 = s.number("beta1", c.oned.spec.beta1);
        c.oned.spec.beta2 = s.number("beta2", c.oned.spec.beta2);
        c.oned.spec.L = s.number("L", c.oned.spec.L);
        c.oned.spec.T = s.number("T", c.oned.spec.T);
        c.oned.h = s.numbers("h", c.oned.h);
        c.oned.dt = s.numbers("dt", c.oned.dt);
        s.finish();
    }
    if (r.has("blowup")) {
        Reader s(r.at("blowup"), "$.blowup");
        c.blowup.alpha = s.number("alpha", c.blowup.alpha);
        c.blowup.j_max = s.integer("j_max", c.blowup.j_max);
        auto& o = c.blowup.options;
        o.h = s.number("h", o.h);
        o.dt = s.number("dt", o.dt);
        o.L = s.number("L", o.L);
        o.first_spacing = s.number("first_spacing", o.first_spacing);
        o.shrink = s.number("shrink", o.shrink);
        o.margin = s.number("margin", o.margin);
        s.finish();
    }
    if (r.has("output")) {
        Reader s(r.at("output"), "$.output");
        c.output.snapshots = s.boolean("snapshots", c.output.snapshots);
        c.output.snapshot_every = s.integer("snapshot_every", c.output.snapshot_every);
        s.finish();
    }
    r.finish();
    validate(c);
    return c;
}

ScenarioConfig load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_scenario(ss.str());
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

std::string scenario_to_json(const ScenarioConfig& c)
{
    json j;
    j["dim"] = c.box.dim;
    j["box"] = {{"lo", {c.box.lo[0], c.box.lo[1], c.box.lo[2]}}, {"hi", {c.box.hi[0], c.box.hi[1], c.box.hi[2]}}};
    j["cells"] = c.cells;
    j["eps"] = c.eps;
    j["delta"] = c.delta;
    if (c.eta.constant)
        j["eta"] = {{"rule", "constant"}, {"value", c.eta.value}};
    else
        j["eta"] = {{"rule", "power"}, {"c", c.eta.c}, {"p", c.eta.p}};
    if (c.regime_override) j["regime"] = regime_name(*c.regime_override);
    if (const auto* b = std::get_if<Ball>(&c.shape))
        j["shape"] = {{"type", "ball"}, {"rho", b->radius}};
    else if (const auto* x = std::get_if<AxisBox>(&c.shape))
        j["shape"] = {{"type", "box"}, {"half_width", {x->half_width[0], x->half_width[1], x->half_width[2]}}};
    else
        throw ValidationError("implicit shapes cannot be serialized");
    if (c.coefficient.kind == CoefficientSpec::Kind::Constant)
        j["coefficient"] = {{"kind", "constant"}, {"value", c.coefficient.value}};
    else if (c.coefficient.kind == CoefficientSpec::Kind::Separable)
        j["coefficient"] = {{"kind", "separable"}, {"a", c.coefficient.a_id}, {"p", c.coefficient.p_id}};
    else
        throw ValidationError("tabulated coefficients cannot be serialized");
    j["initial"] = field_json(c.initial);
    j["source"] = json::array();
    for (const auto& t : c.source.terms)
        j["source"].push_back({{"space", field_json(t.space)}, {"profile", profile_name(t.profile)}, {"rate", t.rate}});
    j["T"] = c.T;
    j["steps"] = c.steps;
    j["store_every"] = c.store_every;
    j["point_model"] = c.point_model;
    j["interface"] = c.interface == CellBoundary::CutEdge ? "cut_edge" : "staircase";
    j["cg"] = {{"tol", c.cg.tol}, {"max_iter", c.cg.max_iter}, {"jacobi", c.cg.jacobi}};
    j["workers"] = c.workers;
    j["cell"] = {{"radii", c.cell.radii},
                 {"spacings", c.cell.spacings},
                 {"boundary", c.cell.boundary == CellBoundary::CutEdge ? "cut_edge" : "staircase"}};
    if (c.cell.theta) j["cell"]["theta"] = *c.cell.theta;
    j["homog"] = {{"variant", variant_name(c.homog.variant)}, {"delta", c.homog.delta}};
    if (c.homog.capacitary) j["homog"]["capacitary"] = *c.homog.capacitary;
    j["oned"] = {{"alpha", c.oned.spec.alpha}, {"beta1", c.oned.spec.beta1}, {"beta2", c.oned.spec.beta2},
                 {"L", c.oned.spec.L},         {"T", c.oned.spec.T},         {"h", c.oned.h},
                 {"dt", c.oned.dt}};
    const auto& o = c.blowup.options;
    j["blowup"] = {{"alpha", c.blowup.alpha}, {"j_max", c.blowup.j_max}, {"h", o.h},
                   {"dt", o.dt},              {"L", o.L},                 {"first_spacing", o.first_spacing},
                   {"shrink", o.shrink},      {"margin", o.margin}};
    j["output"] = {{"snapshots", c.output.snapshots}, {"snapshot_every", c.output.snapshot_every}};
    return j.dump(2);
}

} // namespace fplab
