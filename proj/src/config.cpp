#include "compass/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "compass/metrology.hpp"

namespace compass {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path, "must be finite");
  return d;
}

std::size_t as_count(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(path, "expected a non-negative integer");
  return static_cast<std::size_t>(v.get<long long>());
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

// number | [re, im] | {"re": .., "im": ..}
cplx as_complex(const json& v, const std::string& path) {
  if (v.is_number()) return {as_number(v, path), 0.0};
  if (v.is_array()) {
    if (v.size() != 2) throw ConfigError(path, "complex arrays must be [re, im]");
    return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]")};
  }
  if (v.is_object()) {
    for (const auto& [key, _] : v.items()) {
      if (key != "re" && key != "im") throw ConfigError(join(path, key), "unknown key");
    }
    const double re = v.contains("re") ? as_number(v["re"], join(path, "re")) : 0.0;
    const double im = v.contains("im") ? as_number(v["im"], join(path, "im")) : 0.0;
    return {re, im};
  }
  throw ConfigError(path, "expected a number, [re, im] or {\"re\", \"im\"}");
}

// Tracks which keys of one object were consumed so leftovers can be rejected.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_, "expected an object");
  }

  const json* get(const std::string& key) {
    known_.insert(key);
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }
  std::string path(const std::string& key) const { return join(path_, key); }

  double number(const std::string& key, double fallback) {
    const json* v = get(key);
    return v ? as_number(*v, path(key)) : fallback;
  }
  std::size_t count(const std::string& key, std::size_t fallback) {
    const json* v = get(key);
    return v ? as_count(*v, path(key)) : fallback;
  }
  std::string string(const std::string& key, const std::string& fallback) {
    const json* v = get(key);
    return v ? as_string(*v, path(key)) : fallback;
  }
  bool boolean(const std::string& key, bool fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(path(key), "expected true or false");
    return v->get<bool>();
  }

  void finish() const {
    for (const auto& [key, _] : node_.items()) {
      if (!known_.count(key)) throw ConfigError(path(key), "unknown key");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> known_;
};

GridSpec read_grid(const json* node, const std::string& path, GridSpec fallback) {
  if (!node) return fallback;
  Section s(*node, path);
  GridSpec g;
  g.min = s.number("min", fallback.min);
  g.max = s.number("max", fallback.max);
  g.n = s.count("n", fallback.n);
  s.finish();
  if (!(g.min < g.max)) throw ConfigError(path, "min must be < max");
  if (g.n < 2) throw ConfigError(s.path("n"), "must be >= 2");
  return g;
}

Axis read_axis(const json& v, const std::string& path) {
  try {
    return parse_axis(as_string(v, path));
  } catch (const InvalidArgument&) {
    throw ConfigError(path, "axis must be one of x1, p1, x2, p2");
  }
}

ordered_json complex_json(cplx v) { return ordered_json::array({v.real(), v.imag()}); }

ordered_json grid_json(const GridSpec& g) { return {{"min", g.min}, {"max", g.max}, {"n", g.n}}; }

std::string_view scan_name(TileScan scan) { return scan == TileScan::quarter_period ? "quarter_period" : "center"; }

}  // namespace

WignerMethod parse_method(std::string_view name) {
  if (name == "analytic") return WignerMethod::analytic;
  if (name == "numeric") return WignerMethod::numeric;
  if (name == "mesoscopic") return WignerMethod::mesoscopic;
  throw ConfigError("method", "must be analytic, numeric or mesoscopic");
}

HamiltonianSpec HamiltonianConfig::spec(const ModeGeometry& geometry) const {
  HamiltonianSpec s;
  s.kind = kind;
  s.detuning = detuning;
  s.strength = strength;
  s.trap_phase = trap_phase;
  s.lamb_dicke = lamb_dicke;
  s.omega = omega;
  s.geometry = geometry;
  s.fock_cutoff = fock_cutoff;
  return s;
}

RunConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("parse error: ") + e.what());
  }
  Section top(root, "");
  RunConfig cfg;

  if (const json* g = top.get("geometry")) {
    Section s(*g, "geometry");
    cfg.geometry.hbar = s.number("hbar", 1.0);
    cfg.geometry.delta = s.number("delta", 1.0);
    s.finish();
    if (!(cfg.geometry.hbar > 0.0)) throw ConfigError("geometry.hbar", "must be > 0");
    if (!(cfg.geometry.delta > 0.0)) throw ConfigError("geometry.delta", "must be > 0");
  }

  const json* alpha = top.get("alpha");
  if (!alpha) throw ConfigError("alpha", "required");
  cfg.alpha = as_complex(*alpha, "alpha");

  const json* coeffs = top.get("coefficients");
  if (!coeffs) throw ConfigError("coefficients", "required");
  {
    Section s(*coeffs, "coefficients");
    const std::string basis = s.string("basis", "coherent");
    if (basis == "coherent") {
      cfg.coefficients.basis = CoefficientBasis::coherent;
    } else if (basis == "cat") {
      cfg.coefficients.basis = CoefficientBasis::cat;
    } else {
      throw ConfigError("coefficients.basis", "must be coherent or cat");
    }
    const json* values = s.get("values");
    if (!values) throw ConfigError("coefficients.values", "required");
    if (!values->is_array() || values->size() != 4)
      throw ConfigError("coefficients.values", "expected an array of four values");
    for (std::size_t i = 0; i < 4; ++i) {
      cfg.coefficients.values[i] = as_complex((*values)[i], "coefficients.values[" + std::to_string(i) + "]");
    }
    s.finish();
    if (!cfg.coefficients.any_nonzero()) throw ConfigError("coefficients.values", "at least one value must be nonzero");
  }

  if (const json* m = top.get("method")) cfg.method = parse_method(as_string(*m, "method"));
  cfg.output = top.string("output", cfg.output);
  if (cfg.output.empty()) throw ConfigError("output", "must not be empty");

  if (const json* sl = top.get("slice")) {
    Section s(*sl, "slice");
    if (const json* axes = s.get("axes")) {
      if (!axes->is_array() || axes->size() != 2) throw ConfigError("slice.axes", "expected two axis names");
      cfg.binding.first = read_axis((*axes)[0], "slice.axes[0]");
      cfg.binding.second = read_axis((*axes)[1], "slice.axes[1]");
      if (cfg.binding.first == cfg.binding.second) throw ConfigError("slice.axes", "axes must differ");
    }
    if (const json* fixed = s.get("fixed")) {
      if (!fixed->is_object()) throw ConfigError("slice.fixed", "expected an object");
      for (const auto& [key, value] : fixed->items()) {
        const std::string path = "slice.fixed." + key;
        Axis axis;
        try {
          axis = parse_axis(key);
        } catch (const InvalidArgument&) {
          throw ConfigError(path, "unknown key");
        }
        if (axis == cfg.binding.first || axis == cfg.binding.second)
          throw ConfigError(path, "a free axis cannot be fixed");
        axis_ref(cfg.binding.fixed, axis) = as_number(value, path);
      }
    }
    cfg.first_grid = read_grid(s.get("first"), "slice.first", cfg.first_grid);
    cfg.second_grid = read_grid(s.get("second"), "slice.second", cfg.second_grid);
    s.finish();
  }

  if (const json* q = top.get("quadrature")) {
    Section s(*q, "quadrature");
    cfg.quadrature.half_width = s.number("half_width", cfg.quadrature.half_width);
    cfg.quadrature.points = s.count("points", cfg.quadrature.points);
    s.finish();
    if (!(cfg.quadrature.half_width > 0.0)) throw ConfigError("quadrature.half_width", "must be > 0");
    if (cfg.quadrature.points < 16 || cfg.quadrature.points % 2 != 0)
      throw ConfigError("quadrature.points", "must be even and >= 16");
  }

  if (const json* t = top.get("tiles")) {
    Section s(*t, "tiles");
    const std::string scan = s.string("scan", "quarter_period");
    if (scan == "quarter_period") {
      cfg.tiles.scan = TileScan::quarter_period;
    } else if (scan == "center") {
      cfg.tiles.scan = TileScan::center;
    } else {
      throw ConfigError("tiles.scan", "must be quarter_period or center");
    }
    cfg.tiles.half_width_spacings = s.number("half_width_spacings", cfg.tiles.half_width_spacings);
    cfg.tiles.n = s.count("n", cfg.tiles.n);
    s.finish();
    if (!(cfg.tiles.half_width_spacings >= 1.0)) throw ConfigError("tiles.half_width_spacings", "must be >= 1");
    if (cfg.tiles.n < 16) throw ConfigError("tiles.n", "must be >= 16");
  }

  {
    auto& h = cfg.hamiltonian;
    std::optional<double> displacement;
    std::optional<double> strength;
    std::optional<std::size_t> cutoff;
    if (const json* node = top.get("hamiltonian")) {
      Section s(*node, "hamiltonian");
      const std::string kind = s.string("kind", "position");
      if (kind == "position") {
        h.kind = CouplingKind::position;
      } else if (kind == "momentum") {
        h.kind = CouplingKind::momentum;
      } else {
        throw ConfigError("hamiltonian.kind", "must be position or momentum");
      }
      if (const json* v = s.get("displacement")) displacement = as_number(*v, "hamiltonian.displacement");
      if (const json* v = s.get("strength")) strength = as_number(*v, "hamiltonian.strength");
      h.detuning = s.number("detuning", h.detuning);
      h.trap_phase = s.number("trap_phase", h.trap_phase);
      h.lamb_dicke = s.number("lamb_dicke", h.lamb_dicke);
      h.omega = s.number("omega", h.omega);
      if (const json* v = s.get("fock_cutoff")) cutoff = as_count(*v, "hamiltonian.fock_cutoff");
      h.levels = s.count("levels", h.levels);
      s.finish();
    }
    if (!(h.omega > 0.0)) throw ConfigError("hamiltonian.omega", "must be > 0");
    if (!(h.lamb_dicke > 0.0)) throw ConfigError("hamiltonian.lamb_dicke", "must be > 0");
    if (h.levels < 3) throw ConfigError("hamiltonian.levels", "must be >= 3");
    if (cutoff && *cutoff < 8) throw ConfigError("hamiltonian.fock_cutoff", "must be >= 8");

    if (strength && !displacement) {
      h.strength = *strength;
      h.displacement = displacement_of(h.spec(cfg.geometry));
    } else {
      h.displacement = displacement.value_or(std::abs(cfg.alpha));
      h.strength = h.kind == CouplingKind::position ? position_strength_for(h.displacement, h.omega, cfg.geometry)
                                                    : momentum_strength_for(h.displacement, h.omega, cfg.geometry);
      if (strength && std::abs(*strength - h.strength) > 1e-9 * std::max(1.0, std::abs(h.strength)))
        throw ConfigError("hamiltonian", "displacement and strength disagree (give one of them)");
    }
    h.fock_cutoff = cutoff.value_or(default_fock_cutoff(h.displacement));
    if (2 * (h.fock_cutoff + 1) < h.levels) throw ConfigError("hamiltonian.levels", "exceeds the basis dimension");
  }

  {
    std::optional<double> s_max;
    if (const json* node = top.get("sweep")) {
      Section s(*node, "sweep");
      cfg.sweep.s_min = s.number("s_min", cfg.sweep.s_min);
      if (const json* v = s.get("s_max")) s_max = as_number(*v, "sweep.s_max");
      cfg.sweep.n = s.count("n", cfg.sweep.n);
      s.finish();
    }
    if (cfg.sweep.n < 32) throw ConfigError("sweep.n", "must be >= 32");
    const double freq = expected_frequency(cfg.geometry, cfg.alpha);
    cfg.sweep.s_max = s_max.value_or(cfg.sweep.s_min + (freq > 0.0 ? 3.0 * 2.0 * kPi / freq : 1.0));
    if (!(cfg.sweep.s_max > cfg.sweep.s_min)) throw ConfigError("sweep.s_max", "must be > s_min");
  }

  if (const json* node = top.get("protocol")) {
    Section s(*node, "protocol");
    const std::string reading = s.string("reading", "table");
    if (reading == "table") {
      cfg.reading = JointStateReading::table;
    } else if (reading == "ground_doublet") {
      cfg.reading = JointStateReading::ground_doublet;
    } else {
      throw ConfigError("protocol.reading", "must be table or ground_doublet");
    }
    s.finish();
  }

  cfg.heatmap = top.boolean("heatmap", cfg.heatmap);
  top.finish();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

ordered_json resolved_json(const RunConfig& cfg) {
  ordered_json out;
  out["geometry"] = {{"hbar", cfg.geometry.hbar}, {"delta", cfg.geometry.delta}};
  out["alpha"] = complex_json(cfg.alpha);
  ordered_json values = ordered_json::array();
  for (const auto& v : cfg.coefficients.values) values.push_back(complex_json(v));
  out["coefficients"] = {{"basis", cfg.coefficients.basis == CoefficientBasis::coherent ? "coherent" : "cat"},
                         {"values", values}};
  out["method"] = std::string(method_name(cfg.method));
  out["output"] = cfg.output;

  ordered_json fixed = ordered_json::object();
  for (Axis axis : {Axis::x1, Axis::p1, Axis::x2, Axis::p2}) {
    if (axis == cfg.binding.first || axis == cfg.binding.second) continue;
    fixed[std::string(axis_name(axis))] = axis_value(cfg.binding.fixed, axis);
  }
  out["slice"] = {{"axes", {std::string(axis_name(cfg.binding.first)), std::string(axis_name(cfg.binding.second))}},
                  {"fixed", fixed},
                  {"first", grid_json(cfg.first_grid)},
                  {"second", grid_json(cfg.second_grid)}};
  out["quadrature"] = {{"half_width", cfg.quadrature.half_width}, {"points", cfg.quadrature.points}};
  out["tiles"] = {{"scan", std::string(scan_name(cfg.tiles.scan))},
                  {"half_width_spacings", cfg.tiles.half_width_spacings},
                  {"n", cfg.tiles.n}};
  const auto& h = cfg.hamiltonian;
  out["hamiltonian"] = {{"kind", std::string(coupling_name(h.kind))},
                        {"displacement", h.displacement},
                        {"strength", h.strength},
                        {"detuning", h.detuning},
                        {"trap_phase", h.trap_phase},
                        {"lamb_dicke", h.lamb_dicke},
                        {"omega", h.omega},
                        {"fock_cutoff", h.fock_cutoff},
                        {"levels", h.levels}};
  out["sweep"] = {{"s_min", cfg.sweep.s_min}, {"s_max", cfg.sweep.s_max}, {"n", cfg.sweep.n}};
  out["protocol"] = {{"reading", std::string(reading_name(cfg.reading))}};
  out["heatmap"] = cfg.heatmap;
  return out;
}

}  // namespace compass
