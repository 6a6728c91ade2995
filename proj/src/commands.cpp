#include "compass/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "compass/mesoscopic.hpp"
#include "compass/metrology.hpp"
#include "compass/protocol.hpp"
#include "compass/tiles.hpp"

namespace compass {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

namespace {

class Report {
 public:
  Report(std::string_view command, const RunConfig& cfg) {
    os_ << "compass " << command << "\n\n[config]\n" << resolved_json(cfg).dump(2) << "\n";
  }

  void section(std::string_view name) { os_ << "\n[" << name << "]\n"; }
  void line(std::string_view key, double v) { os_ << key << ": " << format_number(v) << "\n"; }
  void line(std::string_view key, std::string_view v) { os_ << key << ": " << v << "\n"; }
  void line(std::string_view key, const char* v) { line(key, std::string_view(v)); }
  void line(std::string_view key, std::size_t v) { os_ << key << ": " << v << "\n"; }
  void line(std::string_view key, bool v) { os_ << key << ": " << (v ? "yes" : "no") << "\n"; }
  void line(std::string_view key, cplx v) {
    os_ << key << ": " << format_number(v.real()) << " " << format_number(v.imag()) << "i\n";
  }

  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

class Csv {
 public:
  explicit Csv(std::string_view header) { os_ << header << "\n"; }

  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(cells), first = false), ...);
    os_ << "\n";
  }

  std::string str() const { return os_.str(); }

 private:
  static std::string cell(double v) { return format_number(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(std::string_view v) { return std::string(v); }

  std::ostringstream os_;
};

BipartiteState compass_state(const RunConfig& cfg) {
  return make_compass_bipartite(cfg.coefficients, cfg.alpha, cfg.geometry);
}

PhaseSpaceFunction evaluator(const RunConfig& cfg, const BipartiteState& state,
                             const std::optional<MesoscopicModel>& model) {
  switch (cfg.method) {
    case WignerMethod::analytic:
      return [&state](const PhaseSpacePoint& pt) { return wigner_analytic(state, pt); };
    case WignerMethod::numeric:
      return [&state, q = cfg.quadrature](const PhaseSpacePoint& pt) { return wigner_numeric(state, pt, q); };
    case WignerMethod::mesoscopic:
      return [&model](const PhaseSpacePoint& pt) { return model->evaluate(pt); };
  }
  throw InvalidArgument("unknown method");
}

void write_coefficients(Report& r, const RunConfig& cfg) {
  const auto& c = cfg.coefficients;
  const char* coherent_names[] = {"a", "b", "c", "d"};
  const char* cat_names[] = {"A", "B", "C", "D"};
  if (cfg.alpha == cplx{0.0, 0.0}) {
    if (c.basis == CoefficientBasis::cat) throw DegenerateStateError("cat basis is singular at alpha = 0");
    for (int i = 0; i < 4; ++i) r.line(std::string("coherent.") + coherent_names[i], c.values[i]);
    r.line("cat", "undefined at alpha = 0");
    r.line("sub_planck_admissible", sub_planck_admissible(c));
    return;
  }
  const auto coherent = c.basis == CoefficientBasis::coherent ? c : convert_coeffs(c, cfg.alpha);
  const auto cat = c.basis == CoefficientBasis::cat ? c : convert_coeffs(c, cfg.alpha);
  for (int i = 0; i < 4; ++i) r.line(std::string("coherent.") + coherent_names[i], coherent.values[i]);
  for (int i = 0; i < 4; ++i) r.line(std::string("cat.") + cat_names[i], cat.values[i]);
  r.line("sub_planck_admissible", sub_planck_admissible(coherent));
}

void write_scales(Report& r, const RunConfig& cfg) {
  r.line("x0", compass_x0(cfg.geometry, cfg.alpha));
  r.line("p0", compass_p0(cfg.geometry, cfg.alpha));
}

CommandOutput run_state(const RunConfig& cfg) {
  const auto state = compass_state(cfg);
  Csv csv("index,weight_re,weight_im,center1_re,center1_im,center2_re,center2_im");
  std::size_t i = 0;
  for (const auto& c : state.components()) {
    csv.row(i++, c.weight.real(), c.weight.imag(), c.centers[0].real(), c.centers[0].imag(), c.centers[1].real(),
            c.centers[1].imag());
  }
  Report r("state", cfg);
  r.section("state");
  write_coefficients(r, cfg);
  write_scales(r, cfg);
  r.line("components", state.size());
  r.line("norm_squared", state.norm_squared());
  r.line("norm_tolerance", 1e-12);
  return {"state", csv.str(), r.str(), std::nullopt};
}

CommandOutput run_wigner(const RunConfig& cfg) {
  const auto state = compass_state(cfg);
  std::optional<MesoscopicModel> model;
  if (cfg.method == WignerMethod::mesoscopic) model.emplace(cfg.coefficients, cfg.alpha, cfg.geometry);
  const auto slice = wigner_slice(evaluator(cfg, state, model), cfg.binding, cfg.first_grid, cfg.second_grid,
                                  cfg.method);

  const auto first = axis_name(cfg.binding.first);
  const auto second = axis_name(cfg.binding.second);
  Csv csv(std::string(first) + "," + std::string(second) + ",w");
  for (std::size_t j = 0; j < slice.second.n; ++j) {
    for (std::size_t i = 0; i < slice.first.n; ++i) csv.row(slice.first.at(i), slice.second.at(j), slice.at(i, j));
  }

  Report r("wigner", cfg);
  r.section("wigner");
  r.line("method", method_name(cfg.method));
  r.line("free_axes", std::string(first) + "," + std::string(second));
  r.line("samples", slice.values.size());
  const auto [lo, hi] = std::minmax_element(slice.values.begin(), slice.values.end());
  r.line("min_w", *lo);
  r.line("max_w", *hi);
  r.line("max_abs_w", slice.max_abs());
  const double bound = 1.0 / std::pow(kPi * cfg.geometry.hbar, 2);
  r.line("magnitude_bound", bound);
  r.line("within_bound", slice.max_abs() <= bound + 1e-9);
  r.line("peak_magnitude", peak_magnitude(state));
  if (model) {
    r.section("mesoscopic");
    r.line("regime_ratio_x0^2/delta^2", model->regime_ratio());
    r.line("in_regime", model->in_regime());
    if (!model->in_regime()) r.line("warning", "x0^2/delta^2 < 9, near-origin form may be inaccurate");
    const auto a = model->a_coefficients();
    for (int k = 0; k < 4; ++k) r.line("A" + std::to_string(k + 1), a[static_cast<std::size_t>(k)]);
    for (int f = 0; f < 2; ++f) {
      const auto& t = model->family(f);
      const std::string p = "family" + std::to_string(f + 1) + ".";
      r.line(p + "cos_cos", t.cc);
      r.line(p + "cos_sin", t.cs);
      r.line(p + "sin_cos", t.sc);
      r.line(p + "sin_sin", t.ss);
    }
    if (cfg.binding.first == Axis::x1 && cfg.binding.second == Axis::p1) {
      const auto b = model->slice_coefficients(cfg.binding.fixed.x2, cfg.binding.fixed.p2);
      r.line("B1", b.b1);
      r.line("B2", b.b2);
      r.line("B3", b.b3);
      r.line("B4", b.b4);
    }
  }
  std::optional<std::string> heatmap;
  if (cfg.heatmap) heatmap = render_heatmap(slice);
  return {"wigner", csv.str(), r.str(), heatmap};
}

CommandOutput run_tiles(const RunConfig& cfg) {
  const auto state = compass_state(cfg);
  std::optional<MesoscopicModel> model;
  if (cfg.method == WignerMethod::mesoscopic) model.emplace(cfg.coefficients, cfg.alpha, cfg.geometry);
  const auto w = evaluator(cfg, state, model);
  const auto& g = cfg.geometry;
  const double d_first = expected_spacing(cfg.binding.first, g, cfg.alpha);
  const double d_second = expected_spacing(cfg.binding.second, g, cfg.alpha);
  const double hw = cfg.tiles.half_width_spacings;
  const GridSpec first{-hw * d_first, hw * d_first, cfg.tiles.n};
  const GridSpec second{-hw * d_second, hw * d_second, cfg.tiles.n};
  if (first.spacing() > d_first / 8.0 || second.spacing() > d_second / 8.0) {
    throw NumericalError("tile grid spacing exceeds 1/8 of the expected zero spacing; raise tiles.n");
  }
  const auto slice = wigner_slice(w, cfg.binding, first, second, cfg.method);

  ZeroScanOptions opt;
  opt.refine = w;
  if (cfg.tiles.scan == TileScan::quarter_period) {
    opt.first_line = 0.5 * d_second;
    opt.second_line = 0.5 * d_first;
  }
  const auto zeros = find_zero_crossings(slice, opt);
  const double x0 = compass_x0(g, cfg.alpha);
  const double p0 = compass_p0(g, cfg.alpha);
  const auto m = tile_metrics(zeros, x0, p0, g.hbar);

  const auto first_name = axis_name(cfg.binding.first);
  const auto second_name = axis_name(cfg.binding.second);
  Csv csv("axis,zero_position");
  for (double z : zeros.first) csv.row(first_name, z);
  for (double z : zeros.second) csv.row(second_name, z);

  Report r("tiles", cfg);
  r.section("tiles");
  r.line("method", method_name(cfg.method));
  write_scales(r, cfg);
  r.line("scan", cfg.tiles.scan == TileScan::quarter_period ? "quarter_period" : "center");
  r.line(std::string(first_name) + "_scan_at_" + std::string(second_name), zeros.first_line);
  r.line(std::string(second_name) + "_scan_at_" + std::string(first_name), zeros.second_line);
  r.line(std::string(first_name) + "_zero_count", m.first_count);
  r.line(std::string(second_name) + "_zero_count", m.second_count);
  auto nearest = [](const std::vector<double>& z, bool positive) {
    double best = std::nan("");
    for (double v : z) {
      if (positive ? v > 0.0 : v < 0.0) {
        if (std::isnan(best) || std::abs(v) < std::abs(best)) best = v;
      }
    }
    return best;
  };
  r.line(std::string(first_name) + "_first_zero_negative", nearest(zeros.first, false));
  r.line(std::string(first_name) + "_first_zero_positive", nearest(zeros.first, true));
  r.line(std::string(first_name) + "_first_zero_expected", 0.5 * d_first);
  r.line(std::string(second_name) + "_first_zero_negative", nearest(zeros.second, false));
  r.line(std::string(second_name) + "_first_zero_positive", nearest(zeros.second, true));
  r.line(std::string(second_name) + "_first_zero_expected", 0.5 * d_second);
  r.line("spacing_" + std::string(first_name), m.dx);
  r.line("spacing_" + std::string(first_name) + "_expected", d_first);
  r.line("spacing_" + std::string(second_name), m.dp);
  r.line("spacing_" + std::string(second_name) + "_expected", d_second);
  r.line("tile_area", m.area);
  r.line("tile_area_times_x0_p0", m.area * x0 * p0);
  r.line("reference_area_(2 pi hbar)^2/(4 x0 p0)", m.reference_area);
  r.line("area_ratio_to_reference", m.ratio_to_reference);
  r.line("checkerboard_area_pi^2 hbar^2/(4 x0 p0)", m.checkerboard_area);
  r.line("area_ratio_to_checkerboard", m.ratio_to_checkerboard);
  r.line("tolerance_relative", 0.02);

  if (cfg.tiles.scan == TileScan::quarter_period) {
    r.section("center_lines");
    ZeroScanOptions center;
    center.refine = w;
    try {
      const auto c = find_zero_crossings(slice, center);
      r.line(std::string(first_name) + "_sign_changes", c.first.size());
      r.line(std::string(second_name) + "_sign_changes", c.second.size());
    } catch (const NumericalError&) {
      r.line("sign_changes", "none (the pattern touches zero without crossing on these lines)");
    }
  }
  std::optional<std::string> heatmap;
  if (cfg.heatmap) heatmap = render_heatmap(slice);
  return {"tiles", csv.str(), r.str(), heatmap};
}

CommandOutput run_protocol(const RunConfig& cfg) {
  const auto hybrid = build_joint_state(cfg.coefficients, cfg.alpha, cfg.geometry, cfg.reading);
  const auto other_reading =
      cfg.reading == JointStateReading::table ? JointStateReading::ground_doublet : JointStateReading::table;
  const auto other = build_joint_state(cfg.coefficients, cfg.alpha, cfg.geometry, other_reading);

  auto row_fidelity = [&](const Projection& p, MeasurementOutcome o) {
    if (!p.state) return std::nan("");
    try {
      return fidelity(*p.state, table_state(cfg.coefficients, cfg.alpha, o, cfg.geometry));
    } catch (const DegenerateStateError&) {
      return 0.0;
    }
  };

  Csv csv("outcome,probability,fidelity");
  Report r("protocol", cfg);
  r.section("protocol");
  write_coefficients(r, cfg);
  r.line("reading", reading_name(cfg.reading));
  double total = 0.0;
  for (auto o : kAllOutcomes) {
    const auto p = project_internal(hybrid, o);
    total += p.probability;
    const double f = row_fidelity(p, o);
    csv.row(outcome_name(o), p.probability, f);
    r.line(std::string(outcome_name(o)) + ".probability", p.probability);
    r.line(std::string(outcome_name(o)) + ".fidelity", f);
  }
  r.line("probability_sum", total);
  r.line("probability_tolerance", 1e-12);
  r.line("fidelity_tolerance", 1e-10);

  r.section("alternative_reading");
  r.line("reading", reading_name(other_reading));
  for (auto o : kAllOutcomes) {
    const auto p = project_internal(other, o);
    r.line(std::string(outcome_name(o)) + ".probability", p.probability);
    r.line(std::string(outcome_name(o)) + ".fidelity", row_fidelity(p, o));
  }
  return {"protocol", csv.str(), r.str(), std::nullopt};
}

CommandOutput run_hamiltonian(const RunConfig& cfg) {
  const auto& h = cfg.hamiltonian;
  const auto spec = h.spec(cfg.geometry);
  const auto op = hamiltonian_matrix(spec);
  const auto levels = lowest_levels(op, h.levels);
  const auto doublet = ground_doublet(op);
  const double hw = cfg.geometry.hbar * h.omega;
  const double m = spec.mass();
  const double k = spec.effective_coupling();
  // Position-coupling constant equivalent to the configured coupling.
  const double c = spec.kind == CouplingKind::position ? k : k * m * h.omega;
  const double alpha = displacement_of(spec);

  Csv csv("level,eigenvalue");
  for (std::size_t i = 0; i < levels.size(); ++i) csv.row(i, levels[i]);

  Report r("hamiltonian", cfg);
  r.section("hamiltonian");
  r.line("kind", coupling_name(spec.kind));
  r.line("dimension", spec.dimension());
  r.line("hermiticity_defect", op.hermiticity_defect());
  r.line("mass", m);
  r.line("effective_coupling", k);
  r.line("displacement_alpha", alpha);
  r.line("ground_energy_0", doublet.energies[0]);
  r.line("ground_energy_1", doublet.energies[1]);
  r.line("doublet_splitting_over_hbar_omega", doublet.splitting() / hw);
  r.line("degeneracy_tolerance_over_hbar_omega", 1e-8);
  r.line("gap_to_third_level_over_hbar_omega", doublet.gap() / hw);
  r.line("completed_square_energy hbar w/2 - c^2/(2 m w^2)", 0.5 * hw - c * c / (2.0 * m * h.omega * h.omega));
  r.line("constant_-c^2/(m w^2)", -c * c / (m * h.omega * h.omega));
  if (spec.detuning != 0.0) r.line("note", "nonzero detuning: doublet predictions below assume zero detuning");
  try {
    const auto tail = coherent_fock_vector(alpha, spec.fock_cutoff).tail;
    r.line("coherent_tail_mass", tail);
    r.line("subspace_fidelity_plus_with_minus_displacement",
           subspace_fidelity(predicted_doublet(spec.kind, alpha, spec.fock_cutoff, DoubletPairing::derived),
                             doublet.vectors));
    r.line("subspace_fidelity_plus_with_plus_displacement",
           subspace_fidelity(predicted_doublet(spec.kind, alpha, spec.fock_cutoff, DoubletPairing::literal),
                             doublet.vectors));
    r.line("subspace_fidelity_tolerance", 0.999);
  } catch (const InvalidArgument& e) {
    r.line("doublet_prediction", e.what());
  }

  r.section("rotation");
  try {
    const auto rc = rotation_convention_check(std::abs(alpha), spec.fock_cutoff, h.omega, cfg.geometry);
    r.line("convention", "exp(-i theta a^dag a)");
    r.line("theta_star", rc.theta_star);
    r.line("fidelity_theta_star", rc.fidelity_star);
    r.line("fidelity_plus_pi/2", rc.fidelity_plus_half_pi);
    r.line("fidelity_minus_pi/2", rc.fidelity_minus_half_pi);
    r.line("fidelity_pi/4", rc.fidelity_quarter_pi);
    r.line("fidelity_threshold", 1.0 - 1e-10);
  } catch (const Error& e) {
    r.line("rotation_check", e.what());
  }
  return {"hamiltonian", csv.str(), r.str(), std::nullopt};
}

CommandOutput run_sensitivity(const RunConfig& cfg) {
  const auto state = compass_state(cfg);
  const auto curve = sensitivity_sweep(state, cfg.alpha, cfg.sweep.s_min, cfg.sweep.s_max, cfg.sweep.n);
  const auto fit = fit_cosine(curve);
  const double expected = expected_frequency(cfg.geometry, cfg.alpha);

  Csv csv("s,overlap");
  for (std::size_t i = 0; i < curve.s.size(); ++i) csv.row(curve.s[i], curve.overlap[i]);

  Report r("sensitivity", cfg);
  r.section("sensitivity");
  write_scales(r, cfg);
  r.line("shift_convention", "gamma = i sqrt2 delta s sign(x0) on both modes");
  r.line("fit_model", "overlap/envelope = offset + amplitude cos(frequency s + theta), envelope-weighted");
  r.line("fit_offset", fit.offset);
  r.line("fit_amplitude", fit.amplitude);
  r.line("fit_frequency", fit.frequency);
  r.line("fit_theta", fit.phase);
  r.line("fit_residual_rms", fit.residual_rms);
  r.line("expected_frequency_4x0", expected);
  r.line("frequency_relative_error", std::abs(fit.frequency - expected) / expected);
  r.line("frequency_tolerance", 0.01);
  try {
    const double s_star = first_overlap_zero(curve, state, cfg.alpha);
    const double predicted = (kPi - fit.phase) / expected;
    r.line("first_overlap_minimum", s_star);
    r.line("overlap_at_minimum", perturbed_overlap(state, cfg.alpha, s_star));
    r.line("fit_prediction_(pi-theta)/(4x0)", predicted);
    r.line("minimum_relative_difference", std::abs(s_star - predicted) / predicted);
  } catch (const NumericalError& e) {
    r.line("first_overlap_minimum", e.what());
  }
  return {"sensitivity", csv.str(), r.str(), std::nullopt};
}

}  // namespace

std::string render_heatmap(const WignerSlice& slice) {
  const double m = slice.max_abs();
  std::string out = "P5\n" + std::to_string(slice.first.n) + " " + std::to_string(slice.second.n) + "\n255\n";
  for (std::size_t r = 0; r < slice.second.n; ++r) {
    const std::size_t j = slice.second.n - 1 - r;
    for (std::size_t i = 0; i < slice.first.n; ++i) {
      const double t = m > 0.0 ? 255.0 * (slice.at(i, j) + m) / (2.0 * m) : 127.5;
      out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(t, 0.0, 255.0)))));
    }
  }
  return out;
}

CommandOutput run_command(std::string_view name, const RunConfig& cfg) {
  if (name == "state") return run_state(cfg);
  if (name == "wigner") return run_wigner(cfg);
  if (name == "tiles") return run_tiles(cfg);
  if (name == "protocol") return run_protocol(cfg);
  if (name == "hamiltonian") return run_hamiltonian(cfg);
  if (name == "sensitivity") return run_sensitivity(cfg);
  throw InvalidArgument("unknown command '" + std::string(name) + "'");
}

std::vector<std::filesystem::path> write_outputs(const CommandOutput& out, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::filesystem::path& path, const std::string& data) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!f) throw Error("cannot write " + path.string());
    written.push_back(path);
  };
  put(dir / (out.name + ".csv"), out.csv);
  put(dir / (out.name + "_report.txt"), out.report);
  if (out.heatmap) put(dir / (out.name + ".pgm"), *out.heatmap);
  return written;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidArgument*>(&e)) return 2;
  if (dynamic_cast<const DegenerateStateError*>(&e)) return 4;
  if (dynamic_cast<const NumericalError*>(&e)) return 3;
  return 1;
}

}  // namespace compass
