#include "compass/tiles.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <limits>

namespace compass {

namespace {

std::vector<double> line_zeros(const std::vector<double>& abscissae, const std::vector<double>& values,
                               const std::function<double(double)>& exact) {
  std::vector<double> zeros;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double fa = values[i];
    const double fb = values[i + 1];
    if (fa == 0.0) {
      zeros.push_back(abscissae[i]);
      continue;
    }
    if (!(fa * fb < 0.0)) continue;
    const double a = abscissae[i];
    const double b = abscissae[i + 1];
    if (exact) {
      std::uintmax_t iterations = 100;
      const auto bracket = boost::math::tools::toms748_solve(
          exact, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 3),
          iterations);
      zeros.push_back(0.5 * (bracket.first + bracket.second));
    } else {
      zeros.push_back(a + (b - a) * fa / (fa - fb));
    }
  }
  if (!values.empty() && values.back() == 0.0) zeros.push_back(abscissae.back());
  return zeros;
}

std::size_t nearest_index(const GridSpec& grid, double value, std::string_view label) {
  const double pos = (value - grid.min) / grid.spacing();
  if (pos < -0.5 || pos > static_cast<double>(grid.n) - 0.5) {
    throw InvalidArgument("scan line for " + std::string(label) + " lies outside the slice");
  }
  return static_cast<std::size_t>(std::lround(std::clamp(pos, 0.0, static_cast<double>(grid.n - 1))));
}

}  // namespace

ZeroLines find_zero_crossings(const WignerSlice& slice, const ZeroScanOptions& options) {
  const auto& first = slice.first;
  const auto& second = slice.second;
  ZeroLines out;
  out.binding = slice.binding;
  out.first_center = 0.5 * (first.min + first.max);
  out.second_center = 0.5 * (second.min + second.max);
  out.first_line = options.first_line.value_or(out.second_center);
  out.second_line = options.second_line.value_or(out.first_center);

  std::vector<double> xs(first.n), fx(first.n);
  std::vector<double> ps(second.n), fp(second.n);
  for (std::size_t i = 0; i < first.n; ++i) xs[i] = first.at(i);
  for (std::size_t j = 0; j < second.n; ++j) ps[j] = second.at(j);

  std::function<double(double)> along_first;
  std::function<double(double)> along_second;
  if (options.refine) {
    along_first = [&](double v) { return options.refine(slice.binding.point(v, out.first_line)); };
    along_second = [&](double v) { return options.refine(slice.binding.point(out.second_line, v)); };
    for (std::size_t i = 0; i < first.n; ++i) fx[i] = along_first(xs[i]);
    for (std::size_t j = 0; j < second.n; ++j) fp[j] = along_second(ps[j]);
  } else {
    const std::size_t row = nearest_index(second, out.first_line, axis_name(slice.binding.second));
    const std::size_t col = nearest_index(first, out.second_line, axis_name(slice.binding.first));
    out.first_line = second.at(row);
    out.second_line = first.at(col);
    for (std::size_t i = 0; i < first.n; ++i) fx[i] = slice.at(i, row);
    for (std::size_t j = 0; j < second.n; ++j) fp[j] = slice.at(col, j);
  }

  out.first = line_zeros(xs, fx, along_first);
  out.second = line_zeros(ps, fp, along_second);
  if (out.first.empty() && out.second.empty()) {
    throw NumericalError("no sign change along either scan line (state too broad or grid too coarse)");
  }
  return out;
}

namespace {

double central_spacing(const std::vector<double>& zeros, double center) {
  double best = std::numeric_limits<double>::infinity();
  double spacing = 0.0;
  for (std::size_t i = 0; i + 1 < zeros.size(); ++i) {
    const double offset = std::abs(0.5 * (zeros[i] + zeros[i + 1]) - center);
    if (offset < best) {
      best = offset;
      spacing = zeros[i + 1] - zeros[i];
    }
  }
  return spacing;
}

}  // namespace

TileMetrics tile_metrics(const ZeroLines& zeros, double x0, double p0, double hbar) {
  if (zeros.first.size() < 2 || zeros.second.size() < 2) {
    throw NumericalError("tile metrics need at least two zeros on each scan line (found " +
                         std::to_string(zeros.first.size()) + " and " + std::to_string(zeros.second.size()) + ")");
  }
  if (!(x0 > 0.0) || !(p0 > 0.0)) throw InvalidArgument("tile metrics need x0 > 0 and p0 > 0");
  TileMetrics m;
  m.first_count = zeros.first.size();
  m.second_count = zeros.second.size();
  m.dx = central_spacing(zeros.first, zeros.second_line);
  m.dp = central_spacing(zeros.second, zeros.first_line);
  m.area = m.dx * m.dp;
  m.reference_area = (2.0 * kPi * hbar) * (2.0 * kPi * hbar) / (4.0 * x0 * p0);
  m.checkerboard_area = kPi * kPi * hbar * hbar / (4.0 * x0 * p0);
  m.ratio_to_reference = m.area / m.reference_area;
  m.ratio_to_checkerboard = m.area / m.checkerboard_area;
  return m;
}

double compass_x0(const ModeGeometry& g, cplx alpha) { return kSqrt2 * g.delta * std::abs(alpha); }
double compass_p0(const ModeGeometry& g, cplx alpha) { return kSqrt2 * g.hbar * std::abs(alpha) / g.delta; }

double expected_spacing(Axis axis, const ModeGeometry& g, cplx alpha) {
  const bool position = axis == Axis::x1 || axis == Axis::x2;
  return kPi * g.hbar / (2.0 * (position ? compass_p0(g, alpha) : compass_x0(g, alpha)));
}

CheckerboardProbe probe_checkerboard(const BipartiteState& state, cplx alpha, double relative_threshold,
                                     std::size_t samples) {
  const auto& g = state.geometry();
  const double dx = expected_spacing(Axis::x1, g, alpha);
  const double dp = expected_spacing(Axis::p1, g, alpha);
  const auto slice = wigner_slice(state, SliceBinding{}, GridSpec{-dx, dx, samples}, GridSpec{-dp, dp, samples},
                                  WignerMethod::analytic);
  CheckerboardProbe probe;
  probe.max_value = *std::max_element(slice.values.begin(), slice.values.end());
  probe.min_value = *std::min_element(slice.values.begin(), slice.values.end());
  probe.peak = peak_magnitude(state);
  probe.threshold = relative_threshold * probe.peak;
  probe.checkerboard = probe.max_value > probe.threshold && probe.min_value < -probe.threshold;
  return probe;
}

}  // namespace compass
