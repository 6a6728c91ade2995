#pragma once

// Zero lines and tile geometry of sampled Wigner slices.

#include <cstddef>
#include <optional>
#include <vector>

#include "compass/coherent_state.hpp"
#include "compass/wigner.hpp"

namespace compass {

struct ZeroScanOptions {
  /// Position (on the second axis) of the line scanned along the first axis.
  /// Defaults to the slice center.
  std::optional<double> first_line;
  /// Position (on the first axis) of the line scanned along the second axis.
  std::optional<double> second_line;
  /// Exact evaluator. When set, the scan lines are sampled with it at the
  /// grid abscissae and every bracket is refined to machine precision;
  /// otherwise the nearest grid row/column is used with linear interpolation.
  PhaseSpaceFunction refine;
};

/// Sign changes found along the two scan lines, ascending.
struct ZeroLines {
  SliceBinding binding;
  double first_line = 0.0;
  double second_line = 0.0;
  double first_center = 0.0;
  double second_center = 0.0;
  std::vector<double> first;
  std::vector<double> second;
};

/// Throws NumericalError if neither scan line shows a sign change.
ZeroLines find_zero_crossings(const WignerSlice& slice, const ZeroScanOptions& options = {});

struct TileMetrics {
  double dx = 0.0;
  double dp = 0.0;
  double area = 0.0;
  std::size_t first_count = 0;
  std::size_t second_count = 0;
  /// (2 pi hbar)^2 / (4 x0 p0)
  double reference_area = 0.0;
  /// pi^2 hbar^2 / (4 x0 p0): the cell bounded by adjacent zeros of a cosine
  /// product with spacings pi hbar / (2 p0) and pi hbar / (2 x0).
  double checkerboard_area = 0.0;
  double ratio_to_reference = 0.0;
  double ratio_to_checkerboard = 0.0;
};

/// Spacing of the adjacent zero pair closest to the scan center on each
/// axis. x0, p0 are the compass quadrature scales. Throws NumericalError
/// with fewer than two zeros on either axis.
TileMetrics tile_metrics(const ZeroLines& zeros, double x0, double p0, double hbar);

/// x0 = sqrt2 delta |alpha|, p0 = sqrt2 hbar |alpha| / delta.
double compass_x0(const ModeGeometry& g, cplx alpha);
double compass_p0(const ModeGeometry& g, cplx alpha);

/// Expected adjacent-zero spacing along an axis: pi hbar / (2 p0) for a
/// position axis, pi hbar / (2 x0) for a momentum axis.
double expected_spacing(Axis axis, const ModeGeometry& g, cplx alpha);

struct CheckerboardProbe {
  double max_value = 0.0;
  double min_value = 0.0;
  double peak = 0.0;
  double threshold = 0.0;
  bool checkerboard = false;
};

/// Samples |x1| <= dx, |p1| <= dp (one expected spacing each way) of the
/// x1p1 slice at x2 = p2 = 0 and reports whether values of both signs above
/// `relative_threshold` times peak_magnitude(state) occur.
CheckerboardProbe probe_checkerboard(const BipartiteState& state, cplx alpha, double relative_threshold = 1e-3,
                                     std::size_t samples = 41);

}  // namespace compass
