#include "wproj/measures.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "wproj/ball_geometry.hpp"
#include "wproj/error.hpp"

namespace wproj {

namespace {

constexpr double kMassTolerance = 1e-9;
constexpr double kCapacityTolerance = 1e-12;

void require_dim(std::span<const double> h, int dim) {
  if (static_cast<int>(h.size()) != dim) {
    throw Error(ErrorCode::DimMismatch, "translation vector has length " + std::to_string(h.size()) +
                                            ", measure has dim " + std::to_string(dim));
  }
}

}  // namespace

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

// ---------------------------------------------------------------------------
// DiscreteMeasure

DiscreteMeasure DiscreteMeasure::create(const std::vector<Point>& points, const std::vector<double>& weights) {
  if (points.size() != weights.size()) {
    throw Error(ErrorCode::DimMismatch, "points and weights differ in length");
  }
  if (points.empty()) throw Error(ErrorCode::EmptySupport, "no atoms");
  const int dim = static_cast<int>(points.front().size());
  std::vector<double> coords;
  coords.reserve(points.size() * static_cast<std::size_t>(dim));
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != dim) throw Error(ErrorCode::DimMismatch, "points differ in dimension");
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return from_flat(dim, std::move(coords), weights);
}

DiscreteMeasure DiscreteMeasure::from_flat(int dim, std::vector<double> coords, std::vector<double> weights) {
  if (dim < 1) throw Error(ErrorCode::DimMismatch, "dimension must be positive");
  if (coords.size() != weights.size() * static_cast<std::size_t>(dim)) {
    throw Error(ErrorCode::DimMismatch, "coordinate array does not match weights * dim");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::InvalidMeasure, "weights must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::EmptySupport, "no positive weight");

  const auto d = static_cast<std::size_t>(dim);
  std::vector<double> kept_coords;
  std::vector<double> kept_weights;
  kept_coords.reserve(coords.size());
  kept_weights.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] == 0.0) continue;
    kept_weights.push_back(weights[i] / total);
    kept_coords.insert(kept_coords.end(), coords.begin() + static_cast<std::ptrdiff_t>(i * d),
                       coords.begin() + static_cast<std::ptrdiff_t>((i + 1) * d));
  }
  return DiscreteMeasure(dim, std::move(kept_coords), std::move(kept_weights));
}

DiscreteMeasure DiscreteMeasure::dirac(const Point& at) { return create({at}, {1.0}); }

// ---------------------------------------------------------------------------
// GridSpec

std::size_t GridSpec::cell_count() const noexcept {
  std::size_t n = 1;
  for (auto s : shape) n *= s;
  return n;
}

double GridSpec::cell_volume() const noexcept {
  double v = 1.0;
  for (double s : spacing) v *= s;
  return v;
}

Point GridSpec::cell_center(std::size_t flat) const {
  Point c(origin.size());
  for (int axis = dim() - 1; axis >= 0; --axis) {
    const auto a = static_cast<std::size_t>(axis);
    const std::size_t k = flat % shape[a];
    flat /= shape[a];
    c[a] = origin[a] + (static_cast<double>(k) + 0.5) * spacing[a];
  }
  return c;
}

std::optional<std::size_t> GridSpec::locate(std::span<const double> x) const {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < origin.size(); ++a) {
    const double u = (x[a] - origin[a]) / spacing[a];
    if (!(u >= 0.0)) return std::nullopt;
    const auto k = static_cast<std::size_t>(std::floor(u));
    if (k >= shape[a]) return std::nullopt;
    flat = flat * shape[a] + k;
  }
  return flat;
}

void GridSpec::validate() const {
  if (origin.empty()) throw Error(ErrorCode::InvalidSpec, "grid has no axes");
  if (spacing.size() != origin.size() || shape.size() != origin.size()) {
    throw Error(ErrorCode::DimMismatch, "grid origin, spacing and shape differ in length");
  }
  for (std::size_t a = 0; a < origin.size(); ++a) {
    if (!(spacing[a] > 0.0)) throw Error(ErrorCode::InvalidSpec, "grid spacing must be positive");
    if (shape[a] == 0) throw Error(ErrorCode::InvalidSpec, "grid axis has no cells");
  }
}

GridSpec GridSpec::from_bounds(const std::vector<double>& lo, const std::vector<double>& hi,
                               const std::vector<std::size_t>& cells) {
  if (lo.size() != hi.size() || lo.size() != cells.size()) {
    throw Error(ErrorCode::DimMismatch, "grid bounds differ in length");
  }
  GridSpec g;
  g.origin = lo;
  g.shape = cells;
  for (std::size_t a = 0; a < lo.size(); ++a) {
    if (!(hi[a] > lo[a]) || cells[a] == 0) throw Error(ErrorCode::InvalidSpec, "empty grid axis");
    g.spacing.push_back((hi[a] - lo[a]) / static_cast<double>(cells[a]));
  }
  return g;
}

GridSpec GridSpec::centered(const Point& center, double half_width, double spacing) {
  if (!(spacing > 0.0) || !(half_width > 0.0)) throw Error(ErrorCode::InvalidSpec, "bad centered grid");
  const auto cells = static_cast<std::size_t>(std::ceil(2.0 * half_width / spacing - 1e-9));
  const double half = 0.5 * spacing * static_cast<double>(cells);
  GridSpec g;
  for (double c : center) {
    g.origin.push_back(c - half);
    g.spacing.push_back(spacing);
    g.shape.push_back(cells);
  }
  return g;
}

// ---------------------------------------------------------------------------
// GridMeasure

GridMeasure GridMeasure::create(GridSpec grid, std::vector<double> cell_mass, double lambda,
                                bool claims_membership) {
  grid.validate();
  if (cell_mass.size() != grid.cell_count()) {
    throw Error(ErrorCode::DimMismatch, "cell_mass length does not match grid shape");
  }
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidSpec, "density cap must be positive");
  double total = 0.0;
  for (double m : cell_mass) {
    if (!(m >= 0.0)) throw Error(ErrorCode::InvalidMeasure, "cell masses must be >= 0");
    total += m;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw Error(ErrorCode::InvalidMeasure, "cell masses sum to " + std::to_string(total));
  }
  if (claims_membership) {
    const double cap = lambda * grid.cell_volume() + kCapacityTolerance;
    for (double m : cell_mass) {
      if (m > cap) throw Error(ErrorCode::InvalidMeasure, "cell mass exceeds lambda * cell volume");
    }
  }
  return GridMeasure(std::move(grid), std::move(cell_mass), lambda, claims_membership);
}

double GridMeasure::max_density() const {
  double best = 0.0;
  for (double m : cell_mass_) best = std::max(best, m);
  return best / grid_.cell_volume();
}

DiscreteMeasure GridMeasure::to_discrete() const {
  std::vector<double> coords;
  std::vector<double> weights;
  for (std::size_t j = 0; j < cell_mass_.size(); ++j) {
    if (cell_mass_[j] <= 0.0) continue;
    const Point c = grid_.cell_center(j);
    coords.insert(coords.end(), c.begin(), c.end());
    weights.push_back(cell_mass_[j]);
  }
  return DiscreteMeasure::from_flat(dim(), std::move(coords), std::move(weights));
}

// ---------------------------------------------------------------------------
// BallUnionMeasure

BallUnionMeasure BallUnionMeasure::create(std::vector<Point> centers, std::vector<double> radii, double lambda) {
  if (centers.empty()) throw Error(ErrorCode::EmptySupport, "ball union has no balls");
  if (centers.size() != radii.size()) throw Error(ErrorCode::DimMismatch, "centers and radii differ in length");
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidSpec, "density must be positive");
  const auto dim = static_cast<int>(centers.front().size());
  if (dim < 1) throw Error(ErrorCode::DimMismatch, "ball centers must have positive dimension");
  double total = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (static_cast<int>(centers[i].size()) != dim) throw Error(ErrorCode::DimMismatch, "centers differ in dim");
    if (!(radii[i] > 0.0)) throw Error(ErrorCode::InvalidMeasure, "radii must be positive");
    total += lambda * vol_ball(dim, radii[i]);
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidMeasure, "ball union mass is " + std::to_string(total) + ", expected 1");
  }
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = i + 1; j < centers.size(); ++j) {
      const double dist = std::sqrt(squared_distance(centers[i], centers[j]));
      if (dist < radii[i] + radii[j] - 1e-12) throw Error(ErrorCode::OverlapError, "balls overlap");
    }
  }
  return BallUnionMeasure(std::move(centers), std::move(radii), lambda);
}

bool BallUnionMeasure::contains(std::span<const double> x) const {
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    if (squared_distance(x, centers_[i]) <= radii_[i] * radii_[i]) return true;
  }
  return false;
}

double BallUnionMeasure::mass_of_ball(std::size_t i) const { return lambda_ * vol_ball(dim(), radii_[i]); }

// ---------------------------------------------------------------------------
// barycenter / translate

Point barycenter(const DiscreteMeasure& m) {
  Point b(static_cast<std::size_t>(m.dim()), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto x = m.point(i);
    for (std::size_t a = 0; a < b.size(); ++a) b[a] += m.weight(i) * x[a];
  }
  return b;
}

Point barycenter(const GridMeasure& m) {
  Point b(static_cast<std::size_t>(m.dim()), 0.0);
  const auto& mass = m.cell_mass();
  for (std::size_t j = 0; j < mass.size(); ++j) {
    if (mass[j] == 0.0) continue;
    const Point c = m.grid().cell_center(j);
    for (std::size_t a = 0; a < b.size(); ++a) b[a] += mass[j] * c[a];
  }
  return b;
}

Point barycenter(const BallUnionMeasure& m) {
  Point b(static_cast<std::size_t>(m.dim()), 0.0);
  for (std::size_t i = 0; i < m.centers().size(); ++i) {
    const double w = m.mass_of_ball(i);
    for (std::size_t a = 0; a < b.size(); ++a) b[a] += w * m.centers()[i][a];
  }
  return b;
}

DiscreteMeasure translate(const DiscreteMeasure& m, std::span<const double> h) {
  require_dim(h, m.dim());
  std::vector<double> coords = m.coords();
  const auto d = static_cast<std::size_t>(m.dim());
  for (std::size_t k = 0; k < coords.size(); ++k) coords[k] += h[k % d];
  return DiscreteMeasure::from_flat(m.dim(), std::move(coords), m.weights());
}

GridMeasure translate(const GridMeasure& m, std::span<const double> h) {
  require_dim(h, m.dim());
  GridSpec g = m.grid();
  for (std::size_t a = 0; a < g.origin.size(); ++a) g.origin[a] += h[a];
  return GridMeasure::create(std::move(g), m.cell_mass(), m.lambda(), m.claims_membership());
}

BallUnionMeasure translate(const BallUnionMeasure& m, std::span<const double> h) {
  require_dim(h, m.dim());
  auto centers = m.centers();
  for (auto& c : centers) {
    for (std::size_t a = 0; a < c.size(); ++a) c[a] += h[a];
  }
  return BallUnionMeasure::create(std::move(centers), m.radii(), m.lambda());
}

}  // namespace wproj
