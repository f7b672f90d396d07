#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace wproj {

using Point = std::vector<double>;

/// Finite weighted point cloud in R^dim. Weights are normalized to sum to one
/// and zero-weight atoms are dropped at construction, so every atom carries
/// positive mass.
class DiscreteMeasure {
 public:
  /// Throws EmptySupport when no weight is positive and DimMismatch when the
  /// points do not share one dimension or the lengths differ.
  static DiscreteMeasure create(const std::vector<Point>& points, const std::vector<double>& weights);

  /// Same contract with row-major packed coordinates (size = n * dim).
  static DiscreteMeasure from_flat(int dim, std::vector<double> coords, std::vector<double> weights);

  static DiscreteMeasure dirac(const Point& at);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return weights_.size(); }

  std::span<const double> point(std::size_t i) const noexcept {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  double weight(std::size_t i) const noexcept { return weights_[i]; }

  const std::vector<double>& coords() const noexcept { return coords_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  DiscreteMeasure(int dim, std::vector<double> coords, std::vector<double> weights)
      : dim_(dim), coords_(std::move(coords)), weights_(std::move(weights)) {}

  int dim_;
  std::vector<double> coords_;
  std::vector<double> weights_;
};

/// Regular axis-aligned grid. Cell k along an axis is the half-open box
/// [origin + k*spacing, origin + (k+1)*spacing). Flat indices are row-major
/// with the last axis varying fastest.
struct GridSpec {
  Point origin;
  std::vector<double> spacing;
  std::vector<std::size_t> shape;

  int dim() const noexcept { return static_cast<int>(origin.size()); }
  std::size_t cell_count() const noexcept;
  double cell_volume() const noexcept;
  Point cell_center(std::size_t flat) const;
  /// Flat index of the cell containing x, or nullopt if x lies outside.
  std::optional<std::size_t> locate(std::span<const double> x) const;
  /// Throws InvalidSpec unless the shape is non-empty, spacings positive and dims agree.
  void validate() const;

  /// Axis i covers [lo[i], hi[i]] with cells[i] cells.
  static GridSpec from_bounds(const std::vector<double>& lo, const std::vector<double>& hi,
                              const std::vector<std::size_t>& cells);
  /// Cubic grid of the given spacing covering [-half_width, half_width]^dim around center.
  static GridSpec centered(const Point& center, double half_width, double spacing);
};

/// Per-cell masses on a GridSpec. When membership in K_lambda is claimed the
/// constructor enforces cell_mass <= lambda * cell volume (up to 1e-12).
class GridMeasure {
 public:
  static GridMeasure create(GridSpec grid, std::vector<double> cell_mass, double lambda,
                            bool claims_membership);

  const GridSpec& grid() const noexcept { return grid_; }
  int dim() const noexcept { return grid_.dim(); }
  const std::vector<double>& cell_mass() const noexcept { return cell_mass_; }
  double lambda() const noexcept { return lambda_; }
  bool claims_membership() const noexcept { return claims_membership_; }

  /// Largest cell density mass / volume.
  double max_density() const;
  /// Occupied cells as atoms at cell centers.
  DiscreteMeasure to_discrete() const;

 private:
  GridMeasure(GridSpec grid, std::vector<double> mass, double lambda, bool claims)
      : grid_(std::move(grid)), cell_mass_(std::move(mass)), lambda_(lambda), claims_membership_(claims) {}

  GridSpec grid_;
  std::vector<double> cell_mass_;
  double lambda_;
  bool claims_membership_;
};

/// Lebesgue measure at density lambda restricted to a union of balls with
/// pairwise disjoint interiors; total mass one.
class BallUnionMeasure {
 public:
  static BallUnionMeasure create(std::vector<Point> centers, std::vector<double> radii, double lambda);

  int dim() const noexcept { return static_cast<int>(centers_.front().size()); }
  const std::vector<Point>& centers() const noexcept { return centers_; }
  const std::vector<double>& radii() const noexcept { return radii_; }
  double lambda() const noexcept { return lambda_; }

  bool contains(std::span<const double> x) const;
  double mass_of_ball(std::size_t i) const;

 private:
  BallUnionMeasure(std::vector<Point> c, std::vector<double> r, double lambda)
      : centers_(std::move(c)), radii_(std::move(r)), lambda_(lambda) {}

  std::vector<Point> centers_;
  std::vector<double> radii_;
  double lambda_;
};

Point barycenter(const DiscreteMeasure& m);
Point barycenter(const GridMeasure& m);
Point barycenter(const BallUnionMeasure& m);

DiscreteMeasure translate(const DiscreteMeasure& m, std::span<const double> h);
GridMeasure translate(const GridMeasure& m, std::span<const double> h);
BallUnionMeasure translate(const BallUnionMeasure& m, std::span<const double> h);

double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace wproj
