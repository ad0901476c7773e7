#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace apsr {

/// Non-negative resource amounts in normalized units.
///
/// Coordinates are stored as fixed-point integers (one unit = 1e-6 of a
/// normalized resource) so that subtracting a demand and adding it back is
/// exact, and the conservation identity of the cluster holds with no
/// tolerance. The dimension is chosen per experiment, at most kMaxDims.
class ResourceVector {
 public:
  static constexpr std::size_t kMaxDims = 4;
  static constexpr std::int64_t kUnitsPerWhole = 1'000'000;

  ResourceVector() = default;

  /// Builds from normalized reals, rounding each coordinate to the nearest unit.
  static ResourceVector from_reals(std::span<const double> values);
  static ResourceVector from_reals(std::initializer_list<double> values);
  static ResourceVector zeros(std::size_t dims);

  [[nodiscard]] std::size_t dims() const { return dims_; }
  [[nodiscard]] std::int64_t units(std::size_t i) const { return units_[i]; }
  [[nodiscard]] double operator[](std::size_t i) const {
    return static_cast<double>(units_[i]) / kUnitsPerWhole;
  }
  [[nodiscard]] std::vector<double> to_reals() const;

  /// Coordinate-wise `*this <= other`. Dimensions must match.
  [[nodiscard]] bool fits_within(const ResourceVector& other) const;
  [[nodiscard]] bool any_positive() const;
  [[nodiscard]] bool all_non_negative() const;

  ResourceVector& operator+=(const ResourceVector& rhs);
  ResourceVector& operator-=(const ResourceVector& rhs);
  friend ResourceVector operator+(ResourceVector lhs, const ResourceVector& rhs) { return lhs += rhs; }
  friend ResourceVector operator-(ResourceVector lhs, const ResourceVector& rhs) { return lhs -= rhs; }
  friend bool operator==(const ResourceVector&, const ResourceVector&) = default;

  [[nodiscard]] std::string to_string() const;

 private:
  std::array<std::int64_t, kMaxDims> units_{};
  std::uint8_t dims_ = 0;

  void require_same_dims(const ResourceVector& other) const;
};

}  // namespace apsr
