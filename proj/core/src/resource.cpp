#include "apsr/resource.hpp"

#include <cmath>
#include <sstream>

#include "apsr/error.hpp"

namespace apsr {

ResourceVector ResourceVector::from_reals(std::span<const double> values) {
  if (values.empty() || values.size() > kMaxDims) {
    throw ModelError("resource vector must have between 1 and " + std::to_string(kMaxDims) +
                     " coordinates, got " + std::to_string(values.size()));
  }
  ResourceVector v;
  v.dims_ = static_cast<std::uint8_t>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      throw ModelError("resource coordinates must be finite and non-negative");
    }
    v.units_[i] = std::llround(values[i] * static_cast<double>(kUnitsPerWhole));
  }
  return v;
}

ResourceVector ResourceVector::from_reals(std::initializer_list<double> values) {
  return from_reals(std::span<const double>(values.begin(), values.size()));
}

ResourceVector ResourceVector::zeros(std::size_t dims) {
  if (dims == 0 || dims > kMaxDims) throw ModelError("bad resource dimension " + std::to_string(dims));
  ResourceVector v;
  v.dims_ = static_cast<std::uint8_t>(dims);
  return v;
}

std::vector<double> ResourceVector::to_reals() const {
  std::vector<double> out(dims_);
  for (std::size_t i = 0; i < dims_; ++i) out[i] = (*this)[i];
  return out;
}

void ResourceVector::require_same_dims(const ResourceVector& other) const {
  if (dims_ != other.dims_) {
    throw ModelError("resource dimension mismatch: " + std::to_string(dims_) + " vs " +
                     std::to_string(other.dims_));
  }
}

bool ResourceVector::fits_within(const ResourceVector& other) const {
  require_same_dims(other);
  for (std::size_t i = 0; i < dims_; ++i) {
    if (units_[i] > other.units_[i]) return false;
  }
  return true;
}

bool ResourceVector::any_positive() const {
  for (std::size_t i = 0; i < dims_; ++i) {
    if (units_[i] > 0) return true;
  }
  return false;
}

bool ResourceVector::all_non_negative() const {
  for (std::size_t i = 0; i < dims_; ++i) {
    if (units_[i] < 0) return false;
  }
  return true;
}

ResourceVector& ResourceVector::operator+=(const ResourceVector& rhs) {
  require_same_dims(rhs);
  for (std::size_t i = 0; i < dims_; ++i) units_[i] += rhs.units_[i];
  return *this;
}

ResourceVector& ResourceVector::operator-=(const ResourceVector& rhs) {
  require_same_dims(rhs);
  for (std::size_t i = 0; i < dims_; ++i) {
    if (units_[i] < rhs.units_[i]) throw ModelError("resource subtraction would go negative");
  }
  for (std::size_t i = 0; i < dims_; ++i) units_[i] -= rhs.units_[i];
  return *this;
}

std::string ResourceVector::to_string() const {
  std::ostringstream os;
  os << '<';
  for (std::size_t i = 0; i < dims_; ++i) {
    if (i != 0) os << ',';
    os << (*this)[i];
  }
  os << '>';
  return os.str();
}

}  // namespace apsr
