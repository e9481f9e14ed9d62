#pragma once

#include <stdexcept>
#include <string>

namespace goldbach_lab {

// Requested structure does not fit the addressable bitset / counter width.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// A distribution whose normalizing mass (total or mean) is zero.
class DegenerateDistributionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Cache file could not be read or written, or failed validation.
class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace goldbach_lab
