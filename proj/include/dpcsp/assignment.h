#ifndef DPCSP_ASSIGNMENT_H_
#define DPCSP_ASSIGNMENT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dpcsp/rng.h"

namespace dpcsp {

// A +/-1 valuation of n Boolean variables. Every entry is exactly -1 or +1.
// Cuts use the same type: side(v) = +1 means v is in S.
class Assignment {
 public:
  Assignment() = default;
  // All variables set to +1.
  explicit Assignment(std::size_t n) : values_(n, 1) {}
  // Throws ArgumentError if any entry is not -1 or +1.
  explicit Assignment(std::vector<std::int8_t> values);
  static Assignment FromInts(const std::vector<int>& values);
  static Assignment Uniform(std::size_t n, RngStream& rng);

  std::size_t size() const { return values_.size(); }
  int operator[](std::size_t i) const { return values_[i]; }
  // Throws ArgumentError unless value is -1 or +1.
  void Set(std::size_t i, int value);
  void Flip(std::size_t i) { values_[i] = static_cast<std::int8_t>(-values_[i]); }
  Assignment Negated() const;

  std::span<const std::int8_t> values() const { return values_; }

  // Bit i set iff x_i = -1. Only valid for n <= 64.
  std::uint64_t ToMask() const;
  static Assignment FromMask(std::uint64_t mask, std::size_t n);

  // "+-+-" style rendering used by the CLI.
  std::string ToString() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::int8_t> values_;
};

using Cut = Assignment;

}  // namespace dpcsp

#endif  // DPCSP_ASSIGNMENT_H_
