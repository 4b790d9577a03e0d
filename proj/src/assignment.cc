#include "dpcsp/assignment.h"

#include "dpcsp/errors.h"

namespace dpcsp {

Assignment::Assignment(std::vector<std::int8_t> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] != 1 && values_[i] != -1) {
      throw ArgumentError("assignment entry " + std::to_string(i) + " is not +/-1");
    }
  }
}

Assignment Assignment::FromInts(const std::vector<int>& values) {
  std::vector<std::int8_t> v;
  v.reserve(values.size());
  for (int x : values) {
    if (x != 1 && x != -1) throw ArgumentError("assignment entries must be +/-1");
    v.push_back(static_cast<std::int8_t>(x));
  }
  return Assignment(std::move(v));
}

Assignment Assignment::Uniform(std::size_t n, RngStream& rng) {
  Assignment x(n);
  for (std::size_t i = 0; i < n; ++i) x.values_[i] = static_cast<std::int8_t>(rng.Sign());
  return x;
}

void Assignment::Set(std::size_t i, int value) {
  if (value != 1 && value != -1) throw ArgumentError("assignment entries must be +/-1");
  values_.at(i) = static_cast<std::int8_t>(value);
}

Assignment Assignment::Negated() const {
  Assignment out = *this;
  for (auto& v : out.values_) v = static_cast<std::int8_t>(-v);
  return out;
}

std::uint64_t Assignment::ToMask() const {
  if (values_.size() > 64) throw ArgumentError("ToMask requires n <= 64");
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] < 0) mask |= std::uint64_t{1} << i;
  }
  return mask;
}

Assignment Assignment::FromMask(std::uint64_t mask, std::size_t n) {
  if (n > 64) throw ArgumentError("FromMask requires n <= 64");
  Assignment x(n);
  for (std::size_t i = 0; i < n; ++i) {
    if ((mask >> i) & 1) x.values_[i] = -1;
  }
  return x;
}

std::string Assignment::ToString() const {
  std::string s;
  s.reserve(values_.size());
  for (auto v : values_) s.push_back(v > 0 ? '+' : '-');
  return s;
}

}  // namespace dpcsp
