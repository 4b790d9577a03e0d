#ifndef DPCSP_ERRORS_H_
#define DPCSP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dpcsp {

// Malformed argument: wrong length, out-of-range index, bad parameter.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Mathematically undefined request (empty instance for an average,
// non-finite score, wrong instance kind).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input violates an algorithm's stated precondition (e.g. not triangle-free).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Input document or configuration failed validation.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exhaustive enumeration or sampling budget would exceed a configured cap.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, long long requested, long long cap)
      : std::runtime_error(what + " (requested " + std::to_string(requested) +
                           ", cap " + std::to_string(cap) + ")"),
        requested_(requested),
        cap_(cap) {}

  long long requested() const { return requested_; }
  long long cap() const { return cap_; }

 private:
  long long requested_;
  long long cap_;
};

// Rejection sampling could not meet a generator specification.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dpcsp

#endif  // DPCSP_ERRORS_H_
