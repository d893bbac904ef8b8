#ifndef COSMOEE_ERRORS_HPP
#define COSMOEE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cosmoee {

// Inputs outside the mathematical domain of an operation (negative density,
// equation-of-state parameter out of range, state off the physical manifold).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical procedure failed to converge or lost too much accuracy
// (quadrature tolerance not met, root bracket not found, fit degenerate).
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cosmoee

#endif
