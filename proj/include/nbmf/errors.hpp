#pragma once

#include <stdexcept>
#include <string>

namespace nbmf {

/// Argument outside the domain of an operation (bad field value, point
/// outside a support, failed invariant).
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

/// Raised when a per-tone M/G/1 queue would be unstable (load >= 1).
class UnstableQueueError : public std::runtime_error
{
  public:
    explicit UnstableQueueError(double rho);

    double rho() const noexcept { return rho_; }

  private:
    double rho_;
};

/// Normalization requested on a field with no mass.
class DegenerateMeanFieldError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

} // namespace nbmf
