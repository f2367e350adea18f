#pragma once

#include <stdexcept>
#include <string>

namespace tailscale {

// Base of every library error. name() is the stable identifier surfaced by the CLI.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* name() const noexcept = 0;
};

#define TAILSCALE_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                          \
   public:                                                             \
    using Error::Error;                                                \
    const char* name() const noexcept override { return #Name; }       \
  };

TAILSCALE_DEFINE_ERROR(DomainError)
TAILSCALE_DEFINE_ERROR(OrderError)
TAILSCALE_DEFINE_ERROR(NotRareError)
TAILSCALE_DEFINE_ERROR(NoSolutionError)
TAILSCALE_DEFINE_ERROR(UnsupportedSignError)
TAILSCALE_DEFINE_ERROR(RegimeError)
TAILSCALE_DEFINE_ERROR(LatticeError)
TAILSCALE_DEFINE_ERROR(SeriesUnavailable)
TAILSCALE_DEFINE_ERROR(ParamError)

#undef TAILSCALE_DEFINE_ERROR

}  // namespace tailscale
