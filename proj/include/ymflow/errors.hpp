#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ymflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched sizes, axis indices or grids.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input that violates a documented precondition (non-orthogonal gauge,
/// cutoff radius out of range, malformed config, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Query outside the time window of a store or view.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values met during a reduction.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, std::size_t site)
      : Error(what + " (site " + std::to_string(site) + ")"), site_(site) {}
  std::size_t site() const { return site_; }

 private:
  std::size_t site_;
};

/// Heat kernel evaluated at its own time.
class SingularTimeError : public Error {
 public:
  using Error::Error;
};

/// Too few time samples to resolve a quadrature.
class InsufficientResolutionError : public Error {
 public:
  using Error::Error;
};

/// Too few samples for a fit.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// A time step increased the energy beyond the roundoff slack.
class StabilityError : public Error {
 public:
  StabilityError(const std::string& what, double dt) : Error(what), dt_(dt) {}
  double dt() const { return dt_; }

 private:
  double dt_;
};

/// A non-finite coefficient appeared during integration.
class BlowupDetected : public Error {
 public:
  BlowupDetected(std::size_t site, double t)
      : Error("non-finite connection at site " + std::to_string(site) +
              ", t = " + std::to_string(t)),
        site_(site),
        t_(t) {}
  std::size_t site() const { return site_; }
  double t() const { return t_; }

 private:
  std::size_t site_;
  double t_;
};

}  // namespace ymflow
