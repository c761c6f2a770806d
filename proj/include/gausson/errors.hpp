#pragma once

#include <stdexcept>
#include <string>

namespace gausson {

/// Argument outside the mathematical domain of an operation (k <= 0, tau <= 0, c = 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The grid cannot represent a field to the required accuracy.
class GridResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two fields live on incompatible grids.
class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested operation is undefined in the current parameter regime.
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A tau-ODE step drifted the first integral beyond tolerance; the caller must reduce dt.
class StepRejected : public std::runtime_error {
 public:
  StepRejected(double time, double drift)
      : std::runtime_error("first-integral drift " + std::to_string(drift) +
                           " per step exceeds tolerance at t=" + std::to_string(time)),
        time_(time),
        drift_(drift) {}

  double time() const noexcept { return time_; }
  double drift() const noexcept { return drift_; }

 private:
  double time_;
  double drift_;
};

/// Mass reached the outer part of the periodic box; later results would be box artifacts.
class BoundaryLeak : public std::runtime_error {
 public:
  BoundaryLeak(double time, double fraction)
      : std::runtime_error("boundary mass fraction " + std::to_string(fraction) +
                           " exceeds limit at t=" + std::to_string(time)),
        time_(time),
        fraction_(fraction) {}

  double time() const noexcept { return time_; }
  double fraction() const noexcept { return fraction_; }

 private:
  double time_;
  double fraction_;
};

}  // namespace gausson
