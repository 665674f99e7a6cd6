#pragma once

#include <complex>

#include <nlohmann/json.hpp>

#include "ethde/linalg.hpp"

namespace ethde {

/// Compactly supported real coupling profile lambda(t), support [0, s].
/// Fourier convention: lambda(omega) = (1/sqrt(2 pi)) int lambda(t) e^{i omega t} dt.
class Pulse {
 public:
  enum class Shape { delta_kick, hann, square, gaussian_truncated };

  static Pulse delta_kick(double strength);
  static Pulse hann(double amplitude, double duration);
  static Pulse square(double amplitude, double duration, double smoothing);
  static Pulse gaussian_truncated(double amplitude, double center, double width,
                                  double support);

  Shape shape() const { return shape_; }
  double support() const { return support_; }
  double amplitude() const { return amplitude_; }
  double kick_area() const;  // delta kick strength; errors otherwise

  /// lambda(t); zero outside [0, s]. Not defined for delta kicks.
  double evaluate(double t) const;

  /// lambda(omega); analytic for hann and delta kick, adaptive quadrature
  /// (rel. tol 1e-10) otherwise. Satisfies lambda(-w) = conj(lambda(w)).
  Complex fourier(double omega) const;

  Pulse scaled(double factor) const;  // same shape, amplitude * factor

  static Pulse from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  Pulse() = default;
  Shape shape_;
  double amplitude_ = 0, support_ = 0;
  double smoothing_ = 0;                 // square ramps
  double center_ = 0, width_ = 0;        // truncated gaussian
  double base_ = 0, scale_ = 1;          // gaussian endpoint renormalization
};

}  // namespace ethde
