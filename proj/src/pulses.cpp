#include "ethde/pulses.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace ethde {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

Pulse Pulse::delta_kick(double strength) {
  Pulse p;
  p.shape_ = Shape::delta_kick;
  p.amplitude_ = strength;
  p.support_ = 0.0;
  return p;
}

Pulse Pulse::hann(double amplitude, double duration) {
  if (duration <= 0) throw std::invalid_argument("hann: duration > 0 required");
  Pulse p;
  p.shape_ = Shape::hann;
  p.amplitude_ = amplitude;
  p.support_ = duration;
  return p;
}

Pulse Pulse::square(double amplitude, double duration, double smoothing) {
  if (duration <= 0 || smoothing <= 0 || 2 * smoothing > duration)
    throw std::invalid_argument("square: need 0 < 2*smoothing <= duration");
  Pulse p;
  p.shape_ = Shape::square;
  p.amplitude_ = amplitude;
  p.support_ = duration;
  p.smoothing_ = smoothing;
  return p;
}

Pulse Pulse::gaussian_truncated(double amplitude, double center, double width,
                                double support) {
  if (support <= 0 || width <= 0 || center <= 0 || center >= support)
    throw std::invalid_argument("gaussian_truncated: invalid geometry");
  Pulse p;
  p.shape_ = Shape::gaussian_truncated;
  p.amplitude_ = amplitude;
  p.support_ = support;
  p.center_ = center;
  p.width_ = width;
  // subtract the chord through the endpoints so lambda vanishes there exactly
  double g0 = std::exp(-center * center / (2 * width * width));
  double gs = std::exp(-(support - center) * (support - center) /
                       (2 * width * width));
  p.base_ = g0;
  p.scale_ = (gs - g0) / support;
  double peak = 1.0 - (g0 + p.scale_ * center);
  if (peak <= 0) throw std::invalid_argument("gaussian_truncated: degenerate shape");
  p.amplitude_ = amplitude / peak;
  return p;
}

double Pulse::kick_area() const {
  if (shape_ != Shape::delta_kick)
    throw std::logic_error("kick_area: not a delta kick");
  return amplitude_;
}

double Pulse::evaluate(double t) const {
  if (shape_ == Shape::delta_kick)
    throw std::logic_error(
        "delta kick has no pointwise value; use the kick evolution path");
  if (t < 0.0 || t > support_) return 0.0;
  switch (shape_) {
    case Shape::hann: {
      double s = std::sin(M_PI * t / support_);
      return amplitude_ * s * s;
    }
    case Shape::square: {
      if (t < smoothing_) {
        double s = std::sin(0.5 * M_PI * t / smoothing_);
        return amplitude_ * s * s;
      }
      if (t > support_ - smoothing_) {
        double s = std::sin(0.5 * M_PI * (support_ - t) / smoothing_);
        return amplitude_ * s * s;
      }
      return amplitude_;
    }
    default: {  // gaussian_truncated
      double g = std::exp(-(t - center_) * (t - center_) / (2 * width_ * width_));
      double chord = base_ + scale_ * t;
      return amplitude_ * (g - chord);
    }
  }
}

Complex Pulse::fourier(double omega) const {
  if (shape_ == Shape::delta_kick)
    return Complex(amplitude_ / kSqrt2Pi, 0.0);

  if (shape_ == Shape::hann) {
    // (lam0/sqrt(2pi)) e^{i w s/2} sin(w s/2) a^2 / (w (a^2 - w^2)), a = 2pi/s;
    // removable singularities at w = 0, +-a handled by sinc rewrites
    const double s = support_, a = 2.0 * M_PI / s;
    const double w = omega;
    double g;
    if (std::abs(std::abs(w) - a) < 1e-3 * a) {
      double ww = std::abs(w);
      g = sinc((ww - a) * s / 2.0) * (s / 2.0) * a * a / (ww * (a + ww));
    } else {
      g = (s / 2.0) * sinc(w * s / 2.0) * a * a / (a * a - w * w);
    }
    Complex phase = std::exp(Complex(0.0, w * s / 2.0));
    return (amplitude_ / kSqrt2Pi) * g * phase;
  }

  using boost::math::quadrature::gauss_kronrod;
  auto re = gauss_kronrod<double, 31>::integrate(
      [&](double t) { return evaluate(t) * std::cos(omega * t); }, 0.0, support_,
      15, 1e-10);
  auto im = gauss_kronrod<double, 31>::integrate(
      [&](double t) { return evaluate(t) * std::sin(omega * t); }, 0.0, support_,
      15, 1e-10);
  return Complex(re, im) / kSqrt2Pi;
}

Pulse Pulse::scaled(double factor) const {
  Pulse p = *this;
  p.amplitude_ *= factor;
  return p;
}

Pulse Pulse::from_json(const nlohmann::json& j) {
  const std::string shape = j.at("shape");
  if (shape == "delta_kick") return delta_kick(j.at("strength").get<double>());
  if (shape == "hann")
    return hann(j.at("amplitude").get<double>(), j.at("duration").get<double>());
  if (shape == "square")
    return square(j.at("amplitude").get<double>(), j.at("duration").get<double>(),
                  j.value("smoothing", 0.05 * j.at("duration").get<double>()));
  if (shape == "gaussian_truncated")
    return gaussian_truncated(j.at("amplitude").get<double>(),
                              j.at("center").get<double>(),
                              j.at("width").get<double>(),
                              j.at("support").get<double>());
  throw std::invalid_argument("unknown pulse shape: " + shape);
}

nlohmann::json Pulse::to_json() const {
  switch (shape_) {
    case Shape::delta_kick:
      return {{"shape", "delta_kick"}, {"strength", amplitude_}};
    case Shape::hann:
      return {{"shape", "hann"}, {"amplitude", amplitude_}, {"duration", support_}};
    case Shape::square:
      return {{"shape", "square"},
              {"amplitude", amplitude_},
              {"duration", support_},
              {"smoothing", smoothing_}};
    default:
      return {{"shape", "gaussian_truncated"},
              {"amplitude", amplitude_},
              {"center", center_},
              {"width", width_},
              {"support", support_}};
  }
}

}  // namespace ethde
