#pragma once

#include <optional>
#include <vector>

namespace lowsig {

/// Ellipse in the transaxial plane. Attenuations of overlapping shapes add.
struct Ellipse {
  double cx = 0.0;     // cm
  double cy = 0.0;     // cm
  double a = 1.0;      // semi-axis along the rotated x axis, cm
  double b = 1.0;      // cm
  double angle = 0.0;  // rad, counter-clockwise
  double mu = 0.0;     // cm^-1
};

struct Wire {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.01;
  double mu = 0.0;
};

struct Phantom {
  std::vector<Ellipse> ellipses;
  std::optional<Wire> wire;

  /// Throws ConfigError for non-positive axes/radius or non-finite values.
  void validate() const;

  /// Largest distance from the isocentre reached by any shape.
  double extent() const;

  /// Attenuation at a point (sum over shapes containing it).
  double attenuation_at(double x, double y) const;

  /// Same scene with every shape rotated about the isocentre.
  Phantom rotated(double radians) const;

  /// Same scene with every attenuation multiplied by `factor`.
  Phantom scaled(double factor) const;
};

/// Parallel-beam scan geometry. Channel c sits at signed distance
/// (c - (C-1)/2) * pitch from the isocentre; a ray at angle theta and offset
/// s is the line x cos(theta) + y sin(theta) = s.
struct Geometry {
  std::size_t channels = 1;
  double channel_pitch = 0.1;  // cm
  std::size_t rows = 1;
  std::vector<double> angles;  // rad
  double fov_radius = 0.0;     // cm

  /// Uniform views over [0, pi), FOV radius = channels * pitch / 2.
  static Geometry parallel(std::size_t channels, double pitch, std::size_t rows, std::size_t views);

  std::size_t views() const { return angles.size(); }
  double channel_offset(std::size_t channel) const;

  void validate() const;
};

}  // namespace lowsig
