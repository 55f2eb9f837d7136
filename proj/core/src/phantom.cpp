#include "lowsig/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lowsig/error.hpp"

namespace lowsig {

void Phantom::validate() const {
  for (std::size_t k = 0; k < ellipses.size(); ++k) {
    const Ellipse& e = ellipses[k];
    const std::string tag = "ellipse[" + std::to_string(k) + "]";
    if (!(e.a > 0.0) || !(e.b > 0.0)) throw ConfigError(tag + ": semi-axes must be > 0");
    if (!std::isfinite(e.cx) || !std::isfinite(e.cy) || !std::isfinite(e.a) || !std::isfinite(e.b) ||
        !std::isfinite(e.angle) || !std::isfinite(e.mu)) {
      throw ConfigError(tag + ": values must be finite");
    }
  }
  if (wire) {
    if (!(wire->radius > 0.0)) throw ConfigError("wire: radius must be > 0");
    if (!std::isfinite(wire->cx) || !std::isfinite(wire->cy) || !std::isfinite(wire->radius) ||
        !std::isfinite(wire->mu)) {
      throw ConfigError("wire: values must be finite");
    }
  }
}

double Phantom::extent() const {
  double r = 0.0;
  for (const Ellipse& e : ellipses) r = std::max(r, std::hypot(e.cx, e.cy) + std::max(e.a, e.b));
  if (wire) r = std::max(r, std::hypot(wire->cx, wire->cy) + wire->radius);
  return r;
}

double Phantom::attenuation_at(double x, double y) const {
  double mu = 0.0;
  for (const Ellipse& e : ellipses) {
    const double dx = x - e.cx;
    const double dy = y - e.cy;
    const double cs = std::cos(e.angle);
    const double sn = std::sin(e.angle);
    const double u = (dx * cs + dy * sn) / e.a;
    const double w = (-dx * sn + dy * cs) / e.b;
    if (u * u + w * w <= 1.0) mu += e.mu;
  }
  if (wire) {
    const double dx = x - wire->cx;
    const double dy = y - wire->cy;
    if (dx * dx + dy * dy <= wire->radius * wire->radius) mu += wire->mu;
  }
  return mu;
}

Phantom Phantom::rotated(double radians) const {
  const double cs = std::cos(radians);
  const double sn = std::sin(radians);
  Phantom out = *this;
  for (Ellipse& e : out.ellipses) {
    const double x = e.cx * cs - e.cy * sn;
    const double y = e.cx * sn + e.cy * cs;
    e.cx = x;
    e.cy = y;
    e.angle += radians;
  }
  if (out.wire) {
    const double x = out.wire->cx * cs - out.wire->cy * sn;
    const double y = out.wire->cx * sn + out.wire->cy * cs;
    out.wire->cx = x;
    out.wire->cy = y;
  }
  return out;
}

Phantom Phantom::scaled(double factor) const {
  Phantom out = *this;
  for (Ellipse& e : out.ellipses) e.mu *= factor;
  if (out.wire) out.wire->mu *= factor;
  return out;
}

Geometry Geometry::parallel(std::size_t channels, double pitch, std::size_t rows, std::size_t views) {
  Geometry g;
  g.channels = channels;
  g.channel_pitch = pitch;
  g.rows = rows;
  g.angles.resize(views);
  for (std::size_t v = 0; v < views; ++v) {
    g.angles[v] = std::numbers::pi * static_cast<double>(v) / static_cast<double>(views);
  }
  g.fov_radius = 0.5 * static_cast<double>(channels) * pitch;
  return g;
}

double Geometry::channel_offset(std::size_t channel) const {
  return (static_cast<double>(channel) - 0.5 * (static_cast<double>(channels) - 1.0)) * channel_pitch;
}

void Geometry::validate() const {
  if (channels == 0 || rows == 0 || angles.empty()) throw ConfigError("geometry: channels, rows and views must be >= 1");
  if (!(channel_pitch > 0.0)) throw ConfigError("geometry: channel pitch must be > 0");
  if (!(fov_radius > 0.0)) throw ConfigError("geometry: fov radius must be > 0");
  for (std::size_t v = 1; v < angles.size(); ++v) {
    if (!(angles[v] > angles[v - 1])) throw ConfigError("geometry: view angles must be strictly increasing");
  }
}

}  // namespace lowsig
