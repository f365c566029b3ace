#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace frames {

using Complex = std::complex<double>;
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;

// Points of the compact models are unit vectors in R^3. Circle points lie in
// the z = 0 plane, so the geodesic distance on both models is the angle.
struct Point {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline double dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline double angle_between(Point a, Point b) {
    if (a.x == b.x && a.y == b.y && a.z == b.z) return 0.0;
    // Canonical argument order keeps the result exactly symmetric under FMA contraction.
    if (b.x < a.x || (b.x == a.x && (b.y < a.y || (b.y == a.y && b.z < a.z)))) std::swap(a, b);
    const double cx = a.y * b.z - a.z * b.y;
    const double cy = a.z * b.x - a.x * b.z;
    const double cz = a.x * b.y - a.y * b.x;
    return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot(a, b));
}

inline Point circle_point(double theta) { return {std::cos(theta), std::sin(theta), 0.0}; }

inline Point sphere_point(double theta, double phi) {
    const double s = std::sin(theta);
    return {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
}

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Configuration or schema problems (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Coefficient index or band beyond the model's eigenbasis.
class TruncationError : public Error {
public:
    using Error::Error;
};

// Point not on the manifold.
class DomainError : public Error {
public:
    using Error::Error;
};

// Operation precondition not met (band too large, bad parameter).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// A theorem hypothesis (sampling rate, separation) is violated; refused.
class HypothesisError : public Error {
public:
    using Error::Error;
};

// Cubature solve failed: non-positive weight or singular moment system.
class CubatureError : public Error {
public:
    using Error::Error;
};

// Iterative solve stagnated.
class ConditioningError : public Error {
public:
    using Error::Error;
};

// Line-model window too small for the requested leakage.
class LeakageError : public Error {
public:
    using Error::Error;
};

}  // namespace frames
