#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ris {

inline constexpr double speed_of_light = 299792458.0; // m/s
inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Error raised when an input file violates the documented schema.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Error raised when parsed data violates a domain invariant.
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Error raised when a query falls outside stored data (no extrapolation).
class RangeError : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

inline double deg2rad(double deg) { return deg * pi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / pi; }

/// Wrap an angle in radians to the canonical interval (-pi, pi].
double wrap_phase(double rad);

/// Wrap an angle in degrees to (-180, 180].
double wrap_phase_deg(double deg);

/// Carrier frequency. Internally hertz; converters for the GHz/mm I/O units.
class Frequency {
  public:
    explicit Frequency(double hertz);
    static Frequency from_ghz(double ghz) { return Frequency(ghz * 1e9); }

    double hertz() const { return hertz_; }
    double ghz() const { return hertz_ / 1e9; }
    double wavelength() const { return speed_of_light / hertz_; } // meters
    double wavenumber() const { return 2.0 * pi / wavelength(); } // rad/m

  private:
    double hertz_;
};

/// Observation/steering direction: polar theta from broadside, azimuth phi.
class Direction {
  public:
    Direction(double theta_rad, double phi_rad);
    static Direction from_degrees(double theta_deg, double phi_deg);
    static Direction broadside() { return Direction(0.0, 0.0); }

    double theta() const { return theta_; }
    double phi() const { return phi_; }
    double theta_deg() const { return rad2deg(theta_); }
    double u() const; // sin(theta) cos(phi)
    double v() const; // sin(theta) sin(phi)

  private:
    double theta_;
    double phi_;
};

/// Complex reflection/transmission coefficient stored as (magnitude, phase).
/// Phase is canonical in (-pi, pi]; I/O form is (mag dB, phase deg).
class ComplexCoefficient {
  public:
    ComplexCoefficient() : mag_(0.0), phase_(0.0) {}
    ComplexCoefficient(double magnitude, double phase_rad);
    static ComplexCoefficient from_complex(std::complex<double> z);
    static ComplexCoefficient from_db_deg(double mag_db, double phase_deg);

    double magnitude() const { return mag_; }
    double phase() const { return phase_; }
    double magnitude_db() const;
    double phase_deg() const { return rad2deg(phase_); }
    std::complex<double> value() const;

  private:
    double mag_;
    double phase_;
};

/// Planar rectangular element grid centered on the origin.
class ArrayLayout {
  public:
    static ArrayLayout grid(int nx, int ny, double pitch_m) {
        return grid(nx, ny, pitch_m, pitch_m);
    }
    static ArrayLayout grid(int nx, int ny, double pitch_x_m, double pitch_y_m);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int size() const { return nx_ * ny_; }
    double pitch_x() const { return pitch_x_; }
    double pitch_y() const { return pitch_y_; }
    double aperture_x() const { return nx_ * pitch_x_; }
    double aperture_y() const { return ny_ * pitch_y_; }

    int index(int ix, int iy) const { return iy * nx_ + ix; }
    double x(int i) const { return xs_[static_cast<size_t>(i)]; }
    double y(int i) const { return ys_[static_cast<size_t>(i)]; }
    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }

    /// True when the pitch exceeds lambda/2, i.e. the grid can generate
    /// grating lobes for wide-angle scanning.
    bool grating_lobe_capable(const Frequency& f) const;

  private:
    ArrayLayout(int nx, int ny, double px, double py);

    int nx_, ny_;
    double pitch_x_, pitch_y_;
    std::vector<double> xs_, ys_; // flattened, index = iy*nx + ix
};

// ---------------------------------------------------------------------------
// Boundary unit parsing. Internal computation is strictly SI; CLI flags and
// scenario files accept values with unit suffixes ("140GHz", "1mm", "30deg",
// "18.5f"). A bare number takes the per-field default unit.
// ---------------------------------------------------------------------------

double parse_frequency_hz(const std::string& text);   // default GHz
double parse_length_m(const std::string& text);       // default mm
double parse_angle_rad(const std::string& text);      // default deg
double parse_resistance_ohm(const std::string& text); // default ohm
double parse_capacitance_f(const std::string& text);  // default farad; bare
                                                      // SI prefix ("18.5f") ok

/// Fixed 9-significant-digit float formatting used by every file writer, so
/// repeated runs emit byte-identical output.
std::string format_g9(double value);

/// FNV-1a 64-bit over raw bytes; used for scenario hashes.
std::uint64_t fnv1a64(const void* data, size_t len);
std::string fnv1a64_hex(const std::string& bytes);

} // namespace ris
