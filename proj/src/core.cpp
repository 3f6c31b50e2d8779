#include "ris/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>

namespace ris {

double wrap_phase(double rad) {
    double w = std::fmod(rad, 2.0 * pi);
    if (w <= -pi)
        w += 2.0 * pi;
    else if (w > pi)
        w -= 2.0 * pi;
    return w;
}

double wrap_phase_deg(double deg) {
    double w = std::fmod(deg, 360.0);
    if (w <= -180.0)
        w += 360.0;
    else if (w > 180.0)
        w -= 360.0;
    return w;
}

Frequency::Frequency(double hertz) : hertz_(hertz) {
    if (!(hertz > 0.0) || !std::isfinite(hertz))
        throw std::domain_error("Frequency must be positive and finite, got " +
                                std::to_string(hertz));
}

Direction::Direction(double theta_rad, double phi_rad) : theta_(theta_rad), phi_(phi_rad) {
    if (!std::isfinite(theta_rad) || !std::isfinite(phi_rad))
        throw std::domain_error("Direction angles must be finite");
    if (theta_rad < 0.0 || theta_rad > pi)
        throw std::domain_error("Direction theta must lie in [0, pi], got " +
                                std::to_string(theta_rad));
    // u^2 + v^2 = sin^2(theta) <= 1 holds for any theta in [0, pi].
}

Direction Direction::from_degrees(double theta_deg, double phi_deg) {
    return Direction(deg2rad(theta_deg), deg2rad(phi_deg));
}

double Direction::u() const { return std::sin(theta_) * std::cos(phi_); }
double Direction::v() const { return std::sin(theta_) * std::sin(phi_); }

ComplexCoefficient::ComplexCoefficient(double magnitude, double phase_rad) {
    if (!(magnitude >= 0.0) || !std::isfinite(magnitude))
        throw std::domain_error("Coefficient magnitude must be >= 0");
    mag_ = magnitude;
    phase_ = wrap_phase(phase_rad);
}

ComplexCoefficient ComplexCoefficient::from_complex(std::complex<double> z) {
    return ComplexCoefficient(std::abs(z), std::arg(z));
}

ComplexCoefficient ComplexCoefficient::from_db_deg(double mag_db, double phase_deg) {
    return ComplexCoefficient(std::pow(10.0, mag_db / 20.0), deg2rad(phase_deg));
}

double ComplexCoefficient::magnitude_db() const { return 20.0 * std::log10(mag_); }

std::complex<double> ComplexCoefficient::value() const {
    return std::polar(mag_, phase_);
}

ArrayLayout::ArrayLayout(int nx, int ny, double px, double py)
    : nx_(nx), ny_(ny), pitch_x_(px), pitch_y_(py) {
    xs_.reserve(static_cast<size_t>(nx) * ny);
    ys_.reserve(static_cast<size_t>(nx) * ny);
    const double cx = (nx - 1) / 2.0;
    const double cy = (ny - 1) / 2.0;
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            xs_.push_back((ix - cx) * px);
            ys_.push_back((iy - cy) * py);
        }
}

ArrayLayout ArrayLayout::grid(int nx, int ny, double pitch_x_m, double pitch_y_m) {
    if (nx < 1 || ny < 1)
        throw std::domain_error("ArrayLayout element counts must be >= 1");
    if (!(pitch_x_m > 0.0) || !(pitch_y_m > 0.0))
        throw std::domain_error("ArrayLayout pitch must be > 0");
    return ArrayLayout(nx, ny, pitch_x_m, pitch_y_m);
}

bool ArrayLayout::grating_lobe_capable(const Frequency& f) const {
    const double half_lambda = f.wavelength() / 2.0;
    return pitch_x_ > half_lambda || pitch_y_ > half_lambda;
}

// --- unit parsing -----------------------------------------------------------

namespace {

struct UnitEntry {
    const char* suffix;
    double scale;
};

double parse_with_units(const std::string& text, const UnitEntry* units, size_t n_units,
                        double bare_scale, const char* what) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (s.empty())
        throw ParseError(std::string("empty ") + what + " value");

    // Longest matching suffix wins ("mm" before "m").
    const UnitEntry* best = nullptr;
    for (size_t i = 0; i < n_units; ++i) {
        const size_t len = std::strlen(units[i].suffix);
        if (s.size() > len) {
            std::string tail = s.substr(s.size() - len);
            std::string suffix = units[i].suffix;
            std::transform(tail.begin(), tail.end(), tail.begin(), ::tolower);
            std::transform(suffix.begin(), suffix.end(), suffix.begin(), ::tolower);
            if (tail == suffix && (!best || len > std::strlen(best->suffix)))
                best = &units[i];
        }
    }

    double scale = bare_scale;
    std::string num = s;
    if (best) {
        num = s.substr(0, s.size() - std::strlen(best->suffix));
        scale = best->scale;
    }

    size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(num, &pos);
    } catch (const std::exception&) {
        throw ParseError(std::string("cannot parse ") + what + " '" + text + "'");
    }
    if (pos != num.size())
        throw ParseError(std::string("trailing characters in ") + what + " '" + text + "'");
    return value * scale;
}

} // namespace

double parse_frequency_hz(const std::string& text) {
    static const UnitEntry units[] = {
        {"thz", 1e12}, {"ghz", 1e9}, {"mhz", 1e6}, {"khz", 1e3}, {"hz", 1.0}};
    return parse_with_units(text, units, 5, 1e9, "frequency");
}

double parse_length_m(const std::string& text) {
    static const UnitEntry units[] = {
        {"nm", 1e-9}, {"um", 1e-6}, {"mm", 1e-3}, {"cm", 1e-2}, {"km", 1e3}, {"m", 1.0}};
    return parse_with_units(text, units, 6, 1e-3, "length");
}

double parse_angle_rad(const std::string& text) {
    static const UnitEntry units[] = {{"deg", pi / 180.0}, {"rad", 1.0}};
    return parse_with_units(text, units, 2, pi / 180.0, "angle");
}

double parse_resistance_ohm(const std::string& text) {
    static const UnitEntry units[] = {
        {"mohm", 1e6}, {"kohm", 1e3}, {"ohm", 1.0}, {"k", 1e3}};
    return parse_with_units(text, units, 4, 1.0, "resistance");
}

double parse_capacitance_f(const std::string& text) {
    static const UnitEntry units[] = {{"ff", 1e-15}, {"pf", 1e-12}, {"nf", 1e-9},
                                      {"uf", 1e-6},  {"f", 1e-15},  {"p", 1e-12},
                                      {"n", 1e-9},   {"u", 1e-6},   {"farad", 1.0}};
    // Note: a bare trailing "f" is read as the femto prefix ("18.5f" = 18.5 fF),
    // matching the D-band magnitudes this tool works with.
    return parse_with_units(text, units, 9, 1.0, "capacitance");
}

std::string format_g9(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    // Normalize negative zero so output never depends on summation quirks.
    if (std::strcmp(buf, "-0") == 0)
        return "0";
    return buf;
}

std::uint64_t fnv1a64(const void* data, size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 1469598103934665603ull;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a64_hex(const std::string& bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
    return buf;
}

} // namespace ris
