#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "ris/core.hpp"
#include "ris/synthesis.hpp"
#include "ris/unitcell.hpp"

namespace ris {

enum class Normalization { PeakZeroDb, AbsoluteGainDbi };

/// Element radiation model: power pattern cos^(2*q_e) theta over the front
/// hemisphere, zero behind the aperture plane.
struct ElementModel {
    double q_e = 0.5;

    ElementModel() = default;
    explicit ElementModel(double exponent);
};

/// Observation-angle sampling: either a phi-cut over signed theta, or a
/// front-hemisphere (theta, phi) grid for integral metrics.
struct CutSpec {
    double phi = 0.0;                   // rad
    double theta_min = -0.5 * pi;       // rad, signed
    double theta_max = 0.5 * pi;        // rad
    double step = deg2rad(0.1);         // rad
};

struct SphereSpec {
    double theta_step = deg2rad(0.25);  // rad, grid spans [0, pi/2]
    double phi_step = deg2rad(1.0);     // rad, grid spans [0, 2*pi)
};

struct FarFieldPattern {
    enum class Domain { Cut, Sphere };

    Domain domain = Domain::Cut;
    Normalization normalization = Normalization::PeakZeroDb;
    double frequency_hz = 0.0;
    double cut_phi = 0.0;            // Cut only
    std::vector<double> theta;       // Cut: signed theta; Sphere: [0, pi/2]
    std::vector<double> phi;         // Sphere only: [0, 2*pi)
    std::vector<std::complex<double>> field; // Cut: per theta; Sphere: theta-major

    size_t size() const { return field.size(); }
    size_t sphere_index(size_t i_theta, size_t i_phi) const { return i_theta * phi.size() + i_phi; }
    /// 20*log10|field|: dB relative to peak, or dBi for absolute-gain patterns.
    double value_db(size_t i) const;
};

/// Per-element complex coefficients realized by a state map; throws when a
/// state name is not bound in the table.
std::vector<std::complex<double>> cell_coefficients(const StateMap& map,
                                                    const UnitCellStateTable& table,
                                                    const Frequency& f);

/// Feed illumination of the array: b_i = sqrt(captured power) with the
/// spherical propagation phase -k0*r_i. `captured_power` is the fraction of
/// the unit feed power intercepted by the aperture (1 - spillover).
struct FeedIllumination {
    std::vector<std::complex<double>> b;
    double captured_power;
};
FeedIllumination illuminate(const ArrayLayout& layout, const FeedSpec& feed, const Frequency& f);

// --- pattern synthesis -------------------------------------------------------

/// Scattered far field of a reflective surface under a plane wave from
/// `incidence`, normalized to 0 dB peak:
///   E(theta,phi) = sum_i Gamma_i cos^q_e(theta)
///                  exp(j k0 (x_i (u+u_inc) + y_i (v+v_inc)))
FarFieldPattern scattered_pattern(const ArrayLayout& layout, const StateMap& map,
                                  const UnitCellStateTable& table, const Frequency& f,
                                  const Direction& incidence, const ElementModel& elem,
                                  const CutSpec& cut);
FarFieldPattern scattered_pattern(const ArrayLayout& layout, const StateMap& map,
                                  const UnitCellStateTable& table, const Frequency& f,
                                  const Direction& incidence, const ElementModel& elem,
                                  const SphereSpec& sphere);
FarFieldPattern scattered_pattern_coeffs(const ArrayLayout& layout,
                                         const std::vector<std::complex<double>>& coeffs,
                                         const Frequency& f, const Direction& incidence,
                                         const ElementModel& elem, const CutSpec& cut);
FarFieldPattern scattered_pattern_coeffs(const ArrayLayout& layout,
                                         const std::vector<std::complex<double>>& coeffs,
                                         const Frequency& f, const Direction& incidence,
                                         const ElementModel& elem, const SphereSpec& sphere);

/// Realized-gain pattern of a transmissive surface fed by `feed` (unit feed
/// power; spillover counts as loss, nothing is renormalized):
///   |field|^2 = gain = (4 pi A_cell / lambda^2) cos^(2 q_e)(theta)
///               |sum_i b_i S21_i exp(j k0 (x_i u + y_i v))|^2
FarFieldPattern transmit_gain_pattern(const ArrayLayout& layout, const StateMap& map,
                                      const UnitCellStateTable& table, const Frequency& f,
                                      const FeedSpec& feed, const ElementModel& elem,
                                      const CutSpec& cut);
FarFieldPattern transmit_gain_pattern(const ArrayLayout& layout, const StateMap& map,
                                      const UnitCellStateTable& table, const Frequency& f,
                                      const FeedSpec& feed, const ElementModel& elem,
                                      const SphereSpec& sphere);
FarFieldPattern transmit_gain_pattern_coeffs(const ArrayLayout& layout,
                                             const std::vector<std::complex<double>>& coeffs,
                                             const Frequency& f, const FeedSpec& feed,
                                             const ElementModel& elem, const CutSpec& cut);
FarFieldPattern transmit_gain_pattern_coeffs(const ArrayLayout& layout,
                                             const std::vector<std::complex<double>>& coeffs,
                                             const Frequency& f, const FeedSpec& feed,
                                             const ElementModel& elem, const SphereSpec& sphere);

/// Absolute-gain pattern of an arbitrary aperture excitation whose squared
/// magnitudes sum to the radiated fraction of unit input power.
FarFieldPattern absolute_gain_pattern(const ArrayLayout& layout,
                                      const std::vector<std::complex<double>>& excitation,
                                      const Frequency& f, const ElementModel& elem,
                                      const CutSpec& cut);
FarFieldPattern absolute_gain_pattern(const ArrayLayout& layout,
                                      const std::vector<std::complex<double>>& excitation,
                                      const Frequency& f, const ElementModel& elem,
                                      const SphereSpec& sphere);

// --- metrics -----------------------------------------------------------------

struct PatternMetrics {
    bool well_defined = false; // false for patterns without an interior peak
    double peak_deg = 0.0;
    double peak_db = 0.0;
    double sll_db = 0.0;  // NaN when no sidelobe exists on the cut
    double hpbw_deg = 0.0;
    double pointing_error_deg = 0.0;
};

/// Peak by parabolic interpolation, sidelobe level outside the null-to-null
/// main beam, half-power beamwidth from interpolated crossings.
PatternMetrics pattern_metrics(const FarFieldPattern& cut, const Direction& target);

/// D = 4 pi max|F|^2 / integral(|F|^2 dOmega) on the stored sphere grid
/// (trapezoid in theta, periodic rectangle in phi).
double directivity_dbi(const FarFieldPattern& sphere);

/// Free-space path loss 20*log10(4 pi d / lambda).
double fspl_db(const Frequency& f, double distance_m);

/// Pattern CSV: `theta_deg,phi_deg,value_db,re,im` with `#key=value` header
/// comments (normalization, frequency, extra metadata in sorted key order).
std::string pattern_csv(const FarFieldPattern& p,
                        const std::map<std::string, std::string>& meta = {});
void write_pattern_csv(const std::string& path, const FarFieldPattern& p,
                       const std::map<std::string, std::string>& meta = {});

/// Metrics JSON with fixed key order and 9-significant-digit floats.
std::string metrics_json(const PatternMetrics& m);

} // namespace ris
