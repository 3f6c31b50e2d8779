#pragma once

#include <string>
#include <vector>

#include "ris/core.hpp"
#include "ris/unitcell.hpp"

namespace ris {

/// Ideal continuous phase per element, wrapped to (-pi, pi].
struct PhaseProfile {
    ArrayLayout layout;
    std::vector<double> phase; // radians, one per element, layout order
};

/// Feed antenna for the transmissive configuration: a point source at
/// (x, y, z) with z the focal distance above the array plane, radiating a
/// cos^(2q) power pattern of unit total power.
struct FeedSpec {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0; // focal distance, > 0
    double q = 0.0; // pattern exponent, >= 0

    FeedSpec(double x_m, double y_m, double z_m, double q_exp);

    /// Default feed convention: focal distance = f_over_d times the larger
    /// aperture side; q solved so that the edge illumination at the aperture
    /// corner (feed pattern, space attenuation and element capture included)
    /// equals edge_taper_db.
    static FeedSpec default_for(const ArrayLayout& layout, double f_over_d = 0.7,
                                double edge_taper_db = -10.0);

    double distance_to(double elem_x, double elem_y) const;
};

/// Per-element discrete state assignment plus the quantization residual
/// (realized minus ideal phase, wrapped), in radians.
struct StateMap {
    ArrayLayout layout;
    std::vector<std::string> state;
    std::vector<double> residual;
};

/// Progressive phase for steering a normally incident plane wave toward
/// `target`: phase_i = -k0 (x_i u0 + y_i v0), reference phase 0 at center.
PhaseProfile steering_profile(const ArrayLayout& layout, const Frequency& f,
                              const Direction& target);

/// Phase compensating the feed's spherical wavefront, then steering:
/// phase_i = k0 (r_i - x_i u0 - y_i v0).
PhaseProfile collimation_profile(const ArrayLayout& layout, const Frequency& f,
                                 const FeedSpec& feed, const Direction& target);

/// Nearest-state assignment by wrapped phase distance; exact ties resolve to
/// the lexicographically smallest state name.
StateMap quantize(const PhaseProfile& profile, const UnitCellStateTable& table,
                  const Frequency& f);

/// StateMap CSV: `ix,iy,state,ideal_phase_deg,residual_deg`.
std::string statemap_csv(const StateMap& map, const PhaseProfile& ideal);
void write_statemap_csv(const std::string& path, const StateMap& map, const PhaseProfile& ideal);

/// Re-ingests a StateMap CSV against a known layout (states must cover every
/// element exactly once).
StateMap read_statemap_csv(const std::string& path, const ArrayLayout& layout);

} // namespace ris
