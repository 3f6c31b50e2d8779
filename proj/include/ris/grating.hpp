#pragma once

#include <vector>

#include "ris/core.hpp"
#include "ris/farfield.hpp"

namespace ris {

/// Reconfigurable strip grating: liquid-metal channels at a fixed spacing,
/// each either filled (reflective) or empty. The repeating fill pattern sets
/// the effective grating period.
struct GratingConfig {
    double channel_spacing = 0.0;      // meters, spacing of the channel lattice
    std::vector<bool> fill;            // cyclic fill pattern, >= 1 channel filled
    double incidence = 0.0;            // rad, plane-wave incidence angle
    Frequency frequency;               // operating frequency

    /// Modes within `grazing_tol` of the horizon (|sin| >= 1 - tol) carry no
    /// usable beam and are classified non-propagating.
    double grazing_tol = 1e-3;

    GratingConfig(double channel_spacing_m, std::vector<bool> fill_pattern,
                  double incidence_rad, Frequency f);

    /// All channels filled at spacing = period.
    static GratingConfig uniform(double period_m, Frequency f, double incidence_rad = 0.0);

    /// channel spacing times the smallest cyclic period of the fill pattern.
    double effective_period() const;
};

struct FloquetMode {
    int order = 0;
    double theta = 0.0; // rad
    bool propagating = false;
};

/// All diffraction orders n with |sin(theta_inc) + n lambda / P| <= 1,
/// sorted by n; theta_n = arcsin of that value. Orders inside the grazing
/// guard band are listed but flagged non-propagating.
std::vector<FloquetMode> propagating_modes(const GratingConfig& cfg);

/// Finite-aperture scattering pattern: every filled channel acts as a unit
/// reflector, so lobes form at the propagating-mode angles with the
/// finite-aperture beamwidth. Mode amplitudes are not weighted by strip
/// geometry; lobe positions and counts are the model's outputs.
FarFieldPattern splitter_pattern(const GratingConfig& cfg, double aperture_width_m,
                                 const ElementModel& elem, const CutSpec& cut);

/// First-order split design: P = lambda / sin(angle).
double period_for_split(const Frequency& f, double desired_angle_rad);

} // namespace ris
