#include "ris/grating.hpp"

#include <cmath>

namespace ris {

GratingConfig::GratingConfig(double channel_spacing_m, std::vector<bool> fill_pattern,
                             double incidence_rad, Frequency f)
    : channel_spacing(channel_spacing_m), fill(std::move(fill_pattern)), incidence(incidence_rad),
      frequency(f) {
    if (!(channel_spacing > 0.0))
        throw std::domain_error("grating channel spacing must be > 0");
    if (fill.empty())
        throw std::domain_error("grating fill pattern must not be empty");
    bool any = false;
    for (bool b : fill)
        any = any || b;
    if (!any)
        throw std::domain_error("grating fill pattern must fill at least one channel");
    if (std::abs(incidence) >= 0.5 * pi)
        throw std::domain_error("grating incidence angle must lie in (-90, 90) deg");
}

GratingConfig GratingConfig::uniform(double period_m, Frequency f, double incidence_rad) {
    return GratingConfig(period_m, {true}, incidence_rad, f);
}

double GratingConfig::effective_period() const {
    const size_t n = fill.size();
    for (size_t p = 1; p < n; ++p) {
        if (n % p != 0)
            continue;
        bool periodic = true;
        for (size_t i = 0; i < n && periodic; ++i)
            periodic = (fill[i] == fill[(i + p) % n]);
        if (periodic)
            return channel_spacing * static_cast<double>(p);
    }
    return channel_spacing * static_cast<double>(n);
}

std::vector<FloquetMode> propagating_modes(const GratingConfig& cfg) {
    const double lam = cfg.frequency.wavelength();
    const double period = cfg.effective_period();
    const double s0 = std::sin(cfg.incidence);
    std::vector<FloquetMode> modes;
    const int n_max = static_cast<int>(std::floor((1.0 + std::abs(s0)) * period / lam)) + 1;
    for (int n = -n_max; n <= n_max; ++n) {
        const double s = s0 + n * lam / period;
        if (std::abs(s) > 1.0)
            continue;
        FloquetMode m;
        m.order = n;
        m.theta = std::asin(s);
        m.propagating = std::abs(s) < 1.0 - cfg.grazing_tol;
        modes.push_back(m);
    }
    return modes; // ascending n by construction
}

FarFieldPattern splitter_pattern(const GratingConfig& cfg, double aperture_width_m,
                                 const ElementModel& elem, const CutSpec& cut) {
    const double period = cfg.effective_period();
    const int n_strips = static_cast<int>(std::floor(aperture_width_m / period));
    if (n_strips < 1)
        throw std::domain_error("grating aperture must span at least one period");

    // One unit reflector per effective period; the far-field engine handles
    // the finite-array sum, putting lobes at the propagating-mode angles.
    const ArrayLayout row = ArrayLayout::grid(n_strips, 1, period, period);
    const std::vector<std::complex<double>> unit(static_cast<size_t>(n_strips), {1.0, 0.0});
    const Direction inc(std::abs(cfg.incidence), cfg.incidence >= 0.0 ? 0.0 : pi);
    return scattered_pattern_coeffs(row, unit, cfg.frequency, inc, elem, cut);
}

double period_for_split(const Frequency& f, double desired_angle_rad) {
    if (!(desired_angle_rad > 0.0) || desired_angle_rad > 0.5 * pi)
        throw std::domain_error("split angle must lie in (0, 90] deg");
    return f.wavelength() / std::sin(desired_angle_rad);
}

} // namespace ris
