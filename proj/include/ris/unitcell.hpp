#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ris/core.hpp"

namespace ris {

enum class CellKind { Reflective, Transmissive };

/// Substrate description carried along for reporting; never used in math.
struct SubstrateInfo {
    std::optional<double> epsilon_r;
    std::optional<double> tan_delta;
    std::optional<double> thickness_m;
};

/// Per-state unit-cell frequency response (reflection or transmission
/// coefficients on a shared frequency grid). Immutable after construction.
class UnitCellStateTable {
  public:
    /// Loads the state-table CSV (header `freq_ghz,state,mag_db,phase_deg`,
    /// `#key=value` comment lines for kind/active/substrate metadata).
    static UnitCellStateTable load_csv(const std::string& path);
    static UnitCellStateTable parse_csv(const std::string& content, const std::string& origin);

    /// Builds a table directly from per-state (frequency, coefficient)
    /// samples. Sample lists must share one strictly increasing grid.
    static UnitCellStateTable
    from_samples(CellKind kind,
                 const std::map<std::string, std::vector<std::pair<double, std::complex<double>>>>&
                     samples,
                 bool active = false, SubstrateInfo substrate = {});

    CellKind kind() const { return kind_; }
    bool active() const { return active_; }
    const SubstrateInfo& substrate() const { return substrate_; }
    const std::vector<std::string>& state_names() const { return states_; }
    bool has_state(const std::string& name) const;
    double freq_min_hz() const { return grid_.front(); }
    double freq_max_hz() const { return grid_.back(); }
    const std::vector<double>& frequency_grid_hz() const { return grid_; }

    /// Linear interpolation of the complex coefficient (rectangular form)
    /// between bracketing samples; exact at samples; no extrapolation.
    ComplexCoefficient coefficient_at(const std::string& state, const Frequency& f) const;

    /// -20*log10|coefficient| in dB (>= 0 for a passive cell).
    double insertion_loss_db(const std::string& state, const Frequency& f) const;

    /// Wrapped phase(state_a) - phase(state_b) in degrees, in (-180, 180].
    double phase_difference_deg(const std::string& state_a, const std::string& state_b,
                                const Frequency& f) const;

    /// Largest contiguous band around f_center where insertion loss stays
    /// below threshold_db, as a percentage of f_center. Returns 0 when the
    /// loss at f_center already meets or exceeds the threshold. Band edges
    /// are clipped to the stored grid (no extrapolation).
    double fractional_bandwidth_percent(const std::string& state, double threshold_db,
                                        const Frequency& f_center) const;

  private:
    UnitCellStateTable() = default;
    void validate(const std::string& origin);
    std::complex<double> interp(const std::vector<std::complex<double>>& col, double f_hz) const;
    const std::vector<std::complex<double>>& column(const std::string& state) const;

    CellKind kind_ = CellKind::Reflective;
    bool active_ = false;
    SubstrateInfo substrate_;
    std::vector<std::string> states_;                     // sorted
    std::vector<double> grid_;                            // hz, strictly increasing
    std::vector<std::vector<std::complex<double>>> cols_; // per state, per grid point
};

/// Lossy but otherwise ideal 1-bit cell: two states exactly 180 deg apart.
struct IdealOneBitCell {
    CellKind kind = CellKind::Reflective;
    double loss_db = 0.0; // applied to both states

    IdealOneBitCell(CellKind k, double loss);

    /// Expands to a two-state ("000" at 0 deg, "180" at 180 deg) flat table
    /// spanning [f_lo, f_hi].
    UnitCellStateTable to_table(const Frequency& f_lo, const Frequency& f_hi) const;
};

} // namespace ris
