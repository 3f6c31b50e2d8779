#pragma once

#include <string>
#include <vector>

#include "ris/core.hpp"
#include "ris/farfield.hpp"
#include "ris/grating.hpp"
#include "ris/synthesis.hpp"
#include "ris/unitcell.hpp"

namespace ris {

/// A fully validated scenario file (schema_version 1). Relative table paths
/// resolve against the scenario file's directory. Validation errors carry
/// the offending field path.
struct Scenario {
    int schema_version = 1;
    std::string mode; // "reflect-steer" | "transmit-collimate" | "grating"
    Frequency frequency{1e9};

    // layout (synthesis modes)
    int nx = 0, ny = 0;
    double pitch_x = 0.0, pitch_y = 0.0;

    // cell: state-table file or ideal 1-bit cell
    bool has_table = false;
    std::string table_path;
    bool has_ideal = false;
    CellKind ideal_kind = CellKind::Reflective;
    double ideal_loss_db = 0.0;

    // directions (radians)
    double target_theta = 0.0, target_phi = 0.0;
    double incidence_theta = 0.0, incidence_phi = 0.0;

    // feed (transmit-collimate)
    double f_over_d = 0.7;
    double edge_taper_db = -10.0;
    double feed_offset_x = 0.0, feed_offset_y = 0.0;
    bool feed_explicit = false;
    double feed_focal = 0.0, feed_q = 0.0;

    // grating mode
    double grating_spacing = 0.0;
    std::vector<bool> grating_fill{true};
    double grating_aperture = 0.0;

    // output options
    double cut_phi = 0.0;
    double grid_step = deg2rad(0.1);
    double q_e = 0.5;
    std::string prefix;

    // provenance
    std::string source_dir;
    std::string hash_hex;

    ArrayLayout layout() const { return ArrayLayout::grid(nx, ny, pitch_x, pitch_y); }
    UnitCellStateTable load_table() const;
    FeedSpec feed() const;
};

Scenario load_scenario(const std::string& path);

struct RunResult {
    std::vector<std::string> files; // paths written, in emission order
    PatternMetrics metrics;
    bool has_gain = false;
    double gain_dbi = 0.0;
    std::string summary_json;
};

/// Executes a scenario and writes `<prefix>_pattern.csv`,
/// `<prefix>_statemap.csv` (synthesis modes) and `<prefix>_summary.json`
/// under out_dir. Identical scenario bytes produce identical output bytes.
RunResult run_scenario(const Scenario& s, const std::string& out_dir);

} // namespace ris
