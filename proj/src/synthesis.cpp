#include "ris/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ris {

FeedSpec::FeedSpec(double x_m, double y_m, double z_m, double q_exp)
    : x(x_m), y(y_m), z(z_m), q(q_exp) {
    if (!(z > 0.0))
        throw std::domain_error("FeedSpec focal distance must be > 0 (feed off the array plane)");
    if (!(q >= 0.0))
        throw std::domain_error("FeedSpec pattern exponent must be >= 0");
}

FeedSpec FeedSpec::default_for(const ArrayLayout& layout, double f_over_d,
                               double edge_taper_db) {
    if (!(f_over_d > 0.0))
        throw std::domain_error("f_over_d must be > 0");
    if (!(edge_taper_db < 0.0))
        throw std::domain_error("edge taper must be negative dB");
    const double d_side = std::max(layout.aperture_x(), layout.aperture_y());
    const double focal = f_over_d * d_side;
    // Corner of the aperture sets the edge illumination. Captured power goes
    // as cos^(2q) (feed pattern) * cos^2 (1/r^2) * cos (projected cell area),
    // i.e. cos^(2q+3) of the feed angle.
    const double r_corner = std::hypot(layout.aperture_x() / 2.0, layout.aperture_y() / 2.0);
    const double cos_c = focal / std::hypot(r_corner, focal);
    double q_exp = (edge_taper_db / (10.0 * std::log10(cos_c)) - 3.0) / 2.0;
    if (q_exp < 0.0)
        q_exp = 0.0;
    return FeedSpec(0.0, 0.0, focal, q_exp);
}

double FeedSpec::distance_to(double elem_x, double elem_y) const {
    const double dx = elem_x - x;
    const double dy = elem_y - y;
    return std::sqrt(dx * dx + dy * dy + z * z);
}

PhaseProfile steering_profile(const ArrayLayout& layout, const Frequency& f,
                              const Direction& target) {
    const double k0 = f.wavenumber();
    const double u0 = target.u();
    const double v0 = target.v();
    PhaseProfile p{layout, {}};
    p.phase.reserve(layout.size());
    for (int i = 0; i < layout.size(); ++i)
        p.phase.push_back(wrap_phase(-k0 * (layout.x(i) * u0 + layout.y(i) * v0)));
    return p;
}

PhaseProfile collimation_profile(const ArrayLayout& layout, const Frequency& f,
                                 const FeedSpec& feed, const Direction& target) {
    const double k0 = f.wavenumber();
    const double u0 = target.u();
    const double v0 = target.v();
    PhaseProfile p{layout, {}};
    p.phase.reserve(layout.size());
    for (int i = 0; i < layout.size(); ++i) {
        const double r = feed.distance_to(layout.x(i), layout.y(i));
        p.phase.push_back(wrap_phase(k0 * (r - layout.x(i) * u0 - layout.y(i) * v0)));
    }
    return p;
}

StateMap quantize(const PhaseProfile& profile, const UnitCellStateTable& table,
                  const Frequency& f) {
    const auto& names = table.state_names();
    if (names.size() < 2)
        throw std::invalid_argument("quantize needs a table with >= 2 states");
    std::vector<double> state_phase;
    state_phase.reserve(names.size());
    for (const auto& n : names)
        state_phase.push_back(table.coefficient_at(n, f).phase());

    constexpr double tie_tol = 1e-12;
    StateMap map{profile.layout, {}, {}};
    map.state.reserve(profile.phase.size());
    map.residual.reserve(profile.phase.size());
    for (double ideal : profile.phase) {
        size_t best = 0;
        double best_err = std::abs(wrap_phase(state_phase[0] - ideal));
        for (size_t s = 1; s < names.size(); ++s) {
            const double err = std::abs(wrap_phase(state_phase[s] - ideal));
            // State names are sorted, so on an exact tie the earlier
            // (lexicographically smaller) name stands.
            if (err < best_err - tie_tol) {
                best = s;
                best_err = err;
            }
        }
        map.state.push_back(names[best]);
        map.residual.push_back(wrap_phase(state_phase[best] - ideal));
    }
    return map;
}

std::string statemap_csv(const StateMap& map, const PhaseProfile& ideal) {
    if (ideal.phase.size() != map.state.size())
        throw std::invalid_argument("statemap/profile element count mismatch");
    std::string out = "ix,iy,state,ideal_phase_deg,residual_deg\n";
    const ArrayLayout& l = map.layout;
    for (int iy = 0; iy < l.ny(); ++iy)
        for (int ix = 0; ix < l.nx(); ++ix) {
            const int i = l.index(ix, iy);
            out += std::to_string(ix) + "," + std::to_string(iy) + "," + map.state[i] + "," +
                   format_g9(rad2deg(ideal.phase[i])) + "," +
                   format_g9(rad2deg(map.residual[i])) + "\n";
        }
    return out;
}

void write_statemap_csv(const std::string& path, const StateMap& map,
                        const PhaseProfile& ideal) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out << statemap_csv(map, ideal);
}

StateMap read_statemap_csv(const std::string& path, const ArrayLayout& layout) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open statemap '" + path + "'");
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    StateMap map{layout, std::vector<std::string>(static_cast<size_t>(layout.size())),
                 std::vector<double>(static_cast<size_t>(layout.size()), 0.0)};
    std::vector<bool> seen(static_cast<size_t>(layout.size()), false);
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        if (!header_seen) {
            if (line != "ix,iy,state,ideal_phase_deg,residual_deg")
                throw ParseError(path + ":" + std::to_string(line_no) +
                                 ": expected statemap header");
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string f_ix, f_iy, f_state, f_ideal, f_res;
        if (!std::getline(ss, f_ix, ',') || !std::getline(ss, f_iy, ',') ||
            !std::getline(ss, f_state, ',') || !std::getline(ss, f_ideal, ',') ||
            !std::getline(ss, f_res, ','))
            throw ParseError(path + ":" + std::to_string(line_no) + ": short row");
        int ix = 0, iy = 0;
        try {
            ix = std::stoi(f_ix);
            iy = std::stoi(f_iy);
        } catch (const std::exception&) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": bad element index");
        }
        if (ix < 0 || ix >= layout.nx() || iy < 0 || iy >= layout.ny())
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": element index outside the layout");
        const size_t i = static_cast<size_t>(layout.index(ix, iy));
        if (seen[i])
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": duplicate element (" + f_ix + "," + f_iy + ")");
        seen[i] = true;
        map.state[i] = f_state;
        try {
            map.residual[i] = deg2rad(std::stod(f_res));
        } catch (const std::exception&) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": bad residual value");
        }
    }
    if (!header_seen)
        throw ParseError(path + ": missing statemap header");
    for (size_t i = 0; i < seen.size(); ++i)
        if (!seen[i])
            throw ValidationError(path + ": statemap does not cover every layout element");
    return map;
}

} // namespace ris
