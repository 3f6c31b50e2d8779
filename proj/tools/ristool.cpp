#include <complex>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "ris/core.hpp"
#include "ris/farfield.hpp"
#include "ris/grating.hpp"
#include "ris/scenario.hpp"
#include "ris/switchmodel.hpp"
#include "ris/synthesis.hpp"
#include "ris/unitcell.hpp"

namespace {

using namespace ris;

// Unit-suffixed option values ("140GHz", "1mm", "30deg", "18.5f"); bare
// numbers take the documented default unit (GHz / mm / deg / ohm / F).
struct Args {
    std::string freq = "140GHz";
    std::string pitch = "1mm", pitch_y;
    int nx = 1, ny = 1;
    std::string theta = "0deg", phi = "0deg";
    std::string inc_theta = "0deg", inc_phi = "0deg";
    std::string cut_phi = "0deg", grid = "0.1deg";
    double q_e = 0.5;
    std::string table;
    std::string ideal; // "reflective" | "transmissive" [:loss_db]
    std::string out, metrics_out, statemap;
    // feed
    double f_over_d = 0.7, edge_taper_db = -10.0;
    std::string feed_focal, feed_off_x = "0mm", feed_off_y = "0mm";
    double feed_q = -1.0;
    bool continuous = false;
    // grating
    std::string period = "2mm", aperture = "24mm", fill;
    // switch
    std::string ron = "6.13", con, roff, coff;
    double z0 = 50.0;
    // unitcell metrics
    std::string state = "000", state_b;
    double threshold_db = 1.5;
    std::string center;
    // fspl
    std::string dist = "1m";
    // run
    std::string scenario_path, out_dir = ".";
};

UnitCellStateTable resolve_table(const Args& a, const Frequency& f) {
    if (!a.table.empty())
        return UnitCellStateTable::load_csv(a.table);
    std::string spec = a.ideal.empty() ? std::string("reflective") : a.ideal;
    double loss = 0.0;
    if (const size_t colon = spec.find(':'); colon != std::string::npos) {
        loss = std::stod(spec.substr(colon + 1));
        spec = spec.substr(0, colon);
    }
    CellKind kind;
    if (spec == "reflective")
        kind = CellKind::Reflective;
    else if (spec == "transmissive")
        kind = CellKind::Transmissive;
    else
        throw ValidationError("--ideal: expected 'reflective[:loss_db]' or 'transmissive[:loss_db]'");
    return IdealOneBitCell(kind, loss).to_table(Frequency(0.5 * f.hertz()),
                                                Frequency(1.5 * f.hertz()));
}

FeedSpec resolve_feed(const Args& a, const ArrayLayout& layout) {
    const double ox = parse_length_m(a.feed_off_x);
    const double oy = parse_length_m(a.feed_off_y);
    if (!a.feed_focal.empty()) {
        const double q = (a.feed_q >= 0.0) ? a.feed_q : 0.0;
        return FeedSpec(ox, oy, parse_length_m(a.feed_focal), q);
    }
    const FeedSpec d = FeedSpec::default_for(layout, a.f_over_d, a.edge_taper_db);
    return FeedSpec(ox, oy, d.z, (a.feed_q >= 0.0) ? a.feed_q : d.q);
}

std::vector<bool> parse_fill(const std::string& text) {
    if (text.empty())
        return {true};
    std::vector<bool> fill;
    for (char c : text) {
        if (c == '1')
            fill.push_back(true);
        else if (c == '0')
            fill.push_back(false);
        else if (c == ',' || c == ' ')
            continue;
        else
            throw ValidationError("--fill: expected a pattern of 0/1, e.g. '1,0'");
    }
    if (fill.empty())
        throw ValidationError("--fill: empty pattern");
    return fill;
}

int cmd_synthesize(const Args& a) {
    const Frequency f(parse_frequency_hz(a.freq));
    const ArrayLayout layout = ArrayLayout::grid(
        a.nx, a.ny, parse_length_m(a.pitch),
        parse_length_m(a.pitch_y.empty() ? a.pitch : a.pitch_y));
    const Direction target(parse_angle_rad(a.theta), parse_angle_rad(a.phi));
    const UnitCellStateTable table = resolve_table(a, f);

    PhaseProfile profile = (table.kind() == CellKind::Transmissive)
                               ? collimation_profile(layout, f, resolve_feed(a, layout), target)
                               : steering_profile(layout, f, target);
    const StateMap map = quantize(profile, table, f);
    if (a.out.empty()) {
        std::cout << statemap_csv(map, profile);
    } else {
        write_statemap_csv(a.out, map, profile);
        std::cout << "{\"statemap\": \"" << a.out << "\", \"elements\": " << layout.size()
                  << "}\n";
    }
    return 0;
}

int cmd_pattern(const Args& a) {
    const Frequency f(parse_frequency_hz(a.freq));
    const ArrayLayout layout = ArrayLayout::grid(
        a.nx, a.ny, parse_length_m(a.pitch),
        parse_length_m(a.pitch_y.empty() ? a.pitch : a.pitch_y));
    const UnitCellStateTable table = resolve_table(a, f);
    const Direction incidence(parse_angle_rad(a.inc_theta), parse_angle_rad(a.inc_phi));
    const Direction target(parse_angle_rad(a.theta), parse_angle_rad(a.phi));
    const ElementModel elem(a.q_e);
    const CutSpec cut{parse_angle_rad(a.cut_phi), -0.5 * pi, 0.5 * pi, parse_angle_rad(a.grid)};

    StateMap map = a.statemap.empty()
                       ? quantize(steering_profile(layout, f, target), table, f)
                       : read_statemap_csv(a.statemap, layout);
    const FarFieldPattern p = scattered_pattern(layout, map, table, f, incidence, elem, cut);
    if (a.out.empty())
        std::cout << pattern_csv(p);
    else
        write_pattern_csv(a.out, p);
    const PatternMetrics m = pattern_metrics(p, target);
    if (!a.metrics_out.empty()) {
        std::ofstream mo(a.metrics_out, std::ios::binary);
        if (!mo)
            throw std::runtime_error("cannot write '" + a.metrics_out + "'");
        mo << metrics_json(m);
    }
    if (!a.out.empty())
        std::cout << metrics_json(m);
    return 0;
}

int cmd_gain(const Args& a) {
    const Frequency f(parse_frequency_hz(a.freq));
    const ArrayLayout layout = ArrayLayout::grid(
        a.nx, a.ny, parse_length_m(a.pitch),
        parse_length_m(a.pitch_y.empty() ? a.pitch : a.pitch_y));
    const UnitCellStateTable table = resolve_table(a, f);
    const Direction target(parse_angle_rad(a.theta), parse_angle_rad(a.phi));
    const FeedSpec feed = resolve_feed(a, layout);
    const ElementModel elem(a.q_e);
    const CutSpec cut{parse_angle_rad(a.cut_phi), -0.5 * pi, 0.5 * pi, parse_angle_rad(a.grid)};

    const PhaseProfile profile = collimation_profile(layout, f, feed, target);
    FarFieldPattern p;
    if (a.continuous) {
        // Unquantized reference: each cell realizes its ideal phase with the
        // best available state magnitude.
        std::vector<std::complex<double>> coeffs;
        coeffs.reserve(profile.phase.size());
        const std::string& best = table.state_names().front();
        const double mag = table.coefficient_at(best, f).magnitude();
        for (double ph : profile.phase)
            coeffs.push_back(std::polar(mag, ph));
        p = transmit_gain_pattern_coeffs(layout, coeffs, f, feed, elem, cut);
    } else {
        const StateMap map = quantize(profile, table, f);
        p = transmit_gain_pattern(layout, map, table, f, feed, elem, cut);
    }
    if (!a.out.empty())
        write_pattern_csv(a.out, p);
    const PatternMetrics m = pattern_metrics(p, target);
    if (!a.metrics_out.empty()) {
        std::ofstream mo(a.metrics_out, std::ios::binary);
        if (!mo)
            throw std::runtime_error("cannot write '" + a.metrics_out + "'");
        mo << metrics_json(m);
    }
    std::cout << "{\"gain_dbi\": " << format_g9(m.peak_db)
              << ", \"peak_deg\": " << format_g9(m.peak_deg) << "}\n";
    return 0;
}

int cmd_grating_modes(const Args& a) {
    const Frequency f(parse_frequency_hz(a.freq));
    const GratingConfig cfg(parse_length_m(a.period), parse_fill(a.fill),
                            parse_angle_rad(a.inc_theta), f);
    std::cout << "[";
    bool first = true;
    for (const auto& m : propagating_modes(cfg)) {
        if (!first)
            std::cout << ", ";
        std::cout << "{\"n\": " << m.order << ", \"theta_deg\": " << format_g9(rad2deg(m.theta))
                  << ", \"propagating\": " << (m.propagating ? "true" : "false") << "}";
        first = false;
    }
    std::cout << "]\n";
    return 0;
}

int cmd_grating_pattern(const Args& a) {
    const Frequency f(parse_frequency_hz(a.freq));
    const GratingConfig cfg(parse_length_m(a.period), parse_fill(a.fill),
                            parse_angle_rad(a.inc_theta), f);
    const ElementModel elem(a.q_e);
    const CutSpec cut{parse_angle_rad(a.cut_phi), -0.5 * pi, 0.5 * pi, parse_angle_rad(a.grid)};
    const FarFieldPattern p = splitter_pattern(cfg, parse_length_m(a.aperture), elem, cut);
    if (a.out.empty())
        std::cout << pattern_csv(p);
    else {
        write_pattern_csv(a.out, p);
        std::cout << "{\"pattern\": \"" << a.out << "\"}\n";
    }
    return 0;
}

int cmd_unitcell_metrics(const Args& a) {
    const Frequency f(parse_frequency_hz(a.freq));
    const UnitCellStateTable table = UnitCellStateTable::load_csv(a.table);
    const Frequency center(a.center.empty() ? f.hertz() : parse_frequency_hz(a.center));
    std::cout << "{\"state\": \"" << a.state << "\""
              << ", \"il_db\": " << format_g9(table.insertion_loss_db(a.state, f));
    if (!a.state_b.empty())
        std::cout << ", \"phase_diff_deg\": "
                  << format_g9(table.phase_difference_deg(a.state, a.state_b, f));
    std::cout << ", \"fbw_percent\": "
              << format_g9(table.fractional_bandwidth_percent(a.state, a.threshold_db, center))
              << ", \"threshold_db\": " << format_g9(a.threshold_db) << "}\n";
    return 0;
}

int cmd_switch_fom(const Args& a) {
    const SwitchCircuit circ(parse_resistance_ohm(a.ron), parse_capacitance_f(a.con),
                             parse_resistance_ohm(a.roff), parse_capacitance_f(a.coff));
    const Frequency f(parse_frequency_hz(a.freq));
    const ComplexCoefficient z_on = switch_impedance(circ, SwitchState::On, f);
    const ComplexCoefficient z_off = switch_impedance(circ, SwitchState::Off, f);
    const TwoPortLoss loss = switch_insertion_loss_isolation(circ, f, a.z0);
    std::cout << "{\"fc_thz\": " << format_g9(switch_cutoff_frequency(circ).hertz() / 1e12)
              << ", \"freq_ghz\": " << format_g9(f.ghz())
              << ", \"z_on_ohm\": " << format_g9(z_on.magnitude())
              << ", \"z_on_phase_deg\": " << format_g9(z_on.phase_deg())
              << ", \"z_off_ohm\": " << format_g9(z_off.magnitude())
              << ", \"z_off_phase_deg\": " << format_g9(z_off.phase_deg())
              << ", \"il_db\": " << format_g9(loss.il_db)
              << ", \"iso_db\": " << format_g9(loss.iso_db) << ", \"z0_ohm\": " << format_g9(a.z0)
              << "}\n";
    return 0;
}

int cmd_fspl(const Args& a) {
    const Frequency f(parse_frequency_hz(a.freq));
    std::cout << "{\"fspl_db\": " << format_g9(fspl_db(f, parse_length_m(a.dist))) << "}\n";
    return 0;
}

int cmd_run(const Args& a) {
    const Scenario s = load_scenario(a.scenario_path);
    const RunResult r = run_scenario(s, a.out_dir);
    std::cout << r.summary_json;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1-bit RIS synthesis and far-field prediction for D-band surfaces"};
    app.require_subcommand(1);
    app.footer("Numeric flags accept unit suffixes (140GHz, 1mm, 30deg, 18.5f).\n"
               "RIS_MAX_THREADS caps internal parallelism; results do not depend on it.");

    Args a;
    int (*handler)(const Args&) = nullptr;

    auto add_layout = [&](CLI::App* c) {
        c->add_option("--nx", a.nx, "elements along x");
        c->add_option("--ny", a.ny, "elements along y");
        c->add_option("--pitch", a.pitch, "element pitch (default mm)");
        c->add_option("--pitch-y", a.pitch_y, "y pitch when different from --pitch");
    };
    auto add_cell = [&](CLI::App* c) {
        c->add_option("--table", a.table, "unit-cell state table CSV");
        c->add_option("--ideal", a.ideal, "ideal 1-bit cell 'reflective[:loss_db]'");
    };
    auto add_cut = [&](CLI::App* c) {
        c->add_option("--cut-phi", a.cut_phi, "cut plane azimuth (default 0deg)");
        c->add_option("--grid", a.grid, "angular grid step (default 0.1deg)");
        c->add_option("--qe", a.q_e, "element pattern exponent (default 0.5)");
    };
    auto add_feed = [&](CLI::App* c) {
        c->add_option("--f-over-d", a.f_over_d, "focal distance over aperture side (default 0.7)");
        c->add_option("--edge-taper", a.edge_taper_db, "edge illumination in dB (default -10)");
        c->add_option("--feed-focal", a.feed_focal, "explicit focal distance (overrides --f-over-d)");
        c->add_option("--feed-q", a.feed_q, "explicit feed pattern exponent");
        c->add_option("--feed-offset-x", a.feed_off_x, "feed lateral offset x");
        c->add_option("--feed-offset-y", a.feed_off_y, "feed lateral offset y");
    };

    {
        CLI::App* c = app.add_subcommand("synthesize", "phase profile + 1-bit state map");
        add_layout(c);
        add_cell(c);
        add_feed(c);
        c->add_option("--freq", a.freq, "frequency (default GHz)");
        c->add_option("--theta", a.theta, "target polar angle");
        c->add_option("--phi", a.phi, "target azimuth");
        c->add_option("--out", a.out, "state map CSV path (stdout when omitted)");
        c->callback([&]() { handler = cmd_synthesize; });
    }
    {
        CLI::App* c = app.add_subcommand("pattern", "scattered pattern of a reflective surface");
        add_layout(c);
        add_cell(c);
        add_cut(c);
        c->add_option("--freq", a.freq, "frequency");
        c->add_option("--statemap", a.statemap, "state map CSV (synthesized from --theta otherwise)");
        c->add_option("--theta", a.theta, "target polar angle");
        c->add_option("--phi", a.phi, "target azimuth");
        c->add_option("--incidence-theta", a.inc_theta, "incident wave polar angle");
        c->add_option("--incidence-phi", a.inc_phi, "incident wave azimuth");
        c->add_option("--out", a.out, "pattern CSV path (stdout when omitted)");
        c->add_option("--metrics", a.metrics_out, "metrics JSON path");
        c->callback([&]() { handler = cmd_pattern; });
    }
    {
        CLI::App* c = app.add_subcommand("gain", "realized gain of a transmissive surface");
        add_layout(c);
        add_cell(c);
        add_cut(c);
        add_feed(c);
        c->add_option("--freq", a.freq, "frequency");
        c->add_option("--theta", a.theta, "target polar angle");
        c->add_option("--phi", a.phi, "target azimuth");
        c->add_flag("--continuous", a.continuous, "skip 1-bit quantization (ideal phases)");
        c->add_option("--out", a.out, "pattern CSV path");
        c->add_option("--metrics", a.metrics_out, "metrics JSON path");
        c->callback([&]() { handler = cmd_gain; });
    }
    {
        CLI::App* g = app.add_subcommand("grating", "liquid-metal strip grating");
        g->require_subcommand(1);
        CLI::App* m = g->add_subcommand("modes", "list Floquet modes as JSON");
        m->add_option("--period", a.period, "channel spacing / grating period");
        m->add_option("--fill", a.fill, "cyclic fill pattern, e.g. '1,0'");
        m->add_option("--freq", a.freq, "frequency");
        m->add_option("--incidence", a.inc_theta, "incidence angle");
        m->callback([&]() { handler = cmd_grating_modes; });
        CLI::App* p = g->add_subcommand("pattern", "finite-aperture splitter pattern");
        p->add_option("--period", a.period, "channel spacing / grating period");
        p->add_option("--fill", a.fill, "cyclic fill pattern");
        p->add_option("--aperture", a.aperture, "total aperture width");
        p->add_option("--freq", a.freq, "frequency");
        p->add_option("--incidence", a.inc_theta, "incidence angle");
        add_cut(p);
        p->add_option("--out", a.out, "pattern CSV path (stdout when omitted)");
        p->callback([&]() { handler = cmd_grating_pattern; });
    }
    {
        CLI::App* c = app.add_subcommand("unitcell", "unit-cell table metrics");
        CLI::App* m = c->add_subcommand("metrics", "insertion loss / phase difference / bandwidth");
        m->add_option("--table", a.table, "state table CSV")->required();
        m->add_option("--freq", a.freq, "evaluation frequency");
        m->add_option("--state", a.state, "state name (default 000)");
        m->add_option("--state-b", a.state_b, "second state for the phase difference");
        m->add_option("--threshold", a.threshold_db, "bandwidth loss threshold dB (default 1.5)");
        m->add_option("--center", a.center, "bandwidth center frequency (default --freq)");
        m->callback([&]() { handler = cmd_unitcell_metrics; });
        c->require_subcommand(1);
    }
    {
        CLI::App* c = app.add_subcommand("switch", "switch equivalent-circuit figures of merit");
        CLI::App* m = c->add_subcommand("fom", "cutoff frequency, impedances, IL/isolation");
        m->add_option("--ron", a.ron, "ON resistance (ohm)")->required();
        m->add_option("--con", a.con, "ON capacitance ('18.5f' = 18.5 fF)")->required();
        m->add_option("--roff", a.roff, "OFF resistance (ohm)")->required();
        m->add_option("--coff", a.coff, "OFF capacitance")->required();
        m->add_option("--freq", a.freq, "evaluation frequency (default 140GHz)");
        m->add_option("--z0", a.z0, "line impedance for IL/isolation (default 50)");
        m->callback([&]() { handler = cmd_switch_fom; });
        c->require_subcommand(1);
    }
    {
        CLI::App* c = app.add_subcommand("fspl", "free-space path loss");
        c->add_option("--freq", a.freq, "frequency");
        c->add_option("--dist", a.dist, "path distance (default m units: '1m')");
        c->callback([&]() { handler = cmd_fspl; });
    }
    {
        CLI::App* c = app.add_subcommand("run", "execute a scenario file");
        c->add_option("scenario", a.scenario_path, "scenario config file")->required();
        c->add_option("--out-dir", a.out_dir, "output directory (default .)");
        c->callback([&]() { handler = cmd_run; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage/validation problems exit 1
    }

    try {
        return handler ? handler(a) : 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const RangeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    }
}
