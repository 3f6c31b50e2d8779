#include "ris/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ris {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
    throw ValidationError(field + ": " + msg);
}

const json& require_key(const json& j, const char* key, const std::string& field) {
    auto it = j.find(key);
    if (it == j.end())
        fail(field, "required field missing");
    return *it;
}

double quantity(const json& v, const std::string& field, double (*parse)(const std::string&),
                double bare_scale) {
    if (v.is_string())
        return parse(v.get<std::string>());
    if (v.is_number())
        return v.get<double>() * bare_scale;
    fail(field, "expected a number or a unit-suffixed string");
}

double q_freq_hz(const json& v, const std::string& f) {
    return quantity(v, f, parse_frequency_hz, 1e9); // bare numbers are GHz
}
double q_len_m(const json& v, const std::string& f) {
    return quantity(v, f, parse_length_m, 1e-3); // bare numbers are mm
}
double q_angle_rad(const json& v, const std::string& f) {
    return quantity(v, f, parse_angle_rad, pi / 180.0); // bare numbers are deg
}

double q_number(const json& v, const std::string& field) {
    if (!v.is_number())
        fail(field, "expected a number");
    return v.get<double>();
}

int q_int(const json& v, const std::string& field) {
    if (!v.is_number_integer())
        fail(field, "expected an integer");
    return v.get<int>();
}

std::string q_string(const json& v, const std::string& field) {
    if (!v.is_string())
        fail(field, "expected a string");
    return v.get<std::string>();
}

void read_direction(const json& j, const std::string& field, double& theta, double& phi) {
    if (!j.is_object())
        fail(field, "expected an object {theta, phi}");
    theta = q_angle_rad(require_key(j, "theta", field + ".theta"), field + ".theta");
    phi = j.contains("phi") ? q_angle_rad(j.at("phi"), field + ".phi") : 0.0;
    if (theta < 0.0 || theta > pi)
        fail(field + ".theta", "must lie in [0, 180] deg");
}

} // namespace

UnitCellStateTable Scenario::load_table() const {
    if (has_table)
        return UnitCellStateTable::load_csv(table_path);
    const IdealOneBitCell cell(ideal_kind, ideal_loss_db);
    const double f = frequency.hertz();
    return cell.to_table(Frequency(0.5 * f), Frequency(1.5 * f));
}

FeedSpec Scenario::feed() const {
    if (feed_explicit)
        return FeedSpec(feed_offset_x, feed_offset_y, feed_focal, feed_q);
    FeedSpec d = FeedSpec::default_for(layout(), f_over_d, edge_taper_db);
    return FeedSpec(feed_offset_x, feed_offset_y, d.z, d.q);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail("scenario", "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();

    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (!j.is_object())
        fail("scenario", "top level must be an object");

    Scenario s;
    s.hash_hex = fnv1a64_hex(bytes);
    s.source_dir = fs::path(path).parent_path().string();
    s.prefix = fs::path(path).stem().string();

    s.schema_version = q_int(require_key(j, "schema_version", "schema_version"), "schema_version");
    if (s.schema_version != 1)
        fail("schema_version", "unsupported version " + std::to_string(s.schema_version));

    s.mode = q_string(require_key(j, "mode", "mode"), "mode");
    if (s.mode != "reflect-steer" && s.mode != "transmit-collimate" && s.mode != "grating")
        fail("mode", "expected 'reflect-steer', 'transmit-collimate' or 'grating', got '" +
                         s.mode + "'");

    s.frequency = Frequency(q_freq_hz(require_key(j, "frequency", "frequency"), "frequency"));

    if (s.mode != "grating") {
        const json& layout = require_key(j, "layout", "layout");
        s.nx = q_int(require_key(layout, "nx", "layout.nx"), "layout.nx");
        s.ny = q_int(require_key(layout, "ny", "layout.ny"), "layout.ny");
        if (s.nx < 1 || s.ny < 1)
            fail("layout.nx", "element counts must be >= 1");
        if (layout.contains("pitch")) {
            s.pitch_x = s.pitch_y = q_len_m(layout.at("pitch"), "layout.pitch");
        } else {
            s.pitch_x = q_len_m(require_key(layout, "pitch_x", "layout.pitch_x"), "layout.pitch_x");
            s.pitch_y = q_len_m(require_key(layout, "pitch_y", "layout.pitch_y"), "layout.pitch_y");
        }
        if (!(s.pitch_x > 0.0) || !(s.pitch_y > 0.0))
            fail("layout.pitch", "pitch must be > 0");

        const json& cell = require_key(j, "cell", "cell");
        if (cell.contains("table")) {
            s.has_table = true;
            fs::path p = q_string(cell.at("table"), "cell.table");
            if (p.is_relative())
                p = fs::path(s.source_dir) / p;
            s.table_path = p.string();
            if (!fs::exists(p))
                fail("cell.table", "file not found: '" + s.table_path + "'");
        } else if (cell.contains("ideal")) {
            s.has_ideal = true;
            const json& ideal = cell.at("ideal");
            const std::string kind =
                q_string(require_key(ideal, "kind", "cell.ideal.kind"), "cell.ideal.kind");
            if (kind == "reflective")
                s.ideal_kind = CellKind::Reflective;
            else if (kind == "transmissive")
                s.ideal_kind = CellKind::Transmissive;
            else
                fail("cell.ideal.kind", "expected 'reflective' or 'transmissive'");
            if (ideal.contains("loss_db"))
                s.ideal_loss_db = q_number(ideal.at("loss_db"), "cell.ideal.loss_db");
            if (s.ideal_loss_db < 0.0)
                fail("cell.ideal.loss_db", "must be >= 0");
        } else {
            fail("cell", "needs either 'table' or 'ideal'");
        }

        read_direction(require_key(j, "target", "target"), "target", s.target_theta,
                       s.target_phi);
        if (j.contains("incidence"))
            read_direction(j.at("incidence"), "incidence", s.incidence_theta, s.incidence_phi);

        // The table must cover the scenario frequency (no extrapolation).
        const UnitCellStateTable table = s.load_table();
        if (s.frequency.hertz() < table.freq_min_hz() || s.frequency.hertz() > table.freq_max_hz())
            fail("frequency", format_g9(s.frequency.ghz()) + " GHz outside the cell table range [" +
                                  format_g9(table.freq_min_hz() / 1e9) + ", " +
                                  format_g9(table.freq_max_hz() / 1e9) + "] GHz");
        if (s.mode == "transmit-collimate" && table.kind() != CellKind::Transmissive)
            fail("cell", "transmit-collimate needs a transmissive cell");
        if (s.mode == "reflect-steer" && table.kind() != CellKind::Reflective)
            fail("cell", "reflect-steer needs a reflective cell");
    }

    if (s.mode == "transmit-collimate" && j.contains("feed")) {
        const json& feed = j.at("feed");
        if (feed.contains("focal")) {
            s.feed_explicit = true;
            s.feed_focal = q_len_m(feed.at("focal"), "feed.focal");
            s.feed_q = q_number(require_key(feed, "q", "feed.q"), "feed.q");
            if (!(s.feed_focal > 0.0))
                fail("feed.focal", "must be > 0");
            if (s.feed_q < 0.0)
                fail("feed.q", "must be >= 0");
        } else {
            if (feed.contains("f_over_d"))
                s.f_over_d = q_number(feed.at("f_over_d"), "feed.f_over_d");
            if (feed.contains("edge_taper_db"))
                s.edge_taper_db = q_number(feed.at("edge_taper_db"), "feed.edge_taper_db");
            if (!(s.f_over_d > 0.0))
                fail("feed.f_over_d", "must be > 0");
            if (!(s.edge_taper_db < 0.0))
                fail("feed.edge_taper_db", "must be negative dB");
        }
        if (feed.contains("offset")) {
            const json& off = feed.at("offset");
            if (!off.is_array() || off.size() != 2)
                fail("feed.offset", "expected [x, y]");
            s.feed_offset_x = q_len_m(off.at(0), "feed.offset[0]");
            s.feed_offset_y = q_len_m(off.at(1), "feed.offset[1]");
        }
    }

    if (s.mode == "grating") {
        const json& g = require_key(j, "grating", "grating");
        if (g.contains("period")) {
            s.grating_spacing = q_len_m(g.at("period"), "grating.period");
            s.grating_fill = {true};
        } else {
            s.grating_spacing =
                q_len_m(require_key(g, "spacing", "grating.spacing"), "grating.spacing");
        }
        if (g.contains("fill")) {
            const json& fill = g.at("fill");
            if (!fill.is_array() || fill.empty())
                fail("grating.fill", "expected a non-empty boolean array");
            s.grating_fill.clear();
            for (const auto& b : fill) {
                if (!b.is_boolean())
                    fail("grating.fill", "expected booleans");
                s.grating_fill.push_back(b.get<bool>());
            }
        }
        if (!(s.grating_spacing > 0.0))
            fail("grating.period", "must be > 0");
        s.grating_aperture =
            q_len_m(require_key(g, "aperture", "grating.aperture"), "grating.aperture");
        if (!(s.grating_aperture > 0.0))
            fail("grating.aperture", "must be > 0");
        if (j.contains("incidence"))
            read_direction(j.at("incidence"), "incidence", s.incidence_theta, s.incidence_phi);
    }

    if (j.contains("output")) {
        const json& o = j.at("output");
        if (o.contains("cut_phi"))
            s.cut_phi = q_angle_rad(o.at("cut_phi"), "output.cut_phi");
        if (o.contains("grid"))
            s.grid_step = q_angle_rad(o.at("grid"), "output.grid");
        if (!(s.grid_step > 0.0))
            fail("output.grid", "must be > 0");
        if (o.contains("prefix"))
            s.prefix = q_string(o.at("prefix"), "output.prefix");
        if (o.contains("q_e"))
            s.q_e = q_number(o.at("q_e"), "output.q_e");
        if (s.q_e < 0.0)
            fail("output.q_e", "must be >= 0");
    }
    return s;
}

namespace {

std::string json_metrics_body(const PatternMetrics& m) {
    // Reuses the canonical metrics serialization, indented for the summary.
    std::string body = metrics_json(m);
    std::string out;
    std::istringstream in(body);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!first)
            out += "\n  ";
        out += line;
        first = false;
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

} // namespace

RunResult run_scenario(const Scenario& s, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const std::string base = (fs::path(out_dir) / s.prefix).string();
    const ElementModel elem(s.q_e);
    const CutSpec cut{s.cut_phi, -0.5 * pi, 0.5 * pi, s.grid_step};
    const std::map<std::string, std::string> meta{{"scenario", s.hash_hex}};

    RunResult res;
    FarFieldPattern pattern;
    std::string statemap_path;

    if (s.mode == "grating") {
        const double inc = (std::cos(s.incidence_phi) >= 0.0 ? 1.0 : -1.0) * s.incidence_theta;
        const GratingConfig cfg(s.grating_spacing, s.grating_fill, inc, s.frequency);
        pattern = splitter_pattern(cfg, s.grating_aperture, elem, cut);
        res.metrics = pattern_metrics(pattern, Direction::broadside());
    } else {
        const ArrayLayout layout = s.layout();
        const UnitCellStateTable table = s.load_table();
        const Direction target(s.target_theta, s.target_phi);

        PhaseProfile profile =
            (s.mode == "reflect-steer")
                ? steering_profile(layout, s.frequency, target)
                : collimation_profile(layout, s.frequency, s.feed(), target);
        const StateMap map = quantize(profile, table, s.frequency);

        statemap_path = base + "_statemap.csv";
        write_statemap_csv(statemap_path, map, profile);
        res.files.push_back(statemap_path);

        if (s.mode == "reflect-steer") {
            const Direction incidence(s.incidence_theta, s.incidence_phi);
            pattern = scattered_pattern(layout, map, table, s.frequency, incidence, elem, cut);
        } else {
            pattern = transmit_gain_pattern(layout, map, table, s.frequency, s.feed(), elem, cut);
        }
        res.metrics = pattern_metrics(pattern, target);
        if (s.mode == "transmit-collimate") {
            res.has_gain = true;
            res.gain_dbi = res.metrics.peak_db; // absolute dBi normalization
        }
    }

    const std::string pattern_path = base + "_pattern.csv";
    write_pattern_csv(pattern_path, pattern, meta);
    res.files.push_back(pattern_path);

    std::string summary = "{\n";
    summary += "  \"schema_version\": 1,\n";
    summary += "  \"scenario\": \"" + s.hash_hex + "\",\n";
    summary += "  \"mode\": \"" + s.mode + "\",\n";
    summary += "  \"frequency_ghz\": " + format_g9(s.frequency.ghz()) + ",\n";
    if (res.has_gain)
        summary += "  \"gain_broadside_dbi\": " + format_g9(res.gain_dbi) + ",\n";
    if (s.mode == "grating") {
        const double inc = (std::cos(s.incidence_phi) >= 0.0 ? 1.0 : -1.0) * s.incidence_theta;
        const GratingConfig cfg(s.grating_spacing, s.grating_fill, inc, s.frequency);
        summary += "  \"modes\": [";
        bool first = true;
        for (const auto& m : propagating_modes(cfg)) {
            if (!first)
                summary += ", ";
            summary += "{\"n\": " + std::to_string(m.order) +
                       ", \"theta_deg\": " + format_g9(rad2deg(m.theta)) +
                       ", \"propagating\": " + (m.propagating ? "true" : "false") + "}";
            first = false;
        }
        summary += "],\n";
    }
    summary += "  \"metrics\": " + json_metrics_body(res.metrics) + ",\n";
    summary += "  \"files\": [";
    for (size_t i = 0; i < res.files.size(); ++i) {
        if (i)
            summary += ", ";
        summary += "\"" + fs::path(res.files[i]).filename().string() + "\"";
    }
    summary += ", \"" + fs::path(base + "_summary.json").filename().string() + "\"]\n}\n";

    const std::string summary_path = base + "_summary.json";
    write_file(summary_path, summary);
    res.files.push_back(summary_path);
    res.summary_json = summary;
    return res;
}

} // namespace ris
