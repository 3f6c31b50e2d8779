#include "ris/unitcell.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ris {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ','))
        out.push_back(trim(field));
    return out;
}

double to_number(const std::string& s, const std::string& origin, int line_no,
                 const char* field) {
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != s.size() || s.empty())
        throw ParseError(origin + ":" + std::to_string(line_no) + ": bad " + field + " value '" +
                         s + "'");
    return v;
}

constexpr double passivity_tol = 1e-9;

} // namespace

UnitCellStateTable UnitCellStateTable::load_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open state table '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), path);
}

UnitCellStateTable UnitCellStateTable::parse_csv(const std::string& content,
                                                 const std::string& origin) {
    UnitCellStateTable t;
    std::map<std::string, std::vector<std::pair<double, std::complex<double>>>> samples;

    std::istringstream in(content);
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty())
            continue;
        if (line[0] == '#') {
            // Metadata comments: "#key=value". Free-text comments are ignored.
            const std::string body = trim(line.substr(1));
            const size_t eq = body.find('=');
            if (eq == std::string::npos)
                continue;
            const std::string key = trim(body.substr(0, eq));
            const std::string val = trim(body.substr(eq + 1));
            if (key == "active") {
                t.active_ = (val == "true" || val == "1");
            } else if (key == "kind") {
                if (val == "reflective")
                    t.kind_ = CellKind::Reflective;
                else if (val == "transmissive")
                    t.kind_ = CellKind::Transmissive;
                else
                    throw ParseError(origin + ":" + std::to_string(line_no) +
                                     ": unknown kind '" + val + "'");
            } else if (key == "epsr") {
                t.substrate_.epsilon_r = to_number(val, origin, line_no, "epsr");
            } else if (key == "tand") {
                t.substrate_.tan_delta = to_number(val, origin, line_no, "tand");
            } else if (key == "thickness_mm") {
                t.substrate_.thickness_m =
                    to_number(val, origin, line_no, "thickness_mm") * 1e-3;
            }
            continue;
        }
        if (!header_seen) {
            auto cols = split_csv_row(line);
            if (cols != std::vector<std::string>{"freq_ghz", "state", "mag_db", "phase_deg"})
                throw ParseError(origin + ":" + std::to_string(line_no) +
                                 ": expected header 'freq_ghz,state,mag_db,phase_deg'");
            header_seen = true;
            continue;
        }
        auto cols = split_csv_row(line);
        if (cols.size() != 4)
            throw ParseError(origin + ":" + std::to_string(line_no) +
                             ": expected 4 fields, got " + std::to_string(cols.size()));
        const double f_hz = to_number(cols[0], origin, line_no, "freq_ghz") * 1e9;
        const std::string& state = cols[1];
        if (state.empty())
            throw ParseError(origin + ":" + std::to_string(line_no) + ": empty state name");
        const double mag_db = to_number(cols[2], origin, line_no, "mag_db");
        const double phase_deg = to_number(cols[3], origin, line_no, "phase_deg");
        samples[state].emplace_back(f_hz,
                                    std::polar(std::pow(10.0, mag_db / 20.0),
                                               deg2rad(phase_deg)));
    }
    if (!header_seen)
        throw ParseError(origin + ": missing header row");

    for (auto& [state, rows] : samples) {
        t.states_.push_back(state);
        (void)rows;
    }
    std::sort(t.states_.begin(), t.states_.end());
    for (const auto& s : t.states_) {
        const auto& rows = samples.at(s);
        std::vector<std::complex<double>> col;
        std::vector<double> grid;
        col.reserve(rows.size());
        grid.reserve(rows.size());
        for (const auto& [f, z] : rows) {
            grid.push_back(f);
            col.push_back(z);
        }
        if (t.grid_.empty())
            t.grid_ = grid;
        else if (t.grid_ != grid)
            throw ValidationError(origin + ": state '" + s +
                                  "' frequency grid differs from the other states");
        t.cols_.push_back(std::move(col));
    }
    t.validate(origin);
    return t;
}

UnitCellStateTable UnitCellStateTable::from_samples(
    CellKind kind,
    const std::map<std::string, std::vector<std::pair<double, std::complex<double>>>>& samples,
    bool active, SubstrateInfo substrate) {
    UnitCellStateTable t;
    t.kind_ = kind;
    t.active_ = active;
    t.substrate_ = substrate;
    for (const auto& [state, rows] : samples) {
        t.states_.push_back(state);
        std::vector<std::complex<double>> col;
        std::vector<double> grid;
        for (const auto& [f, z] : rows) {
            grid.push_back(f);
            col.push_back(z);
        }
        if (t.grid_.empty())
            t.grid_ = grid;
        else if (t.grid_ != grid)
            throw ValidationError("state '" + state +
                                  "' frequency grid differs from the other states");
        t.cols_.push_back(std::move(col));
    }
    t.validate("<samples>");
    return t;
}

void UnitCellStateTable::validate(const std::string& origin) {
    if (states_.size() < 2)
        throw ValidationError(origin + ": a state table needs at least 2 states, got " +
                              std::to_string(states_.size()));
    if (grid_.size() < 2)
        throw ValidationError(origin + ": a state table needs at least 2 frequency samples");
    for (size_t i = 0; i + 1 < grid_.size(); ++i)
        if (!(grid_[i] < grid_[i + 1]))
            throw ValidationError(origin + ": non-monotone frequency grid near " +
                                  format_g9(grid_[i] / 1e9) + " GHz");
    for (double f : grid_)
        if (!(f > 0.0))
            throw ValidationError(origin + ": frequencies must be positive");
    if (!active_) {
        for (size_t s = 0; s < states_.size(); ++s)
            for (size_t i = 0; i < grid_.size(); ++i)
                if (std::abs(cols_[s][i]) > 1.0 + passivity_tol)
                    throw ValidationError(
                        origin + ": passivity violated (|coefficient| > 1) for state '" +
                        states_[s] + "' at " + format_g9(grid_[i] / 1e9) +
                        " GHz; add '#active=true' for an active cell");
    }
}

bool UnitCellStateTable::has_state(const std::string& name) const {
    return std::find(states_.begin(), states_.end(), name) != states_.end();
}

const std::vector<std::complex<double>>&
UnitCellStateTable::column(const std::string& state) const {
    auto it = std::find(states_.begin(), states_.end(), state);
    if (it == states_.end()) {
        std::string known;
        for (const auto& s : states_)
            known += (known.empty() ? "" : ", ") + s;
        throw std::invalid_argument("unknown state '" + state + "' (known: " + known + ")");
    }
    return cols_[static_cast<size_t>(it - states_.begin())];
}

std::complex<double> UnitCellStateTable::interp(const std::vector<std::complex<double>>& col,
                                                double f_hz) const {
    if (f_hz < grid_.front() || f_hz > grid_.back())
        throw RangeError("frequency " + format_g9(f_hz / 1e9) + " GHz outside table range [" +
                         format_g9(grid_.front() / 1e9) + ", " + format_g9(grid_.back() / 1e9) +
                         "] GHz");
    auto it = std::lower_bound(grid_.begin(), grid_.end(), f_hz);
    if (it != grid_.end() && *it == f_hz)
        return col[static_cast<size_t>(it - grid_.begin())];
    const size_t hi = static_cast<size_t>(it - grid_.begin());
    const size_t lo = hi - 1;
    const double u = (f_hz - grid_[lo]) / (grid_[hi] - grid_[lo]);
    return col[lo] + (col[hi] - col[lo]) * u;
}

ComplexCoefficient UnitCellStateTable::coefficient_at(const std::string& state,
                                                      const Frequency& f) const {
    return ComplexCoefficient::from_complex(interp(column(state), f.hertz()));
}

double UnitCellStateTable::insertion_loss_db(const std::string& state,
                                             const Frequency& f) const {
    return -coefficient_at(state, f).magnitude_db();
}

double UnitCellStateTable::phase_difference_deg(const std::string& state_a,
                                                const std::string& state_b,
                                                const Frequency& f) const {
    const double a = coefficient_at(state_a, f).phase();
    const double b = coefficient_at(state_b, f).phase();
    return rad2deg(wrap_phase(a - b));
}

double UnitCellStateTable::fractional_bandwidth_percent(const std::string& state,
                                                        double threshold_db,
                                                        const Frequency& f_center) const {
    const auto& col = column(state);
    const double fc = f_center.hertz();
    if (fc < grid_.front() || fc > grid_.back())
        throw RangeError("center frequency outside table range");
    if (insertion_loss_db(state, f_center) >= threshold_db)
        return 0.0;

    // loss < threshold_db  <=>  |coeff|^2 > g2. On each segment the squared
    // magnitude of the linearly interpolated coefficient is quadratic in the
    // local parameter, so every threshold crossing solves exactly.
    const double g = std::pow(10.0, -threshold_db / 20.0);
    const double g2 = g * g;

    std::vector<double> bounds;
    bounds.push_back(grid_.front());
    for (size_t seg = 0; seg + 1 < grid_.size(); ++seg) {
        const std::complex<double> a = col[seg];
        const std::complex<double> d = col[seg + 1] - col[seg];
        const double qa = std::norm(d);
        const double qb = 2.0 * (d.real() * a.real() + d.imag() * a.imag());
        const double qc = std::norm(a) - g2;
        const double flo = grid_[seg], fhi = grid_[seg + 1];
        auto push = [&](double t) {
            if (t > 0.0 && t < 1.0)
                bounds.push_back(flo + t * (fhi - flo));
        };
        if (qa < 1e-300) {
            if (qb != 0.0)
                push(-qc / qb);
        } else {
            const double disc = qb * qb - 4.0 * qa * qc;
            if (disc >= 0.0) {
                const double sq = std::sqrt(disc);
                push((-qb - sq) / (2.0 * qa));
                push((-qb + sq) / (2.0 * qa));
            }
        }
        bounds.push_back(fhi); // keeps interval midpoints inside one segment
    }
    std::sort(bounds.begin(), bounds.end());

    // Between consecutive bounds the pass/fail status is constant; probe the
    // midpoint and merge contiguous passing intervals around f_center.
    auto passes = [&](double f_hz) { return std::norm(interp(col, f_hz)) > g2; };
    double f_lo = fc, f_hi = fc;
    bool in_band = false;
    for (size_t i = 0; i + 1 < bounds.size(); ++i) {
        const double lo = bounds[i], hi = bounds[i + 1];
        if (!(hi > lo))
            continue;
        const bool ok = passes(0.5 * (lo + hi));
        if (ok && !in_band) {
            f_lo = lo;
            f_hi = hi;
            in_band = true;
        } else if (ok) {
            f_hi = hi;
        } else if (in_band) {
            if (fc <= f_hi && fc >= f_lo)
                break; // the band containing f_center is complete
            in_band = false;
        }
    }
    if (!(fc >= f_lo && fc <= f_hi))
        return 0.0;
    return 100.0 * (f_hi - f_lo) / fc;
}

IdealOneBitCell::IdealOneBitCell(CellKind k, double loss) : kind(k), loss_db(loss) {
    if (!(loss_db >= 0.0))
        throw std::domain_error("IdealOneBitCell loss_db must be >= 0");
}

UnitCellStateTable IdealOneBitCell::to_table(const Frequency& f_lo, const Frequency& f_hi) const {
    if (!(f_lo.hertz() < f_hi.hertz()))
        throw std::domain_error("IdealOneBitCell band must satisfy f_lo < f_hi");
    const double mag = std::pow(10.0, -loss_db / 20.0);
    std::map<std::string, std::vector<std::pair<double, std::complex<double>>>> samples;
    for (double f : {f_lo.hertz(), f_hi.hertz()}) {
        samples["000"].emplace_back(f, std::complex<double>(mag, 0.0));
        samples["180"].emplace_back(f, std::complex<double>(-mag, 0.0));
    }
    return UnitCellStateTable::from_samples(kind, samples);
}

} // namespace ris
