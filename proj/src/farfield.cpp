#include "ris/farfield.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <thread>

namespace ris {

namespace {

/// Deterministic parallel map over [0, n): each index is computed
/// independently with a fixed per-index summation order, so results do not
/// depend on the thread count. RIS_MAX_THREADS caps the pool.
template <typename Fn> void parallel_for(size_t n, Fn&& fn) {
    size_t hw = std::thread::hardware_concurrency();
    if (hw == 0)
        hw = 1;
    if (const char* cap = std::getenv("RIS_MAX_THREADS")) {
        const long v = std::strtol(cap, nullptr, 10);
        if (v >= 1 && static_cast<size_t>(v) < hw)
            hw = static_cast<size_t>(v);
    }
    const size_t n_threads = std::min(hw, std::max<size_t>(1, n / 64));
    if (n_threads <= 1) {
        for (size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (size_t t = 0; t < n_threads; ++t)
        pool.emplace_back([&, t]() {
            for (size_t i = t; i < n; i += n_threads)
                fn(i);
        });
    for (auto& th : pool)
        th.join();
}

std::complex<double> sum_over_elements(const ArrayLayout& layout,
                                       const std::vector<std::complex<double>>& w, double k0,
                                       double u, double v) {
    std::complex<double> acc(0.0, 0.0);
    const auto& xs = layout.xs();
    const auto& ys = layout.ys();
    for (size_t i = 0; i < w.size(); ++i) {
        const double ph = k0 * (xs[i] * u + ys[i] * v);
        acc += w[i] * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    return acc;
}

/// Core evaluator shared by every pattern kind. `u_off`, `v_off` shift the
/// spectral variable (plane-wave incidence term); `prefactor` scales the
/// field; PeakZeroDb normalization divides by the sampled peak magnitude.
FarFieldPattern evaluate(const ArrayLayout& layout, const std::vector<std::complex<double>>& w,
                         const Frequency& f, const ElementModel& elem, double u_off, double v_off,
                         double prefactor, Normalization norm, const CutSpec& cut) {
    if (w.size() != static_cast<size_t>(layout.size()))
        throw std::invalid_argument("weight count does not match layout");
    if (!(cut.step > 0.0))
        throw std::domain_error("angular grid step must be > 0");
    FarFieldPattern p;
    p.domain = FarFieldPattern::Domain::Cut;
    p.normalization = norm;
    p.frequency_hz = f.hertz();
    p.cut_phi = cut.phi;
    const int n = static_cast<int>(std::floor((cut.theta_max - cut.theta_min) / cut.step + 0.5)) + 1;
    p.theta.resize(n);
    for (int i = 0; i < n; ++i)
        p.theta[i] = std::min(cut.theta_min + i * cut.step, cut.theta_max);
    p.field.resize(n);

    const double k0 = f.wavenumber();
    const double cp = std::cos(cut.phi), sp = std::sin(cut.phi);
    parallel_for(static_cast<size_t>(n), [&](size_t i) {
        const double th = p.theta[i];
        const double st = std::sin(th), ct = std::cos(th);
        const double u = st * cp, v = st * sp;
        const double ef = (ct > 0.0) ? std::pow(ct, elem.q_e) : 0.0;
        p.field[i] = prefactor * ef * sum_over_elements(layout, w, k0, u + u_off, v + v_off);
    });

    if (norm == Normalization::PeakZeroDb) {
        double peak = 0.0;
        for (const auto& e : p.field)
            peak = std::max(peak, std::abs(e));
        if (peak > 0.0)
            for (auto& e : p.field)
                e /= peak;
    }
    return p;
}

FarFieldPattern evaluate(const ArrayLayout& layout, const std::vector<std::complex<double>>& w,
                         const Frequency& f, const ElementModel& elem, double u_off, double v_off,
                         double prefactor, Normalization norm, const SphereSpec& sphere) {
    if (w.size() != static_cast<size_t>(layout.size()))
        throw std::invalid_argument("weight count does not match layout");
    if (!(sphere.theta_step > 0.0) || !(sphere.phi_step > 0.0))
        throw std::domain_error("angular grid step must be > 0");
    FarFieldPattern p;
    p.domain = FarFieldPattern::Domain::Sphere;
    p.normalization = norm;
    p.frequency_hz = f.hertz();
    const int nth = static_cast<int>(std::floor(0.5 * pi / sphere.theta_step + 0.5)) + 1;
    const int nph = static_cast<int>(std::floor(2.0 * pi / sphere.phi_step + 0.5));
    p.theta.resize(nth);
    for (int i = 0; i < nth; ++i)
        p.theta[i] = std::min(i * sphere.theta_step, 0.5 * pi);
    p.phi.resize(nph);
    for (int i = 0; i < nph; ++i)
        p.phi[i] = i * (2.0 * pi / nph);
    p.field.resize(static_cast<size_t>(nth) * nph);

    const double k0 = f.wavenumber();
    parallel_for(static_cast<size_t>(nth), [&](size_t it) {
        const double th = p.theta[it];
        const double st = std::sin(th), ct = std::cos(th);
        const double ef = (ct > 0.0) ? std::pow(ct, elem.q_e) : 0.0;
        for (int ip = 0; ip < nph; ++ip) {
            const double u = st * std::cos(p.phi[ip]);
            const double v = st * std::sin(p.phi[ip]);
            p.field[p.sphere_index(it, ip)] =
                prefactor * ef * sum_over_elements(layout, w, k0, u + u_off, v + v_off);
        }
    });

    if (norm == Normalization::PeakZeroDb) {
        double peak = 0.0;
        for (const auto& e : p.field)
            peak = std::max(peak, std::abs(e));
        if (peak > 0.0)
            for (auto& e : p.field)
                e /= peak;
    }
    return p;
}

double gain_prefactor(const ArrayLayout& layout, const Frequency& f) {
    const double a_cell = layout.pitch_x() * layout.pitch_y();
    const double lam = f.wavelength();
    return std::sqrt(4.0 * pi * a_cell / (lam * lam));
}

} // namespace

ElementModel::ElementModel(double exponent) : q_e(exponent) {
    if (!(q_e >= 0.0))
        throw std::domain_error("element pattern exponent must be >= 0");
}

double FarFieldPattern::value_db(size_t i) const { return 20.0 * std::log10(std::abs(field[i])); }

std::vector<std::complex<double>> cell_coefficients(const StateMap& map,
                                                    const UnitCellStateTable& table,
                                                    const Frequency& f) {
    std::vector<std::complex<double>> coeffs;
    coeffs.reserve(map.state.size());
    for (const auto& s : map.state)
        coeffs.push_back(table.coefficient_at(s, f).value());
    return coeffs;
}

FeedIllumination illuminate(const ArrayLayout& layout, const FeedSpec& feed,
                            const Frequency& f) {
    const double k0 = f.wavenumber();
    const double a_cell = layout.pitch_x() * layout.pitch_y();
    const double u0 = (2.0 * feed.q + 1.0) / (2.0 * pi); // unit total power
    FeedIllumination ill;
    ill.b.reserve(layout.size());
    ill.captured_power = 0.0;
    for (int i = 0; i < layout.size(); ++i) {
        const double r = feed.distance_to(layout.x(i), layout.y(i));
        const double cos_tf = feed.z / r;
        const double p = u0 * std::pow(cos_tf, 2.0 * feed.q) * a_cell * cos_tf / (r * r);
        ill.captured_power += p;
        const double ph = -k0 * r;
        ill.b.push_back(std::sqrt(p) * std::complex<double>(std::cos(ph), std::sin(ph)));
    }
    return ill;
}

FarFieldPattern scattered_pattern_coeffs(const ArrayLayout& layout,
                                         const std::vector<std::complex<double>>& coeffs,
                                         const Frequency& f, const Direction& incidence,
                                         const ElementModel& elem, const CutSpec& cut) {
    return evaluate(layout, coeffs, f, elem, incidence.u(), incidence.v(), 1.0,
                    Normalization::PeakZeroDb, cut);
}

FarFieldPattern scattered_pattern_coeffs(const ArrayLayout& layout,
                                         const std::vector<std::complex<double>>& coeffs,
                                         const Frequency& f, const Direction& incidence,
                                         const ElementModel& elem, const SphereSpec& sphere) {
    return evaluate(layout, coeffs, f, elem, incidence.u(), incidence.v(), 1.0,
                    Normalization::PeakZeroDb, sphere);
}

FarFieldPattern scattered_pattern(const ArrayLayout& layout, const StateMap& map,
                                  const UnitCellStateTable& table, const Frequency& f,
                                  const Direction& incidence, const ElementModel& elem,
                                  const CutSpec& cut) {
    return scattered_pattern_coeffs(layout, cell_coefficients(map, table, f), f, incidence, elem,
                                    cut);
}

FarFieldPattern scattered_pattern(const ArrayLayout& layout, const StateMap& map,
                                  const UnitCellStateTable& table, const Frequency& f,
                                  const Direction& incidence, const ElementModel& elem,
                                  const SphereSpec& sphere) {
    return scattered_pattern_coeffs(layout, cell_coefficients(map, table, f), f, incidence, elem,
                                    sphere);
}

namespace {

std::vector<std::complex<double>> transmit_weights(const ArrayLayout& layout,
                                                   const std::vector<std::complex<double>>& coeffs,
                                                   const Frequency& f, const FeedSpec& feed) {
    const FeedIllumination ill = illuminate(layout, feed, f);
    std::vector<std::complex<double>> w(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i)
        w[i] = ill.b[i] * coeffs[i];
    return w;
}

} // namespace

FarFieldPattern transmit_gain_pattern_coeffs(const ArrayLayout& layout,
                                             const std::vector<std::complex<double>>& coeffs,
                                             const Frequency& f, const FeedSpec& feed,
                                             const ElementModel& elem, const CutSpec& cut) {
    return evaluate(layout, transmit_weights(layout, coeffs, f, feed), f, elem, 0.0, 0.0,
                    gain_prefactor(layout, f), Normalization::AbsoluteGainDbi, cut);
}

FarFieldPattern transmit_gain_pattern_coeffs(const ArrayLayout& layout,
                                             const std::vector<std::complex<double>>& coeffs,
                                             const Frequency& f, const FeedSpec& feed,
                                             const ElementModel& elem, const SphereSpec& sphere) {
    return evaluate(layout, transmit_weights(layout, coeffs, f, feed), f, elem, 0.0, 0.0,
                    gain_prefactor(layout, f), Normalization::AbsoluteGainDbi, sphere);
}

namespace {

void require_transmissive(const UnitCellStateTable& table) {
    if (table.kind() != CellKind::Transmissive)
        throw std::invalid_argument(
            "cell-kind mismatch: transmit gain needs a transmissive state table");
}

} // namespace

FarFieldPattern transmit_gain_pattern(const ArrayLayout& layout, const StateMap& map,
                                      const UnitCellStateTable& table, const Frequency& f,
                                      const FeedSpec& feed, const ElementModel& elem,
                                      const CutSpec& cut) {
    require_transmissive(table);
    return transmit_gain_pattern_coeffs(layout, cell_coefficients(map, table, f), f, feed, elem,
                                        cut);
}

FarFieldPattern transmit_gain_pattern(const ArrayLayout& layout, const StateMap& map,
                                      const UnitCellStateTable& table, const Frequency& f,
                                      const FeedSpec& feed, const ElementModel& elem,
                                      const SphereSpec& sphere) {
    require_transmissive(table);
    return transmit_gain_pattern_coeffs(layout, cell_coefficients(map, table, f), f, feed, elem,
                                        sphere);
}

FarFieldPattern absolute_gain_pattern(const ArrayLayout& layout,
                                      const std::vector<std::complex<double>>& excitation,
                                      const Frequency& f, const ElementModel& elem,
                                      const CutSpec& cut) {
    return evaluate(layout, excitation, f, elem, 0.0, 0.0, gain_prefactor(layout, f),
                    Normalization::AbsoluteGainDbi, cut);
}

FarFieldPattern absolute_gain_pattern(const ArrayLayout& layout,
                                      const std::vector<std::complex<double>>& excitation,
                                      const Frequency& f, const ElementModel& elem,
                                      const SphereSpec& sphere) {
    return evaluate(layout, excitation, f, elem, 0.0, 0.0, gain_prefactor(layout, f),
                    Normalization::AbsoluteGainDbi, sphere);
}

PatternMetrics pattern_metrics(const FarFieldPattern& cut, const Direction& target) {
    if (cut.domain != FarFieldPattern::Domain::Cut)
        throw std::invalid_argument("pattern_metrics needs a phi-cut pattern");
    const size_t n = cut.size();
    if (n < 3)
        throw std::invalid_argument("pattern_metrics needs at least 3 samples");

    std::vector<double> v(n);
    for (size_t i = 0; i < n; ++i)
        v[i] = cut.value_db(i);

    PatternMetrics m;
    m.sll_db = std::numeric_limits<double>::quiet_NaN();

    const size_t im = static_cast<size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    if (im == 0 || im == n - 1) {
        m.well_defined = false; // monotone edge peak: no interior maximum
        return m;
    }

    // Parabolic refinement in dB around the max sample.
    const double y0 = v[im - 1], y1 = v[im], y2 = v[im + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    const double delta = (denom != 0.0) ? 0.5 * (y0 - y2) / denom : 0.0;
    const double step = cut.theta[im] - cut.theta[im - 1];
    m.peak_deg = rad2deg(cut.theta[im] + delta * step);
    m.peak_db = y1 - 0.25 * (y0 - y2) * delta;
    m.well_defined = true;

    // Null-to-null main beam: walk downhill from the peak on both sides.
    size_t left = im;
    while (left > 0 && v[left - 1] < v[left])
        --left;
    size_t right = im;
    while (right + 1 < n && v[right + 1] < v[right])
        ++right;

    // Highest local maximum outside the main beam (grid-edge lobes count).
    double best = -std::numeric_limits<double>::infinity();
    bool found = false;
    for (size_t i = 0; i < n; ++i) {
        if (i >= left && i <= right)
            continue;
        const bool lmax = (i == 0 || v[i] >= v[i - 1]) && (i == n - 1 || v[i] >= v[i + 1]);
        if (lmax && std::isfinite(v[i]) && v[i] > best) {
            best = v[i];
            found = true;
        }
    }
    if (found)
        m.sll_db = best - m.peak_db;

    // Half-power beamwidth from interpolated crossings of peak - 3.0103 dB.
    const double hp = m.peak_db - 10.0 * std::log10(2.0);
    double th_l = std::numeric_limits<double>::quiet_NaN();
    double th_r = std::numeric_limits<double>::quiet_NaN();
    for (size_t i = im; i > 0; --i) {
        if (v[i - 1] <= hp) {
            const double t = (hp - v[i - 1]) / (v[i] - v[i - 1]);
            th_l = cut.theta[i - 1] + t * (cut.theta[i] - cut.theta[i - 1]);
            break;
        }
    }
    for (size_t i = im; i + 1 < n; ++i) {
        if (v[i + 1] <= hp) {
            const double t = (v[i] - hp) / (v[i] - v[i + 1]);
            th_r = cut.theta[i] + t * (cut.theta[i + 1] - cut.theta[i]);
            break;
        }
    }
    m.hpbw_deg = rad2deg(th_r - th_l);

    // Signed target angle within this cut: +theta when the target azimuth
    // matches the cut azimuth, -theta on the opposite half-plane.
    const double sign = (std::cos(target.phi() - cut.cut_phi) >= 0.0) ? 1.0 : -1.0;
    m.pointing_error_deg = std::abs(m.peak_deg - sign * target.theta_deg());
    return m;
}

double directivity_dbi(const FarFieldPattern& sphere) {
    if (sphere.domain != FarFieldPattern::Domain::Sphere)
        throw std::invalid_argument("directivity needs a full-sphere pattern, not a cut");
    const size_t nth = sphere.theta.size();
    const size_t nph = sphere.phi.size();
    if (nth < 3 || nph < 4)
        throw std::invalid_argument("directivity sphere grid too coarse");

    double peak = 0.0;
    double integral = 0.0;
    const double dph = 2.0 * pi / static_cast<double>(nph);
    for (size_t it = 0; it < nth; ++it) {
        const double w_th = (it == 0 || it == nth - 1) ? 0.5 : 1.0; // trapezoid
        const double st = std::sin(sphere.theta[it]);
        double row = 0.0;
        for (size_t ip = 0; ip < nph; ++ip) {
            const double p2 = std::norm(sphere.field[sphere.sphere_index(it, ip)]);
            peak = std::max(peak, p2);
            row += p2;
        }
        const double dth = (it + 1 < nth) ? (sphere.theta[it + 1] - sphere.theta[it])
                                          : (sphere.theta[it] - sphere.theta[it - 1]);
        integral += w_th * st * row * dth * dph;
    }
    if (!(integral > 0.0))
        throw std::domain_error("directivity undefined for an all-zero pattern");
    return 10.0 * std::log10(4.0 * pi * peak / integral);
}

double fspl_db(const Frequency& f, double distance_m) {
    if (!(distance_m > 0.0))
        throw std::domain_error("path distance must be > 0");
    return 20.0 * std::log10(4.0 * pi * distance_m / f.wavelength());
}

std::string pattern_csv(const FarFieldPattern& p, const std::map<std::string, std::string>& meta) {
    std::string out;
    out += "# normalization=";
    out += (p.normalization == Normalization::PeakZeroDb) ? "peak0db" : "gain_dbi";
    out += "\n# frequency_ghz=" + format_g9(p.frequency_hz / 1e9) + "\n";
    if (p.domain == FarFieldPattern::Domain::Cut)
        out += "# cut_phi_deg=" + format_g9(rad2deg(p.cut_phi)) + "\n";
    for (const auto& [k, v] : meta)
        out += "# " + k + "=" + v + "\n";
    out += "theta_deg,phi_deg,value_db,re,im\n";
    if (p.domain == FarFieldPattern::Domain::Cut) {
        const std::string phi_deg = format_g9(rad2deg(p.cut_phi));
        for (size_t i = 0; i < p.size(); ++i)
            out += format_g9(rad2deg(p.theta[i])) + "," + phi_deg + "," +
                   format_g9(p.value_db(i)) + "," + format_g9(p.field[i].real()) + "," +
                   format_g9(p.field[i].imag()) + "\n";
    } else {
        for (size_t it = 0; it < p.theta.size(); ++it)
            for (size_t ip = 0; ip < p.phi.size(); ++ip) {
                const size_t i = p.sphere_index(it, ip);
                out += format_g9(rad2deg(p.theta[it])) + "," + format_g9(rad2deg(p.phi[ip])) +
                       "," + format_g9(p.value_db(i)) + "," + format_g9(p.field[i].real()) + "," +
                       format_g9(p.field[i].imag()) + "\n";
            }
    }
    return out;
}

void write_pattern_csv(const std::string& path, const FarFieldPattern& p,
                       const std::map<std::string, std::string>& meta) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out << pattern_csv(p, meta);
}

std::string metrics_json(const PatternMetrics& m) {
    auto num = [](double v) -> std::string {
        if (std::isnan(v))
            return "null";
        return format_g9(v);
    };
    std::string out = "{\n";
    out += "  \"well_defined\": " + std::string(m.well_defined ? "true" : "false") + ",\n";
    out += "  \"peak_deg\": " + num(m.peak_deg) + ",\n";
    out += "  \"peak_db\": " + num(m.peak_db) + ",\n";
    out += "  \"sll_db\": " + num(m.sll_db) + ",\n";
    out += "  \"hpbw_deg\": " + num(m.hpbw_deg) + ",\n";
    out += "  \"pointing_error_deg\": " + num(m.pointing_error_deg) + "\n";
    out += "}\n";
    return out;
}

} // namespace ris
