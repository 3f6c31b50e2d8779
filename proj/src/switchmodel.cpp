#include "ris/switchmodel.hpp"

#include <cmath>

namespace ris {

SwitchCircuit::SwitchCircuit(double r_on_ohm, double c_on_farad, double r_off_ohm,
                             double c_off_farad)
    : r_on(r_on_ohm), c_on(c_on_farad), r_off(r_off_ohm), c_off(c_off_farad) {
    if (!(r_on > 0.0) || !(c_on > 0.0) || !(r_off > 0.0) || !(c_off > 0.0))
        throw std::domain_error("SwitchCircuit R and C values must be > 0");
    if (!(r_off > r_on))
        throw std::domain_error("SwitchCircuit requires r_off > r_on");
}

ComplexCoefficient switch_impedance(const SwitchCircuit& circ, SwitchState state,
                                    const Frequency& f) {
    const double r = (state == SwitchState::On) ? circ.r_on : circ.r_off;
    const double c = (state == SwitchState::On) ? circ.c_on : circ.c_off;
    const double w = 2.0 * pi * f.hertz();
    const std::complex<double> z = r / std::complex<double>(1.0, w * r * c);
    return ComplexCoefficient::from_complex(z);
}

Frequency switch_cutoff_frequency(const SwitchCircuit& circ) {
    return Frequency(1.0 / (2.0 * pi * circ.r_on * circ.c_off));
}

double series_s21_loss_db(std::complex<double> z, double z0) {
    if (!(z0 > 0.0))
        throw std::domain_error("reference impedance z0 must be > 0");
    const std::complex<double> s21 = (2.0 * z0) / (2.0 * z0 + z);
    return -20.0 * std::log10(std::abs(s21));
}

TwoPortLoss switch_insertion_loss_isolation(const SwitchCircuit& circ, const Frequency& f,
                                            double z0) {
    const std::complex<double> z_on = switch_impedance(circ, SwitchState::On, f).value();
    const std::complex<double> z_off = switch_impedance(circ, SwitchState::Off, f).value();
    return TwoPortLoss{series_s21_loss_db(z_on, z0), series_s21_loss_db(z_off, z0)};
}

} // namespace ris
