#pragma once

#include <complex>

#include "ris/core.hpp"

namespace ris {

/// Two-state RF switch: both states modeled as a parallel RC pair.
enum class SwitchState { On, Off };

struct SwitchCircuit {
    double r_on;  // ohms
    double c_on;  // farads
    double r_off; // ohms
    double c_off; // farads

    SwitchCircuit(double r_on_ohm, double c_on_farad, double r_off_ohm, double c_off_farad);
};

/// Z = R / (1 + j*w*R*C) with (R, C) picked by the switch state.
ComplexCoefficient switch_impedance(const SwitchCircuit& circ, SwitchState state,
                                    const Frequency& f);

/// Standard switch figure of merit f_c = 1 / (2*pi*R_on*C_off).
Frequency switch_cutoff_frequency(const SwitchCircuit& circ);

struct TwoPortLoss {
    double il_db;  // insertion loss, ON state
    double iso_db; // isolation, OFF state
};

/// -20*log10|S21| of a series impedance Z in a z0 line: S21 = 2*z0/(2*z0 + Z).
double series_s21_loss_db(std::complex<double> z, double z0);

/// Series-mounted two-port convention: ON impedance gives insertion loss,
/// OFF impedance gives isolation.
TwoPortLoss switch_insertion_loss_isolation(const SwitchCircuit& circ, const Frequency& f,
                                            double z0 = 50.0);

} // namespace ris
