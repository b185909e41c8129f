#pragma once

#include <array>
#include <vector>

#include "hvdp/ode.hpp"

namespace hvdp {

// Two oscillators with quartic coupling eps w1^2 w2^2 q1^2 q2^2. By default
// the linear terms are w_i q_i^2 / 2 (natural frequency sqrt(w_i)); with
// quadratic_frequency they are w_i^2 q_i^2 / 2.
struct CoupledParams {
    double omega1 = 1.0;
    double omega2 = 1.0;
    double eps = 0.0;
    bool quadratic_frequency = false;

    double nu1() const;  // natural frequency of oscillator 1
    double nu2() const;
    // Coupling in the (alpha, beta) chart: eps w1^2 w2^2 / (nu1^2 nu2^2).
    double kappa() const;
};
void validate(const CoupledParams& cp);

struct CoupledCart {
    double q1 = 0.0, q2 = 0.0, p1 = 0.0, p2 = 0.0;
};

struct CoupledAlphaBeta {
    double alpha1 = 0.0, alpha2 = 0.0, beta1 = 0.0, beta2 = 0.0;
};

CoupledCart coupled_rhs(const CoupledCart& s, const CoupledParams& cp);
double coupled_energy(const CoupledCart& s, const CoupledParams& cp);

// q = sqrt(2 alpha)/nu sin(nu (t + beta)), p = sqrt(2 alpha) cos(nu (t + beta)).
CoupledCart alphabeta_to_cart(const CoupledAlphaBeta& s, double t, const CoupledParams& cp);
// beta is returned in (-pi/nu, pi/nu]; callers unwrap.
CoupledAlphaBeta cart_to_alphabeta(const CoupledCart& s, double t, const CoupledParams& cp);

enum class AveragedForm { resonant, nonresonant };

// First-order averaged flow. The resonant form keeps the slow
// cos 2((nu1 - nu2) t + nu1 beta1 - nu2 beta2) term; the nonresonant form
// drops it (K1 = alpha1 alpha2).
CoupledAlphaBeta averaged_rhs(const CoupledAlphaBeta& s, double t, const CoupledParams& cp,
                              AveragedForm form = AveragedForm::resonant);

// Secular phase rates (beta1', beta2') for K1 = alpha1 alpha2.
std::array<double, 2> nonresonant_prediction(double alpha1, double alpha2, const CoupledParams& cp);

// |nu1 - nu2| < 5 eps max(alpha) / min(nu).
bool near_resonance(double alpha1, double alpha2, const CoupledParams& cp);

struct CompareConfig {
    CoupledAlphaBeta initial{1.0, 1.0, 0.0, 0.0};
    ode::IntegratorConfig integrator{1e-11, 1e-11};
    int samples = 2000;
    bool automatic_form = true;  // pick the form by near_resonance
    AveragedForm form = AveragedForm::resonant;
};

struct CompareReport {
    AveragedForm form = AveragedForm::resonant;
    double horizon = 0.0;
    double alpha_deviation = 0.0;  // sup over samples of max_i |alpha_i full - averaged|
    double phase_deviation = 0.0;  // sup of max_i nu_i |beta_i full - averaged|, radians
    double energy_drift = 0.0;     // relative drift of the coupled Hamiltonian
    std::vector<double> times;
    std::vector<CoupledAlphaBeta> full;
    std::vector<CoupledAlphaBeta> averaged;
};

// Integrates the full and averaged systems from the same (alpha, beta) at t = 0.
CompareReport compare(const CoupledParams& cp, double horizon, const CompareConfig& cfg = {});

}  // namespace hvdp
