// attractor.hpp — Attractor states, basin of attraction, cat decompositions, timescales
//
// For a coherent field of phase theta the attractors are the product states
//
//   |att±> = 2^{-N_q/2} (e^{-i theta}|e> ± i|g>)^{⊗N_q}  =  |beta = ±i e^{i theta}, N_q>  (up to phase)
//
// reached from the basin family below at t* = t_r / (2 N_q). Basin states carry the
// phase e^{+i k theta} on the Dicke level with k = N_g ground qubits; with this sign
// the two-qubit member is a (e^{-i theta}|ee> + e^{i theta}|gg>) + s (|eg> + |ge>)
// up to a global phase and every member flows to |att+> for any theta.

#pragma once

#include "cavrevive/engine.hpp"
#include "cavrevive/errors.hpp"
#include "cavrevive/hilbert.hpp"
#include "cavrevive/observables.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

namespace cavrevive {

struct CharacteristicTimes {
    double t_collapse{0.0};         // sqrt(2) / lambda
    double t_revival{0.0};          // 2 pi sqrt(nbar) / lambda
    double t_attractor{0.0};        // t_revival / (2 N_q)
    double t_attractor_minus{0.0};  // 3 t_revival / 2, meaningful for N_q = 1
};

inline CharacteristicTimes characteristic_times(const ModelParams& params) {
    validate(params);
    if (!(params.nbar > 0.0)) throw InvalidParameter("characteristic_times: revival time needs nbar > 0");
    CharacteristicTimes t;
    t.t_collapse = std::sqrt(2.0) / params.coupling;
    t.t_revival = 2.0 * kPi * std::sqrt(params.nbar) / params.coupling;
    t.t_attractor = t.t_revival / (2.0 * params.n_qubits);
    t.t_attractor_minus = 1.5 * t.t_revival;
    return t;
}

enum class AttractorSign { plus, minus };

// Dicke amplitudes of 2^{-N/2} (e^{-i theta}|e> ± i|g>)^{⊗N}:
// sqrt(C(N, N_e)) e^{-i theta N_e} (±i)^{N_g} / 2^{N/2}.
inline QubitPureState attractor_state(AttractorSign sign, double theta, int n_qubits) {
    if (n_qubits < 1) throw InvalidParameter("attractor_state: n_qubits must be >= 1");
    const cplx g_coeff = sign == AttractorSign::plus ? kI : -kI;
    Vector v(n_qubits + 1);
    for (int ne = 0; ne <= n_qubits; ++ne) {
        const int ng = n_qubits - ne;
        const double mag = std::exp(0.5 * log_binomial(n_qubits, ne) - 0.5 * n_qubits * std::log(2.0));
        v(ne) = mag * std::polar(1.0, -theta * ne) * std::pow(g_coeff, ng);
    }
    return {n_qubits, std::move(v)};
}

struct BasinParameter {
    cplx a{0.0};
    int n_qubits{2};
    double theta{0.0};
};

inline double basin_radius(int n_qubits) { return std::pow(2.0, -0.5 * (n_qubits - 1)); }

// s = sqrt(2^{1-N_q} - |a|^2); throws BasinOutOfRange outside the admissible disc.
inline double basin_complement(const BasinParameter& p) {
    if (p.n_qubits < 1) throw InvalidParameter("basin: n_qubits must be >= 1");
    const double r2 = std::pow(2.0, 1 - p.n_qubits);
    const double a2 = std::norm(p.a);
    if (!std::isfinite(a2) || a2 > r2 * (1.0 + 1e-12))
        throw BasinOutOfRange("basin parameter |a| exceeds 1/sqrt(2^(N_q-1))");
    // Rounding in |a|^2 on the rim would otherwise leave s ~ 1e-8.
    const double rest = r2 - a2;
    return rest <= 8.0 * std::numeric_limits<double>::epsilon() * r2 ? 0.0 : std::sqrt(rest);
}

// Amplitude of Dicke level N_e: A e^{i k theta} sqrt(C(N_q, N_e)), k = N_q - N_e,
// A = a for even k and s for odd k.
inline QubitPureState basin_state(const BasinParameter& p) {
    const double s = basin_complement(p);
    const int nq = p.n_qubits;
    Vector v(nq + 1);
    for (int ne = 0; ne <= nq; ++ne) {
        const int k = nq - ne;
        const cplx amp = (k % 2 == 0) ? p.a : cplx(s);
        v(ne) = amp * std::polar(std::exp(0.5 * log_binomial(nq, ne)), k * p.theta);
    }
    return {nq, std::move(v)};
}

struct CatDecomposition {
    cplx weight_plus;   // on |+beta, N_q>
    cplx weight_minus;  // on |-beta, N_q>
    cplx beta;          // e^{i theta}
};

// basin_state(p) = weight_plus |beta> + weight_minus |-beta>, weights sqrt(2^{N_q-2}) (a ± s).
inline CatDecomposition cat_decomposition(const BasinParameter& p) {
    const double s = basin_complement(p);
    const double scale = std::pow(2.0, 0.5 * (p.n_qubits - 2));
    return {scale * (p.a + s), scale * (p.a - s), std::polar(1.0, p.theta)};
}

inline QubitPureState reconstruct(const CatDecomposition& cat, int n_qubits) {
    Vector v = cat.weight_plus * spin_coherent(cat.beta, n_qubits).amps() +
               cat.weight_minus * spin_coherent(-cat.beta, n_qubits).amps();
    return {n_qubits, std::move(v)};
}

// Large-n̄ field state at t*:
//   sqrt(2^{N_q-2}) [ (a - s) e^{i pi n̄/2} |i alpha> - (a + s) e^{-i pi n̄/2} |-i alpha> ],
// renormalized on the truncated Fock space.
inline Vector predicted_field_state(const BasinParameter& p, const ModelParams& params) {
    const ModelParams resolved = resolve(params);
    const double s = basin_complement(p);
    const cplx alpha = std::polar(std::sqrt(resolved.nbar), -resolved.theta);
    const Vector up = coherent_amps(kI * alpha, resolved.fock_cutoff);
    const Vector down = coherent_amps(-kI * alpha, resolved.fock_cutoff);
    const double deficit = 1.0 - up.squaredNorm();
    if (deficit >= kLeakageTolerance)
        throw CutoffTooSmall("predicted_field_state: coherent branches exceed the cutoff", deficit);
    const double half_turn = 0.5 * kPi * resolved.nbar;
    Vector field = (p.a - s) * std::polar(1.0, half_turn) * up - (p.a + s) * std::polar(1.0, -half_turn) * down;
    field *= std::pow(2.0, 0.5 * (p.n_qubits - 2));
    const double norm = field.norm();
    if (norm == 0.0) throw InvalidParameter("predicted_field_state: branches cancel");
    return field / norm;
}

// P(att+) at each time, using the propagator's theta.
inline std::vector<double> attractor_probability_series(const BlockPropagator& prop, const SymmetricState& psi0,
                                                        std::span<const double> times,
                                                        AttractorSign sign = AttractorSign::plus) {
    const QubitPureState target = attractor_state(sign, prop.params().theta, prop.n_qubits());
    const auto states = evolve_series(prop, psi0, times);
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(state_probability(s, target));
    return out;
}

} // namespace cavrevive
