// hilbert.hpp — Dicke ⊗ Fock basis, model parameters and pure-state constructors
//
// Qubit register states live in the symmetric (Dicke) subspace |N_q, m>, stored by
// the number of excited qubits N_e = m + N_q/2 in ascending order. The field is a
// Fock space truncated at n_max photons.
//
// Spin coherent states follow the Radcliffe form
//
//   |beta, N_q> = (1 + |beta|^2)^(-N_q/2) * sum_{m=-N_q/2}^{N_q/2} sqrt(C(N_q, N_q/2+m)) beta^(N_q/2-m) |N_q, m>
//
// with m running over the full range -N_q/2 .. N_q/2, so beta = 0 is the all-excited
// state.

#pragma once

#include "cavrevive/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>

namespace cavrevive {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// Coherent-state truncation deficit above which a cutoff is rejected.
inline constexpr double kLeakageTolerance = 1e-8;

// ------------------------------ model parameters ------------------------------

// Resonant, uniformly coupled Tavis–Cummings model. Evolution is carried out in the
// frame rotating at omega, so omega only documents the physical setup.
struct ModelParams {
    int n_qubits{1};
    double coupling{1.0};   // lambda, 1/time
    double omega{0.0};      // cavity (= qubit) frequency, unused by the dynamics
    double nbar{0.0};       // mean photon number of the initial coherent field
    double theta{0.0};      // coherent-state phase, alpha = sqrt(nbar) e^{-i theta}
    int fock_cutoff{-1};    // n_max; negative selects the default
};

inline int default_fock_cutoff(double nbar) {
    return static_cast<int>(std::ceil(nbar + 10.0 * std::sqrt(nbar) + 20.0));
}

inline int minimum_fock_cutoff(double nbar) {
    return static_cast<int>(std::ceil(nbar + 6.0 * std::sqrt(nbar)));
}

inline void validate(const ModelParams& p) {
    if (p.n_qubits < 1) throw InvalidParameter("n_qubits must be >= 1");
    if (!(p.coupling > 0.0) || !std::isfinite(p.coupling))
        throw InvalidParameter("coupling must be positive and finite");
    if (!(p.nbar >= 0.0) || !std::isfinite(p.nbar))
        throw InvalidParameter("nbar must be >= 0 and finite");
    if (!std::isfinite(p.theta)) throw InvalidParameter("theta must be finite");
    if (!std::isfinite(p.omega)) throw InvalidParameter("omega must be finite");
}

// Validates and fills in the Fock cutoff: default when unset, raised to the
// minimum n̄ + 6√n̄ when the requested value is smaller.
inline ModelParams resolve(ModelParams p) {
    validate(p);
    if (p.fock_cutoff < 0)
        p.fock_cutoff = default_fock_cutoff(p.nbar);
    else if (p.fock_cutoff < minimum_fock_cutoff(p.nbar))
        p.fock_cutoff = minimum_fock_cutoff(p.nbar);
    return p;
}

// ------------------------------- Dicke indexing -------------------------------

// Dicke level stored as N_e; m = N_e - N_q/2 is available on demand.
struct DickeIndex {
    int n_excited{0};

    double m(int n_qubits) const { return n_excited - 0.5 * n_qubits; }
    int n_ground(int n_qubits) const { return n_qubits - n_excited; }
    static DickeIndex from_m(double m, int n_qubits) {
        return {static_cast<int>(std::lround(m + 0.5 * n_qubits))};
    }
};

inline double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// ------------------------------- state types ----------------------------------

class QubitPureState {
public:
    QubitPureState(int n_qubits, Vector amps) : n_qubits_(n_qubits), amps_(std::move(amps)) {
        if (n_qubits_ < 1) throw InvalidParameter("QubitPureState: n_qubits must be >= 1");
        if (amps_.size() != n_qubits_ + 1)
            throw DimensionMismatch("QubitPureState: expected N_q+1 Dicke amplitudes");
    }

    int n_qubits() const noexcept { return n_qubits_; }
    const Vector& amps() const noexcept { return amps_; }
    cplx operator[](int n_excited) const { return amps_(n_excited); }
    double norm() const { return amps_.norm(); }

private:
    int n_qubits_;
    Vector amps_;
};

// |<a|b>|, the comparison used everywhere since constructions differ by global phases.
inline double overlap_magnitude(const QubitPureState& a, const QubitPureState& b) {
    if (a.n_qubits() != b.n_qubits()) throw DimensionMismatch("overlap: qubit count differs");
    return std::abs(a.amps().dot(b.amps()));
}

// Amplitudes over Dicke ⊗ Fock, dicke-major: index = N_e * (n_max + 1) + n, so each
// Dicke level owns a contiguous field vector.
class SymmetricState {
public:
    SymmetricState(int n_qubits, int fock_cutoff, Vector amps)
        : n_qubits_(n_qubits), fock_cutoff_(fock_cutoff), amps_(std::move(amps)) {
        if (n_qubits_ < 1 || fock_cutoff_ < 0)
            throw InvalidParameter("SymmetricState: invalid dimensions");
        if (amps_.size() != size(n_qubits_, fock_cutoff_))
            throw DimensionMismatch("SymmetricState: amplitude vector has wrong length");
    }

    static Eigen::Index size(int n_qubits, int fock_cutoff) {
        return static_cast<Eigen::Index>(n_qubits + 1) * (fock_cutoff + 1);
    }
    static Eigen::Index index(int n_excited, int photons, int fock_cutoff) {
        return static_cast<Eigen::Index>(n_excited) * (fock_cutoff + 1) + photons;
    }

    int n_qubits() const noexcept { return n_qubits_; }
    int fock_cutoff() const noexcept { return fock_cutoff_; }
    int field_dim() const noexcept { return fock_cutoff_ + 1; }
    const Vector& amps() const noexcept { return amps_; }

    cplx at(int n_excited, int photons) const {
        return amps_(index(n_excited, photons, fock_cutoff_));
    }

    // Unnormalized field vector conditioned on Dicke level N_e.
    auto field_slice(int n_excited) const {
        return amps_.segment(static_cast<Eigen::Index>(n_excited) * field_dim(), field_dim());
    }

    // (N_q+1) x (n_max+1) view, row = Dicke level.
    auto as_matrix() const {
        using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        return Eigen::Map<const RowMajor>(amps_.data(), n_qubits_ + 1, field_dim());
    }

    double norm() const { return amps_.norm(); }

private:
    int n_qubits_;
    int fock_cutoff_;
    Vector amps_;
};

// Probability in photon numbers n >= n_max - margin.
inline double leakage(const SymmetricState& psi, int margin = 2) {
    const int first = std::max(0, psi.fock_cutoff() - margin);
    double p = 0.0;
    for (int ne = 0; ne <= psi.n_qubits(); ++ne)
        for (int n = first; n <= psi.fock_cutoff(); ++n) p += std::norm(psi.at(ne, n));
    return p;
}

// ------------------------------ field states ----------------------------------

// Truncated, unrenormalized coherent amplitudes e^{-|alpha|^2/2} alpha^n / sqrt(n!).
// Magnitudes are accumulated in the log domain so large n̄ does not underflow.
inline Vector coherent_amps(cplx alpha, int n_max) {
    if (n_max < 0) throw InvalidParameter("coherent_amps: n_max must be >= 0");
    Vector out = Vector::Zero(n_max + 1);
    const double r = std::abs(alpha);
    if (r == 0.0) {
        out(0) = 1.0;
        return out;
    }
    const double log_r = std::log(r);
    const double phase = std::arg(alpha);
    double log_mag = -0.5 * r * r;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) log_mag += log_r - 0.5 * std::log(static_cast<double>(n));
        out(n) = std::polar(std::exp(log_mag), phase * n);
    }
    return out;
}

// Coherent field |alpha>, alpha = sqrt(nbar) e^{-i theta}, renormalized after
// truncation provided the discarded weight is below kLeakageTolerance.
inline Vector coherent_field_amps(double nbar, double theta, int n_max) {
    if (!(nbar >= 0.0)) throw InvalidParameter("coherent_field_amps: nbar must be >= 0");
    Vector amps = coherent_amps(std::polar(std::sqrt(nbar), -theta), n_max);
    const double deficit = 1.0 - amps.squaredNorm();
    if (deficit >= kLeakageTolerance)
        throw CutoffTooSmall("coherent state does not fit below n_max = " + std::to_string(n_max),
                             deficit);
    amps /= amps.norm();
    return amps;
}

// ------------------------------ qubit states ----------------------------------

inline QubitPureState dicke_state(int n_qubits, int n_excited) {
    if (n_excited < 0 || n_excited > n_qubits)
        throw InvalidParameter("dicke_state: N_e out of range");
    Vector v = Vector::Zero(n_qubits + 1);
    v(n_excited) = 1.0;
    return {n_qubits, std::move(v)};
}

inline QubitPureState ground_state(int n_qubits) { return dicke_state(n_qubits, 0); }

// Spin coherent state at a point of the Bloch sphere. polar = 0 is all excited;
// equivalent to beta = tan(polar/2) e^{-i azimuth}. Stays finite at both poles.
inline QubitPureState spin_coherent_at(double polar, double azimuth, int n_qubits) {
    if (n_qubits < 1) throw InvalidParameter("spin_coherent: n_qubits must be >= 1");
    const double c = std::cos(0.5 * polar);
    const double s = std::sin(0.5 * polar);
    Vector v(n_qubits + 1);
    for (int ne = 0; ne <= n_qubits; ++ne) {
        const int ng = n_qubits - ne;
        double mag;
        if ((ne > 0 && c == 0.0) || (ng > 0 && s == 0.0)) {
            mag = 0.0;
        } else {
            double log_mag = 0.5 * log_binomial(n_qubits, ne);
            if (ne > 0) log_mag += ne * std::log(std::abs(c));
            if (ng > 0) log_mag += ng * std::log(std::abs(s));
            mag = std::exp(log_mag);
            if ((ne % 2 == 1 && c < 0.0) != (ng % 2 == 1 && s < 0.0)) mag = -mag;
        }
        v(ne) = std::polar(mag, -azimuth * ng);
    }
    return {n_qubits, std::move(v)};
}

inline QubitPureState spin_coherent(cplx beta, int n_qubits) {
    if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag()))
        throw InvalidParameter("spin_coherent: beta must be finite");
    return spin_coherent_at(2.0 * std::atan(std::abs(beta)), -std::arg(beta), n_qubits);
}

// ------------------------------ composite states ------------------------------

inline SymmetricState symmetric_product(const QubitPureState& qubit, const Vector& field) {
    if (field.size() < 1) throw DimensionMismatch("symmetric_product: empty field vector");
    const int n_max = static_cast<int>(field.size()) - 1;
    Vector amps(SymmetricState::size(qubit.n_qubits(), n_max));
    for (int ne = 0; ne <= qubit.n_qubits(); ++ne)
        amps.segment(static_cast<Eigen::Index>(ne) * field.size(), field.size()) = qubit[ne] * field;
    return {qubit.n_qubits(), n_max, std::move(amps)};
}

// ------------------------- full 2^N_q ⊗ Fock layout ---------------------------
//
// Qubit-bitstring-major: index = bits * (n_max + 1) + n. Qubit 1 is the most
// significant bit and a set bit means ground, so for two qubits the order is
// |ee>, |eg>, |ge>, |gg>.

inline constexpr int kMaxEmbedQubits = 12;

inline int excited_count(std::uint32_t bits, int n_qubits) {
    int ground = 0;
    for (int q = 0; q < n_qubits; ++q) ground += static_cast<int>((bits >> q) & 1u);
    return n_qubits - ground;
}

inline Vector lift_to_full(const SymmetricState& psi) {
    const int nq = psi.n_qubits();
    if (nq > kMaxEmbedQubits) throw InvalidParameter("lift_to_full: N_q too large");
    const int dim_f = psi.field_dim();
    const std::uint32_t n_bits = 1u << nq;
    Vector full = Vector::Zero(static_cast<Eigen::Index>(n_bits) * dim_f);
    for (std::uint32_t bits = 0; bits < n_bits; ++bits) {
        const int ne = excited_count(bits, nq);
        const double w = std::exp(-0.5 * log_binomial(nq, ne));
        full.segment(static_cast<Eigen::Index>(bits) * dim_f, dim_f) = w * psi.field_slice(ne);
    }
    return full;
}

// Projects a full-space vector onto the Dicke subspace; throws NotSymmetric when the
// discarded component has norm >= 1e-10.
inline SymmetricState embed_full_to_symmetric(const Vector& full, int n_qubits, int n_max) {
    if (n_qubits < 1 || n_qubits > kMaxEmbedQubits)
        throw InvalidParameter("embed_full_to_symmetric: requires 1 <= N_q <= 12");
    const int dim_f = n_max + 1;
    const std::uint32_t n_bits = 1u << n_qubits;
    if (full.size() != static_cast<Eigen::Index>(n_bits) * dim_f)
        throw DimensionMismatch("embed_full_to_symmetric: vector length != 2^N_q (n_max+1)");

    Vector amps = Vector::Zero(SymmetricState::size(n_qubits, n_max));
    for (std::uint32_t bits = 0; bits < n_bits; ++bits) {
        const int ne = excited_count(bits, n_qubits);
        const double w = std::exp(-0.5 * log_binomial(n_qubits, ne));
        amps.segment(static_cast<Eigen::Index>(ne) * dim_f, dim_f) +=
            w * full.segment(static_cast<Eigen::Index>(bits) * dim_f, dim_f);
    }
    SymmetricState sym(n_qubits, n_max, std::move(amps));
    const double residual = (full - lift_to_full(sym)).norm();
    if (residual >= 1e-10)
        throw NotSymmetric("state has weight outside the symmetric subspace", residual);
    return sym;
}

} // namespace cavrevive
