// oracle.hpp — Brute-force reference in the full 2^N_q ⊗ Fock space (N_q <= 3)
//
// Uses per-qubit sigma± and the field ladder operators directly, with no symmetry
// reduction, to cross-check the blocked engine. Layout matches lift_to_full: index =
// bits * (n_max + 1) + n, qubit 1 most significant, set bit = ground.

#pragma once

#include "cavrevive/errors.hpp"
#include "cavrevive/hilbert.hpp"
#include "cavrevive/observables.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace cavrevive::oracle {

inline constexpr int kMaxQubits = 3;
inline constexpr int kMaxCutoff = 300;

class FullState {
public:
    FullState(int n_qubits, int fock_cutoff, Vector amps)
        : n_qubits_(n_qubits), fock_cutoff_(fock_cutoff), amps_(std::move(amps)) {
        if (n_qubits_ < 1 || n_qubits_ > kMaxQubits) throw InvalidParameter("oracle: requires 1 <= N_q <= 3");
        if (fock_cutoff_ < 0 || fock_cutoff_ > kMaxCutoff) throw InvalidParameter("oracle: requires n_max <= 300");
        if (amps_.size() != size(n_qubits_, fock_cutoff_)) throw DimensionMismatch("oracle: wrong amplitude count");
    }

    static Eigen::Index size(int n_qubits, int fock_cutoff) {
        return static_cast<Eigen::Index>(1u << n_qubits) * (fock_cutoff + 1);
    }

    static FullState from_symmetric(const SymmetricState& psi) {
        return {psi.n_qubits(), psi.fock_cutoff(), lift_to_full(psi)};
    }

    // Product of per-qubit states (each as (c_e, c_g)) and a field vector.
    static FullState product(const std::vector<Eigen::Vector2cd>& qubits, const Vector& field) {
        const int nq = static_cast<int>(qubits.size());
        const int n_max = static_cast<int>(field.size()) - 1;
        Vector amps(size(nq, n_max));
        for (std::uint32_t bits = 0; bits < (1u << nq); ++bits) {
            cplx c = 1.0;
            for (int q = 0; q < nq; ++q) {
                const bool ground = (bits >> (nq - 1 - q)) & 1u;
                c *= qubits[static_cast<std::size_t>(q)](ground ? 1 : 0);
            }
            amps.segment(static_cast<Eigen::Index>(bits) * field.size(), field.size()) = c * field;
        }
        return {nq, n_max, std::move(amps)};
    }

    int n_qubits() const noexcept { return n_qubits_; }
    int fock_cutoff() const noexcept { return fock_cutoff_; }
    const Vector& amps() const noexcept { return amps_; }

private:
    int n_qubits_;
    int fock_cutoff_;
    Vector amps_;
};

// V|psi> with V = lambda sum_i (a sigma_i+ + a† sigma_i-), a† truncated at n_max.
inline FullState full_hamiltonian_apply(const ModelParams& params, const FullState& state) {
    const int nq = state.n_qubits();
    const int n_max = state.fock_cutoff();
    const int dim_f = n_max + 1;
    const Vector& in = state.amps();
    Vector out = Vector::Zero(in.size());
    for (std::uint32_t bits = 0; bits < (1u << nq); ++bits) {
        for (int n = 0; n <= n_max; ++n) {
            const cplx c = in(static_cast<Eigen::Index>(bits) * dim_f + n);
            if (c == cplx(0.0)) continue;
            for (int q = 0; q < nq; ++q) {
                const std::uint32_t mask = 1u << q;
                if (bits & mask) {
                    // ground: a sigma+ takes a photon and excites qubit q
                    if (n >= 1)
                        out(static_cast<Eigen::Index>(bits & ~mask) * dim_f + (n - 1)) +=
                            params.coupling * std::sqrt(static_cast<double>(n)) * c;
                } else if (n < n_max) {
                    out(static_cast<Eigen::Index>(bits | mask) * dim_f + (n + 1)) +=
                        params.coupling * std::sqrt(static_cast<double>(n + 1)) * c;
                }
            }
        }
    }
    return {nq, n_max, std::move(out)};
}

inline Matrix full_hamiltonian_matrix(const ModelParams& params, int n_qubits, int n_max) {
    const Eigen::Index d = FullState::size(n_qubits, n_max);
    Matrix h(d, d);
    for (Eigen::Index col = 0; col < d; ++col) {
        Vector e = Vector::Zero(d);
        e(col) = 1.0;
        h.col(col) = full_hamiltonian_apply(params, FullState(n_qubits, n_max, std::move(e))).amps();
    }
    return h;
}

// Dense eigendecomposition of the full interaction matrix, reusable across times.
class FullPropagator {
public:
    FullPropagator(const ModelParams& params, int n_qubits, int n_max)
        : n_qubits_(n_qubits), n_max_(n_max) {
        if (n_qubits < 1 || n_qubits > kMaxQubits) throw InvalidParameter("oracle: requires 1 <= N_q <= 3");
        if (n_max < 0 || n_max > kMaxCutoff) throw InvalidParameter("oracle: requires n_max <= 300");
        Eigen::SelfAdjointEigenSolver<Matrix> solver(full_hamiltonian_matrix(params, n_qubits, n_max));
        if (solver.info() != Eigen::Success) throw Error("oracle: eigensolve failed");
        energies_ = solver.eigenvalues();
        vectors_ = solver.eigenvectors();
    }

    const Eigen::VectorXd& spectrum() const noexcept { return energies_; }

    FullState evolve(const FullState& psi0, double t) const {
        if (psi0.n_qubits() != n_qubits_ || psi0.fock_cutoff() != n_max_)
            throw DimensionMismatch("oracle: state does not match propagator");
        Vector w = vectors_.adjoint() * psi0.amps();
        for (Eigen::Index k = 0; k < w.size(); ++k) w(k) *= std::polar(1.0, -energies_(k) * t);
        return {n_qubits_, n_max_, vectors_ * w};
    }

private:
    int n_qubits_;
    int n_max_;
    Eigen::VectorXd energies_;
    Matrix vectors_;
};

// Physical time t; params.coupling is already folded into the matrix.
inline FullState full_evolve(const ModelParams& params, const FullState& psi0, double t) {
    return FullPropagator(params, psi0.n_qubits(), psi0.fock_cutoff()).evolve(psi0, t);
}

// 2^N_q x 2^N_q qubit density matrix, Tr_F |psi><psi|.
inline Matrix reduce_qubits_full(const FullState& psi) {
    using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> m(psi.amps().data(), 1 << psi.n_qubits(), psi.fock_cutoff() + 1);
    return m * m.adjoint();
}

// Full-space vector of a symmetric qubit state (no field).
inline Vector qubit_state_full(const QubitPureState& s) {
    const int nq = s.n_qubits();
    Vector v(1 << nq);
    for (std::uint32_t bits = 0; bits < (1u << nq); ++bits) {
        const int ne = excited_count(bits, nq);
        v(bits) = s[ne] * std::exp(-0.5 * log_binomial(nq, ne));
    }
    return v;
}

} // namespace cavrevive::oracle
