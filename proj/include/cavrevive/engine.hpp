// engine.hpp — Excitation-blocked interaction Hamiltonian and exact propagation
//
// On resonance, V = lambda (a J+ + a† J-) conserves E = a†a + N_e, so the Dicke ⊗ Fock
// space splits into blocks spanned by (N_e, n = E - N_e). Each block is a real
// symmetric tridiagonal matrix with zero diagonal and couplings
//
//   <N_e+1, n-1| V |N_e, n> = lambda sqrt(n) sqrt((N_e+1)(N_q-N_e)).
//
// Blocks are diagonalized once; evolve(t) is then U exp(-i Lambda lambda t) U^T per
// block with no time stepping. Eigenvalues are stored in units of lambda.

#pragma once

#include "cavrevive/errors.hpp"
#include "cavrevive/hilbert.hpp"
#include "cavrevive/parallel.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

namespace cavrevive {

struct BasisPair {
    int n_excited{0};
    int photons{0};
};

struct ExcitationBlock {
    int excitation{0};
    std::vector<BasisPair> basis;          // ascending N_e
    std::vector<Eigen::Index> offsets;     // positions in the dicke-major amplitude vector
    Eigen::VectorXd couplings;             // sub-diagonal, units of lambda
    Eigen::VectorXd eigenvalues;           // ascending, units of lambda
    Eigen::MatrixXd eigenvectors;          // column per eigenvalue
    bool clipped{false};                   // some (N_e, E - N_e) removed by the Fock cutoff

    Eigen::Index dim() const { return static_cast<Eigen::Index>(basis.size()); }

    Eigen::MatrixXd matrix() const {
        const Eigen::Index d = dim();
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
        for (Eigen::Index i = 0; i + 1 < d; ++i) h(i, i + 1) = h(i + 1, i) = couplings(i);
        return h;
    }
};

inline ExcitationBlock build_block(const ModelParams& params, int excitation) {
    const int nq = params.n_qubits;
    const int n_max = params.fock_cutoff;
    if (n_max < 0) throw InvalidParameter("build_block: params must be resolved (fock_cutoff)");
    if (excitation < 0 || excitation > n_max + nq)
        throw InvalidParameter("build_block: excitation number out of range");

    ExcitationBlock block;
    block.excitation = excitation;
    const int ne_lo = std::max(0, excitation - n_max);
    const int ne_hi = std::min(nq, excitation);
    block.clipped = ne_lo > 0;
    for (int ne = ne_lo; ne <= ne_hi; ++ne) {
        block.basis.push_back({ne, excitation - ne});
        block.offsets.push_back(SymmetricState::index(ne, excitation - ne, n_max));
    }

    const Eigen::Index d = block.dim();
    block.couplings.resize(std::max<Eigen::Index>(d - 1, 0));
    for (Eigen::Index i = 0; i + 1 < d; ++i) {
        const auto [ne, n] = block.basis[static_cast<std::size_t>(i)];
        block.couplings(i) = std::sqrt(static_cast<double>(n)) *
                             std::sqrt(static_cast<double>(ne + 1) * (nq - ne));
    }

    if (d == 1) {
        block.eigenvalues = Eigen::VectorXd::Zero(1);
        block.eigenvectors = Eigen::MatrixXd::Identity(1, 1);
        return block;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(Eigen::VectorXd::Zero(d), block.couplings, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw Error("build_block: tridiagonal eigensolve failed for E = " + std::to_string(excitation));
    block.eigenvalues = solver.eigenvalues();
    block.eigenvectors = solver.eigenvectors();
    return block;
}

class BlockPropagator {
public:
    explicit BlockPropagator(const ModelParams& params) : params_(resolve(params)) {
        const int n_blocks = params_.fock_cutoff + params_.n_qubits + 1;
        blocks_.resize(static_cast<std::size_t>(n_blocks));
        parallel_for(blocks_.size(), [&](std::size_t e) {
            blocks_[e] = build_block(params_, static_cast<int>(e));
        });
    }

    const ModelParams& params() const noexcept { return params_; }
    const std::vector<ExcitationBlock>& blocks() const noexcept { return blocks_; }
    int n_qubits() const noexcept { return params_.n_qubits; }
    int fock_cutoff() const noexcept { return params_.fock_cutoff; }

    Eigen::Index max_block_dim() const {
        Eigen::Index d = 0;
        for (const auto& b : blocks_) d = std::max(d, b.dim());
        return d;
    }

    bool compatible(const SymmetricState& psi) const {
        return psi.n_qubits() == params_.n_qubits && psi.fock_cutoff() == params_.fock_cutoff;
    }

private:
    ModelParams params_;
    std::vector<ExcitationBlock> blocks_;
};

inline BlockPropagator build_propagator(const ModelParams& params) { return BlockPropagator(params); }

// State at physical time t (units of 1/lambda scaled by params.coupling).
inline SymmetricState evolve(const BlockPropagator& prop, const SymmetricState& psi0, double t) {
    if (!prop.compatible(psi0))
        throw DimensionMismatch("evolve: state dimensions do not match the propagator");
    const Vector& in = psi0.amps();
    Vector out(in.size());
    const double phase_rate = prop.params().coupling * t;
    for (const auto& block : prop.blocks()) {
        const Eigen::Index d = block.dim();
        Vector c(d);
        for (Eigen::Index i = 0; i < d; ++i) c(i) = in(block.offsets[static_cast<std::size_t>(i)]);
        Vector w = block.eigenvectors.transpose() * c;
        for (Eigen::Index k = 0; k < d; ++k) w(k) *= std::polar(1.0, -block.eigenvalues(k) * phase_rate);
        c.noalias() = block.eigenvectors * w;
        for (Eigen::Index i = 0; i < d; ++i) out(block.offsets[static_cast<std::size_t>(i)]) = c(i);
    }
    return {psi0.n_qubits(), psi0.fock_cutoff(), std::move(out)};
}

// evolve at every time in an ascending grid; each entry is computed from psi0
// directly, so element k is identical to evolve(prop, psi0, times[k]).
inline std::vector<SymmetricState> evolve_series(const BlockPropagator& prop, const SymmetricState& psi0,
                                                 std::span<const double> times) {
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!std::isfinite(times[k])) throw InvalidParameter("evolve_series: non-finite time");
        if (k > 0 && times[k] < times[k - 1]) throw InvalidParameter("evolve_series: times must ascend");
    }
    std::vector<SymmetricState> out(times.size(), psi0);
    parallel_for(times.size(), [&](std::size_t k) { out[k] = evolve(prop, psi0, times[k]); });
    return out;
}

// <a†a + N_e>, conserved by the dynamics.
inline double excitation_expectation(const SymmetricState& psi) {
    double e = 0.0;
    for (int ne = 0; ne <= psi.n_qubits(); ++ne)
        for (int n = 0; n <= psi.fock_cutoff(); ++n) e += (ne + n) * std::norm(psi.at(ne, n));
    return e;
}

inline double excitation_variance(const SymmetricState& psi) {
    const double mean = excitation_expectation(psi);
    double v = 0.0;
    for (int ne = 0; ne <= psi.n_qubits(); ++ne)
        for (int n = 0; n <= psi.fock_cutoff(); ++n) {
            const double d = ne + n - mean;
            v += d * d * std::norm(psi.at(ne, n));
        }
    return v;
}

} // namespace cavrevive
