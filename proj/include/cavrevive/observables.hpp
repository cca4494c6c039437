// observables.hpp — Reduced density matrices, entropy, tangles and Q functions

#pragma once

#include "cavrevive/errors.hpp"
#include "cavrevive/hilbert.hpp"
#include "cavrevive/parallel.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cavrevive {

using Matrix = Eigen::MatrixXcd;

// Eigenvalues in [-kClipThreshold, 0) are treated as truncation noise.
inline constexpr double kClipThreshold = 1e-10;
inline constexpr double kNegativeEigenvalueLimit = 1e-8;

// -------------------------------- density matrices ----------------------------

class QubitDensityMatrix {
public:
    QubitDensityMatrix(int n_qubits, Matrix rho) : n_qubits_(n_qubits), rho_(std::move(rho)) {
        if (rho_.rows() != n_qubits_ + 1 || rho_.cols() != n_qubits_ + 1)
            throw DimensionMismatch("QubitDensityMatrix: expected (N_q+1) x (N_q+1)");
    }

    static QubitDensityMatrix pure(const QubitPureState& s) {
        return {s.n_qubits(), s.amps() * s.amps().adjoint()};
    }

    int n_qubits() const noexcept { return n_qubits_; }
    const Matrix& rho() const noexcept { return rho_; }

private:
    int n_qubits_;
    Matrix rho_;
};

// Basis |ee>, |eg>, |ge>, |gg>.
class TwoQubitDensityMatrix {
public:
    explicit TwoQubitDensityMatrix(Matrix rho) : rho_(std::move(rho)) {
        if (rho_.rows() != 4 || rho_.cols() != 4)
            throw DimensionMismatch("TwoQubitDensityMatrix: expected 4 x 4");
    }

    static TwoQubitDensityMatrix pure(const Eigen::Vector4cd& c) {
        return TwoQubitDensityMatrix(Matrix(c * c.adjoint()));
    }

    const Matrix& rho() const noexcept { return rho_; }

private:
    Matrix rho_;
};

inline Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw InvalidDensity("eigenvalue solve failed");
    return solver.eigenvalues();
}

// Hermiticity, unit trace and positivity at the module tolerances.
inline void check_density(const Matrix& rho, const char* who) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw InvalidDensity(std::string(who) + ": matrix is not Hermitian");
    if (std::abs(rho.trace() - cplx(1.0)) > 1e-10)
        throw InvalidDensity(std::string(who) + ": trace differs from 1");
    if (hermitian_eigenvalues(rho).minCoeff() < -kNegativeEigenvalueLimit)
        throw InvalidDensity(std::string(who) + ": negative eigenvalue");
}

// rho[m, m'] = sum_n psi[m, n] psi*[m', n]
inline QubitDensityMatrix reduce_qubits(const SymmetricState& psi) {
    const auto m = psi.as_matrix();
    Matrix rho = m * m.adjoint();
    return {psi.n_qubits(), std::move(rho)};
}

// Schmidt spectrum seen from the field: squared singular values of the Dicke x Fock
// amplitude matrix, i.e. the nonzero eigenvalues of Tr_q |psi><psi| without forming
// the (n_max+1)^2 field density matrix.
inline Eigen::VectorXd field_spectrum(const SymmetricState& psi) {
    Eigen::BDCSVD<Matrix> svd(Matrix(psi.as_matrix().transpose()));
    return svd.singularValues().array().square();
}

inline double entropy_of_spectrum(const Eigen::VectorXd& p) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p(i) < -kNegativeEigenvalueLimit) throw InvalidDensity("entropy: negative eigenvalue");
        if (p(i) > kClipThreshold) s -= p(i) * std::log(p(i));
    }
    return s;
}

// von Neumann entropy in nats.
inline double entropy(const QubitDensityMatrix& rho) {
    return entropy_of_spectrum(hermitian_eigenvalues(rho.rho()));
}

inline double field_entropy(const SymmetricState& psi) { return entropy_of_spectrum(field_spectrum(psi)); }

inline double state_probability(const QubitDensityMatrix& rho, const QubitPureState& target) {
    if (rho.n_qubits() != target.n_qubits())
        throw DimensionMismatch("state_probability: qubit count differs");
    return target.amps().dot(rho.rho() * target.amps()).real();
}

inline double state_probability(const SymmetricState& psi, const QubitPureState& target) {
    if (psi.n_qubits() != target.n_qubits())
        throw DimensionMismatch("state_probability: qubit count differs");
    // sum_n |<target, n|psi>|^2
    const Vector field = psi.as_matrix().transpose() * target.amps().conjugate();
    return field.squaredNorm();
}

// <f| rho_F |f> for a normalized field vector f.
inline double field_state_probability(const SymmetricState& psi, const Vector& field) {
    if (field.size() != psi.field_dim()) throw DimensionMismatch("field_state_probability: length");
    const Vector proj = psi.as_matrix() * field.conjugate();
    return proj.squaredNorm();
}

// -------------------------------- two-qubit tangles ---------------------------

// C_ee, C_eg, C_ge, C_gg of a symmetric two-qubit state: |m=0> = (|eg> + |ge>)/sqrt(2).
inline Eigen::Vector4cd two_qubit_amplitudes(const QubitPureState& s) {
    if (s.n_qubits() != 2) throw InvalidParameter("two_qubit_amplitudes: requires N_q = 2");
    const double r = 1.0 / std::sqrt(2.0);
    return {s[2], r * s[1], r * s[1], s[0]};
}

// tau = 4 |C_ee C_gg - C_eg C_ge|^2
inline double pure_tangle(const Eigen::Vector4cd& c) {
    const double tau = 4.0 * std::norm(c(0) * c(3) - c(1) * c(2));
    return std::clamp(tau, 0.0, 1.0);
}

inline double pure_tangle(const QubitPureState& s) {
    if (s.n_qubits() != 2) throw InvalidParameter("pure_tangle: requires N_q = 2");
    return pure_tangle(two_qubit_amplitudes(s));
}

// Squared Wootters concurrence. The mu_i are taken as eigenvalues of the Hermitian
// sqrt(rho) rho~ sqrt(rho), which share the spectrum of rho rho~.
inline double mixed_tangle(const TwoQubitDensityMatrix& state) {
    const Matrix& rho = state.rho();
    check_density(rho, "mixed_tangle");

    // Extended precision keeps the square roots of near-zero eigenvalues small for pure input.
    using LCplx = std::complex<long double>;
    using LMatrix = Eigen::Matrix<LCplx, 4, 4>;
    const LMatrix lrho = rho.cast<LCplx>();
    Eigen::SelfAdjointEigenSolver<LMatrix> es(lrho);
    const auto p = es.eigenvalues().cwiseMax(0.0L).cwiseSqrt().eval();
    const LMatrix sqrt_rho = es.eigenvectors() * p.asDiagonal() * es.eigenvectors().adjoint();

    LMatrix yy = LMatrix::Zero();
    yy(0, 3) = -1.0L;
    yy(1, 2) = 1.0L;
    yy(2, 1) = 1.0L;
    yy(3, 0) = -1.0L;
    const LMatrix flipped = yy * lrho.conjugate() * yy;
    LMatrix r = sqrt_rho * flipped * sqrt_rho;
    r = (0.5L * (r + r.adjoint())).eval();

    Eigen::SelfAdjointEigenSolver<LMatrix> er(r, Eigen::EigenvaluesOnly);
    Eigen::Vector4d mu = er.eigenvalues().cwiseMax(0.0L).cwiseSqrt().cast<double>();
    std::sort(mu.data(), mu.data() + mu.size(), std::greater<>());
    const double c = std::max(0.0, mu(0) - mu(1) - mu(2) - mu(3));
    return std::clamp(c * c, 0.0, 1.0);
}

inline TwoQubitDensityMatrix symmetric_to_two_qubit(const QubitDensityMatrix& rho) {
    if (rho.n_qubits() != 2) throw InvalidParameter("symmetric_to_two_qubit: requires N_q = 2");
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Matrix<cplx, 4, 3> t = Eigen::Matrix<cplx, 4, 3>::Zero();
    t(0, 2) = 1.0;   // ee <- N_e = 2
    t(1, 1) = r;     // eg <- N_e = 1
    t(2, 1) = r;     // ge <- N_e = 1
    t(3, 0) = 1.0;   // gg <- N_e = 0
    return TwoQubitDensityMatrix(Matrix(t * rho.rho() * t.adjoint()));
}

// -------------------------------- Q functions ---------------------------------

// Values on a rectilinear grid. Field: axis0 = Re beta, axis1 = Im beta.
// Spin: axis0 = polar angle, axis1 = azimuth. values(i, j) sits at (axis0[i], axis1[j]).
struct PhaseSpaceGrid {
    enum class Kind { field, spin };

    Kind kind{Kind::field};
    std::vector<double> axis0;
    std::vector<double> axis1;
    Eigen::MatrixXd values;
    double radial_scale{1.0};  // field: sqrt(nbar) for plots rescaled to the unit circle
};

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(std::max(n, 0)));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
}

// Square grid with `points` samples per axis over |Re beta|, |Im beta| <= radius.
inline std::pair<std::vector<double>, std::vector<double>> field_grid_axes(double radius, int points) {
    return {linspace(-radius, radius, points), linspace(-radius, radius, points)};
}

inline double default_field_radius(double nbar) { return nbar > 0.0 ? 1.6 * std::sqrt(nbar) : 3.0; }
inline constexpr int kDefaultFieldGrid = 201;
inline constexpr int kDefaultSpinGrid = 181;  // polar samples; azimuth uses 2n - 1

// Equiangular sphere grid: polar in [0, pi], azimuth in [0, 2 pi] with both ends kept.
inline std::pair<std::vector<double>, std::vector<double>> spin_grid_axes(int polar_points) {
    return {linspace(0.0, kPi, polar_points), linspace(0.0, 2.0 * kPi, 2 * polar_points - 1)};
}

namespace detail {

// Probe coherent vectors for one column of Im beta values, packed as columns.
inline Matrix probe_block(double re, std::span<const double> ims, int n_max,
                          const std::vector<double>& half_log_factorial) {
    Matrix probes(n_max + 1, static_cast<Eigen::Index>(ims.size()));
    for (std::size_t j = 0; j < ims.size(); ++j) {
        const cplx beta(re, ims[j]);
        const double r = std::abs(beta);
        auto col = probes.col(static_cast<Eigen::Index>(j));
        if (r == 0.0) {
            col.setZero();
            col(0) = 1.0;
            continue;
        }
        const double log_r = std::log(r);
        const double phase = std::arg(beta);
        for (int n = 0; n <= n_max; ++n)
            col(n) = std::polar(std::exp(-0.5 * r * r + n * log_r - half_log_factorial[static_cast<std::size_t>(n)]),
                                phase * n);
    }
    return probes;
}

}  // namespace detail

// Husimi Q(beta) = (1/pi) sum_m |<beta|phi_m>|^2 with phi_m the field slice at Dicke
// level m. The probe needs no renormalization: rho_F has no weight above n_max.
inline PhaseSpaceGrid field_q_function(const SymmetricState& psi, std::vector<double> re_axis,
                                       std::vector<double> im_axis, double radial_scale = 1.0) {
    const int n_max = psi.fock_cutoff();
    const double leak = leakage(psi);
    if (leak >= kLeakageTolerance) throw CutoffTooSmall("field_q_function: state reaches the Fock cutoff", leak);
    double max_r2 = 0.0;
    for (double x : re_axis)
        for (double y : im_axis) max_r2 = std::max(max_r2, x * x + y * y);
    if (max_r2 > n_max)
        throw CutoffTooSmall("field_q_function: probe |beta|^2 exceeds n_max = " + std::to_string(n_max),
                             max_r2 - n_max);

    std::vector<double> half_log_factorial(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) half_log_factorial[static_cast<std::size_t>(n)] = 0.5 * std::lgamma(n + 1.0);

    PhaseSpaceGrid grid;
    grid.kind = PhaseSpaceGrid::Kind::field;
    grid.radial_scale = radial_scale;
    grid.values.resize(static_cast<Eigen::Index>(re_axis.size()), static_cast<Eigen::Index>(im_axis.size()));
    const Matrix slices = psi.as_matrix();
    parallel_for(re_axis.size(), [&](std::size_t i) {
        const Matrix probes = detail::probe_block(re_axis[i], im_axis, n_max, half_log_factorial);
        const Matrix overlaps = slices.conjugate() * probes;  // conj(<beta|phi_m>)
        for (Eigen::Index j = 0; j < overlaps.cols(); ++j)
            grid.values(static_cast<Eigen::Index>(i), j) = overlaps.col(j).squaredNorm() / kPi;
    });
    grid.axis0 = std::move(re_axis);
    grid.axis1 = std::move(im_axis);
    return grid;
}

// Spin Q_s = (N_q+1)/(4 pi) <Omega|rho|Omega>, |Omega> the spin coherent state at
// (polar, azimuth); normalized so the sphere integral is 1.
inline PhaseSpaceGrid spin_q_function(const QubitDensityMatrix& rho, std::vector<double> polar_axis,
                                      std::vector<double> azimuth_axis) {
    const int nq = rho.n_qubits();
    const double norm = (nq + 1) / (4.0 * kPi);
    PhaseSpaceGrid grid;
    grid.kind = PhaseSpaceGrid::Kind::spin;
    grid.values.resize(static_cast<Eigen::Index>(polar_axis.size()), static_cast<Eigen::Index>(azimuth_axis.size()));
    parallel_for(polar_axis.size(), [&](std::size_t i) {
        Matrix probes(nq + 1, static_cast<Eigen::Index>(azimuth_axis.size()));
        for (std::size_t j = 0; j < azimuth_axis.size(); ++j)
            probes.col(static_cast<Eigen::Index>(j)) = spin_coherent_at(polar_axis[i], azimuth_axis[j], nq).amps();
        const Matrix rp = rho.rho() * probes;
        for (Eigen::Index j = 0; j < probes.cols(); ++j)
            grid.values(static_cast<Eigen::Index>(i), j) =
                std::max(0.0, probes.col(j).dot(rp.col(j)).real()) * norm;
    });
    grid.axis0 = std::move(polar_axis);
    grid.axis1 = std::move(azimuth_axis);
    return grid;
}

// Integral of the grid values: rectangle rule over the field plane, or the sphere
// integral with sin(polar) weight, trapezoid in polar and periodic in azimuth.
inline double integrate(const PhaseSpaceGrid& g) {
    if (g.axis0.size() < 2 || g.axis1.size() < 2) return 0.0;
    if (g.kind == PhaseSpaceGrid::Kind::field) {
        const double dx = g.axis0[1] - g.axis0[0];
        const double dy = g.axis1[1] - g.axis1[0];
        return g.values.sum() * dx * dy;
    }
    const double dth = g.axis0[1] - g.axis0[0];
    const double span = g.axis1.back() - g.axis1.front();
    const bool closed = std::abs(span - 2.0 * kPi) < 1e-12;
    const Eigen::Index n_az = static_cast<Eigen::Index>(g.axis1.size()) - (closed ? 1 : 0);
    const double dph = 2.0 * kPi / static_cast<double>(n_az);
    double total = 0.0;
    for (Eigen::Index i = 0; i < g.values.rows(); ++i) {
        const double w = (i == 0 || i + 1 == g.values.rows()) ? 0.5 : 1.0;
        total += w * std::sin(g.axis0[static_cast<std::size_t>(i)]) * g.values.row(i).head(n_az).sum();
    }
    return total * dth * dph;
}

} // namespace cavrevive
