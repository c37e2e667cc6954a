#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bellclone/bell_label.h"

namespace bellclone {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Circuit identities hold up to rounding.
inline constexpr double kCircuitTolerance = 1e-12;
/// Anything derived from an eigendecomposition.
inline constexpr double kSpectralTolerance = 1e-9;
/// Pure branches are tracked up to this register size.
inline constexpr std::size_t kMaxBranchQubits = 14;
/// Full density matrices are only ever built up to this register size.
inline constexpr std::size_t kMaxDensityQubits = 10;

enum class QubitRole { SourceState, Ancilla, Input };

struct QubitLabel {
    Party party = Party::Alice;
    std::size_t pair = 0;
    QubitRole role = QubitRole::Ancilla;

    bool operator==(const QubitLabel &) const = default;
};

/// Labels for `num_pairs` Bell pairs in the standard layout: pair by pair, Alice's
/// qubit before Bob's.
std::vector<QubitLabel> pair_layout(std::size_t num_pairs, QubitRole role = QubitRole::Ancilla);

/// A normalized state vector carrying its mixture weight. Qubit 0 is the most
/// significant bit of the amplitude index.
struct PureBranch {
    ComplexVector amplitudes;
    double weight = 1.0;
};

/// A density operator stored as a weighted mixture of pure branches.
///
/// The full 2^n x 2^n matrix is only materialized on request (and only for
/// n <= kMaxDensityQubits); everything else works branch by branch.
class DenseState {
   public:
    /// Validates normalization, weights, and that every qubit is labeled.
    /// Throws std::invalid_argument.
    DenseState(std::vector<PureBranch> branches, std::vector<QubitLabel> labels);

    static DenseState pure(ComplexVector amplitudes, std::vector<QubitLabel> labels);

    std::size_t num_qubits() const {
        return labels_.size();
    }
    const std::vector<PureBranch> &branches() const {
        return branches_;
    }
    const std::vector<QubitLabel> &labels() const {
        return labels_;
    }
    DenseState relabeled(std::vector<QubitLabel> labels) const;

    /// sum_k w_k |psi_k><psi_k|. Throws std::length_error above kMaxDensityQubits.
    ComplexMatrix density_matrix() const;

   private:
    std::vector<PureBranch> branches_;
    std::vector<QubitLabel> labels_;
};

/// Bipartition of a register into two non-empty, complementary qubit sets.
struct Cut {
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;

    /// `left` given explicitly; `right` is its complement in [0, num_qubits).
    static Cut from_left(std::size_t num_qubits, std::vector<std::size_t> left);
    /// Alice's qubits versus Bob's qubits, read off the state's labels.
    static Cut alice_bob(const DenseState &state);
};

PureBranch bell_state(BellLabel label);

/// I, sigma_x, sigma_y, sigma_z for index 0..3.
ComplexMatrix pauli(int index);
ComplexMatrix hadamard();
/// diag(1, i).
ComplexMatrix phase_gate();
/// Control is the first qubit.
ComplexMatrix cnot();

/// Kronecker product of two branch mixtures (branch cross product). Labels of
/// `second` have their pair indices shifted past the pairs of `first`.
DenseState tensor(const DenseState &first, const DenseState &second);

/// Same density operator re-expressed by its eigenbranches, which keeps branch
/// counts small after measurements. Requires num_qubits <= kMaxDensityQubits.
DenseState compress(const DenseState &state);

/// Convex combination of states on the same register.
DenseState mix(std::span<const DenseState> states, std::span<const double> weights);

/// Applies `u` to `targets` (targets[0] is the most significant bit of u's index).
/// Throws std::invalid_argument for non-unitary `u` or bad targets.
DenseState apply_unitary(const DenseState &state, const ComplexMatrix &u, std::span<const std::size_t> targets);

struct BellOutcome {
    BellLabel outcome;
    double probability;
    DenseState post_state;
};

/// Projective measurement of two qubits in the Bell basis. The measured qubits are
/// left projected onto |B_m>; zero-probability outcomes are omitted.
std::vector<BellOutcome> bell_measurement(const DenseState &state, std::size_t first, std::size_t second);

struct ParityOutcome {
    int parity;
    double probability;
    DenseState post_state;
};

/// Both qubits measured in the computational basis, only their parity kept.
/// Zero-probability outcomes are omitted.
std::vector<ParityOutcome> parity_measurement(const DenseState &state, std::size_t first, std::size_t second);

/// Reduced state on `keep` (in ascending qubit order). Throws on an empty set.
DenseState partial_trace(const DenseState &state, std::span<const std::size_t> keep);

/// Transposes the `cut.right` subsystem. Requires num_qubits <= kMaxDensityQubits.
ComplexMatrix partial_transpose(const DenseState &state, const Cut &cut);

/// Eigenvalues of a Hermitian matrix, ascending.
Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix &m);

/// log2 of the trace norm of the partial transpose.
double log_negativity(const DenseState &state, const Cut &cut);

/// <target| rho |target>.
double fidelity(const DenseState &state, const ComplexVector &target);

/// (1/2) || rho - sigma ||_1, computed in the span of the branches so that it
/// works for any register size that fits in branches.
double trace_distance(const DenseState &first, const DenseState &second);

/// Maximum absolute entry of the difference of two matrices.
double max_abs_difference(const ComplexMatrix &first, const ComplexMatrix &second);

using TwoQubitChannel = std::function<DenseState(const DenseState &)>;

/// Choi operator (id (x) channel)(|Omega><Omega|) on reference (x) system with
/// |Omega> = (1/2) sum_i |i>|i>, so the identity channel gives a rank-1 projector.
/// The channel's linearity is checked on a fixed pseudo-random input; throws
/// std::runtime_error if the reconstruction is off by more than 1e-8.
ComplexMatrix choi_matrix(const TwoQubitChannel &channel);

}  // namespace bellclone
