#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bellclone/bell.h"
#include "bellclone/bell_ops.h"
#include "bellclone/dense.h"
#include "bellclone/measures.h"

namespace bellclone {

/// Symbolic always runs. Dense adds the dense-oracle cross-checks and fails when the
/// register is too large for them; Both adds them whenever the register fits.
enum class Engine { Symbolic, Dense, Both };

Engine parse_engine(std::string_view text);
std::string to_string(Engine engine);

/// Ebit and classical-bit accounting for one protocol run, plus its LOCC
/// transcript. A shared |B1> counts as one ebit; separable Bell-diagonal mixtures
/// are prepared from shared randomness and cost nothing.
struct ResourceLedger {
    double ebits_consumed = 0;
    double ebits_distilled = 0;
    std::size_t classical_bits = 0;
    std::vector<Step> steps;

    void add_ops(std::span<const BellOp> ops);
    void add_local(Actor actor, std::string operation, std::vector<std::size_t> qubits);
    void add_classical(std::string operation, std::size_t bits);
    /// Appends `other` with its pair indices moved up by `pair_offset`.
    void absorb(const ResourceLedger &other, std::size_t pair_offset);
};

/// Throws std::logic_error if any local step touches a qubit of the other party
/// (standard pair layout: even qubits are Alice's, odd are Bob's), or if a
/// classical step touches qubits at all.
void audit_locc(const ResourceLedger &ledger);
bool is_locc(const ResourceLedger &ledger);

struct CrossCheck {
    std::string name;
    double value = 0;
    double tolerance = 0;
    bool passed = false;
};

/// `value <= tolerance`.
CrossCheck check_at_most(std::string name, double value, double tolerance);

struct ProtocolRun {
    BellEnsemble output;
    ResourceLedger ledger;
    std::vector<CrossCheck> checks;

    bool passed() const;
};

/// Local unitaries that bring a pair of Bell labels onto {B1, B3}.
struct PairReduction {
    std::array<BellLabel, 2> pair;
    std::array<BellLabel, 2> image;
    ComplexMatrix alice_unitary;
    ComplexMatrix bob_unitary;
    /// The same map as a sequence of single-pair ops on pair 0.
    std::vector<BellOp> ops;
};

/// The 24 single-pair op sequences realizing every permutation of the four Bell
/// labels: six local Clifford classes (words in bilateral Hadamard and phase) times
/// four Bob-side Paulis.
std::vector<std::vector<BellOp>> local_clifford_table();

/// First entry of local_clifford_table() mapping {first, second} onto {B1, B3},
/// certified on the dense oracle. Throws std::invalid_argument if first == second.
PairReduction pair_reduction_table(BellLabel first, BellLabel second);

/// 1 -> n cloning of a Bell state known to be one of `pair`, consuming n - 1 shared
/// |B1> pairs: reduce to {B1, B3}, bilateral C-NOT onto each ancilla, undo the
/// reduction on every pair. Throws std::invalid_argument if the input has support
/// outside `pair`.
ProtocolRun clone_pair_1_to_n(
    BellLabel input, std::array<BellLabel, 2> pair, std::size_t n, Engine engine = Engine::Symbolic);
/// Same protocol applied linearly to a one-pair mixture over `pair`.
ProtocolRun clone_pair_1_to_n(
    const BellEnsemble &input, std::array<BellLabel, 2> pair, std::size_t n, Engine engine = Engine::Symbolic);
/// Dense execution of the cloning circuit with the explicit reduction unitaries.
DenseState clone_pair_dense(const BellEnsemble &input, std::array<BellLabel, 2> pair, std::size_t n);

/// Prepares (1/4) sum_i P[B_i^(x)m] from m - 1 (odd m) or m - 2 (even m) ebits.
///
/// Odd m: P[B1]^(x)(m-1) (x) (1/2)(P[B1] + P[B2]); Bob applies sigma_x to all his
/// qubits with probability 1/2; bilateral C-NOT from every pair onto the last.
/// Even m: (1/2)(P[B1] + P[B3]) (x) P[B1]^(x)(m-2) (x) (1/2)(P[B1] + P[B2]);
/// bilateral C-NOT from the first pair onto pairs 2..m-1, then from every pair onto
/// the last.
ProtocolRun prepare_rho_m(std::size_t m, Engine engine = Engine::Symbolic);
/// The same circuit run on dense states (m <= 7).
DenseState prepare_rho_m_dense(std::size_t m);

/// Outcome-indexed corrections for teleportation through |B1>:
/// B1 -> I, B2 -> sigma_z, B3 -> sigma_x, B4 -> sigma_y.
int teleport_correction(BellLabel outcome);

/// Two-sided teleportation of a two-qubit state (Alice qubit, Bob qubit) through a
/// channel of M >= 2 Bell-pair slots. Alice Bell-measures (input, A1) and Bob
/// Bell-measures (input, B1); both outcomes are broadcast and each party applies
/// its correction to its qubit of every receiving pair 2..M. Returns the
/// outcome-averaged state of the receiving pairs.
DenseState teleport_to_receivers(const DenseState &channel, const DenseState &input);
/// The M = 2 case.
DenseState teleport_two_qubit(const DenseState &channel, const DenseState &input);

/// P[B1] on A1A2 times P[B1] on B1B2, in the (A1, B1, A2, B2) channel layout: two
/// independent perfect teleportations.
DenseState ideal_two_qubit_channel();

/// Analytic Choi operator of sigma_i (x) sigma_j -> delta_ij sigma_i (x) sigma_j,
/// as (1/4) sum_k (I (x) U_k) P[Omega] (I (x) U_k)^dagger with U_k = sigma_k (x) sigma_k.
ComplexMatrix pauli_diagonal_map_choi();
/// Choi operator of teleport_two_qubit through `channel`.
ComplexMatrix teleportation_choi(const DenseState &channel);

/// 1 -> n cloning of an unknown Bell state (or Bell-diagonal mixture with weights
/// `q`, indexed B1..B4) by teleportation through the prepared (n+1)-pair ancilla.
/// Output sum_k q_k P[B_k^(x)n]; costs n ebits for even n, n - 1 for odd n.
ProtocolRun clone_four_1_to_n(BellLabel input, std::size_t n, Engine engine = Engine::Symbolic);
ProtocolRun clone_four_1_to_n(std::span<const double> q, std::size_t n, Engine engine = Engine::Symbolic);
/// Dense teleportation of the input through to_dense of the prepared ancilla
/// (n <= 5).
DenseState clone_four_dense(std::span<const double> q, std::size_t n);

/// sum_i p_i P[B_i^(x)n] for odd n >= 3 and every p_i <= 1/2, prepared by cloning the
/// separable state sum_i p_i P[B_i]; costs n - 1 ebits.
ProtocolRun prepare_quasi_pure(std::span<const double> p, std::size_t n, Engine engine = Engine::Symbolic);

struct DistillBranch {
    int a_bit;
    double probability;
    BellEnsemble remainder;
};

struct DistillRun {
    std::vector<DistillBranch> branches;
    ResourceLedger ledger;
    std::vector<CrossCheck> checks;

    bool passed() const;
};

/// Distills sum_i p_i P[B_i^(x)n] (odd n >= 3): bilateral C-NOT from pairs 1..n-1
/// onto pair n, then discriminate {B1,B2} from {B3,B4} on pair n. Leaves
/// B1^(x)(n-1) or B3^(x)(n-1).
DistillRun distill_quasi_pure(const BellEnsemble &e, Engine engine = Engine::Symbolic);

/// Distills (1/2)(P[B1^(x)n] + P[B3^(x)n])-type mixtures (support in {B1^n, B3^n},
/// any n >= 2). The phase bits are already known, so the last pair is measured
/// directly.
DistillRun distill_two_string(const BellEnsemble &e, Engine engine = Engine::Symbolic);

struct SigmaRun {
    /// p P[B1] + (1-p) P[B2], followed by n - 1 copies of B1.
    BellEnsemble start;
    /// p P[B1^(x)n] + (1-p) P[B3^(x)n].
    BellEnsemble sigma_prime;
    /// p P[B1^(x)n] + (1-p) P[B2^(x)n].
    BellEnsemble sigma_n;
    /// Every op from `start` to `sigma_n`, in order.
    std::vector<BellOp> steps;
    /// steps[0 .. prime_step_count) take `start` to `sigma_prime`.
    std::size_t prime_step_count = 0;
};

SigmaRun build_sigma_n(double p, std::size_t n);

struct NecessityWitness {
    BellEnsemble input;
    BellEnsemble output;
    MeasureReport input_report;
    MeasureReport output_report;
};

/// Runs 1 -> 2 cloning of {B1, B2} linearly on (1/2)(P[B1] + P[B2]) and reports the
/// Alice:Bob log-negativity before and after.
NecessityWitness necessity_witness_two();

/// Clones the first pair of the Smolin state (1/4) sum_i P[B_i (x) B_i] and reports
/// Alice:Bob log-negativity of the input and of (1/4) sum_i P[B_i^(x)3].
NecessityWitness necessity_witness_four();

}  // namespace bellclone
