#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bellclone/bell_label.h"
#include "bellclone/dense.h"

namespace bellclone {

/// A probability distribution over Bell strings of a fixed length: the state
/// sum_s p_s P[|s_1> (x) ... (x) |s_N>], with Bell pair k occupying qubits
/// (2k, 2k+1), Alice first.
///
/// Always canonical: entries sorted lexicographically by label bits, duplicates
/// merged, probabilities below 1e-15 pruned, total renormalized to 1
/// (totals already within 1e-14 of 1 are left as is).
class BellEnsemble {
   public:
    struct Entry {
        BellString labels;
        double probability;

        bool operator==(const Entry &) const = default;
    };

    /// Throws std::invalid_argument on negative probabilities, mismatched string
    /// lengths, empty strings, or a total that is not 1 within 1e-12.
    explicit BellEnsemble(std::vector<Entry> entries);

    static BellEnsemble point(BellString labels);
    /// Single-pair Bell-diagonal state sum_i q_i P[B_i].
    static BellEnsemble bell_diagonal(std::span<const double> weights);

    std::size_t num_pairs() const {
        return entries_.front().labels.size();
    }
    std::size_t num_qubits() const {
        return 2 * num_pairs();
    }
    const std::vector<Entry> &entries() const {
        return entries_;
    }
    /// 0 for strings outside the support.
    double probability(const BellString &labels) const;
    bool is_point_mass() const {
        return entries_.size() == 1;
    }

    /// One line per entry: `probability a1b1 a2b2 ... aNbN`, probability with 17
    /// significant digits.
    std::string to_text() const;
    /// Inverse of to_text. Throws std::invalid_argument on malformed input.
    static BellEnsemble from_text(std::string_view text);

    bool operator==(const BellEnsemble &) const = default;

   private:
    std::vector<Entry> entries_;
};

/// Same support and probabilities within `tolerance`.
bool approx_equal(const BellEnsemble &first, const BellEnsemble &second, double tolerance = kCircuitTolerance);

/// Product state: strings of `second` appended to strings of `first`.
BellEnsemble tensor(const BellEnsemble &first, const BellEnsemble &second);

/// Convex combination. Throws std::invalid_argument on mismatched lengths or
/// weights that do not sum to 1.
BellEnsemble mix(std::span<const BellEnsemble> ensembles, std::span<const double> weights);

/// Bilateral C-NOT from pair `source` to pair `target` (Alice and Bob each apply a
/// C-NOT between their halves). On labels:
///     source (a_s, b_s xor b_t), target (a_s xor a_t, b_t).
BellEnsemble bxor(const BellEnsemble &e, std::size_t source, std::size_t target);

/// Hadamard on both halves of a pair: (a, b) -> (b, a).
BellEnsemble bilateral_hadamard(const BellEnsemble &e, std::size_t pair);

/// S on Alice's half and S* on Bob's half: (a, b) -> (a, a xor b).
BellEnsemble bilateral_phase(const BellEnsemble &e, std::size_t pair);

/// A Pauli on one half of a pair: sigma_x flips a, sigma_z flips b, sigma_y both.
/// The same label action holds for either side at the projector level.
BellEnsemble one_sided_pauli(const BellEnsemble &e, std::size_t pair, int pauli_index, Party side);

struct SetBranch {
    /// 0 for {B1, B2}, 1 for {B3, B4}.
    int a_bit;
    double probability;
    /// Remaining pairs; empty when the measured pair was the only one.
    std::optional<BellEnsemble> remainder;
};

/// Both parties measure their half of `pair` in the computational basis and compare
/// results, revealing the pair's a-bit. The pair is removed from the conditional
/// ensembles. Zero-probability branches are omitted.
std::vector<SetBranch> discriminate_sets(const BellEnsemble &e, std::size_t pair);

/// Dense rendering sum_s p_s P[|s>]. Throws std::invalid_argument beyond 14 qubits.
DenseState to_dense(const BellEnsemble &e, QubitRole role = QubitRole::Ancilla);

/// Uniform strings B_i^(x)m, the family sum_i q_i P[B_i^(x)m].
BellEnsemble uniform_copies(std::span<const double> weights, std::size_t copies);

/// If every string is of the form B_i^(x)N, the weights q_i (indexed B1..B4).
std::optional<std::vector<double>> uniform_string_weights(const BellEnsemble &e);

}  // namespace bellclone
