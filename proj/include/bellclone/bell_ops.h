#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bellclone/bell.h"
#include "bellclone/dense.h"

namespace bellclone {

enum class Actor { Alice, Bob, Classical };

std::string to_string(Actor actor);

/// One entry of an LOCC transcript. Local steps list the register qubits they
/// touch; classical steps list nothing and carry a bit count instead.
struct Step {
    Actor actor;
    std::string operation;
    std::vector<std::size_t> qubits;
    std::size_t classical_bits = 0;
};

/// A Bell-diagonal-preserving local gate acting on one or two Bell pairs. Each op
/// has an exact label-rewriting action and a dense circuit; the two agree at the
/// projector level.
struct BellOp {
    enum class Kind { Bxor, Hadamard, Phase, Pauli };

    Kind kind = Kind::Hadamard;
    std::size_t pair = 0;    // source pair for Bxor
    std::size_t target = 0;  // Bxor only
    int pauli_index = 0;     // Pauli only
    Party side = Party::Alice;
    bool adjoint = false;  // Phase only: S^dagger (x) S instead of S (x) S*

    static BellOp bxor(std::size_t source, std::size_t target);
    static BellOp hadamard(std::size_t pair);
    static BellOp phase(std::size_t pair);
    static BellOp pauli(std::size_t pair, int pauli_index, Party side);

    BellOp inverse() const;
    /// Same op with every pair index moved up by `offset`.
    BellOp shifted(std::size_t offset) const;
    std::string describe() const;
    /// The Alice-local and Bob-local gates this op consists of.
    std::vector<Step> local_steps() const;
};

BellEnsemble apply(const BellEnsemble &e, const BellOp &op);
DenseState apply(const DenseState &state, const BellOp &op);

BellEnsemble run(const BellEnsemble &e, std::span<const BellOp> ops);
DenseState run(const DenseState &state, std::span<const BellOp> ops);

/// Reversed sequence of inverted ops.
std::vector<BellOp> inverse(std::span<const BellOp> ops);

}  // namespace bellclone
