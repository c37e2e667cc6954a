#include "bellclone/bell_ops.h"

#include <stdexcept>

namespace bellclone {

namespace {

std::size_t qubit_of(std::size_t pair, Party side) {
    return 2 * pair + (side == Party::Bob ? 1 : 0);
}

DenseState apply_single(const DenseState &state, const ComplexMatrix &u, std::size_t qubit) {
    std::size_t targets[1] = {qubit};
    return apply_unitary(state, u, targets);
}

const char *pauli_name(int index) {
    static const char *names[4] = {"I", "X", "Y", "Z"};
    return names[index];
}

}  // namespace

std::string to_string(Actor actor) {
    switch (actor) {
        case Actor::Alice:
            return "alice";
        case Actor::Bob:
            return "bob";
        case Actor::Classical:
            return "classical";
    }
    return "?";
}

BellOp BellOp::bxor(std::size_t source, std::size_t target) {
    if (source == target) {
        throw std::invalid_argument("bilateral C-NOT needs distinct source and target pairs");
    }
    BellOp op;
    op.kind = Kind::Bxor;
    op.pair = source;
    op.target = target;
    return op;
}

BellOp BellOp::hadamard(std::size_t pair) {
    BellOp op;
    op.kind = Kind::Hadamard;
    op.pair = pair;
    return op;
}

BellOp BellOp::phase(std::size_t pair) {
    BellOp op;
    op.kind = Kind::Phase;
    op.pair = pair;
    return op;
}

BellOp BellOp::pauli(std::size_t pair, int pauli_index, Party side) {
    if (pauli_index < 1 || pauli_index > 3) {
        throw std::invalid_argument("one-sided Pauli index must be 1..3");
    }
    BellOp op;
    op.kind = Kind::Pauli;
    op.pair = pair;
    op.pauli_index = pauli_index;
    op.side = side;
    return op;
}

BellOp BellOp::inverse() const {
    BellOp op = *this;
    if (kind == Kind::Phase) {
        op.adjoint = !adjoint;
    }
    return op;
}

BellOp BellOp::shifted(std::size_t offset) const {
    BellOp op = *this;
    op.pair += offset;
    if (kind == Kind::Bxor) {
        op.target += offset;
    }
    return op;
}

std::string BellOp::describe() const {
    std::string p = std::to_string(pair + 1);
    switch (kind) {
        case Kind::Bxor:
            return "bxor " + p + "->" + std::to_string(target + 1);
        case Kind::Hadamard:
            return "hadamard " + p;
        case Kind::Phase:
            return std::string(adjoint ? "phase-dagger " : "phase ") + p;
        case Kind::Pauli:
            return std::string("pauli ") + pauli_name(pauli_index) + (side == Party::Alice ? " alice " : " bob ") + p;
    }
    return "?";
}

std::vector<Step> BellOp::local_steps() const {
    std::size_t a = qubit_of(pair, Party::Alice);
    std::size_t b = qubit_of(pair, Party::Bob);
    switch (kind) {
        case Kind::Bxor: {
            std::size_t ta = qubit_of(target, Party::Alice);
            std::size_t tb = qubit_of(target, Party::Bob);
            return {{Actor::Alice, "cnot", {a, ta}}, {Actor::Bob, "cnot", {b, tb}}};
        }
        case Kind::Hadamard:
            return {{Actor::Alice, "h", {a}}, {Actor::Bob, "h", {b}}};
        case Kind::Phase:
            if (adjoint) {
                return {{Actor::Alice, "s_dag", {a}}, {Actor::Bob, "s", {b}}};
            }
            return {{Actor::Alice, "s", {a}}, {Actor::Bob, "s_dag", {b}}};
        case Kind::Pauli: {
            std::string name = pauli_name(pauli_index);
            if (side == Party::Alice) {
                return {{Actor::Alice, name, {a}}};
            }
            return {{Actor::Bob, name, {b}}};
        }
    }
    return {};
}

BellEnsemble apply(const BellEnsemble &e, const BellOp &op) {
    switch (op.kind) {
        case BellOp::Kind::Bxor:
            return bxor(e, op.pair, op.target);
        case BellOp::Kind::Hadamard:
            return bilateral_hadamard(e, op.pair);
        case BellOp::Kind::Phase:
            return bilateral_phase(e, op.pair);
        case BellOp::Kind::Pauli:
            return one_sided_pauli(e, op.pair, op.pauli_index, op.side);
    }
    throw std::logic_error("unknown Bell op");
}

DenseState apply(const DenseState &state, const BellOp &op) {
    std::size_t a = qubit_of(op.pair, Party::Alice);
    std::size_t b = qubit_of(op.pair, Party::Bob);
    switch (op.kind) {
        case BellOp::Kind::Bxor: {
            std::size_t alice[2] = {a, qubit_of(op.target, Party::Alice)};
            std::size_t bob[2] = {b, qubit_of(op.target, Party::Bob)};
            return apply_unitary(apply_unitary(state, cnot(), alice), cnot(), bob);
        }
        case BellOp::Kind::Hadamard:
            return apply_single(apply_single(state, hadamard(), a), hadamard(), b);
        case BellOp::Kind::Phase: {
            ComplexMatrix s = phase_gate();
            ComplexMatrix s_conj = s.conjugate();
            if (op.adjoint) {
                return apply_single(apply_single(state, s_conj, a), s, b);
            }
            return apply_single(apply_single(state, s, a), s_conj, b);
        }
        case BellOp::Kind::Pauli:
            return apply_single(state, pauli(op.pauli_index), qubit_of(op.pair, op.side));
    }
    throw std::logic_error("unknown Bell op");
}

BellEnsemble run(const BellEnsemble &e, std::span<const BellOp> ops) {
    BellEnsemble out = e;
    for (const auto &op : ops) {
        out = apply(out, op);
    }
    return out;
}

DenseState run(const DenseState &state, std::span<const BellOp> ops) {
    DenseState out = state;
    for (const auto &op : ops) {
        out = apply(out, op);
    }
    return out;
}

std::vector<BellOp> inverse(std::span<const BellOp> ops) {
    std::vector<BellOp> out;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        out.push_back(it->inverse());
    }
    return out;
}

}  // namespace bellclone
