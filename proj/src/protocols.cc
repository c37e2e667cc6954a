#include "bellclone/protocols.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bellclone {

namespace {

// Symbolic and dense executions must agree to this trace distance.
constexpr double kAgreementTolerance = 1e-10;

bool want_dense(Engine engine, std::size_t qubits) {
    if (engine == Engine::Symbolic) {
        return false;
    }
    if (qubits <= kMaxBranchQubits) {
        return true;
    }
    if (engine == Engine::Dense) {
        throw std::invalid_argument(
            "dense engine needs " + std::to_string(qubits) + " qubits; the limit is " +
            std::to_string(kMaxBranchQubits));
    }
    return false;
}

CrossCheck agreement(std::string name, const DenseState &dense, const BellEnsemble &symbolic) {
    return check_at_most(std::move(name), trace_distance(dense, to_dense(symbolic)), kAgreementTolerance);
}

CrossCheck exact_match(std::string name, const BellEnsemble &actual, const BellEnsemble &expected) {
    return check_at_most(std::move(name), approx_equal(actual, expected) ? 0.0 : 1.0, 0.0);
}

BellEnsemble even_mixture(BellLabel x, BellLabel y) {
    return BellEnsemble({{{x}, 0.5}, {{y}, 0.5}});
}

// B1 on `count` pairs, or nothing.
BellEnsemble with_ebits(const BellEnsemble &e, std::size_t count) {
    return count == 0 ? e : tensor(e, BellEnsemble::point(repeat(B1, count)));
}

void add_shared_mixture(ResourceLedger &ledger, std::size_t pair, std::size_t random_bits) {
    ledger.add_classical("share random bits", random_bits);
    ledger.add_local(Actor::Alice, "prepare", {2 * pair});
    ledger.add_local(Actor::Bob, "prepare", {2 * pair + 1});
}

std::vector<BellOp> bob_flip_all(std::size_t pairs) {
    std::vector<BellOp> ops;
    for (std::size_t k = 0; k < pairs; k++) {
        ops.push_back(BellOp::pauli(k, 1, Party::Bob));
    }
    return ops;
}

std::vector<BellOp> cascade_onto(std::size_t target, std::size_t first_source = 0) {
    std::vector<BellOp> ops;
    for (std::size_t k = first_source; k < target; k++) {
        ops.push_back(BellOp::bxor(k, target));
    }
    return ops;
}

struct RhoPreparation {
    BellEnsemble start;
    bool bob_random_flip;
    std::vector<BellOp> ops;
    std::size_t ebits;
};

RhoPreparation rho_preparation(std::size_t m) {
    if (m < 2) {
        throw std::invalid_argument("the uniform-copies ancilla needs m >= 2");
    }
    if (m % 2 == 1) {
        return RhoPreparation{
            tensor(BellEnsemble::point(repeat(B1, m - 1)), even_mixture(B1, B2)),
            true,
            cascade_onto(m - 1),
            m - 1};
    }
    std::vector<BellOp> ops;
    for (std::size_t k = 1; k + 1 < m; k++) {
        ops.push_back(BellOp::bxor(0, k));
    }
    for (auto op : cascade_onto(m - 1)) {
        ops.push_back(op);
    }
    return RhoPreparation{
        tensor(with_ebits(even_mixture(B1, B3), m - 2), even_mixture(B1, B2)), false, std::move(ops), m - 2};
}

std::vector<double> validated_distribution(std::span<const double> q) {
    if (q.size() != 4) {
        throw std::invalid_argument("a Bell-diagonal distribution needs four weights");
    }
    double total = 0;
    for (double x : q) {
        if (!(x >= 0) || !std::isfinite(x)) {
            throw std::invalid_argument("Bell-diagonal weights must be non-negative");
        }
        total += x;
    }
    if (std::abs(total - 1.0) > kCircuitTolerance) {
        throw std::invalid_argument("Bell-diagonal weights must sum to 1");
    }
    return {q.begin(), q.end()};
}

ComplexMatrix kron(const ComplexMatrix &x, const ComplexMatrix &y) {
    ComplexMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); i++) {
        for (Eigen::Index j = 0; j < x.cols(); j++) {
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
        }
    }
    return out;
}

DenseState apply_on(const DenseState &state, const ComplexMatrix &u, std::size_t qubit) {
    std::size_t targets[1] = {qubit};
    return apply_unitary(state, u, targets);
}

DistillRun distill_with(const BellEnsemble &e, const std::vector<BellOp> &ops, Engine engine) {
    std::size_t n = e.num_pairs();
    std::size_t measured = n - 1;
    BellEnsemble after = run(e, ops);

    DistillRun result;
    for (auto &branch : discriminate_sets(after, measured)) {
        result.branches.push_back(DistillBranch{branch.a_bit, branch.probability, std::move(*branch.remainder)});
    }

    result.ledger.add_ops(ops);
    result.ledger.add_local(Actor::Alice, "measure z", {2 * measured});
    result.ledger.add_local(Actor::Bob, "measure z", {2 * measured + 1});
    result.ledger.add_classical("exchange outcomes", 2);
    result.ledger.ebits_distilled = static_cast<double>(n - 1);
    audit_locc(result.ledger);

    for (const auto &branch : result.branches) {
        BellEnsemble expected = BellEnsemble::point(repeat(branch.a_bit == 0 ? B1 : B3, n - 1));
        result.checks.push_back(exact_match("branch a=" + std::to_string(branch.a_bit) + " pure", branch.remainder, expected));
    }

    if (want_dense(engine, e.num_qubits())) {
        DenseState dense = run(to_dense(e), ops);
        std::vector<std::size_t> keep(2 * measured);
        std::iota(keep.begin(), keep.end(), 0);
        auto outcomes = parity_measurement(dense, 2 * measured, 2 * measured + 1);
        double count_gap = std::abs(static_cast<double>(outcomes.size()) - static_cast<double>(result.branches.size()));
        result.checks.push_back(check_at_most("dense vs symbolic outcome count difference", count_gap, 0.0));
        for (const auto &outcome : outcomes) {
            auto match = std::find_if(result.branches.begin(), result.branches.end(), [&](const DistillBranch &b) {
                return b.a_bit == outcome.parity;
            });
            if (match == result.branches.end()) {
                result.checks.push_back(check_at_most("dense outcome without symbolic branch", 1.0, 0.0));
                continue;
            }
            std::string tag = " a=" + std::to_string(outcome.parity);
            result.checks.push_back(check_at_most(
                "dense probability" + tag, std::abs(outcome.probability - match->probability), kCircuitTolerance));
            result.checks.push_back(agreement("dense remainder" + tag, partial_trace(outcome.post_state, keep), match->remainder));
        }
    }
    return result;
}

}  // namespace

Engine parse_engine(std::string_view text) {
    if (text == "symbolic") {
        return Engine::Symbolic;
    }
    if (text == "dense") {
        return Engine::Dense;
    }
    if (text == "both") {
        return Engine::Both;
    }
    throw std::invalid_argument("engine must be symbolic, dense, or both");
}

std::string to_string(Engine engine) {
    switch (engine) {
        case Engine::Symbolic:
            return "symbolic";
        case Engine::Dense:
            return "dense";
        case Engine::Both:
            return "both";
    }
    return "?";
}

void ResourceLedger::add_ops(std::span<const BellOp> ops) {
    for (const auto &op : ops) {
        for (auto &step : op.local_steps()) {
            steps.push_back(std::move(step));
        }
    }
}

void ResourceLedger::add_local(Actor actor, std::string operation, std::vector<std::size_t> qubits) {
    steps.push_back(Step{actor, std::move(operation), std::move(qubits), 0});
}

void ResourceLedger::add_classical(std::string operation, std::size_t bits) {
    steps.push_back(Step{Actor::Classical, std::move(operation), {}, bits});
    classical_bits += bits;
}

void ResourceLedger::absorb(const ResourceLedger &other, std::size_t pair_offset) {
    for (auto step : other.steps) {
        for (auto &q : step.qubits) {
            q += 2 * pair_offset;
        }
        steps.push_back(std::move(step));
    }
    ebits_consumed += other.ebits_consumed;
    ebits_distilled += other.ebits_distilled;
    classical_bits += other.classical_bits;
}

void audit_locc(const ResourceLedger &ledger) {
    for (std::size_t k = 0; k < ledger.steps.size(); k++) {
        const Step &step = ledger.steps[k];
        auto fail = [&](const std::string &why) {
            throw std::logic_error("LOCC audit: step " + std::to_string(k) + " (" + step.operation + ") " + why);
        };
        if (step.actor == Actor::Classical) {
            if (!step.qubits.empty()) {
                fail("is classical but touches qubits");
            }
            continue;
        }
        if (step.qubits.empty()) {
            fail("is a local operation on no qubits");
        }
        std::size_t parity = step.actor == Actor::Alice ? 0 : 1;
        for (auto q : step.qubits) {
            if (q % 2 != parity) {
                fail("acts across the Alice:Bob cut");
            }
        }
    }
}

bool is_locc(const ResourceLedger &ledger) {
    try {
        audit_locc(ledger);
        return true;
    } catch (const std::logic_error &) {
        return false;
    }
}

CrossCheck check_at_most(std::string name, double value, double tolerance) {
    return CrossCheck{std::move(name), value, tolerance, value <= tolerance};
}

bool ProtocolRun::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CrossCheck &c) { return c.passed; });
}

bool DistillRun::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CrossCheck &c) { return c.passed; });
}

std::vector<std::vector<BellOp>> local_clifford_table() {
    auto h = BellOp::hadamard(0);
    auto s = BellOp::phase(0);
    const std::vector<std::vector<BellOp>> linear = {{}, {h}, {s}, {h, s}, {s, h}, {h, s, h}};
    std::vector<std::vector<BellOp>> table;
    for (const auto &word : linear) {
        for (int p = 0; p < 4; p++) {
            auto ops = word;
            if (p != 0) {
                ops.push_back(BellOp::pauli(0, p, Party::Bob));
            }
            table.push_back(std::move(ops));
        }
    }
    return table;
}

PairReduction pair_reduction_table(BellLabel first, BellLabel second) {
    if (first == second) {
        throw std::invalid_argument("a pair reduction needs two distinct Bell labels");
    }
    auto image_of = [](BellLabel x, const std::vector<BellOp> &ops) {
        return run(BellEnsemble::point({x}), ops).entries().front().labels.front();
    };
    for (const auto &ops : local_clifford_table()) {
        BellLabel fx = image_of(first, ops);
        BellLabel fy = image_of(second, ops);
        if (!((fx == B1 && fy == B3) || (fx == B3 && fy == B1))) {
            continue;
        }
        PairReduction reduction{{first, second}, {fx, fy}, ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2), ops};
        for (const auto &op : ops) {
            switch (op.kind) {
                case BellOp::Kind::Hadamard:
                    reduction.alice_unitary = hadamard() * reduction.alice_unitary;
                    reduction.bob_unitary = hadamard() * reduction.bob_unitary;
                    break;
                case BellOp::Kind::Phase:
                    reduction.alice_unitary = phase_gate() * reduction.alice_unitary;
                    reduction.bob_unitary = phase_gate().conjugate() * reduction.bob_unitary;
                    break;
                case BellOp::Kind::Pauli:
                    reduction.bob_unitary = pauli(op.pauli_index) * reduction.bob_unitary;
                    break;
                case BellOp::Kind::Bxor:
                    throw std::logic_error("pair reductions are single-pair maps");
            }
        }
        for (std::size_t k = 0; k < 2; k++) {
            DenseState d = to_dense(BellEnsemble::point({reduction.pair[k]}));
            d = apply_on(apply_on(d, reduction.alice_unitary, 0), reduction.bob_unitary, 1);
            if (1.0 - fidelity(d, bell_state(reduction.image[k]).amplitudes) > kCircuitTolerance) {
                throw std::logic_error("pair reduction failed its dense certificate");
            }
        }
        return reduction;
    }
    throw std::logic_error("no local Clifford maps the pair onto {B1, B3}");
}

ProtocolRun clone_pair_1_to_n(BellLabel input, std::array<BellLabel, 2> pair, std::size_t n, Engine engine) {
    return clone_pair_1_to_n(BellEnsemble::point({input}), pair, n, engine);
}

ProtocolRun clone_pair_1_to_n(
    const BellEnsemble &input, std::array<BellLabel, 2> pair, std::size_t n, Engine engine) {
    if (input.num_pairs() != 1) {
        throw std::invalid_argument("cloning input must be a single Bell pair");
    }
    if (pair[0] == pair[1]) {
        throw std::invalid_argument("the declared pair needs two distinct Bell labels");
    }
    for (const auto &entry : input.entries()) {
        BellLabel x = entry.labels.front();
        if (x != pair[0] && x != pair[1]) {
            throw std::invalid_argument("input " + x.name() + " is outside the declared pair");
        }
    }
    if (n == 0) {
        throw std::invalid_argument("number of copies must be at least 1");
    }
    if (n == 1) {
        return ProtocolRun{input, {}, {}};
    }

    PairReduction reduction = pair_reduction_table(pair[0], pair[1]);
    std::vector<BellOp> ops = reduction.ops;
    for (std::size_t k = 1; k < n; k++) {
        ops.push_back(BellOp::bxor(0, k));
    }
    auto undo = inverse(reduction.ops);
    for (std::size_t k = 0; k < n; k++) {
        for (const auto &op : undo) {
            ops.push_back(op.shifted(k));
        }
    }

    ProtocolRun result{run(with_ebits(input, n - 1), ops), {}, {}};
    result.ledger.ebits_consumed = static_cast<double>(n - 1);
    result.ledger.add_ops(ops);
    audit_locc(result.ledger);

    std::vector<BellEnsemble::Entry> expected;
    for (const auto &entry : input.entries()) {
        expected.push_back({repeat(entry.labels.front(), n), entry.probability});
    }
    BellEnsemble target{std::move(expected)};
    result.checks.push_back(exact_match("symbolic output is the cloned mixture", result.output, target));

    if (want_dense(engine, 2 * n)) {
        DenseState dense = clone_pair_dense(input, pair, n);
        result.checks.push_back(agreement("dense vs symbolic trace distance", dense, result.output));
        if (input.is_point_mass()) {
            auto target_vector = to_dense(target).branches().front().amplitudes;
            result.checks.push_back(check_at_most("dense fidelity defect", 1.0 - fidelity(dense, target_vector), kCircuitTolerance));
        }
    }
    return result;
}

DenseState clone_pair_dense(const BellEnsemble &input, std::array<BellLabel, 2> pair, std::size_t n) {
    PairReduction reduction = pair_reduction_table(pair[0], pair[1]);
    std::vector<QubitLabel> labels = pair_layout(n);
    labels[0].role = QubitRole::SourceState;
    labels[1].role = QubitRole::SourceState;
    DenseState state = to_dense(with_ebits(input, n - 1)).relabeled(labels);

    state = apply_on(apply_on(state, reduction.alice_unitary, 0), reduction.bob_unitary, 1);
    for (std::size_t k = 1; k < n; k++) {
        state = apply(state, BellOp::bxor(0, k));
    }
    for (std::size_t k = 0; k < n; k++) {
        state = apply_on(state, reduction.alice_unitary.adjoint(), 2 * k);
        state = apply_on(state, reduction.bob_unitary.adjoint(), 2 * k + 1);
    }
    return state;
}

ProtocolRun prepare_rho_m(std::size_t m, Engine engine) {
    RhoPreparation prep = rho_preparation(m);
    ResourceLedger ledger;
    ledger.ebits_consumed = static_cast<double>(prep.ebits);

    BellEnsemble state = prep.start;
    if (prep.bob_random_flip) {
        add_shared_mixture(ledger, m - 1, 1);
        BellEnsemble flipped = run(state, bob_flip_all(m));
        BellEnsemble both[2] = {state, flipped};
        double halves[2] = {0.5, 0.5};
        state = mix(both, halves);
        std::vector<std::size_t> bob_qubits;
        for (std::size_t k = 0; k < m; k++) {
            bob_qubits.push_back(2 * k + 1);
        }
        ledger.add_local(Actor::Bob, "x on all qubits with probability 1/2", bob_qubits);
    } else {
        add_shared_mixture(ledger, 0, 1);
        add_shared_mixture(ledger, m - 1, 1);
    }
    state = run(state, prep.ops);
    ledger.add_ops(prep.ops);
    audit_locc(ledger);

    const double quarter[4] = {0.25, 0.25, 0.25, 0.25};
    ProtocolRun result{state, std::move(ledger), {}};
    result.checks.push_back(exact_match("output is the uniform-copies state", result.output, uniform_copies(quarter, m)));
    if (want_dense(engine, 2 * m)) {
        result.checks.push_back(agreement("dense vs symbolic trace distance", prepare_rho_m_dense(m), result.output));
    }
    return result;
}

DenseState prepare_rho_m_dense(std::size_t m) {
    RhoPreparation prep = rho_preparation(m);
    if (2 * m > kMaxBranchQubits) {
        throw std::invalid_argument("dense preparation is limited to m <= 7");
    }
    DenseState state = to_dense(prep.start);
    if (prep.bob_random_flip) {
        DenseState both[2] = {state, run(state, bob_flip_all(m))};
        double halves[2] = {0.5, 0.5};
        state = mix(both, halves);
    }
    return run(state, prep.ops);
}

int teleport_correction(BellLabel outcome) {
    static const int corrections[4] = {0, 3, 1, 2};
    return corrections[outcome.index()];
}

DenseState teleport_to_receivers(const DenseState &channel, const DenseState &input) {
    std::size_t slots = channel.num_qubits() / 2;
    bool layout_ok = channel.num_qubits() % 2 == 0 && slots >= 2;
    for (std::size_t q = 0; layout_ok && q < channel.num_qubits(); q++) {
        layout_ok = channel.labels()[q].party == (q % 2 == 0 ? Party::Alice : Party::Bob);
    }
    if (!layout_ok) {
        throw std::invalid_argument("malformed channel layout: expected Alice/Bob slots for at least two pairs");
    }
    if (input.num_qubits() != 2 || input.labels()[0].party != Party::Alice || input.labels()[1].party != Party::Bob) {
        throw std::invalid_argument("teleported input must be one Alice qubit and one Bob qubit");
    }

    DenseState full = tensor(input.relabeled(pair_layout(1, QubitRole::Input)), channel.relabeled(pair_layout(slots)));
    std::vector<std::size_t> receivers;
    for (std::size_t q = 4; q < full.num_qubits(); q++) {
        receivers.push_back(q);
    }

    std::vector<PureBranch> branches;
    for (const auto &alice : bell_measurement(full, 0, 2)) {
        for (const auto &bob : bell_measurement(alice.post_state, 1, 3)) {
            DenseState corrected = bob.post_state;
            int ca = teleport_correction(alice.outcome);
            int cb = teleport_correction(bob.outcome);
            for (std::size_t k = 2; k <= slots; k++) {
                if (ca != 0) {
                    corrected = apply_on(corrected, pauli(ca), 2 * k);
                }
                if (cb != 0) {
                    corrected = apply_on(corrected, pauli(cb), 2 * k + 1);
                }
            }
            DenseState reduced = partial_trace(corrected, receivers);
            for (auto branch : reduced.branches()) {
                branch.weight *= alice.probability * bob.probability;
                branches.push_back(std::move(branch));
            }
        }
    }
    DenseState received(std::move(branches), pair_layout(slots - 1));
    if (received.num_qubits() <= kMaxDensityQubits) {
        return compress(received);
    }
    return received;
}

DenseState teleport_two_qubit(const DenseState &channel, const DenseState &input) {
    if (channel.num_qubits() != 4) {
        throw std::invalid_argument("malformed channel layout: two-qubit teleportation needs a four-qubit channel");
    }
    return teleport_to_receivers(channel, input);
}

DenseState ideal_two_qubit_channel() {
    ComplexVector amplitudes = ComplexVector::Zero(16);
    for (int x = 0; x < 2; x++) {
        for (int y = 0; y < 2; y++) {
            // Qubits A1 B1 A2 B2, A1 most significant.
            amplitudes[8 * x + 4 * y + 2 * x + y] = 0.5;
        }
    }
    return DenseState::pure(amplitudes, pair_layout(2));
}

ComplexMatrix pauli_diagonal_map_choi() {
    ComplexVector omega = ComplexVector::Zero(16);
    for (int i = 0; i < 4; i++) {
        omega[4 * i + i] = 0.5;
    }
    ComplexMatrix choi = ComplexMatrix::Zero(16, 16);
    for (int k = 0; k < 4; k++) {
        ComplexMatrix u = kron(ComplexMatrix::Identity(4, 4), kron(pauli(k), pauli(k)));
        ComplexVector v = u * omega;
        choi += 0.25 * v * v.adjoint();
    }
    return choi;
}

ComplexMatrix teleportation_choi(const DenseState &channel) {
    return choi_matrix([&](const DenseState &input) { return teleport_two_qubit(channel, input); });
}

ProtocolRun clone_four_1_to_n(BellLabel input, std::size_t n, Engine engine) {
    double q[4] = {0, 0, 0, 0};
    q[input.index()] = 1;
    return clone_four_1_to_n(q, n, engine);
}

ProtocolRun clone_four_1_to_n(std::span<const double> weights, std::size_t n, Engine engine) {
    auto q = validated_distribution(weights);
    if (n == 0) {
        throw std::invalid_argument("number of copies must be at least 1");
    }
    if (n == 1) {
        return ProtocolRun{BellEnsemble::bell_diagonal(q), {}, {}};
    }

    ProtocolRun ancilla = prepare_rho_m(n + 1);
    ProtocolRun result{uniform_copies(q, n), {}, {}};
    ResourceLedger &ledger = result.ledger;
    ledger.absorb(ancilla.ledger, 1);
    ledger.add_local(Actor::Alice, "bell measure", {0, 2});
    ledger.add_local(Actor::Bob, "bell measure", {1, 3});
    ledger.add_classical("broadcast both outcomes", 4);
    std::vector<std::size_t> alice_receivers;
    std::vector<std::size_t> bob_receivers;
    for (std::size_t k = 2; k <= n + 1; k++) {
        alice_receivers.push_back(2 * k);
        bob_receivers.push_back(2 * k + 1);
    }
    ledger.add_local(Actor::Alice, "pauli correction", alice_receivers);
    ledger.add_local(Actor::Bob, "pauli correction", bob_receivers);
    audit_locc(ledger);

    double expected_cost = static_cast<double>(n % 2 == 0 ? n : n - 1);
    result.checks.push_back(check_at_most("ebit cost deviation", std::abs(ledger.ebits_consumed - expected_cost), 0.0));
    for (const auto &check : ancilla.checks) {
        result.checks.push_back(check);
    }

    if (want_dense(engine, 2 * (n + 2))) {
        DenseState dense = clone_four_dense(q, n);
        result.checks.push_back(agreement("dense teleportation vs symbolic trace distance", dense, result.output));
        if (result.output.is_point_mass()) {
            auto target = to_dense(result.output).branches().front().amplitudes;
            result.checks.push_back(check_at_most("dense fidelity defect", 1.0 - fidelity(dense, target), kCircuitTolerance));
        }
    }
    return result;
}

DenseState clone_four_dense(std::span<const double> weights, std::size_t n) {
    auto q = validated_distribution(weights);
    if (n < 2 || 2 * (n + 2) > kMaxBranchQubits) {
        throw std::invalid_argument("dense four-state cloning supports 2 <= n <= 5");
    }
    DenseState channel = to_dense(prepare_rho_m(n + 1).output);
    DenseState input = to_dense(BellEnsemble::bell_diagonal(q), QubitRole::Input);
    return teleport_to_receivers(channel, input);
}

ProtocolRun prepare_quasi_pure(std::span<const double> weights, std::size_t n, Engine engine) {
    auto p = validated_distribution(weights);
    for (double x : p) {
        if (x > 0.5 + kCircuitTolerance) {
            throw std::invalid_argument("every weight must be at most 1/2, otherwise the seed state is entangled");
        }
    }
    if (n < 3 || n % 2 == 0) {
        throw std::invalid_argument("quasi-pure preparation needs an odd number of copies n >= 3");
    }
    ProtocolRun cloned = clone_four_1_to_n(p, n, engine);
    ProtocolRun result{cloned.output, {}, std::move(cloned.checks)};
    add_shared_mixture(result.ledger, 0, 2);
    result.ledger.absorb(cloned.ledger, 0);
    audit_locc(result.ledger);
    return result;
}

DistillRun distill_quasi_pure(const BellEnsemble &e, Engine engine) {
    if (!uniform_string_weights(e)) {
        throw std::invalid_argument("distillation input must be a mixture of uniform strings B_i^n");
    }
    std::size_t n = e.num_pairs();
    if (n < 3 || n % 2 == 0) {
        throw std::invalid_argument("quasi-pure distillation needs an odd number of pairs n >= 3");
    }
    return distill_with(e, cascade_onto(n - 1), engine);
}

DistillRun distill_two_string(const BellEnsemble &e, Engine engine) {
    auto weights = uniform_string_weights(e);
    if (!weights || (*weights)[1] > 0 || (*weights)[3] > 0) {
        throw std::invalid_argument("input must be a mixture of B1^n and B3^n");
    }
    if (e.num_pairs() < 2) {
        throw std::invalid_argument("two-string distillation needs at least two pairs");
    }
    return distill_with(e, {}, engine);
}

SigmaRun build_sigma_n(double p, std::size_t n) {
    if (!(p > 0 && p < 1)) {
        throw std::invalid_argument("p must lie strictly between 0 and 1");
    }
    if (n == 0) {
        throw std::invalid_argument("n must be at least 1");
    }
    SigmaRun result{
        with_ebits(BellEnsemble({{{B1}, p}, {{B2}, 1 - p}}), n - 1),
        BellEnsemble::point({B1}),
        BellEnsemble::point({B1}),
        {},
        0};
    result.steps.push_back(BellOp::hadamard(0));
    for (std::size_t k = 1; k < n; k++) {
        result.steps.push_back(BellOp::bxor(0, k));
    }
    result.prime_step_count = result.steps.size();
    for (std::size_t k = 0; k < n; k++) {
        result.steps.push_back(BellOp::hadamard(k));
    }
    std::span<const BellOp> all(result.steps);
    result.sigma_prime = run(result.start, all.first(result.prime_step_count));
    result.sigma_n = run(result.start, all);
    return result;
}

NecessityWitness necessity_witness_two() {
    BellEnsemble input = even_mixture(B1, B2);
    BellEnsemble output = clone_pair_1_to_n(input, {B1, B2}, 2).output;
    return NecessityWitness{
        input, output, log_negativity_report(input, "rho_sep"), log_negativity_report(output, "cloned rho_sep")};
}

NecessityWitness necessity_witness_four() {
    const double quarter[4] = {0.25, 0.25, 0.25, 0.25};
    BellEnsemble smolin = uniform_copies(quarter, 2);
    std::vector<BellEnsemble> parts;
    std::vector<double> weights;
    for (const auto &entry : smolin.entries()) {
        BellEnsemble cloned = clone_four_1_to_n(entry.labels[0], 2).output;
        parts.push_back(tensor(cloned, BellEnsemble::point({entry.labels[1]})));
        weights.push_back(entry.probability);
    }
    BellEnsemble output = mix(parts, weights);
    return NecessityWitness{
        smolin, output, log_negativity_report(smolin, "smolin"), log_negativity_report(output, "cloned smolin")};
}

}  // namespace bellclone
