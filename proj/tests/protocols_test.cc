#include "bellclone/protocols.h"

#include <cmath>

#include "gtest/gtest.h"
#include "test_util.h"

using namespace bellclone;
using bellclone::fixtures::kron;

namespace {

const double kQuarter[4] = {0.25, 0.25, 0.25, 0.25};

BellEnsemble point(std::initializer_list<BellLabel> labels) {
    return BellEnsemble::point(BellString(labels));
}

DenseState smolin() {
    return to_dense(uniform_copies(kQuarter, 2));
}

DenseState input_state(const ComplexVector &v) {
    return DenseState::pure(v, pair_layout(1, QubitRole::Input));
}

// Choi operator of sigma_i (x) sigma_j -> delta_ij sigma_i (x) sigma_j by direct
// summation over the Pauli expansion of each |k><l|.
ComplexMatrix pauli_sum_choi() {
    std::vector<ComplexMatrix> products;
    for (int i = 0; i < 4; i++) {
        for (int j = 0; j < 4; j++) {
            products.push_back(kron(pauli(i), pauli(j)));
        }
    }
    ComplexMatrix choi = ComplexMatrix::Zero(16, 16);
    for (int k = 0; k < 4; k++) {
        for (int l = 0; l < 4; l++) {
            ComplexMatrix unit = ComplexMatrix::Zero(4, 4);
            unit(k, l) = 1;
            ComplexMatrix image = ComplexMatrix::Zero(4, 4);
            for (int i = 0; i < 4; i++) {
                ComplexMatrix p = products[5 * i];
                image += (p.adjoint() * unit).trace() / 4.0 * p;
            }
            choi.block(4 * k, 4 * l, 4, 4) = 0.25 * image;
        }
    }
    return choi;
}

}  // namespace

TEST(ledger, audit) {
    ResourceLedger ok;
    ok.add_local(Actor::Alice, "h", {0, 2});
    ok.add_local(Actor::Bob, "h", {3});
    ok.add_classical("send", 2);
    EXPECT_NO_THROW(audit_locc(ok));
    EXPECT_EQ(ok.classical_bits, 2u);

    ResourceLedger crossing;
    crossing.add_local(Actor::Alice, "cnot", {0, 1});
    EXPECT_THROW(audit_locc(crossing), std::logic_error);
    EXPECT_FALSE(is_locc(crossing));

    ResourceLedger bob_on_alice;
    bob_on_alice.add_local(Actor::Bob, "x", {2});
    EXPECT_FALSE(is_locc(bob_on_alice));

    ResourceLedger quantum_classical;
    quantum_classical.steps.push_back(Step{Actor::Classical, "send", {1}, 1});
    EXPECT_FALSE(is_locc(quantum_classical));
}

TEST(ledger, absorb_shifts_pairs) {
    ResourceLedger inner;
    inner.ebits_consumed = 2;
    inner.add_local(Actor::Bob, "x", {1});
    inner.add_classical("bit", 1);
    ResourceLedger outer;
    outer.absorb(inner, 2);
    EXPECT_EQ(outer.ebits_consumed, 2);
    EXPECT_EQ(outer.classical_bits, 1u);
    EXPECT_EQ(outer.steps[0].qubits, std::vector<std::size_t>{5});
}

TEST(engine, parse) {
    EXPECT_EQ(parse_engine("symbolic"), Engine::Symbolic);
    EXPECT_EQ(parse_engine("dense"), Engine::Dense);
    EXPECT_EQ(parse_engine("both"), Engine::Both);
    EXPECT_THROW(parse_engine("fast"), std::invalid_argument);
    EXPECT_EQ(to_string(Engine::Both), "both");
}

TEST(pair_reduction, examples) {
    PairReduction b1b3 = pair_reduction_table(B1, B3);
    EXPECT_TRUE(b1b3.ops.empty());
    EXPECT_LT(max_abs_difference(b1b3.alice_unitary, ComplexMatrix::Identity(2, 2)), 1e-15);

    PairReduction b1b2 = pair_reduction_table(B1, B2);
    ASSERT_EQ(b1b2.ops.size(), 1u);
    EXPECT_EQ(b1b2.ops[0].kind, BellOp::Kind::Hadamard);
    EXPECT_EQ(b1b2.image[0], B1);
    EXPECT_EQ(b1b2.image[1], B3);

    EXPECT_THROW(pair_reduction_table(B2, B2), std::invalid_argument);
}

TEST(pair_reduction, all_pairs_certified) {
    for (auto x : kAllBellLabels) {
        for (auto y : kAllBellLabels) {
            if (x == y) {
                continue;
            }
            PairReduction r = pair_reduction_table(x, y);
            for (int k = 0; k < 2; k++) {
                ComplexVector v = kron(r.alice_unitary, r.bob_unitary) * bell_state(r.pair[k]).amplitudes;
                EXPECT_NEAR(std::abs(v.dot(bell_state(r.image[k]).amplitudes)), 1.0, 1e-12);
                EXPECT_TRUE(r.image[k] == B1 || r.image[k] == B3);
            }
            EXPECT_NE(r.image[0], r.image[1]);
        }
    }
}

TEST(clone_pair, examples) {
    ProtocolRun b3 = clone_pair_1_to_n(B3, {B1, B3}, 2, Engine::Both);
    EXPECT_EQ(b3.output, point({B3, B3}));
    EXPECT_EQ(b3.ledger.ebits_consumed, 1);
    EXPECT_EQ(b3.ledger.classical_bits, 0u);
    EXPECT_TRUE(b3.passed());

    ProtocolRun b1 = clone_pair_1_to_n(B1, {B1, B3}, 5, Engine::Both);
    EXPECT_EQ(b1.output, BellEnsemble::point(repeat(B1, 5)));
    EXPECT_EQ(b1.ledger.ebits_consumed, 4);

    BellEnsemble sep({{{B1}, 0.5}, {{B2}, 0.5}});
    ProtocolRun mixed = clone_pair_1_to_n(sep, {B1, B2}, 2, Engine::Both);
    EXPECT_EQ(mixed.output, BellEnsemble({{{B1, B1}, 0.5}, {{B2, B2}, 0.5}}));
    EXPECT_TRUE(mixed.passed());
}

TEST(clone_pair, every_pair_and_input) {
    for (auto x : kAllBellLabels) {
        for (auto y : kAllBellLabels) {
            if (x == y) {
                continue;
            }
            for (auto input : {x, y}) {
                for (std::size_t n : {2, 3, 4, 6, 7}) {
                    ProtocolRun run = clone_pair_1_to_n(input, {x, y}, n, Engine::Both);
                    EXPECT_EQ(run.output, BellEnsemble::point(repeat(input, n)));
                    EXPECT_EQ(run.ledger.ebits_consumed, static_cast<double>(n - 1));
                    EXPECT_TRUE(run.passed()) << x.name() << y.name() << input.name() << n;
                }
            }
        }
    }
}

TEST(clone_pair, errors_and_degenerate_cases) {
    EXPECT_THROW(clone_pair_1_to_n(B2, {B1, B3}, 2), std::invalid_argument);
    EXPECT_THROW(clone_pair_1_to_n(B1, {B1, B1}, 2), std::invalid_argument);
    EXPECT_THROW(clone_pair_1_to_n(B1, {B1, B3}, 0), std::invalid_argument);
    EXPECT_THROW(clone_pair_1_to_n(point({B1, B1}), {B1, B3}, 2), std::invalid_argument);
    ProtocolRun identity = clone_pair_1_to_n(B3, {B1, B3}, 1);
    EXPECT_EQ(identity.output, point({B3}));
    EXPECT_EQ(identity.ledger.ebits_consumed, 0);
    EXPECT_THROW(clone_pair_1_to_n(B1, {B1, B3}, 8, Engine::Dense), std::invalid_argument);
    EXPECT_NO_THROW(clone_pair_1_to_n(B1, {B1, B3}, 8, Engine::Both));
}

TEST(clone_pair, large_n_symbolic) {
    ProtocolRun run = clone_pair_1_to_n(B4, {B2, B4}, 200);
    EXPECT_EQ(run.output, BellEnsemble::point(repeat(B4, 200)));
    EXPECT_EQ(run.ledger.ebits_consumed, 199);
    EXPECT_TRUE(is_locc(run.ledger));
}

TEST(prepare_rho_m, examples) {
    ProtocolRun m3 = prepare_rho_m(3, Engine::Both);
    EXPECT_EQ(m3.output, uniform_copies(kQuarter, 3));
    EXPECT_EQ(m3.ledger.ebits_consumed, 2);
    EXPECT_TRUE(m3.passed());
    ProtocolRun m4 = prepare_rho_m(4, Engine::Both);
    EXPECT_EQ(m4.output, uniform_copies(kQuarter, 4));
    EXPECT_EQ(m4.ledger.ebits_consumed, 2);
    EXPECT_TRUE(m4.passed());
    ProtocolRun m2 = prepare_rho_m(2, Engine::Both);
    EXPECT_EQ(m2.output, uniform_copies(kQuarter, 2));
    EXPECT_EQ(m2.ledger.ebits_consumed, 0);
    EXPECT_THROW(prepare_rho_m(1), std::invalid_argument);
}

TEST(prepare_rho_m, dense_circuits) {
    for (std::size_t m = 2; m <= 7; m++) {
        EXPECT_LT(trace_distance(prepare_rho_m_dense(m), to_dense(uniform_copies(kQuarter, m))), 1e-12) << m;
    }
    EXPECT_THROW(prepare_rho_m_dense(8), std::invalid_argument);
}

TEST(prepare_rho_m, structure_up_to_64) {
    for (std::size_t m = 2; m <= 64; m++) {
        ProtocolRun run = prepare_rho_m(m);
        ASSERT_EQ(run.output.entries().size(), 4u);
        for (const auto &entry : run.output.entries()) {
            EXPECT_EQ(entry.probability, 0.25);
        }
        EXPECT_EQ(run.output, uniform_copies(kQuarter, m));
        EXPECT_EQ(run.ledger.ebits_consumed, static_cast<double>(m % 2 ? m - 1 : m - 2));
        EXPECT_TRUE(is_locc(run.ledger));
    }
}

TEST(teleport, corrections) {
    EXPECT_EQ(teleport_correction(B1), 0);
    EXPECT_EQ(teleport_correction(B2), 3);
    EXPECT_EQ(teleport_correction(B3), 1);
    EXPECT_EQ(teleport_correction(B4), 2);
}

TEST(teleport, bell_states_through_smolin) {
    for (auto x : kAllBellLabels) {
        DenseState out = teleport_two_qubit(smolin(), to_dense(point({x}), QubitRole::Input));
        EXPECT_NEAR(fidelity(out, bell_state(x).amplitudes), 1.0, 1e-12) << x.name();
    }
}

TEST(teleport, product_state_is_filtered) {
    ComplexVector zero = fixtures::basis_vector(4, 0);
    DenseState out = teleport_two_qubit(smolin(), input_state(zero));
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected(0, 0) = 0.5;
    expected(3, 3) = 0.5;
    EXPECT_LT(max_abs_difference(out.density_matrix(), expected), 1e-12);
}

TEST(teleport, ideal_channel_is_identity) {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 5; trial++) {
        DenseState in = input_state(fixtures::random_state(rng, 4));
        DenseState out = teleport_two_qubit(ideal_two_qubit_channel(), in);
        EXPECT_LT(trace_distance(out, in), 1e-10);
    }
}

TEST(teleport, alice_outcomes_uniform) {
    DenseState full = tensor(to_dense(point({B2}), QubitRole::Input), smolin());
    auto outcomes = bell_measurement(full, 0, 2);
    ASSERT_EQ(outcomes.size(), 4u);
    for (const auto &o : outcomes) {
        EXPECT_NEAR(o.probability, 0.25, 1e-12);
    }
}

TEST(teleport, malformed_layouts) {
    DenseState b1 = to_dense(point({B1}));
    EXPECT_THROW(teleport_two_qubit(b1, b1), std::invalid_argument);
    EXPECT_THROW(teleport_two_qubit(smolin(), smolin()), std::invalid_argument);
    std::vector<QubitLabel> swapped = pair_layout(2);
    std::swap(swapped[0], swapped[1]);
    EXPECT_THROW(teleport_two_qubit(smolin().relabeled(swapped), b1), std::invalid_argument);
    EXPECT_THROW(teleport_two_qubit(to_dense(uniform_copies(kQuarter, 3)), b1), std::invalid_argument);
}

TEST(choi, analytic_map_against_pauli_sum_oracle) {
    EXPECT_LT(max_abs_difference(pauli_diagonal_map_choi(), pauli_sum_choi()), 1e-14);
    Eigen::VectorXd spectrum = hermitian_eigenvalues(pauli_diagonal_map_choi());
    EXPECT_GT(spectrum[0], -1e-12);
    EXPECT_NEAR(spectrum.sum(), 1.0, 1e-12);
}

TEST(choi, teleportation_through_smolin) {
    ComplexMatrix choi = teleportation_choi(smolin());
    EXPECT_LT(max_abs_difference(choi, pauli_sum_choi()), 1e-9);
    EXPECT_GT(hermitian_eigenvalues(choi)[0], -1e-9);
}

TEST(clone_four, examples) {
    ProtocolRun b4 = clone_four_1_to_n(B4, 2, Engine::Both);
    EXPECT_EQ(b4.output, point({B4, B4}));
    EXPECT_EQ(b4.ledger.ebits_consumed, 2);
    EXPECT_TRUE(b4.passed());
    EXPECT_TRUE(is_locc(b4.ledger));

    ProtocolRun b2 = clone_four_1_to_n(B2, 3, Engine::Both);
    EXPECT_EQ(b2.output, point({B2, B2, B2}));
    EXPECT_EQ(b2.ledger.ebits_consumed, 2);
    EXPECT_TRUE(b2.passed());

    ProtocolRun uniform = clone_four_1_to_n(kQuarter, 2, Engine::Both);
    EXPECT_EQ(uniform.output, uniform_copies(kQuarter, 2));
    EXPECT_TRUE(uniform.passed());
}

TEST(clone_four, dense_teleportation_joint_output) {
    for (auto x : kAllBellLabels) {
        for (std::size_t n : {2, 3, 4, 5}) {
            double q[4] = {0, 0, 0, 0};
            q[x.index()] = 1;
            DenseState dense = clone_four_dense(q, n);
            EXPECT_NEAR(fidelity(dense, to_dense(BellEnsemble::point(repeat(x, n))).branches()[0].amplitudes), 1.0, 1e-12);
        }
    }
}

TEST(clone_four, ledger_costs) {
    for (std::size_t n = 2; n <= 40; n++) {
        ProtocolRun run = clone_four_1_to_n(B3, n);
        EXPECT_EQ(run.ledger.ebits_consumed, static_cast<double>(n % 2 == 0 ? n : n - 1));
        EXPECT_EQ(run.output, BellEnsemble::point(repeat(B3, n)));
        EXPECT_TRUE(is_locc(run.ledger));
    }
}

TEST(clone_four, errors) {
    const double bad[4] = {0.5, 0.6, 0, 0};
    EXPECT_THROW(clone_four_1_to_n(bad, 2), std::invalid_argument);
    const double negative[4] = {1.5, -0.5, 0, 0};
    EXPECT_THROW(clone_four_1_to_n(negative, 2), std::invalid_argument);
    const double three[3] = {0.5, 0.5, 0};
    EXPECT_THROW(clone_four_1_to_n(three, 2), std::invalid_argument);
    EXPECT_THROW(clone_four_1_to_n(B1, 6, Engine::Dense), std::invalid_argument);
}

TEST(quasi_pure, preparation) {
    ProtocolRun rho3 = prepare_quasi_pure(kQuarter, 3, Engine::Both);
    EXPECT_EQ(rho3.output, uniform_copies(kQuarter, 3));
    EXPECT_EQ(rho3.ledger.ebits_consumed, 2);

    const double p[4] = {0.4, 0.1, 0.3, 0.2};
    ProtocolRun run = prepare_quasi_pure(p, 3, Engine::Both);
    EXPECT_EQ(run.output.entries().size(), 4u);
    EXPECT_TRUE(approx_equal(run.output, uniform_copies(p, 3), 1e-15));
    EXPECT_EQ(run.ledger.ebits_consumed, 2);
    EXPECT_TRUE(run.passed());
    EXPECT_TRUE(is_locc(run.ledger));

    EXPECT_EQ(prepare_quasi_pure(p, 5).ledger.ebits_consumed, 4);
}

TEST(quasi_pure, preparation_errors) {
    const double point_mass[4] = {1, 0, 0, 0};
    EXPECT_THROW(prepare_quasi_pure(point_mass, 3), std::invalid_argument);
    EXPECT_THROW(prepare_quasi_pure(kQuarter, 4), std::invalid_argument);
    EXPECT_THROW(prepare_quasi_pure(kQuarter, 1), std::invalid_argument);
}

TEST(quasi_pure, distillation) {
    const double p[4] = {0.4, 0.1, 0.3, 0.2};
    DistillRun run = distill_quasi_pure(uniform_copies(p, 3), Engine::Both);
    ASSERT_EQ(run.branches.size(), 2u);
    EXPECT_EQ(run.branches[0].a_bit, 0);
    EXPECT_EQ(run.branches[0].probability, 0.5);
    EXPECT_EQ(run.branches[0].remainder, point({B1, B1}));
    EXPECT_EQ(run.branches[1].probability, 0.5);
    EXPECT_EQ(run.branches[1].remainder, point({B3, B3}));
    EXPECT_EQ(run.ledger.ebits_distilled, 2);
    EXPECT_EQ(run.ledger.classical_bits, 2u);
    EXPECT_TRUE(run.passed());

    DistillRun pure = distill_quasi_pure(BellEnsemble::point(repeat(B1, 3)), Engine::Both);
    ASSERT_EQ(pure.branches.size(), 1u);
    EXPECT_EQ(pure.branches[0].remainder, point({B1, B1}));

    DistillRun uniform = distill_quasi_pure(uniform_copies(kQuarter, 3), Engine::Both);
    ASSERT_EQ(uniform.branches.size(), 2u);
    EXPECT_EQ(uniform.branches[0].probability, 0.5);
}

TEST(quasi_pure, distillation_errors) {
    EXPECT_THROW(distill_quasi_pure(point({B1, B2, B1})), std::invalid_argument);
    EXPECT_THROW(distill_quasi_pure(uniform_copies(kQuarter, 4)), std::invalid_argument);
    EXPECT_THROW(distill_two_string(uniform_copies(kQuarter, 2)), std::invalid_argument);
    EXPECT_THROW(distill_two_string(point({B1})), std::invalid_argument);
}

TEST(quasi_pure, even_cascade_fails) {
    // With an even number of pairs the cascade gives no information, so the
    // remainder stays mixed; hence distill_quasi_pure insists on odd n.
    BellEnsemble state = uniform_copies(kQuarter, 2);
    auto branches = discriminate_sets(bxor(state, 0, 1), 1);
    ASSERT_EQ(branches.size(), 1u);
    EXPECT_EQ(branches[0].remainder->entries().size(), 2u);
}

TEST(sigma_n, examples) {
    SigmaRun one = build_sigma_n(0.4, 1);
    EXPECT_EQ(one.sigma_n, one.start);
    SigmaRun three = build_sigma_n(0.3, 3);
    EXPECT_EQ(three.sigma_n, BellEnsemble({{{B1, B1, B1}, 0.3}, {{B2, B2, B2}, 0.7}}));
    EXPECT_EQ(three.sigma_prime, BellEnsemble({{{B1, B1, B1}, 0.3}, {{B3, B3, B3}, 0.7}}));
    EXPECT_EQ(run(three.sigma_n, inverse(three.steps)), three.start);
    EXPECT_EQ(three.start, BellEnsemble({{{B1, B1, B1}, 0.3}, {{B2, B1, B1}, 0.7}}));
    std::span<const BellOp> steps(three.steps);
    EXPECT_EQ(run(three.start, steps.first(three.prime_step_count)), three.sigma_prime);
    EXPECT_THROW(build_sigma_n(0, 2), std::invalid_argument);
    EXPECT_THROW(build_sigma_n(1, 2), std::invalid_argument);
    EXPECT_THROW(build_sigma_n(0.5, 0), std::invalid_argument);
}

TEST(sigma_n, dense_agreement) {
    for (std::size_t n : {1, 2, 4, 6}) {
        SigmaRun s = build_sigma_n(0.7, n);
        EXPECT_LT(trace_distance(run(to_dense(s.start), s.steps), to_dense(s.sigma_n)), 1e-10);
    }
}

TEST(witness, two_state) {
    NecessityWitness w = necessity_witness_two();
    EXPECT_EQ(w.output, BellEnsemble({{{B1, B1}, 0.5}, {{B2, B2}, 0.5}}));
    EXPECT_NEAR(w.input_report.value, 0.0, 1e-9);
    EXPECT_GE(w.output_report.value, 1.0 - 1e-9);
    EXPECT_EQ(w.output_report.cut, "alice:bob");
}

TEST(witness, four_state) {
    NecessityWitness w = necessity_witness_four();
    EXPECT_EQ(w.output, uniform_copies(kQuarter, 3));
    EXPECT_NEAR(w.input_report.value, 0.0, 1e-9);
    EXPECT_GE(w.output_report.value, 2.0 - 1e-9);
}
