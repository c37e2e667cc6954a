#include <cmath>
#include <random>
#include <set>

#include "bellclone/bell.h"
#include "bellclone/bell_ops.h"
#include "bellclone/measures.h"
#include "bellclone/protocols.h"
#include "gtest/gtest.h"
#include "test_util.h"

using namespace bellclone;
using bellclone::fixtures::random_ensemble;
using bellclone::fixtures::random_op;

namespace {

double total_probability(const BellEnsemble &e) {
    double total = 0;
    for (const auto &entry : e.entries()) {
        total += entry.probability;
    }
    return total;
}

}  // namespace

TEST(properties, symbolic_matches_dense_on_random_sequences) {
    std::mt19937 rng(20240611);
    for (int trial = 0; trial < 200; trial++) {
        std::size_t pairs = 1 + trial % 4;
        BellEnsemble e = random_ensemble(rng, pairs, 6);
        std::size_t length = std::uniform_int_distribution<std::size_t>(0, 20)(rng);
        std::vector<BellOp> ops;
        for (std::size_t k = 0; k < length; k++) {
            ops.push_back(random_op(rng, pairs));
        }
        BellEnsemble symbolic = run(e, ops);
        DenseState dense = run(to_dense(e), ops);
        ASSERT_LT(trace_distance(to_dense(symbolic), dense), 1e-10) << "trial " << trial;
    }
}

TEST(properties, seven_pair_sequences_match_dense) {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 5; trial++) {
        BellEnsemble e = random_ensemble(rng, 7, 3);
        std::vector<BellOp> ops;
        for (int k = 0; k < 20; k++) {
            ops.push_back(random_op(rng, 7));
        }
        ASSERT_LT(trace_distance(to_dense(run(e, ops)), run(to_dense(e), ops)), 1e-10);
    }
}

TEST(properties, involutions) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 100; trial++) {
        std::size_t pairs = 2 + trial % 4;
        BellEnsemble e = random_ensemble(rng, pairs, 8);
        std::size_t s = trial % pairs;
        std::size_t t = (s + 1 + trial % (pairs - 1)) % pairs;
        EXPECT_EQ(bxor(bxor(e, s, t), s, t), e);
        EXPECT_EQ(bilateral_hadamard(bilateral_hadamard(e, s), s), e);
        for (int k = 1; k <= 3; k++) {
            for (auto side : {Party::Alice, Party::Bob}) {
                EXPECT_EQ(one_sided_pauli(one_sided_pauli(e, t, k, side), t, k, side), e);
            }
        }
    }
}

TEST(properties, op_sequences_invert) {
    std::mt19937 rng(6);
    for (int trial = 0; trial < 100; trial++) {
        std::size_t pairs = 1 + trial % 5;
        BellEnsemble e = random_ensemble(rng, pairs, 8);
        std::vector<BellOp> ops;
        for (int k = 0; k < 20; k++) {
            ops.push_back(random_op(rng, pairs));
        }
        EXPECT_EQ(run(run(e, ops), inverse(ops)), e);
    }
}

TEST(properties, probability_is_preserved) {
    std::mt19937 rng(8);
    for (int trial = 0; trial < 100; trial++) {
        std::size_t pairs = 1 + trial % 6;
        BellEnsemble e = random_ensemble(rng, pairs, 10);
        for (int k = 0; k < 20; k++) {
            e = apply(e, random_op(rng, pairs));
            ASSERT_NEAR(total_probability(e), 1.0, 1e-12);
        }
    }
}

TEST(properties, op_steps_are_local) {
    std::mt19937 rng(10);
    for (int trial = 0; trial < 200; trial++) {
        BellOp op = random_op(rng, 5);
        ResourceLedger ledger;
        std::vector<BellOp> one = {op};
        ledger.add_ops(one);
        EXPECT_TRUE(is_locc(ledger)) << op.describe();
    }
}

TEST(properties, local_clifford_table_is_the_full_permutation_group) {
    auto table = local_clifford_table();
    ASSERT_EQ(table.size(), 24u);
    std::set<std::vector<int>> permutations;
    for (const auto &ops : table) {
        std::vector<int> image;
        for (auto x : kAllBellLabels) {
            image.push_back(run(BellEnsemble::point({x}), ops).entries().front().labels.front().index());
        }
        permutations.insert(image);
    }
    EXPECT_EQ(permutations.size(), 24u);
}

TEST(properties, spectral_log_negativity_matches_dense) {
    std::mt19937 rng(12);
    for (int trial = 0; trial < 40; trial++) {
        std::size_t pairs = 1 + trial % 4;
        BellEnsemble e = random_ensemble(rng, pairs, 6);
        DenseState dense = to_dense(e);
        EXPECT_NEAR(log_negativity_alice_bob(e), log_negativity(dense, Cut::alice_bob(dense)), 1e-9);
    }
}

TEST(properties, protocol_outputs_match_dense) {
    std::mt19937 rng(14);
    for (int trial = 0; trial < 10; trial++) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double q[4];
        double total = 0;
        for (double &x : q) {
            x = u(rng);
            total += x;
        }
        for (double &x : q) {
            x /= total;
        }
        std::size_t n = 2 + trial % 2;
        ProtocolRun run = clone_four_1_to_n(q, n, Engine::Both);
        EXPECT_TRUE(run.passed());
        EXPECT_TRUE(approx_equal(run.output, uniform_copies(q, n)));
    }
}
