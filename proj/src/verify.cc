#include "bellclone/verify.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bellclone/bell.h"
#include "bellclone/bell_ops.h"
#include "bellclone/dense.h"
#include "bellclone/measures.h"
#include "bellclone/protocols.h"

namespace bellclone {

namespace {

constexpr double kQuarter[4] = {0.25, 0.25, 0.25, 0.25};

// Worst figure seen so far plus the first structural failure, if any.
struct Tally {
    double worst = 0;
    std::string failure;

    void see(double value) {
        worst = std::max(worst, value);
    }
    void require(bool condition, const std::string &what) {
        if (!condition && failure.empty()) {
            failure = what;
        }
    }
};

ClaimRecord at_most(std::string id, std::string anchor, const Tally &tally, double tolerance, std::string what) {
    ClaimRecord r{std::move(id), std::move(anchor), false, tally.worst, tolerance, "max " + what + " <= tolerance"};
    r.passed = tally.failure.empty() && tally.worst <= tolerance;
    if (!tally.failure.empty()) {
        r.detail += "; failed: " + tally.failure;
    }
    return r;
}

ClaimRecord at_least(std::string id, std::string anchor, double measured, double bound, double tolerance, std::string what) {
    std::ostringstream detail;
    detail.precision(17);
    detail << what << " >= " << bound << " - tolerance";
    ClaimRecord r{std::move(id), std::move(anchor), measured >= bound - tolerance, measured, tolerance, detail.str()};
    return r;
}

std::string case_name(const BellString &labels, std::size_t n) {
    return to_string(labels) + " n=" + std::to_string(n);
}

double fidelity_defect(const DenseState &state, const BellEnsemble &target) {
    return 1.0 - fidelity(state, to_dense(target).branches().front().amplitudes);
}

ClaimRecord claim_clone_two() {
    Tally t;
    for (std::size_t i = 0; i < 4; i++) {
        for (std::size_t j = i + 1; j < 4; j++) {
            std::array<BellLabel, 2> pair = {kAllBellLabels[i], kAllBellLabels[j]};
            for (auto x : pair) {
                for (std::size_t n : {2, 3, 5}) {
                    std::string name = to_string(BellString(pair.begin(), pair.end())) + " input " + x.name() +
                                       " n=" + std::to_string(n);
                    auto target = BellEnsemble::point(repeat(x, n));
                    ProtocolRun run = clone_pair_1_to_n(x, pair, n);
                    t.require(run.output == target, name + " symbolic output");
                    t.require(run.ledger.ebits_consumed == static_cast<double>(n - 1), name + " ebit count");
                    t.require(is_locc(run.ledger), name + " LOCC audit");
                    t.see(fidelity_defect(clone_pair_dense(BellEnsemble::point({x}), pair, n), target));
                }
            }
        }
    }
    return at_most("clone-two", "1 -> n cloning of a Bell state from a known pair", t, 1e-12, "dense fidelity defect");
}

ClaimRecord claim_bxor_certificate() {
    Tally t;
    for (auto x : kAllBellLabels) {
        for (auto y : kAllBellLabels) {
            auto start = BellEnsemble::point({x, y});
            BellEnsemble symbolic = bxor(start, 0, 1);
            DenseState dense = apply(to_dense(start), BellOp::bxor(0, 1));
            t.see(trace_distance(dense, to_dense(symbolic)));
        }
    }
    return at_most("bxor-certificate", "bilateral C-NOT label rule", t, 1e-10, "trace distance to dense C-NOT x C-NOT");
}

ClaimRecord claim_smolin_ppt() {
    DenseState smolin = to_dense(uniform_copies(kQuarter, 2));
    Tally t;
    t.see(log_negativity(smolin, Cut::alice_bob(smolin)));
    return at_most("smolin-ppt", "Smolin state is PPT across A1A2:B1B2", t, 1e-9, "log-negativity");
}

ClaimRecord claim_smolin_one_vs_three() {
    DenseState smolin = to_dense(uniform_copies(kQuarter, 2));
    double lowest = INFINITY;
    for (std::size_t q = 0; q < 4; q++) {
        lowest = std::min(lowest, log_negativity(smolin, Cut::from_left(4, {q})));
    }
    return at_least(
        "smolin-one-vs-three", "Smolin state is entangled across every one-qubit cut", lowest, 1.0, 1e-9,
        "min log-negativity over 1:3 cuts");
}

ClaimRecord claim_teleport_choi() {
    DenseState channel = to_dense(uniform_copies(kQuarter, 2));
    Tally t;
    t.see(max_abs_difference(teleportation_choi(channel), pauli_diagonal_map_choi()));
    return at_most(
        "eq4-choi", "teleportation through the Smolin state is the Pauli-diagonal map", t, 1e-9,
        "Choi matrix entry residual");
}

ClaimRecord claim_teleport_bell_fidelity() {
    DenseState channel = to_dense(uniform_copies(kQuarter, 2));
    Tally t;
    for (auto x : kAllBellLabels) {
        auto input = BellEnsemble::point({x});
        t.see(fidelity_defect(teleport_two_qubit(channel, to_dense(input, QubitRole::Input)), input));
    }
    return at_most(
        "teleport-bell-fidelity", "Bell states teleport exactly through the Smolin state", t, 1e-12, "fidelity defect");
}

ClaimRecord claim_prepare_rhom() {
    Tally t;
    for (std::size_t m : {3, 4}) {
        ProtocolRun run = prepare_rho_m(m);
        t.require(run.output == uniform_copies(kQuarter, m), "m=" + std::to_string(m) + " symbolic output");
        t.see(trace_distance(prepare_rho_m_dense(m), to_dense(run.output)));
    }
    for (std::size_t m = 2; m <= 64; m++) {
        ProtocolRun run = prepare_rho_m(m);
        std::string name = "m=" + std::to_string(m);
        const auto &entries = run.output.entries();
        t.require(entries.size() == 4, name + " support size");
        for (const auto &entry : entries) {
            t.require(entry.probability == 0.25, name + " string weight");
        }
        t.require(uniform_string_weights(run.output).has_value(), name + " uniform strings");
        t.require(run.ledger.ebits_consumed == ed_rho_m(m), name + " ebit count");
        t.require(is_locc(run.ledger), name + " LOCC audit");
    }
    return at_most("prepare-rhom", "uniform-copies ancilla preparation", t, 1e-12, "dense trace distance (m = 3, 4)");
}

ClaimRecord claim_clone_four() {
    Tally t;
    for (auto x : kAllBellLabels) {
        for (std::size_t n : {2, 3}) {
            std::string name = case_name({x}, n);
            auto target = BellEnsemble::point(repeat(x, n));
            ProtocolRun run = clone_four_1_to_n(x, n);
            t.require(run.output == target, name + " symbolic output");
            t.require(run.ledger.ebits_consumed == 2.0, name + " ebit count");
            t.require(is_locc(run.ledger), name + " LOCC audit");
            double q[4] = {0, 0, 0, 0};
            q[x.index()] = 1;
            DenseState dense = clone_four_dense(q, n);
            t.require(trace_distance(dense, to_dense(run.output)) < 1e-10, name + " symbolic vs dense");
            t.see(fidelity_defect(dense, target));
        }
    }
    return at_most("clone-four", "1 -> n cloning of an unknown Bell state", t, 1e-12, "dense fidelity defect");
}

ClaimRecord claim_quasi_pure() {
    const double p[4] = {0.4, 0.1, 0.3, 0.2};
    Tally t;
    ProtocolRun prep = prepare_quasi_pure(p, 3, Engine::Both);
    t.require(prep.passed(), "preparation cross-checks");
    t.require(prep.ledger.ebits_consumed == 2.0, "preparation ebit count");
    t.require(prep.output == uniform_copies(p, 3), "prepared state");
    DistillRun dist = distill_quasi_pure(prep.output, Engine::Both);
    t.require(dist.passed(), "distillation cross-checks");
    t.require(dist.ledger.ebits_distilled == 2.0, "distilled ebit count");
    t.require(dist.branches.size() == 2, "branch count");
    for (const auto &branch : dist.branches) {
        BellLabel kept = branch.a_bit == 0 ? B1 : B3;
        t.require(branch.remainder == BellEnsemble::point({kept, kept}), "branch remainder");
        t.see(std::abs(branch.probability - 0.5));
    }
    return at_most(
        "quasi-pure-reversibility", "quasi-pure states are prepared and distilled at the same rate", t, 0.0,
        "branch probability deviation from 1/2");
}

ClaimRecord claim_sigma_round_trip() {
    Tally t;
    for (double p : {0.1, 0.3, 0.7}) {
        for (std::size_t n : {1, 2, 4}) {
            SigmaRun sigma = build_sigma_n(p, n);
            std::ostringstream name;
            name << "p=" << p << " n=" << n;
            BellEnsemble expected({{repeat(B1, n), p}, {repeat(B2, n), 1 - p}});
            t.require(sigma.sigma_n == expected, name.str() + " sigma_n");
            t.require(run(sigma.sigma_n, inverse(sigma.steps)) == sigma.start, name.str() + " inverse");
        }
    }
    return at_most("sigma-round-trip", "sigma_n is locally equivalent to sigma_1 plus ebits", t, 0.0, "deviation");
}

ClaimRecord claim_formula_suite() {
    Tally t;
    const std::size_t grid = 999;
    for (std::size_t i = 1; i <= grid; i++) {
        double p = static_cast<double>(i) / (grid + 1);
        double ec = ec_sigma1(p);
        double ed = ed_sigma1(p);
        if (i == (grid + 1) / 2) {
            t.see(std::abs(ec));
            t.see(std::abs(ed));
        } else {
            t.require(ec > ed, "E_c > E_D");
            double gap = irreversibility_gap(p, 1);
            for (std::size_t n : {2, 3, 5, 10}) {
                t.see(std::abs(irreversibility_gap(p, n) - gap));
            }
        }
        t.see(std::abs(binary_entropy(p) - binary_entropy(1 - p)));
    }
    t.require(binary_entropy(0) == 0 && binary_entropy(1) == 0, "H2 endpoints");
    t.see(std::abs(binary_entropy(0.5) - 1));
    return at_most("formula-suite", "entanglement cost and distillable entanglement of sigma_n", t, 1e-12, "deviation");
}

ClaimRecord claim_linearity_witness() {
    NecessityWitness w = necessity_witness_two();
    BellEnsemble expected({{{B1, B1}, 0.5}, {{B2, B2}, 0.5}});
    ClaimRecord r = at_least(
        "linearity-witness", "cloning a separable mixture would create entanglement", w.output_report.value, 1.0, 1e-9,
        "output Alice:Bob log-negativity");
    if (!(w.output == expected)) {
        r.passed = false;
        r.detail += "; failed: cloned mixture";
    }
    return r;
}

ClaimRecord claim_four_state_witness() {
    NecessityWitness w = necessity_witness_four();
    return at_least(
        "four-state-witness", "cloning half the Smolin state would create entanglement", w.output_report.value, 2.0,
        1e-9, "output Alice:Bob log-negativity");
}

}  // namespace

void to_json(nlohmann::json &j, const ClaimRecord &record) {
    j = nlohmann::json{
        {"id", record.id},
        {"anchor", record.anchor},
        {"passed", record.passed},
        {"measured", record.measured},
        {"tolerance", record.tolerance},
        {"detail", record.detail},
    };
}

const std::vector<Claim> &claim_suite() {
    static const std::vector<Claim> suite = [] {
        std::vector<Claim> claims = {
            {"bxor-certificate", 2, claim_bxor_certificate},
            {"clone-four", 6, claim_clone_four},
            {"clone-two", 1, claim_clone_two},
            {"eq4-choi", 4, claim_teleport_choi},
            {"formula-suite", 9, claim_formula_suite},
            {"four-state-witness", 10, claim_four_state_witness},
            {"linearity-witness", 10, claim_linearity_witness},
            {"prepare-rhom", 5, claim_prepare_rhom},
            {"quasi-pure-reversibility", 7, claim_quasi_pure},
            {"sigma-round-trip", 8, claim_sigma_round_trip},
            {"smolin-one-vs-three", 3, claim_smolin_one_vs_three},
            {"smolin-ppt", 3, claim_smolin_ppt},
            {"teleport-bell-fidelity", 4, claim_teleport_bell_fidelity},
        };
        std::sort(claims.begin(), claims.end(), [](const Claim &a, const Claim &b) { return a.id < b.id; });
        return claims;
    }();
    return suite;
}

std::vector<ClaimRecord> run_claims() {
    std::vector<ClaimRecord> records;
    for (const auto &claim : claim_suite()) {
        try {
            records.push_back(claim.run());
        } catch (const std::exception &e) {
            records.push_back(ClaimRecord{claim.id, "", false, 0, 0, std::string("exception: ") + e.what()});
        }
    }
    return records;
}

nlohmann::json claims_report(const std::vector<ClaimRecord> &records) {
    nlohmann::json failing = nlohmann::json::array();
    for (const auto &r : records) {
        if (!r.passed) {
            failing.push_back(r.id);
        }
    }
    return nlohmann::json{{"passed", failing.empty()}, {"claims", records}, {"failing", failing}};
}

}  // namespace bellclone
