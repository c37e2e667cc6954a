#pragma once

#include <cstddef>
#include <string>

#include "bellclone/bell.h"
#include "json.hpp"

namespace bellclone {

enum class Provenance { Formula, DenseWitness };

/// An evaluated entanglement quantity, in ebits.
struct MeasureReport {
    std::string quantity;
    double value = 0;
    std::string state;
    std::string cut;
    Provenance provenance = Provenance::Formula;
};

void to_json(nlohmann::json &j, const MeasureReport &report);

/// H2(x) = -x log2 x - (1-x) log2 (1-x), with H2(0) = H2(1) = 0.
/// Throws std::invalid_argument outside [0, 1].
double binary_entropy(double x);

/// Entanglement cost of p P[B1] + (1-p) P[B2]: H2(1/2 + sqrt(p(1-p))).
double ec_sigma1(double p);
/// Distillable entanglement of the same state: 1 - H2(p).
double ed_sigma1(double p);

/// p P[B1^(x)n] + (1-p) P[B2^(x)n]: cost grows by one ebit per extra pair.
double ec_sigma_n(double p, std::size_t n);
/// n - H2(p).
double ed_sigma_n(double p, std::size_t n);

/// E_c - E_D of the sigma_n family; independent of n. p = 1/2 is rejected since the
/// gap vanishes there.
double irreversibility_gap(double p, std::size_t n);

/// Distillable entanglement of (1/2)(P[B1^(x)n] + P[B3^(x)n]): n - 1.
double ed_rho2n(std::size_t n);

/// Distillable entanglement of (1/4) sum_i P[B_i^(x)m]: m - 1 for odd m, m - 2 for
/// even m. These are cited values, not derived here.
double ed_rho_m(std::size_t m);

/// Alice:Bob log-negativity of a Bell ensemble without building its density matrix.
/// Each pair's partial transpose is diagonal in the Bell basis, so the spectrum of
/// the whole partial transpose is a sum of Kronecker products of 4-vectors. The
/// per-pair blocks are taken from the dense partial transpose and checked to be
/// diagonal. Supports up to 10 pairs.
double log_negativity_alice_bob(const BellEnsemble &e);

/// Alice:Bob log-negativity report: dense partial transpose for registers up to
/// 10 qubits, the Bell-diagonal spectral route beyond that.
MeasureReport log_negativity_report(const BellEnsemble &e, const std::string &state_name);

}  // namespace bellclone
