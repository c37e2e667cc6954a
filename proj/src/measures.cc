#include "bellclone/measures.h"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace bellclone {

namespace {

// -t log2 t, continuous at 0.
double surprisal_term(double t) {
    return t > 0 ? -t * std::log2(t) : 0.0;
}

void check_open_unit(double p) {
    if (!(p > 0 && p < 1)) {
        throw std::invalid_argument("p must lie strictly between 0 and 1");
    }
}

void check_count(std::size_t n, std::size_t minimum) {
    if (n < minimum) {
        throw std::invalid_argument("count must be at least " + std::to_string(minimum));
    }
}

// row[y] = <B_y| P[B_x]^(T_Bob) |B_y>.
std::array<std::array<double, 4>, 4> bell_partial_transpose_spectra() {
    std::array<std::array<double, 4>, 4> table{};
    Cut cut = Cut::from_left(2, {0});
    for (auto x : kAllBellLabels) {
        DenseState state = DenseState::pure(bell_state(x).amplitudes, pair_layout(1));
        ComplexMatrix pt = partial_transpose(state, cut);
        for (auto y : kAllBellLabels) {
            for (auto z : kAllBellLabels) {
                Complex element = bell_state(y).amplitudes.dot(pt * bell_state(z).amplitudes);
                if (y == z) {
                    table[x.index()][y.index()] = element.real();
                } else if (std::abs(element) > kCircuitTolerance) {
                    throw std::logic_error("partial transpose of a Bell projector left the Bell basis");
                }
            }
        }
    }
    return table;
}

}  // namespace

void to_json(nlohmann::json &j, const MeasureReport &report) {
    j = nlohmann::json{
        {"quantity", report.quantity},
        {"state", report.state},
        {"cut", report.cut},
        {"value", report.value},
        {"provenance", report.provenance == Provenance::Formula ? "formula" : "dense-witness"},
    };
}

double binary_entropy(double x) {
    if (!(x >= 0 && x <= 1)) {
        throw std::invalid_argument("binary entropy argument must lie in [0, 1]");
    }
    return surprisal_term(x) + surprisal_term(1 - x);
}

double ec_sigma1(double p) {
    check_open_unit(p);
    double s = std::sqrt(p * (1 - p));
    double upper = 0.5 + s;
    // 1 - upper without cancellation: (1/2 - s) = (1/4 - s^2) / (1/2 + s).
    double lower = (p - 0.5) * (p - 0.5) / upper;
    return surprisal_term(upper) + surprisal_term(lower);
}

double ed_sigma1(double p) {
    check_open_unit(p);
    return 1 - binary_entropy(p);
}

double ec_sigma_n(double p, std::size_t n) {
    check_count(n, 1);
    return ec_sigma1(p) + static_cast<double>(n - 1);
}

double ed_sigma_n(double p, std::size_t n) {
    check_open_unit(p);
    check_count(n, 1);
    return static_cast<double>(n) - binary_entropy(p);
}

double irreversibility_gap(double p, std::size_t n) {
    if (p == 0.5) {
        throw std::invalid_argument("p = 1/2 gives a separable state with no irreversibility gap");
    }
    return ec_sigma_n(p, n) - ed_sigma_n(p, n);
}

double ed_rho2n(std::size_t n) {
    check_count(n, 1);
    return static_cast<double>(n - 1);
}

double ed_rho_m(std::size_t m) {
    check_count(m, 2);
    return static_cast<double>(m % 2 == 1 ? m - 1 : m - 2);
}

double log_negativity_alice_bob(const BellEnsemble &e) {
    std::size_t n = e.num_pairs();
    if (n > 10) {
        throw std::invalid_argument("spectral log-negativity supports at most 10 pairs");
    }
    static const auto spectra = bell_partial_transpose_spectra();
    std::vector<double> eigenvalues(std::size_t{1} << (2 * n), 0.0);
    std::vector<double> term;
    for (const auto &entry : e.entries()) {
        term.assign(1, entry.probability);
        for (auto label : entry.labels) {
            std::vector<double> next(term.size() * 4);
            for (std::size_t i = 0; i < term.size(); i++) {
                for (std::size_t y = 0; y < 4; y++) {
                    next[4 * i + y] = term[i] * spectra[label.index()][y];
                }
            }
            term = std::move(next);
        }
        for (std::size_t t = 0; t < term.size(); t++) {
            eigenvalues[t] += term[t];
        }
    }
    double negativity = 0;
    for (double lambda : eigenvalues) {
        if (lambda < 0) {
            negativity -= lambda;
        }
    }
    return std::log2(1.0 + 2.0 * negativity);
}

MeasureReport log_negativity_report(const BellEnsemble &e, const std::string &state_name) {
    MeasureReport report;
    report.quantity = "log_negativity";
    report.state = state_name;
    report.cut = "alice:bob";
    report.provenance = Provenance::DenseWitness;
    if (e.num_qubits() <= kMaxDensityQubits) {
        DenseState dense = to_dense(e);
        report.value = log_negativity(dense, Cut::alice_bob(dense));
    } else {
        report.value = log_negativity_alice_bob(e);
    }
    return report;
}

}  // namespace bellclone
