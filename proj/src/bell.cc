#include "bellclone/bell.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bellclone {

namespace {

constexpr double kPruneBelow = 1e-15;

template <typename F>
BellEnsemble rewrite(const BellEnsemble &e, F &&rule) {
    std::vector<BellEnsemble::Entry> entries = e.entries();
    for (auto &entry : entries) {
        rule(entry.labels);
    }
    return BellEnsemble(std::move(entries));
}

void check_pair(const BellEnsemble &e, std::size_t pair) {
    if (pair >= e.num_pairs()) {
        throw std::invalid_argument(
            "pair " + std::to_string(pair) + " out of range for " + std::to_string(e.num_pairs()) + " pairs");
    }
}

}  // namespace

std::string BellLabel::name() const {
    return "B" + std::to_string(index() + 1);
}

std::string BellLabel::bits() const {
    return std::string{static_cast<char>('0' + a), static_cast<char>('0' + b)};
}

BellLabel parse_bell_label(std::string_view text) {
    if (text.size() == 2 && (text[0] == 'B' || text[0] == 'b') && text[1] >= '1' && text[1] <= '4') {
        return BellLabel::from_index(text[1] - '1');
    }
    throw std::invalid_argument("not a Bell label (expected B1..B4): '" + std::string(text) + "'");
}

BellString repeat(BellLabel label, std::size_t copies) {
    return BellString(copies, label);
}

std::string to_string(const BellString &labels) {
    std::string out;
    for (std::size_t k = 0; k < labels.size(); k++) {
        if (k) {
            out += ',';
        }
        out += labels[k].name();
    }
    return out;
}

BellEnsemble::BellEnsemble(std::vector<Entry> entries) {
    if (entries.empty()) {
        throw std::invalid_argument("an ensemble needs at least one entry");
    }
    std::size_t length = entries.front().labels.size();
    double total = 0;
    for (const auto &entry : entries) {
        if (entry.labels.empty()) {
            throw std::invalid_argument("Bell strings must hold at least one pair");
        }
        if (entry.labels.size() != length) {
            throw std::invalid_argument("all Bell strings in an ensemble must have the same length");
        }
        if (!(entry.probability >= 0) || !std::isfinite(entry.probability)) {
            throw std::invalid_argument("probabilities must be finite and non-negative");
        }
        total += entry.probability;
    }
    if (std::abs(total - 1.0) > kCircuitTolerance) {
        throw std::invalid_argument("probabilities sum to " + std::to_string(total) + ", not 1");
    }

    std::sort(entries.begin(), entries.end(), [](const Entry &x, const Entry &y) { return x.labels < y.labels; });
    for (auto &entry : entries) {
        if (!entries_.empty() && entries_.back().labels == entry.labels) {
            entries_.back().probability += entry.probability;
        } else {
            entries_.push_back(std::move(entry));
        }
    }
    std::erase_if(entries_, [](const Entry &entry) { return entry.probability < kPruneBelow; });
    if (entries_.empty()) {
        throw std::invalid_argument("every entry was pruned");
    }
    double kept = 0;
    for (const auto &entry : entries_) {
        kept += entry.probability;
    }
    // Leave rounding-level totals alone so pure relabelings keep probabilities bit-exact.
    if (std::abs(kept - 1.0) > 1e-14) {
        for (auto &entry : entries_) {
            entry.probability /= kept;
        }
    }
}

BellEnsemble BellEnsemble::point(BellString labels) {
    return BellEnsemble({Entry{std::move(labels), 1.0}});
}

BellEnsemble BellEnsemble::bell_diagonal(std::span<const double> weights) {
    return uniform_copies(weights, 1);
}

double BellEnsemble::probability(const BellString &labels) const {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), labels, [](const Entry &entry, const BellString &key) {
            return entry.labels < key;
        });
    if (it != entries_.end() && it->labels == labels) {
        return it->probability;
    }
    return 0;
}

std::string BellEnsemble::to_text() const {
    std::ostringstream out;
    out << std::setprecision(17);
    for (const auto &entry : entries_) {
        out << entry.probability;
        for (auto label : entry.labels) {
            out << ' ' << label.bits();
        }
        out << '\n';
    }
    return out.str();
}

BellEnsemble BellEnsemble::from_text(std::string_view text) {
    std::vector<Entry> entries;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
            continue;
        }
        std::istringstream fields(line);
        std::string probability_text;
        fields >> probability_text;
        std::size_t consumed = 0;
        double probability = 0;
        try {
            probability = std::stod(probability_text, &consumed);
        } catch (const std::exception &) {
            consumed = 0;
        }
        if (consumed == 0 || consumed != probability_text.size()) {
            throw std::invalid_argument("bad probability field: '" + probability_text + "'");
        }
        Entry entry{{}, probability};
        std::string bits;
        while (fields >> bits) {
            if (bits.size() != 2 || (bits[0] != '0' && bits[0] != '1') || (bits[1] != '0' && bits[1] != '1')) {
                throw std::invalid_argument("bad Bell label field: '" + bits + "'");
            }
            entry.labels.push_back(
                BellLabel{static_cast<std::uint8_t>(bits[0] - '0'), static_cast<std::uint8_t>(bits[1] - '0')});
        }
        entries.push_back(std::move(entry));
    }
    return BellEnsemble(std::move(entries));
}

bool approx_equal(const BellEnsemble &first, const BellEnsemble &second, double tolerance) {
    if (first.entries().size() != second.entries().size()) {
        return false;
    }
    for (std::size_t k = 0; k < first.entries().size(); k++) {
        const auto &x = first.entries()[k];
        const auto &y = second.entries()[k];
        if (x.labels != y.labels || std::abs(x.probability - y.probability) > tolerance) {
            return false;
        }
    }
    return true;
}

BellEnsemble tensor(const BellEnsemble &first, const BellEnsemble &second) {
    std::vector<BellEnsemble::Entry> entries;
    for (const auto &x : first.entries()) {
        for (const auto &y : second.entries()) {
            BellString labels = x.labels;
            labels.insert(labels.end(), y.labels.begin(), y.labels.end());
            entries.push_back({std::move(labels), x.probability * y.probability});
        }
    }
    return BellEnsemble(std::move(entries));
}

BellEnsemble mix(std::span<const BellEnsemble> ensembles, std::span<const double> weights) {
    if (ensembles.empty() || ensembles.size() != weights.size()) {
        throw std::invalid_argument("mix needs one weight per ensemble");
    }
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(total - 1.0) > kCircuitTolerance) {
        throw std::invalid_argument("mixture weights must sum to 1");
    }
    std::vector<BellEnsemble::Entry> entries;
    for (std::size_t k = 0; k < ensembles.size(); k++) {
        if (weights[k] < 0) {
            throw std::invalid_argument("mixture weights must be non-negative");
        }
        if (ensembles[k].num_pairs() != ensembles[0].num_pairs()) {
            throw std::invalid_argument("mixed ensembles must have the same number of pairs");
        }
        for (const auto &entry : ensembles[k].entries()) {
            entries.push_back({entry.labels, entry.probability * weights[k]});
        }
    }
    return BellEnsemble(std::move(entries));
}

BellEnsemble bxor(const BellEnsemble &e, std::size_t source, std::size_t target) {
    check_pair(e, source);
    check_pair(e, target);
    if (source == target) {
        throw std::invalid_argument("bilateral C-NOT needs distinct source and target pairs");
    }
    return rewrite(e, [&](BellString &s) {
        BellLabel &src = s[source];
        BellLabel &tgt = s[target];
        src.b ^= tgt.b;
        tgt.a ^= src.a;
    });
}

BellEnsemble bilateral_hadamard(const BellEnsemble &e, std::size_t pair) {
    check_pair(e, pair);
    return rewrite(e, [&](BellString &s) { std::swap(s[pair].a, s[pair].b); });
}

BellEnsemble bilateral_phase(const BellEnsemble &e, std::size_t pair) {
    check_pair(e, pair);
    return rewrite(e, [&](BellString &s) { s[pair].b ^= s[pair].a; });
}

BellEnsemble one_sided_pauli(const BellEnsemble &e, std::size_t pair, int pauli_index, Party side) {
    (void)side;
    check_pair(e, pair);
    if (pauli_index < 1 || pauli_index > 3) {
        throw std::invalid_argument("one-sided Pauli index must be 1..3");
    }
    std::uint8_t flip_a = pauli_index == 1 || pauli_index == 2;
    std::uint8_t flip_b = pauli_index == 2 || pauli_index == 3;
    return rewrite(e, [&](BellString &s) {
        s[pair].a ^= flip_a;
        s[pair].b ^= flip_b;
    });
}

std::vector<SetBranch> discriminate_sets(const BellEnsemble &e, std::size_t pair) {
    check_pair(e, pair);
    std::vector<SetBranch> branches;
    for (int a_bit = 0; a_bit < 2; a_bit++) {
        std::vector<BellEnsemble::Entry> kept;
        double probability = 0;
        for (const auto &entry : e.entries()) {
            if (entry.labels[pair].a != a_bit) {
                continue;
            }
            probability += entry.probability;
            BellString rest = entry.labels;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pair));
            kept.push_back({std::move(rest), entry.probability});
        }
        if (probability <= 0) {
            continue;
        }
        SetBranch branch{a_bit, probability, std::nullopt};
        if (e.num_pairs() > 1) {
            for (auto &entry : kept) {
                entry.probability /= probability;
            }
            branch.remainder = BellEnsemble(std::move(kept));
        }
        branches.push_back(std::move(branch));
    }
    return branches;
}

DenseState to_dense(const BellEnsemble &e, QubitRole role) {
    if (e.num_qubits() > kMaxBranchQubits) {
        throw std::invalid_argument(
            "ensemble needs " + std::to_string(e.num_qubits()) + " qubits; dense rendering stops at 14");
    }
    std::vector<PureBranch> branches;
    for (const auto &entry : e.entries()) {
        ComplexVector v = ComplexVector::Ones(1);
        for (auto label : entry.labels) {
            ComplexVector pair_state = bell_state(label).amplitudes;
            ComplexVector next(v.size() * 4);
            for (Eigen::Index i = 0; i < v.size(); i++) {
                next.segment(4 * i, 4) = v[i] * pair_state;
            }
            v = std::move(next);
        }
        branches.push_back(PureBranch{std::move(v), entry.probability});
    }
    return DenseState(std::move(branches), pair_layout(e.num_pairs(), role));
}

BellEnsemble uniform_copies(std::span<const double> weights, std::size_t copies) {
    if (weights.size() != 4) {
        throw std::invalid_argument("Bell-diagonal weights need exactly four entries");
    }
    if (copies == 0) {
        throw std::invalid_argument("need at least one copy");
    }
    std::vector<BellEnsemble::Entry> entries;
    for (int i = 0; i < 4; i++) {
        entries.push_back({repeat(BellLabel::from_index(i), copies), weights[i]});
    }
    return BellEnsemble(std::move(entries));
}

std::optional<std::vector<double>> uniform_string_weights(const BellEnsemble &e) {
    std::vector<double> weights(4, 0.0);
    for (const auto &entry : e.entries()) {
        BellLabel first = entry.labels.front();
        if (!std::all_of(entry.labels.begin(), entry.labels.end(), [&](BellLabel l) { return l == first; })) {
            return std::nullopt;
        }
        weights[first.index()] += entry.probability;
    }
    return weights;
}

}  // namespace bellclone
