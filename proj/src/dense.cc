#include "bellclone/dense.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace bellclone {

namespace {

// Branches lighter than this are dropped when a mixture is split.
constexpr double kNegligibleWeight = 1e-30;
// Outcomes below this probability are reported as impossible.
constexpr double kNegligibleProbability = 1e-14;

std::size_t bit_mask(std::size_t num_qubits, std::size_t qubit) {
    return std::size_t{1} << (num_qubits - 1 - qubit);
}

std::size_t dimension(std::size_t num_qubits) {
    return std::size_t{1} << num_qubits;
}

void check_qubit(const DenseState &state, std::size_t qubit) {
    if (qubit >= state.num_qubits()) {
        throw std::invalid_argument(
            "qubit " + std::to_string(qubit) + " out of range for a " + std::to_string(state.num_qubits()) +
            "-qubit register");
    }
}

// offsets[j] is the index displacement selecting local basis state j on `qubits`,
// with qubits[0] as the most significant local bit.
std::vector<std::size_t> local_offsets(std::size_t num_qubits, std::span<const std::size_t> qubits) {
    std::size_t k = qubits.size();
    std::vector<std::size_t> offsets(std::size_t{1} << k, 0);
    for (std::size_t j = 0; j < offsets.size(); j++) {
        for (std::size_t t = 0; t < k; t++) {
            if ((j >> (k - 1 - t)) & 1) {
                offsets[j] |= bit_mask(num_qubits, qubits[t]);
            }
        }
    }
    return offsets;
}

std::size_t combined_mask(std::size_t num_qubits, std::span<const std::size_t> qubits) {
    std::size_t mask = 0;
    for (auto q : qubits) {
        mask |= bit_mask(num_qubits, q);
    }
    return mask;
}

// Applies a two-qubit projector onto span{|v>} for each v in `basis` (orthonormal,
// given in the local basis of the two qubits) and returns the unnormalized
// projected branch.
ComplexVector project_two(
    const ComplexVector &psi,
    const std::vector<ComplexVector> &basis,
    const std::vector<std::size_t> &offsets,
    std::size_t mask) {
    ComplexVector out = ComplexVector::Zero(psi.size());
    for (std::size_t base = 0; base < static_cast<std::size_t>(psi.size()); base++) {
        if (base & mask) {
            continue;
        }
        for (const auto &v : basis) {
            Complex c = 0;
            for (std::size_t j = 0; j < 4; j++) {
                c += std::conj(v[j]) * psi[base + offsets[j]];
            }
            for (std::size_t j = 0; j < 4; j++) {
                out[base + offsets[j]] += v[j] * c;
            }
        }
    }
    return out;
}

struct ProjectedOutcome {
    double probability = 0;
    std::vector<PureBranch> branches;
};

ProjectedOutcome project_state(
    const DenseState &state, std::size_t first, std::size_t second, const std::vector<ComplexVector> &basis) {
    check_qubit(state, first);
    check_qubit(state, second);
    if (first == second) {
        throw std::invalid_argument("measured qubits must be distinct");
    }
    std::size_t n = state.num_qubits();
    std::size_t pair[2] = {first, second};
    auto offsets = local_offsets(n, pair);
    auto mask = combined_mask(n, pair);

    ProjectedOutcome result;
    for (const auto &branch : state.branches()) {
        ComplexVector projected = project_two(branch.amplitudes, basis, offsets, mask);
        double norm2 = projected.squaredNorm();
        double w = branch.weight * norm2;
        if (w <= kNegligibleWeight) {
            continue;
        }
        result.probability += w;
        result.branches.push_back(PureBranch{projected / std::sqrt(norm2), w});
    }
    return result;
}

}  // namespace

std::vector<QubitLabel> pair_layout(std::size_t num_pairs, QubitRole role) {
    std::vector<QubitLabel> labels;
    labels.reserve(2 * num_pairs);
    for (std::size_t k = 0; k < num_pairs; k++) {
        labels.push_back(QubitLabel{Party::Alice, k, role});
        labels.push_back(QubitLabel{Party::Bob, k, role});
    }
    return labels;
}

DenseState::DenseState(std::vector<PureBranch> branches, std::vector<QubitLabel> labels)
    : branches_(std::move(branches)), labels_(std::move(labels)) {
    std::size_t n = labels_.size();
    if (n == 0 || n > kMaxBranchQubits) {
        throw std::invalid_argument("register must hold between 1 and 14 qubits, got " + std::to_string(n));
    }
    if (branches_.empty()) {
        throw std::invalid_argument("a state needs at least one branch");
    }
    double total = 0;
    for (const auto &branch : branches_) {
        if (static_cast<std::size_t>(branch.amplitudes.size()) != dimension(n)) {
            throw std::invalid_argument("branch dimension does not match the labeled register");
        }
        if (std::abs(branch.amplitudes.norm() - 1.0) > kCircuitTolerance) {
            throw std::invalid_argument("branch is not normalized");
        }
        if (!(branch.weight > 0)) {
            throw std::invalid_argument("branch weights must be positive");
        }
        total += branch.weight;
    }
    if (std::abs(total - 1.0) > kCircuitTolerance) {
        throw std::invalid_argument("branch weights sum to " + std::to_string(total) + ", not 1");
    }
    for (auto &branch : branches_) {
        branch.weight /= total;
    }
}

DenseState DenseState::pure(ComplexVector amplitudes, std::vector<QubitLabel> labels) {
    return DenseState({PureBranch{std::move(amplitudes), 1.0}}, std::move(labels));
}

DenseState DenseState::relabeled(std::vector<QubitLabel> labels) const {
    if (labels.size() != labels_.size()) {
        throw std::invalid_argument("relabeling must keep the register size");
    }
    return DenseState(branches_, std::move(labels));
}

ComplexMatrix DenseState::density_matrix() const {
    if (num_qubits() > kMaxDensityQubits) {
        throw std::length_error(
            "refusing to materialize a " + std::to_string(num_qubits()) + "-qubit density matrix");
    }
    auto d = static_cast<Eigen::Index>(dimension(num_qubits()));
    ComplexMatrix rho = ComplexMatrix::Zero(d, d);
    for (const auto &branch : branches_) {
        rho.noalias() += branch.weight * branch.amplitudes * branch.amplitudes.adjoint();
    }
    return rho;
}

Cut Cut::from_left(std::size_t num_qubits, std::vector<std::size_t> left) {
    std::sort(left.begin(), left.end());
    left.erase(std::unique(left.begin(), left.end()), left.end());
    if (left.empty() || left.size() >= num_qubits || left.back() >= num_qubits) {
        throw std::invalid_argument("a cut needs two non-empty sides inside the register");
    }
    Cut cut;
    cut.left = std::move(left);
    for (std::size_t q = 0; q < num_qubits; q++) {
        if (!std::binary_search(cut.left.begin(), cut.left.end(), q)) {
            cut.right.push_back(q);
        }
    }
    return cut;
}

Cut Cut::alice_bob(const DenseState &state) {
    std::vector<std::size_t> alice;
    for (std::size_t q = 0; q < state.num_qubits(); q++) {
        if (state.labels()[q].party == Party::Alice) {
            alice.push_back(q);
        }
    }
    return from_left(state.num_qubits(), std::move(alice));
}

PureBranch bell_state(BellLabel label) {
    ComplexVector v = ComplexVector::Zero(4);
    double s = 1.0 / std::sqrt(2.0);
    for (int x = 0; x < 2; x++) {
        int y = x ^ label.a;
        double sign = (label.b && x) ? -1.0 : 1.0;
        v[2 * x + y] = sign * s;
    }
    return PureBranch{v, 1.0};
}

ComplexMatrix pauli(int index) {
    ComplexMatrix m(2, 2);
    switch (index) {
        case 0:
            m << 1, 0, 0, 1;
            break;
        case 1:
            m << 0, 1, 1, 0;
            break;
        case 2:
            m << 0, Complex(0, -1), Complex(0, 1), 0;
            break;
        case 3:
            m << 1, 0, 0, -1;
            break;
        default:
            throw std::invalid_argument("Pauli index must be 0..3, got " + std::to_string(index));
    }
    return m;
}

ComplexMatrix hadamard() {
    ComplexMatrix m(2, 2);
    double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
}

ComplexMatrix phase_gate() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, Complex(0, 1);
    return m;
}

ComplexMatrix cnot() {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(0, 0) = 1;
    m(1, 1) = 1;
    m(2, 3) = 1;
    m(3, 2) = 1;
    return m;
}

DenseState tensor(const DenseState &first, const DenseState &second) {
    std::size_t pair_shift = 0;
    for (const auto &label : first.labels()) {
        pair_shift = std::max(pair_shift, label.pair + 1);
    }
    std::vector<QubitLabel> labels = first.labels();
    for (auto label : second.labels()) {
        label.pair += pair_shift;
        labels.push_back(label);
    }
    if (labels.size() > kMaxBranchQubits) {
        throw std::invalid_argument("tensor product exceeds the 14-qubit branch limit");
    }
    std::vector<PureBranch> branches;
    branches.reserve(first.branches().size() * second.branches().size());
    for (const auto &x : first.branches()) {
        for (const auto &y : second.branches()) {
            ComplexVector v(x.amplitudes.size() * y.amplitudes.size());
            for (Eigen::Index i = 0; i < x.amplitudes.size(); i++) {
                v.segment(i * y.amplitudes.size(), y.amplitudes.size()) = x.amplitudes[i] * y.amplitudes;
            }
            branches.push_back(PureBranch{std::move(v), x.weight * y.weight});
        }
    }
    return DenseState(std::move(branches), std::move(labels));
}

DenseState mix(std::span<const DenseState> states, std::span<const double> weights) {
    if (states.empty() || states.size() != weights.size()) {
        throw std::invalid_argument("mix needs one weight per state");
    }
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(total - 1.0) > kCircuitTolerance) {
        throw std::invalid_argument("mixture weights must sum to 1");
    }
    std::vector<PureBranch> branches;
    for (std::size_t k = 0; k < states.size(); k++) {
        if (weights[k] < 0) {
            throw std::invalid_argument("mixture weights must be non-negative");
        }
        if (states[k].num_qubits() != states[0].num_qubits()) {
            throw std::invalid_argument("mixed states must share a register size");
        }
        if (weights[k] == 0) {
            continue;
        }
        for (const auto &branch : states[k].branches()) {
            branches.push_back(PureBranch{branch.amplitudes, branch.weight * weights[k]});
        }
    }
    return DenseState(std::move(branches), states[0].labels());
}

DenseState compress(const DenseState &state) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(state.density_matrix());
    std::vector<PureBranch> branches;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); i++) {
        double lambda = solver.eigenvalues()[i];
        if (lambda > kNegligibleProbability) {
            branches.push_back(PureBranch{solver.eigenvectors().col(i).normalized(), lambda});
        }
    }
    return DenseState(std::move(branches), state.labels());
}

DenseState apply_unitary(const DenseState &state, const ComplexMatrix &u, std::span<const std::size_t> targets) {
    std::size_t n = state.num_qubits();
    std::size_t k = targets.size();
    if (k == 0) {
        throw std::invalid_argument("apply_unitary needs at least one target");
    }
    for (std::size_t i = 0; i < k; i++) {
        check_qubit(state, targets[i]);
        for (std::size_t j = 0; j < i; j++) {
            if (targets[i] == targets[j]) {
                throw std::invalid_argument("targets must be distinct");
            }
        }
    }
    auto local_dim = static_cast<Eigen::Index>(std::size_t{1} << k);
    if (u.rows() != local_dim || u.cols() != local_dim) {
        throw std::invalid_argument("unitary size does not match the number of targets");
    }
    ComplexMatrix defect = u.adjoint() * u - ComplexMatrix::Identity(local_dim, local_dim);
    if (defect.cwiseAbs().maxCoeff() > kCircuitTolerance) {
        throw std::invalid_argument("matrix is not unitary");
    }

    auto offsets = local_offsets(n, targets);
    auto mask = combined_mask(n, targets);
    std::vector<Complex> local(offsets.size());
    std::vector<PureBranch> branches = state.branches();
    for (auto &branch : branches) {
        ComplexVector &psi = branch.amplitudes;
        for (std::size_t base = 0; base < dimension(n); base++) {
            if (base & mask) {
                continue;
            }
            for (std::size_t j = 0; j < offsets.size(); j++) {
                local[j] = psi[base + offsets[j]];
            }
            for (std::size_t r = 0; r < offsets.size(); r++) {
                Complex acc = 0;
                for (std::size_t c = 0; c < offsets.size(); c++) {
                    acc += u(r, c) * local[c];
                }
                psi[base + offsets[r]] = acc;
            }
        }
    }
    return DenseState(std::move(branches), state.labels());
}

std::vector<BellOutcome> bell_measurement(const DenseState &state, std::size_t first, std::size_t second) {
    std::vector<BellOutcome> outcomes;
    for (auto label : kAllBellLabels) {
        auto projected = project_state(state, first, second, {bell_state(label).amplitudes});
        if (projected.probability <= kNegligibleProbability) {
            continue;
        }
        for (auto &branch : projected.branches) {
            branch.weight /= projected.probability;
        }
        outcomes.push_back(
            BellOutcome{label, projected.probability, DenseState(std::move(projected.branches), state.labels())});
    }
    return outcomes;
}

std::vector<ParityOutcome> parity_measurement(const DenseState &state, std::size_t first, std::size_t second) {
    std::vector<ParityOutcome> outcomes;
    for (int parity = 0; parity < 2; parity++) {
        std::vector<ComplexVector> basis;
        for (int x = 0; x < 2; x++) {
            ComplexVector v = ComplexVector::Zero(4);
            v[2 * x + (x ^ parity)] = 1;
            basis.push_back(v);
        }
        auto projected = project_state(state, first, second, basis);
        if (projected.probability <= kNegligibleProbability) {
            continue;
        }
        for (auto &branch : projected.branches) {
            branch.weight /= projected.probability;
        }
        outcomes.push_back(
            ParityOutcome{parity, projected.probability, DenseState(std::move(projected.branches), state.labels())});
    }
    return outcomes;
}

DenseState partial_trace(const DenseState &state, std::span<const std::size_t> keep_qubits) {
    std::vector<std::size_t> keep(keep_qubits.begin(), keep_qubits.end());
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace needs a non-empty set of kept qubits");
    }
    for (auto q : keep) {
        check_qubit(state, q);
    }
    std::size_t n = state.num_qubits();
    std::vector<std::size_t> traced;
    for (std::size_t q = 0; q < n; q++) {
        if (!std::binary_search(keep.begin(), keep.end(), q)) {
            traced.push_back(q);
        }
    }
    std::vector<QubitLabel> labels;
    for (auto q : keep) {
        labels.push_back(state.labels()[q]);
    }
    if (traced.empty()) {
        return state;
    }

    auto keep_offsets = local_offsets(n, keep);
    auto trace_offsets = local_offsets(n, traced);
    std::vector<PureBranch> branches;
    for (const auto &branch : state.branches()) {
        for (auto t : trace_offsets) {
            ComplexVector column(static_cast<Eigen::Index>(keep_offsets.size()));
            for (std::size_t j = 0; j < keep_offsets.size(); j++) {
                column[static_cast<Eigen::Index>(j)] = branch.amplitudes[t + keep_offsets[j]];
            }
            double norm2 = column.squaredNorm();
            double w = branch.weight * norm2;
            if (w <= kNegligibleWeight) {
                continue;
            }
            branches.push_back(PureBranch{column / std::sqrt(norm2), w});
        }
    }
    return DenseState(std::move(branches), std::move(labels));
}

ComplexMatrix partial_transpose(const DenseState &state, const Cut &cut) {
    std::size_t n = state.num_qubits();
    if (cut.left.size() + cut.right.size() != n || cut.left.empty() || cut.right.empty()) {
        throw std::invalid_argument("cut does not partition the register");
    }
    ComplexMatrix rho = state.density_matrix();
    std::size_t m = combined_mask(n, cut.right);
    ComplexMatrix out(rho.rows(), rho.cols());
    for (std::size_t i = 0; i < dimension(n); i++) {
        for (std::size_t j = 0; j < dimension(n); j++) {
            std::size_t ti = (i & ~m) | (j & m);
            std::size_t tj = (j & ~m) | (i & m);
            out(static_cast<Eigen::Index>(ti), static_cast<Eigen::Index>(tj)) =
                rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return out;
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix &m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("Hermitian eigensolver did not converge");
    }
    return solver.eigenvalues();
}

double log_negativity(const DenseState &state, const Cut &cut) {
    Eigen::VectorXd eigenvalues = hermitian_eigenvalues(partial_transpose(state, cut));
    double negativity = 0;
    for (auto lambda : eigenvalues) {
        if (lambda < 0) {
            negativity -= lambda;
        }
    }
    // Trace norm of a unit-trace operator is 1 + 2 * (sum of negative parts).
    return std::log2(1.0 + 2.0 * negativity);
}

double fidelity(const DenseState &state, const ComplexVector &target) {
    if (static_cast<std::size_t>(target.size()) != dimension(state.num_qubits())) {
        throw std::invalid_argument("fidelity target dimension does not match the state");
    }
    double f = 0;
    for (const auto &branch : state.branches()) {
        f += branch.weight * std::norm(target.dot(branch.amplitudes));
    }
    return f;
}

double trace_distance(const DenseState &first, const DenseState &second) {
    if (first.num_qubits() != second.num_qubits()) {
        throw std::invalid_argument("trace distance needs states on the same register");
    }
    std::size_t k = first.branches().size() + second.branches().size();
    std::size_t d = dimension(first.num_qubits());
    if (first.num_qubits() <= kMaxDensityQubits && d <= k) {
        Eigen::VectorXd eigenvalues = hermitian_eigenvalues(first.density_matrix() - second.density_matrix());
        return 0.5 * eigenvalues.cwiseAbs().sum();
    }

    // rho - sigma = V D V^dagger = Q (R D R^dagger) Q^dagger with V = QR, so the
    // non-zero spectrum lives in k dimensions. QR rather than a Gram square root:
    // the root turns rounding noise of 1e-16 into errors of 1e-8.
    ComplexMatrix v(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k));
    Eigen::VectorXd diag(static_cast<Eigen::Index>(k));
    Eigen::Index col = 0;
    for (const auto &branch : first.branches()) {
        v.col(col) = branch.amplitudes;
        diag[col++] = branch.weight;
    }
    for (const auto &branch : second.branches()) {
        v.col(col) = branch.amplitudes;
        diag[col++] = -branch.weight;
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(v);
    auto kk = static_cast<Eigen::Index>(k);
    ComplexMatrix r = qr.matrixQR().topRows(kk).triangularView<Eigen::Upper>();
    ComplexMatrix reduced = r * diag.asDiagonal() * r.adjoint();
    return 0.5 * hermitian_eigenvalues(reduced).cwiseAbs().sum();
}

double max_abs_difference(const ComplexMatrix &first, const ComplexMatrix &second) {
    if (first.rows() != second.rows() || first.cols() != second.cols()) {
        throw std::invalid_argument("matrix shapes differ");
    }
    return (first - second).cwiseAbs().maxCoeff();
}

ComplexMatrix choi_matrix(const TwoQubitChannel &channel) {
    auto labels = pair_layout(1, QubitRole::Input);
    auto apply = [&](const ComplexVector &psi) -> ComplexMatrix {
        DenseState out = channel(DenseState::pure(psi.normalized(), labels));
        if (out.num_qubits() != 2) {
            throw std::invalid_argument("channel must return a two-qubit state");
        }
        return out.density_matrix();
    };
    auto basis = [](int k) {
        ComplexVector v = ComplexVector::Zero(4);
        v[k] = 1;
        return v;
    };

    // Images of |k><l| recovered from images of pure states:
    // |k><l| = P[|k>+|l>] + i P[|k>+i|l>] - (1+i)/2 (P[k] + P[l]).
    std::vector<ComplexMatrix> diagonal_images;
    for (int k = 0; k < 4; k++) {
        diagonal_images.push_back(apply(basis(k)));
    }
    const Complex i_unit(0, 1);
    ComplexMatrix choi = ComplexMatrix::Zero(16, 16);
    for (int k = 0; k < 4; k++) {
        for (int l = 0; l < 4; l++) {
            ComplexMatrix image;
            if (k == l) {
                image = diagonal_images[k];
            } else {
                image = apply(basis(k) + basis(l)) + i_unit * apply(basis(k) + i_unit * basis(l)) -
                        0.5 * (1.0 + i_unit) * (diagonal_images[k] + diagonal_images[l]);
            }
            choi.block(4 * k, 4 * l, 4, 4) = 0.25 * image;
        }
    }

    // Linearity probe: the Choi operator must reproduce the channel on an input it
    // was not built from.
    std::mt19937 rng(20240601);
    std::normal_distribution<double> gauss;
    auto random_vector = [&]() {
        ComplexVector v(4);
        for (int j = 0; j < 4; j++) {
            v[j] = Complex(gauss(rng), gauss(rng));
        }
        return v.normalized();
    };
    ComplexVector psi1 = random_vector();
    ComplexVector psi2 = random_vector();
    DenseState probe({PureBranch{psi1, 0.6}, PureBranch{psi2, 0.4}}, labels);
    ComplexMatrix direct = channel(probe).density_matrix();
    ComplexMatrix rho = probe.density_matrix();
    ComplexMatrix reconstructed = ComplexMatrix::Zero(4, 4);
    for (int k = 0; k < 4; k++) {
        for (int l = 0; l < 4; l++) {
            reconstructed += 4.0 * rho(k, l) * choi.block(4 * k, 4 * l, 4, 4);
        }
    }
    if (max_abs_difference(direct, reconstructed) > 1e-8) {
        throw std::runtime_error("channel is not linear: Choi reconstruction mismatch");
    }
    return choi;
}

}  // namespace bellclone
