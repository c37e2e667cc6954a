#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "bellclone/bell.h"
#include "bellclone/bell_ops.h"
#include "bellclone/dense.h"

namespace bellclone::fixtures {

inline ComplexMatrix kron(const ComplexMatrix &x, const ComplexMatrix &y) {
    ComplexMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); i++) {
        for (Eigen::Index j = 0; j < x.cols(); j++) {
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
        }
    }
    return out;
}

inline ComplexVector basis_vector(Eigen::Index dim, Eigen::Index k) {
    ComplexVector v = ComplexVector::Zero(dim);
    v[k] = 1;
    return v;
}

inline ComplexVector random_state(std::mt19937 &rng, Eigen::Index dim) {
    std::normal_distribution<double> normal;
    ComplexVector v(dim);
    for (Eigen::Index i = 0; i < dim; i++) {
        v[i] = Complex(normal(rng), normal(rng));
    }
    return v.normalized();
}

inline DenseState random_mixture(std::mt19937 &rng, std::size_t pairs, std::size_t branches) {
    std::uniform_real_distribution<double> uniform(0.1, 1.0);
    std::vector<PureBranch> out;
    double total = 0;
    for (std::size_t k = 0; k < branches; k++) {
        out.push_back(PureBranch{random_state(rng, Eigen::Index{1} << (2 * pairs)), uniform(rng)});
        total += out.back().weight;
    }
    for (auto &b : out) {
        b.weight /= total;
    }
    return DenseState(std::move(out), pair_layout(pairs));
}

inline BellEnsemble random_ensemble(std::mt19937 &rng, std::size_t pairs, std::size_t max_entries) {
    std::uniform_int_distribution<int> label(0, 3);
    std::uniform_int_distribution<std::size_t> count(1, max_entries);
    std::uniform_real_distribution<double> weight(0.05, 1.0);
    std::vector<BellEnsemble::Entry> entries;
    double total = 0;
    std::size_t n = count(rng);
    for (std::size_t k = 0; k < n; k++) {
        BellString s;
        for (std::size_t p = 0; p < pairs; p++) {
            s.push_back(BellLabel::from_index(label(rng)));
        }
        entries.push_back({s, weight(rng)});
        total += entries.back().probability;
    }
    for (auto &e : entries) {
        e.probability /= total;
    }
    return BellEnsemble(std::move(entries));
}

inline BellOp random_op(std::mt19937 &rng, std::size_t pairs) {
    std::uniform_int_distribution<std::size_t> pair(0, pairs - 1);
    std::uniform_int_distribution<int> kind(pairs > 1 ? 0 : 1, 4);
    switch (kind(rng)) {
        case 0: {
            std::size_t s = pair(rng);
            std::size_t t = pair(rng);
            while (t == s) {
                t = pair(rng);
            }
            return BellOp::bxor(s, t);
        }
        case 1:
            return BellOp::hadamard(pair(rng));
        case 2:
            return std::uniform_int_distribution<int>(0, 1)(rng) ? BellOp::phase(pair(rng))
                                                                  : BellOp::phase(pair(rng)).inverse();
        default: {
            int index = std::uniform_int_distribution<int>(1, 3)(rng);
            Party side = std::uniform_int_distribution<int>(0, 1)(rng) ? Party::Alice : Party::Bob;
            return BellOp::pauli(pair(rng), index, side);
        }
    }
}

inline double min_eigenvalue(const DenseState &state) {
    return hermitian_eigenvalues(state.density_matrix())[0];
}

}  // namespace bellclone::fixtures
