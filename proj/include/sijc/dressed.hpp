#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "errors.hpp"
#include "linalg.hpp"

// Exact truncated matrices over the dressed product basis. The basis
// interleaves lower-channel states v_n with upper-channel states u_m as
// [v_0, u_0, v_1, u_1, v_2, ...]; the ladder coupling closes on each
// (u_m, v_{m+1}) pair, so truncation introduces no edge error and every
// eigenvalue of the assembled Hamiltonian is exact.

namespace sijc::dressed {

struct DressedBasis {
    int n_max = 0;  // pairs m = 0 .. n_max
    std::size_t dimension() const { return 2 * static_cast<std::size_t>(n_max) + 3; }
    // index 0 = v_0; index 2m+1 = u_m; index 2m+2 = v_{m+1}
    static std::size_t index_v(int n) { return n == 0 ? 0 : 2 * static_cast<std::size_t>(n); }
    static std::size_t index_u(int m) { return 2 * static_cast<std::size_t>(m) + 1; }
    std::vector<std::string> labels() const {
        std::vector<std::string> out(dimension());
        out[0] = "v0";
        for (int m = 0; m <= n_max; ++m) {
            out[index_u(m)] = "u" + std::to_string(m);
            out[index_v(m + 1)] = "v" + std::to_string(m + 1);
        }
        return out;
    }
};

// Dense operator matrix with its basis labels. Stored as a plain dense
// array because the raising ladder is strictly subdiagonal; symmetric
// operators are handed to linalg, whose constructor enforces symmetry.
struct DressedMatrix {
    std::vector<std::string> labels;
    std::size_t dim = 0;
    std::vector<double> entries;  // row-major

    double at(std::size_t i, std::size_t j) const { return entries[i * dim + j]; }
    linalg::SymmetricDense symmetric() const { return linalg::SymmetricDense(dim, entries); }
};

namespace detail {

inline std::vector<double> sqrt_eps(const PotentialFamily& family, int n_max) {
    // sqrt(eps_1 .. eps_{n_max+1}); throws past the last bound level
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int m = 0; m <= n_max; ++m)
        out.push_back(std::sqrt(energy_level(family, m + 1).epsilon));
    return out;
}

inline std::vector<std::string> number_labels(int count) {
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back("|" + std::to_string(i) + ">");
    return out;
}

}  // namespace detail

// Raising ladder on the single-channel basis |0> .. |n_max+1>:
// entry (m+1, m) = sqrt(eps_{m+1}), everything else zero.
inline DressedMatrix b_plus_matrix(const PotentialFamily& family, int n_max) {
    if (n_max < 0) throw LevelOutOfRange("pair count must be nonnegative");
    const std::vector<double> se = detail::sqrt_eps(family, n_max);
    const std::size_t dim = static_cast<std::size_t>(n_max) + 2;
    DressedMatrix out{detail::number_labels(n_max + 2), dim,
                      std::vector<double>(dim * dim, 0.0)};
    for (int m = 0; m <= n_max; ++m)
        out.entries[(static_cast<std::size_t>(m) + 1) * dim + static_cast<std::size_t>(m)] =
            se[static_cast<std::size_t>(m)];
    return out;
}

// Coupling operator on the dressed basis: u_m <-> v_{m+1} with strength
// sqrt(eps_{m+1}); v_0 is annihilated.
inline DressedMatrix s_matrix(const PotentialFamily& family, int n_max) {
    if (n_max < 0) throw LevelOutOfRange("pair count must be nonnegative");
    const std::vector<double> se = detail::sqrt_eps(family, n_max);
    DressedBasis basis{n_max};
    const std::size_t dim = basis.dimension();
    DressedMatrix out{basis.labels(), dim, std::vector<double>(dim * dim, 0.0)};
    for (int m = 0; m <= n_max; ++m) {
        const std::size_t iu = DressedBasis::index_u(m);
        const std::size_t iv = DressedBasis::index_v(m + 1);
        out.entries[iu * dim + iv] = se[static_cast<std::size_t>(m)];
        out.entries[iv * dim + iu] = se[static_cast<std::size_t>(m)];
    }
    return out;
}

inline DressedMatrix multiply(const DressedMatrix& a, const DressedMatrix& b) {
    if (a.dim != b.dim) throw DimensionMismatch("dressed matrix product dimensions");
    const std::size_t n = a.dim;
    DressedMatrix out{a.labels, n, std::vector<double>(n * n, 0.0)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = a.entries[i * n + k];
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j)
                out.entries[i * n + j] += aik * b.entries[k * n + j];
        }
    return out;
}

inline DressedMatrix s_squared_matrix(const PotentialFamily& family, int n_max) {
    const DressedMatrix s = s_matrix(family, n_max);
    return multiply(s, s);
}

// H = S^2 + sqrt(hbar*Omega)*S assembled by matrix algebra; the pair
// structure then makes it block diagonal with one 1x1 block [0] for v_0 and
// 2x2 blocks [[eps, g],[g, eps]], g = sqrt(hbar*Omega*eps).
inline DressedMatrix h_matrix(const PotentialFamily& family, double omega_drive, int n_max) {
    if (omega_drive < 0.0) throw NegativeDriveStrength("drive strength must be nonnegative");
    const DressedMatrix s = s_matrix(family, n_max);
    DressedMatrix h = multiply(s, s);
    const double g = std::sqrt(family.hbar() * omega_drive);
    for (std::size_t i = 0; i < h.dim * h.dim; ++i) h.entries[i] += g * s.entries[i];
    return h;
}

// Dressed eigenstates (u_m ± v_{m+1})/sqrt(2) in basis coordinates, ordered
// minus then plus for each m.
struct DressedState {
    int m = 0;
    Branch branch = Branch::Minus;
    std::vector<double> coefficients;
};

inline std::vector<DressedState> dressed_states(const PotentialFamily& family, int n_max) {
    if (n_max < 0) throw LevelOutOfRange("pair count must be nonnegative");
    detail::sqrt_eps(family, n_max);  // range check only
    DressedBasis basis{n_max};
    const std::size_t dim = basis.dimension();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<DressedState> out;
    out.reserve(2 * static_cast<std::size_t>(n_max) + 2);
    for (int m = 0; m <= n_max; ++m) {
        for (Branch branch : {Branch::Minus, Branch::Plus}) {
            DressedState st{m, branch, std::vector<double>(dim, 0.0)};
            st.coefficients[DressedBasis::index_u(m)] = inv_sqrt2;
            st.coefficients[DressedBasis::index_v(m + 1)] =
                branch == Branch::Plus ? inv_sqrt2 : -inv_sqrt2;
            out.push_back(std::move(st));
        }
    }
    return out;
}

// Diagonal of [B-, B+] on the single-channel basis. The last diagonal entry
// of the finite commutator is corrupted by the truncation edge, so it is
// reported apart from the trustworthy entries (which equal the first
// differences eps_{m+1} - eps_m).
struct CommutatorDiagnostic {
    std::vector<double> diagonal;  // entries m = 0 .. n_max
    double truncated_top = 0.0;    // entry n_max+1, edge-corrupted
};

inline CommutatorDiagnostic commutator_diagnostic(const PotentialFamily& family, int n_max) {
    const DressedMatrix bp = b_plus_matrix(family, n_max);
    const std::size_t dim = bp.dim;
    DressedMatrix bm{bp.labels, dim, std::vector<double>(dim * dim, 0.0)};
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) bm.entries[i * dim + j] = bp.entries[j * dim + i];
    const DressedMatrix mp = multiply(bm, bp);
    const DressedMatrix pm = multiply(bp, bm);
    CommutatorDiagnostic out;
    out.diagonal.reserve(dim - 1);
    for (std::size_t i = 0; i + 1 < dim; ++i)
        out.diagonal.push_back(mp.entries[i * dim + i] - pm.entries[i * dim + i]);
    out.truncated_top = mp.entries[(dim - 1) * dim + (dim - 1)] - pm.entries[(dim - 1) * dim + (dim - 1)];
    return out;
}

// Numeric spectrum of h_matrix paired back to closed-form labels.
struct DressedSpectrum {
    double ground = 0.0;  // numeric value matched to the uncoupled level
    std::vector<SpectrumRow> levels;  // e_minus/e_plus numeric, epsilon analytic
    double max_abs_deviation = 0.0;
};

inline DressedSpectrum diagonalize_dressed(const PotentialFamily& family, double omega_drive,
                                           int n_max) {
    const DressedMatrix h = h_matrix(family, omega_drive, n_max);
    const linalg::EigenDecomposition eig = linalg::eig_symmetric(h.symmetric(), false);

    // nearest-unused pairing against the closed form; degenerate clusters
    // (e.g. zero drive) are consumed by multiplicity
    std::vector<bool> used(eig.values.size(), false);
    const auto take_nearest = [&](double target) {
        std::size_t best = 0;
        double best_dist = -1.0;
        for (std::size_t i = 0; i < eig.values.size(); ++i) {
            if (used[i]) continue;
            const double dist = std::abs(eig.values[i] - target);
            if (best_dist < 0.0 || dist < best_dist) {
                best = i;
                best_dist = dist;
            }
        }
        used[best] = true;
        return eig.values[best];
    };

    DressedSpectrum out;
    out.ground = take_nearest(0.0);
    double dev = std::abs(out.ground);
    for (int m = 0; m <= n_max; ++m) {
        const double eps = energy_level(family, m + 1).epsilon;
        const double e_minus = jc_eigenvalue(family, omega_drive, m, Branch::Minus);
        const double e_plus = jc_eigenvalue(family, omega_drive, m, Branch::Plus);
        const double got_minus = take_nearest(e_minus);
        const double got_plus = take_nearest(e_plus);
        dev = std::max(dev, std::abs(got_minus - e_minus));
        dev = std::max(dev, std::abs(got_plus - e_plus));
        out.levels.push_back(SpectrumRow{m, eps, got_minus, got_plus});
    }
    out.max_abs_deviation = dev;
    return out;
}

}  // namespace sijc::dressed
