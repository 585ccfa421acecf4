#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "errors.hpp"

// Dense symmetric storage plus a self-contained symmetric eigensolver:
// Householder reduction to tridiagonal form, implicit-shift QL for the
// eigenvalues, and shifted inverse iteration when individual eigenvectors
// are needed without paying for the full decomposition.

namespace sijc::linalg {

class SymmetricDense {
  public:
    SymmetricDense(std::size_t dim, std::vector<double> entries)
        : dim_(dim), entries_(std::move(entries)) {
        if (dim_ == 0) throw DimensionMismatch("dimension must be positive");
        if (entries_.size() != dim_ * dim_)
            throw DimensionMismatch("entry count does not match dimension");
        max_abs_ = 0.0;
        for (double v : entries_) {
            if (!std::isfinite(v)) throw NotSymmetric("non-finite entry");
            max_abs_ = std::max(max_abs_, std::abs(v));
        }
        const double tol = 1e-12 * max_abs_;
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = i + 1; j < dim_; ++j)
                if (std::abs(entries_[i * dim_ + j] - entries_[j * dim_ + i]) > tol)
                    throw NotSymmetric("asymmetric entry pair");
    }

    std::size_t dim() const { return dim_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
    const std::vector<double>& entries() const { return entries_; }
    double max_abs() const { return max_abs_; }
    std::vector<double> take_entries() && { return std::move(entries_); }

  private:
    std::size_t dim_;
    std::vector<double> entries_;
    double max_abs_;
};

inline std::vector<double> matvec(const SymmetricDense& a, const std::vector<double>& x) {
    if (x.size() != a.dim()) throw DimensionMismatch("matvec operand length");
    const std::size_t n = a.dim();
    std::vector<double> y(n, 0.0);
    const std::vector<double>& m = a.entries();
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = &m[i * n];
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) sum += row[k] * x[k];
        y[i] = sum;
    }
    return y;
}

struct EigenDecomposition {
    std::size_t dim = 0;
    std::vector<double> values;   // ascending
    std::vector<double> vectors;  // row-major; column j pairs with values[j]; empty if not requested
    bool has_vectors() const { return !vectors.empty(); }
    double vector_at(std::size_t i, std::size_t j) const { return vectors[i * dim + j]; }
};

namespace detail {

// In-place Householder reduction of the row-major matrix a to tridiagonal
// form. On return d holds the diagonal, e the subdiagonal (e[i] = T(i,i-1),
// e[0] = 0), and the rows of a hold the reflector vectors u with their
// coefficients h in hcoef (h = 0 marks an identity step).
inline void householder_reduce(std::vector<double>& a, std::size_t n,
                               std::vector<double>& d, std::vector<double>& e,
                               std::vector<double>& hcoef) {
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    hcoef.assign(n, 0.0);
    std::vector<double> p(n, 0.0);
    for (std::size_t i = n; i-- > 2;) {
        const std::size_t l = i - 1;
        double* row = &a[i * n];
        double scale = 0.0;
        for (std::size_t k = 0; k <= l; ++k) scale += std::abs(row[k]);
        if (scale == 0.0) continue;  // row already tridiagonal, e[i] stays 0
        for (std::size_t k = 0; k <= l; ++k) row[k] /= scale;
        double sigma = 0.0;
        for (std::size_t k = 0; k <= l; ++k) sigma += row[k] * row[k];
        const double f = row[l];
        const double g = (f >= 0.0) ? -std::sqrt(sigma) : std::sqrt(sigma);
        e[i] = scale * g;
        const double h = sigma - f * g;  // > 0 whenever scale > 0
        row[l] = f - g;
        for (std::size_t j = 0; j <= l; ++j) {
            const double* arow = &a[j * n];
            double sum = 0.0;
            for (std::size_t k = 0; k <= l; ++k) sum += arow[k] * row[k];
            p[j] = sum / h;
        }
        double kk = 0.0;
        for (std::size_t k = 0; k <= l; ++k) kk += p[k] * row[k];
        kk /= 2.0 * h;
        for (std::size_t k = 0; k <= l; ++k) p[k] -= kk * row[k];
        for (std::size_t j = 0; j <= l; ++j) {
            double* arow = &a[j * n];
            const double pj = p[j];
            const double uj = row[j];
            for (std::size_t k = 0; k <= l; ++k) arow[k] -= pj * row[k] + uj * p[k];
        }
        hcoef[i] = h;
    }
    if (n >= 2) e[1] = a[1 * n + 0];
    for (std::size_t j = 0; j < n; ++j) d[j] = a[j * n + j];
}

// y := Q y where Q is the product of the stored reflectors.
inline void apply_q(const std::vector<double>& a, const std::vector<double>& hcoef,
                    std::size_t n, std::vector<double>& y) {
    for (std::size_t i = 2; i < n; ++i) {
        if (hcoef[i] == 0.0) continue;
        const double* u = &a[i * n];
        double s = 0.0;
        for (std::size_t k = 0; k < i; ++k) s += u[k] * y[k];
        s /= hcoef[i];
        for (std::size_t k = 0; k < i; ++k) y[k] -= s * u[k];
    }
}

// z := Q as a full row-major matrix.
inline void accumulate_q(const std::vector<double>& a, const std::vector<double>& hcoef,
                         std::size_t n, std::vector<double>& z) {
    z.assign(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) z[j * n + j] = 1.0;
    std::vector<double> w(n);
    for (std::size_t i = 2; i < n; ++i) {
        if (hcoef[i] == 0.0) continue;
        const double* u = &a[i * n];
        std::fill(w.begin(), w.end(), 0.0);
        for (std::size_t k = 0; k < i; ++k) {
            const double uk = u[k];
            const double* zrow = &z[k * n];
            for (std::size_t j = 0; j < n; ++j) w[j] += uk * zrow[j];
        }
        const double invh = 1.0 / hcoef[i];
        for (std::size_t k = 0; k < i; ++k) {
            const double uk = u[k] * invh;
            double* zrow = &z[k * n];
            for (std::size_t j = 0; j < n; ++j) zrow[j] -= uk * w[j];
        }
    }
}

// Implicit-shift QL on (d, e) with e in shifted form (e[i] = T(i+1,i),
// e[n-1] = 0). When z is non-null the rotations are accumulated into its
// column pairs. Throws ConvergenceFailure with the failing index.
inline void ql_implicit(std::vector<double>& d, std::vector<double>& e,
                        std::vector<double>* z, std::size_t n) {
    constexpr int max_iter = 60;
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == max_iter)
                    throw ConvergenceFailure("implicit-shift iteration cap exceeded", l);
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? r : -r));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (z != nullptr) {
                        std::vector<double>& zz = *z;
                        for (std::size_t k = 0; k < n; ++k) {
                            f = zz[k * n + i + 1];
                            zz[k * n + i + 1] = s * zz[k * n + i] + c * f;
                            zz[k * n + i] = c * zz[k * n + i] - s * f;
                        }
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

// Partial-pivot LU of the tridiagonal T - shift*I for inverse iteration.
struct TridiagLU {
    std::vector<double> dd, du, du2, dl;
    std::vector<bool> swapped;
};

inline TridiagLU factor_shifted(const std::vector<double>& d, const std::vector<double>& e,
                                double shift) {
    const std::size_t n = d.size();
    TridiagLU lu;
    lu.dd.resize(n);
    lu.du.assign(n, 0.0);
    lu.du2.assign(n, 0.0);
    lu.dl.assign(n, 0.0);
    lu.swapped.assign(n, false);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lu.dd[i] = d[i] - shift;
        scale = std::max(scale, std::abs(d[i]) + std::abs(e[i]));
    }
    const double tiny = std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);
    std::vector<double> sub(n, 0.0), sup(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        sub[i] = e[i + 1];
        sup[i] = e[i + 1];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        lu.du[i] = sup[i];
        if (std::abs(lu.dd[i]) >= std::abs(sub[i])) {
            if (lu.dd[i] == 0.0) lu.dd[i] = tiny;
            const double fact = sub[i] / lu.dd[i];
            lu.dl[i] = fact;
            lu.dd[i + 1] -= fact * lu.du[i];
        } else {
            const double fact = lu.dd[i] / sub[i];
            lu.dl[i] = fact;
            lu.swapped[i] = true;
            lu.dd[i] = sub[i];
            const double t = lu.du[i];
            lu.du[i] = lu.dd[i + 1];
            lu.dd[i + 1] = t - fact * lu.dd[i + 1];
            if (i + 2 < n) {
                lu.du2[i] = sup[i + 1];
                sup[i + 1] = -fact * sup[i + 1];
                sub[i + 1] = sub[i + 1];  // subdiagonal entry is untouched by the row swap
            }
        }
    }
    if (lu.dd[n - 1] == 0.0) lu.dd[n - 1] = tiny;
    return lu;
}

inline void solve_lu(const TridiagLU& lu, std::vector<double>& b) {
    const std::size_t n = lu.dd.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (lu.swapped[i]) std::swap(b[i], b[i + 1]);
        b[i + 1] -= lu.dl[i] * b[i];
    }
    b[n - 1] /= lu.dd[n - 1];
    if (n >= 2) {
        const std::size_t i = n - 2;
        b[i] = (b[i] - lu.du[i] * b[i + 1]) / lu.dd[i];
    }
    for (std::size_t i = n - 1; i-- > 1;) {
        const std::size_t j = i - 1;
        b[j] = (b[j] - lu.du[j] * b[j + 1] - lu.du2[j] * b[j + 2]) / lu.dd[j];
    }
}

inline void normalize(std::vector<double>& v) {
    double nrm = 0.0;
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm > 0.0)
        for (double& x : v) x /= nrm;
}

}  // namespace detail

// Householder reduction of a symmetric matrix, retained so that eigenvalues
// and selected eigenvectors can be computed without a full decomposition.
class HouseholderReduction {
  public:
    explicit HouseholderReduction(SymmetricDense a) : n_(a.dim()) {
        work_ = std::move(a).take_entries();
        detail::householder_reduce(work_, n_, d_, e_, hcoef_);
    }

    std::size_t dim() const { return n_; }

    std::vector<double> eigenvalues() const {
        std::vector<double> d = d_;
        std::vector<double> e(n_, 0.0);
        for (std::size_t i = 0; i + 1 < n_; ++i) e[i] = e_[i + 1];
        detail::ql_implicit(d, e, nullptr, n_);
        std::sort(d.begin(), d.end());
        return d;
    }

    // Normalized eigenvector for a computed eigenvalue, via shifted inverse
    // iteration on the tridiagonal form plus reflector back-transform.
    // Vectors in orthogonal_to are projected out each sweep so that members
    // of a near-degenerate cluster can be resolved one at a time.
    std::vector<double> eigenvector(double value,
                                    const std::vector<std::vector<double>>& orthogonal_to = {}) const {
        const detail::TridiagLU lu = detail::factor_shifted(d_, e_, value);
        std::vector<double> y(n_);
        std::uint64_t state = 0x2545F4914F6CDD1DULL;
        for (std::size_t i = 0; i < n_; ++i) {
            state = state * 6364136223846793005ULL + 1442695040888963407ULL;
            y[i] = static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
        }
        detail::normalize(y);
        // orthogonal_to vectors live in the original basis; map them back to
        // the tridiagonal basis once (Q^T v) for use inside the iteration
        std::vector<std::vector<double>> ortho_t;
        ortho_t.reserve(orthogonal_to.size());
        for (const std::vector<double>& v : orthogonal_to) {
            std::vector<double> vt = v;
            // Q^T v: apply reflectors in reverse order
            for (std::size_t i = n_; i-- > 2;) {
                if (hcoef_[i] == 0.0) continue;
                const double* u = &work_[i * n_];
                double s = 0.0;
                for (std::size_t k = 0; k < i; ++k) s += u[k] * vt[k];
                s /= hcoef_[i];
                for (std::size_t k = 0; k < i; ++k) vt[k] -= s * u[k];
            }
            ortho_t.push_back(std::move(vt));
        }
        for (int sweep = 0; sweep < 4; ++sweep) {
            detail::solve_lu(lu, y);
            for (const std::vector<double>& v : ortho_t) {
                double proj = 0.0;
                for (std::size_t k = 0; k < n_; ++k) proj += v[k] * y[k];
                for (std::size_t k = 0; k < n_; ++k) y[k] -= proj * v[k];
            }
            detail::normalize(y);
        }
        detail::apply_q(work_, hcoef_, n_, y);
        detail::normalize(y);
        return y;
    }

  private:
    std::size_t n_;
    std::vector<double> work_;
    std::vector<double> d_, e_, hcoef_;
};

// Full symmetric eigendecomposition. Pass by value so callers can move in
// matrices they no longer need; the decomposition works in place.
inline EigenDecomposition eig_symmetric(SymmetricDense a, bool want_vectors) {
    const std::size_t n = a.dim();
    EigenDecomposition out;
    out.dim = n;
    std::vector<double> work = std::move(a).take_entries();
    std::vector<double> d, e, hcoef;
    detail::householder_reduce(work, n, d, e, hcoef);
    std::vector<double> es(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) es[i] = e[i + 1];
    if (!want_vectors) {
        detail::ql_implicit(d, es, nullptr, n);
        std::sort(d.begin(), d.end());
        out.values = std::move(d);
        return out;
    }
    std::vector<double> z;
    detail::accumulate_q(work, hcoef, n, z);
    detail::ql_implicit(d, es, &z, n);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&d](std::size_t i, std::size_t j) { return d[i] < d[j]; });
    out.values.resize(n);
    out.vectors.assign(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = d[idx[j]];
        for (std::size_t i = 0; i < n; ++i) out.vectors[i * n + j] = z[i * n + idx[j]];
    }
    return out;
}

// The k lowest (value, vector) pairs without a full-vector decomposition.
inline std::vector<std::pair<double, std::vector<double>>> lowest_eigenpairs(SymmetricDense a,
                                                                             std::size_t k) {
    const std::size_t n = a.dim();
    if (k > n) throw DimensionMismatch("more eigenpairs requested than dimension");
    HouseholderReduction hr(std::move(a));
    const std::vector<double> values = hr.eigenvalues();
    std::vector<std::pair<double, std::vector<double>>> out;
    std::vector<std::vector<double>> found;
    out.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<double> v = hr.eigenvector(values[j], found);
        found.push_back(v);
        out.emplace_back(values[j], std::move(v));
    }
    return out;
}

}  // namespace sijc::linalg
