// band_lu.hpp - complex banded LU with partial pivoting, plus the unpivoted
// symmetric elimination used to count determinant windings.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "pathamp/action_matrix.hpp"
#include "pathamp/amplitude.hpp"
#include "pathamp/errors.hpp"

namespace pathamp {

// LU factorization P A = L U of a banded matrix. Row interchanges widen the
// upper band to kl + ku, the same fill pattern LAPACK's gbtrf uses.
namespace detail {
struct NeumaierSum {
    double sum = 0.0, carry = 0.0;
    void add(double x) {
        const double t = sum + x;
        carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};
}  // namespace detail

class BandLU {
  public:
    // Pivots with |u_jj| <= rel_tol * max|a_ij| are treated as zero.
    explicit BandLU(const ActionMatrix& a, double rel_tol = 1e-13)
        : n_(a.dim()), kl_(a.lower_bandwidth()), ku_(a.upper_bandwidth() + a.lower_bandwidth()),
          width_(kl_ + ku_ + 1), lu_(n_ * width_, cplx{}), piv_(n_) {
        double scale = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            std::size_t lo = i >= kl_ ? i - kl_ : 0;
            std::size_t hi = std::min(n_ - 1, i + a.upper_bandwidth());
            for (std::size_t j = lo; j <= hi; ++j) {
                at(i, j) = a(i, j);
                scale = std::max(scale, std::abs(a(i, j)));
            }
        }
        const double tiny = rel_tol * scale;

        for (std::size_t k = 0; k < n_; ++k) {
            std::size_t last_row = std::min(n_ - 1, k + kl_);
            std::size_t p = k;
            double best = std::abs(at(k, k));
            for (std::size_t i = k + 1; i <= last_row; ++i) {
                double v = std::abs(at(i, k));
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            piv_[k] = p;
            if (!(best > tiny)) {
                singular_ = true;
                continue;
            }
            std::size_t last_col = std::min(n_ - 1, k + ku_);
            if (p != k) {
                ++swaps_;
                for (std::size_t j = k; j <= last_col; ++j) std::swap(at(k, j), at(p, j));
            }
            const cplx pivot = at(k, k);
            for (std::size_t i = k + 1; i <= last_row; ++i) {
                cplx& lik = at(i, k);
                if (lik == cplx{}) continue;
                lik /= pivot;
                for (std::size_t j = k + 1; j <= last_col; ++j) at(i, j) -= lik * at(k, j);
            }
        }
    }

    bool singular() const { return singular_; }
    std::size_t dim() const { return n_; }

    // log|det A|. Sums run over thousands of pivots, hence compensated.
    double log_abs_det() const {
        detail::NeumaierSum s;
        for (std::size_t k = 0; k < n_; ++k) s.add(std::log(std::abs(get(k, k))));
        return s.value();
    }

    // arg det A in (-pi, pi]
    double arg_det() const {
        detail::NeumaierSum s;
        if (swaps_ % 2) s.add(std::numbers::pi);
        for (std::size_t k = 0; k < n_; ++k) s.add(std::arg(get(k, k)));
        return wrap_phase(s.value());
    }

    Amplitude det() const { return {log_abs_det(), arg_det()}; }

    // Solves A x = b.
    std::vector<cplx> solve(std::span<const cplx> b) const {
        if (singular_) throw SingularAction("action matrix is singular");
        if (b.size() != n_) throw ValidationError("rhs", "dimension mismatch");
        std::vector<cplx> x(b.begin(), b.end());
        for (std::size_t k = 0; k < n_; ++k) {
            if (piv_[k] != k) std::swap(x[k], x[piv_[k]]);
            std::size_t last_row = std::min(n_ - 1, k + kl_);
            for (std::size_t i = k + 1; i <= last_row; ++i) x[i] -= get(i, k) * x[k];
        }
        for (std::size_t k = n_; k-- > 0;) {
            std::size_t last_col = std::min(n_ - 1, k + ku_);
            cplx s = x[k];
            for (std::size_t j = k + 1; j <= last_col; ++j) s -= get(k, j) * x[j];
            x[k] = s / get(k, k);
        }
        return x;
    }

  private:
    // Row i keeps columns [i - kl, i + ku].
    cplx& at(std::size_t i, std::size_t j) { return lu_[i * width_ + (j + kl_ - i)]; }
    cplx get(std::size_t i, std::size_t j) const { return lu_[i * width_ + (j + kl_ - i)]; }

    std::size_t n_, kl_, ku_, width_;
    std::vector<cplx> lu_;
    std::vector<std::size_t> piv_;
    std::size_t swaps_ = 0;
    bool singular_ = false;
};

// Pivots d_j of the unpivoted factorization A = L D L^T of a complex
// symmetric band matrix. Successive completion of squares in the Gaussian
// integral produces exactly these d_j, one per integration variable.
// Returns an empty vector if a pivot vanishes.
inline std::vector<cplx> symmetric_pivots(const ActionMatrix& a) {
    const std::size_t n = a.dim();
    const std::size_t b = std::max(a.lower_bandwidth(), a.upper_bandwidth());
    const std::size_t w = b + 1;
    // Upper band of row i: columns i .. i+b.
    std::vector<cplx> u(n * w, cplx{});
    auto up = [&](std::size_t i, std::size_t j) -> cplx& { return u[i * w + (j - i)]; };
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j <= std::min(n - 1, i + b); ++j) {
            up(i, j) = a(i, j);
            scale = std::max(scale, std::abs(a(i, j)));
        }

    std::vector<cplx> d(n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx pivot = up(k, k);
        if (!(std::abs(pivot) > 1e-14 * scale) || !std::isfinite(std::abs(pivot))) return {};
        d[k] = pivot;
        std::size_t last = std::min(n - 1, k + b);
        for (std::size_t i = k + 1; i <= last; ++i) {
            const cplx f = up(k, i) / pivot;
            if (f == cplx{}) continue;
            for (std::size_t j = i; j <= last; ++j) up(i, j) -= f * up(k, j);
        }
    }
    return d;
}

}  // namespace pathamp
