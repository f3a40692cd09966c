// action_matrix.hpp - the discrete quadratic form of a lattice of coupled
// oscillators, stored in band form.
//
// Ordering is oscillator-major: index a*N + n is lattice point n of
// oscillator a. Within a block the matrix has bandwidth 2; couplings between
// oscillators a and b sit on the diagonals offset by (b - a)*N.
#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pathamp/amplitude.hpp"
#include "pathamp/errors.hpp"
#include "pathamp/network.hpp"

namespace pathamp {

// Real source impulses J, oscillator-major like the action matrix.
class SourceVector {
  public:
    SourceVector() = default;
    explicit SourceVector(std::size_t n) : values_(n, 0.0) {}
    explicit SourceVector(std::vector<double> values) : values_(std::move(values)) {}

    // Concatenates one time series per oscillator. All series must have equal length.
    static SourceVector from_series(std::span<const std::vector<double>> per_oscillator) {
        std::vector<double> v;
        std::size_t len = per_oscillator.empty() ? 0 : per_oscillator.front().size();
        for (const auto& s : per_oscillator) {
            if (s.size() != len) throw ValidationError("source", "every oscillator needs the same number of samples");
            v.insert(v.end(), s.begin(), s.end());
        }
        return SourceVector(std::move(v));
    }

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    std::span<const double> values() const { return values_; }
    bool is_zero() const {
        return std::all_of(values_.begin(), values_.end(), [](double x) { return x == 0.0; });
    }

  private:
    std::vector<double> values_;
};

class ActionMatrix {
  public:
    ActionMatrix() = default;
    ActionMatrix(std::size_t dim, std::size_t lower, std::size_t upper)
        : dim_(dim), kl_(std::min(lower, dim ? dim - 1 : 0)), ku_(std::min(upper, dim ? dim - 1 : 0)),
          band_(dim * (kl_ + ku_ + 1), cplx{}) {}

    std::size_t dim() const { return dim_; }
    std::size_t lower_bandwidth() const { return kl_; }
    std::size_t upper_bandwidth() const { return ku_; }
    bool symmetrized() const { return symmetrized_; }

    bool in_band(std::size_t i, std::size_t j) const { return j + kl_ >= i && j <= i + ku_; }

    cplx operator()(std::size_t i, std::size_t j) const {
        return in_band(i, j) ? band_[slot(i, j)] : cplx{};
    }

    void set(std::size_t i, std::size_t j, cplx v) {
        check(i, j);
        band_[slot(i, j)] = v;
        symmetrized_ = false;
    }

    void add(std::size_t i, std::size_t j, cplx v) {
        check(i, j);
        band_[slot(i, j)] += v;
        symmetrized_ = false;
    }

    // y = A x
    std::vector<cplx> multiply(std::span<const cplx> x) const {
        if (x.size() != dim_) throw ValidationError("vector", "dimension mismatch with action matrix");
        std::vector<cplx> y(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            std::size_t lo = i >= kl_ ? i - kl_ : 0;
            std::size_t hi = std::min(dim_ - 1, i + ku_);
            cplx s{};
            for (std::size_t j = lo; j <= hi; ++j) s += band_[slot(i, j)] * x[j];
            y[i] = s;
        }
        return y;
    }

    std::vector<cplx> multiply(std::span<const double> x) const {
        std::vector<cplx> xc(x.begin(), x.end());
        return multiply(std::span<const cplx>(xc));
    }

    // Returns (A + A^T)/2. The quadratic form only sees this part.
    friend ActionMatrix symmetrize(const ActionMatrix& a) {
        std::size_t bw = std::max(a.kl_, a.ku_);
        ActionMatrix s(a.dim_, bw, bw);
        for (std::size_t i = 0; i < a.dim_; ++i) {
            std::size_t lo = i >= bw ? i - bw : 0;
            std::size_t hi = std::min(a.dim_ - 1, i + bw);
            for (std::size_t j = lo; j <= hi; ++j) s.band_[s.slot(i, j)] = 0.5 * (a(i, j) + a(j, i));
        }
        s.symmetrized_ = true;
        return s;
    }

    // A + i*eps*I; keeps the symmetrized flag.
    friend ActionMatrix with_damping(ActionMatrix a, double eps) {
        bool sym = a.symmetrized_;
        for (std::size_t i = 0; i < a.dim_; ++i) a.band_[a.slot(i, i)] += cplx{0.0, eps};
        a.symmetrized_ = sym;
        return a;
    }

  private:
    std::size_t slot(std::size_t i, std::size_t j) const { return i * (kl_ + ku_ + 1) + (j + kl_ - i); }

    void check(std::size_t i, std::size_t j) const {
        if (i >= dim_ || j >= dim_ || !in_band(i, j))
            throw std::out_of_range("ActionMatrix: (" + std::to_string(i) + ", " + std::to_string(j) +
                                    ") outside band");
    }

    std::size_t dim_ = 0;
    std::size_t kl_ = 0;
    std::size_t ku_ = 0;
    std::vector<cplx> band_;
    bool symmetrized_ = false;
};

// Builds the lattice action exactly as the one-sided stencil prints it:
// row n of oscillator a holds -(m/dt + k dt), +2m/dt, -m/dt at columns
// n, n+1, n+2 and -k_ab dt at lattice point n of every other oscillator b.
// Points outside [0, N) are fixed at zero, which truncates the last rows.
// The result is not symmetrized; transition_amplitude does that itself.
inline ActionMatrix build_action_matrix(const OscillatorNetwork& net) {
    net.validate();
    const std::size_t m_osc = net.num_sources;
    const std::size_t n = net.steps;
    const std::size_t cross = (m_osc - 1) * n;
    ActionMatrix a(net.dim(), cross, std::max<std::size_t>(2, cross));

    const double diag = -(net.mass / net.dt + net.spring * net.dt);
    const double next = 2.0 * net.mass / net.dt;
    const double next2 = -net.mass / net.dt;

    for (std::size_t osc = 0; osc < m_osc; ++osc) {
        for (std::size_t t = 0; t < n; ++t) {
            std::size_t row = osc * n + t;
            a.set(row, row, diag);
            if (t + 1 < n) a.set(row, row + 1, next);
            if (t + 2 < n) a.set(row, row + 2, next2);
            for (std::size_t other = 0; other < m_osc; ++other) {
                if (other == osc) continue;
                a.set(row, other * n + t, -net.coupling(osc, other) * net.dt);
            }
        }
    }
    return a;
}

// 1/2 Q.A.Q + J.Q
inline cplx quadratic_form(const ActionMatrix& a, std::span<const double> q, std::span<const double> j = {}) {
    if (q.size() != a.dim()) throw ValidationError("Q", "dimension mismatch with action matrix");
    if (!j.empty() && j.size() != a.dim()) throw ValidationError("J", "dimension mismatch with action matrix");
    auto aq = a.multiply(q);
    cplx s{};
    for (std::size_t i = 0; i < q.size(); ++i) s += q[i] * aq[i];
    s *= 0.5;
    for (std::size_t i = 0; i < j.size(); ++i) s += j[i] * q[i];
    return s;
}

}  // namespace pathamp
