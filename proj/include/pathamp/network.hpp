// network.hpp - a set of identical harmonic oscillators with pairwise
// spring couplings, sampled on a uniform time lattice.
#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "pathamp/errors.hpp"

namespace pathamp {

// Row-major symmetric coupling matrix k_im with zero diagonal.
class CouplingMatrix {
  public:
    CouplingMatrix() = default;
    explicit CouplingMatrix(std::size_t n) : n_(n), k_(n * n, 0.0) {}

    // Uniform coupling between every distinct pair.
    static CouplingMatrix uniform(std::size_t n, double k) {
        CouplingMatrix c(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) c.k_[i * n + j] = k;
        return c;
    }

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return k_[i * n_ + j]; }

    // Sets k_ij and k_ji together.
    void set(std::size_t i, std::size_t j, double k) {
        k_[i * n_ + j] = k;
        k_[j * n_ + i] = k;
    }

    // Raw entry access, used when reading matrices from configuration.
    double& raw(std::size_t i, std::size_t j) { return k_[i * n_ + j]; }

  private:
    std::size_t n_ = 0;
    std::vector<double> k_;
};

struct OscillatorNetwork {
    std::size_t num_sources = 1;  // M
    double mass = 1.0;            // m
    double spring = 1.0;          // k (diagonal stiffness)
    CouplingMatrix coupling{1};   // k_im
    double dt = 0.1;              // lattice spacing
    std::size_t steps = 2;        // N, lattice points per oscillator

    std::size_t dim() const { return num_sources * steps; }

    // Coupling of the first pair, the k_12 of a two-oscillator network.
    double k12() const { return num_sources >= 2 ? coupling(0, 1) : 0.0; }

    // Throws ValidationError naming the first violated invariant.
    void validate() const {
        if (num_sources < 1) throw ValidationError("num_sources", "must be >= 1");
        if (!(mass > 0.0) || !std::isfinite(mass)) throw ValidationError("mass", "must be positive and finite");
        if (!(spring >= 0.0) || !std::isfinite(spring)) throw ValidationError("spring", "must be nonnegative and finite");
        if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt", "must be positive and finite");
        if (steps < 2) throw ValidationError("steps", "must be >= 2");
        if (coupling.size() != num_sources)
            throw ValidationError("coupling", "must be a " + std::to_string(num_sources) + "x" +
                                                  std::to_string(num_sources) + " matrix");
        for (std::size_t i = 0; i < num_sources; ++i) {
            if (coupling(i, i) != 0.0) throw ValidationError("coupling", "diagonal must be zero");
            for (std::size_t j = 0; j < num_sources; ++j) {
                if (!std::isfinite(coupling(i, j))) throw ValidationError("coupling", "entries must be finite");
                if (coupling(i, j) != coupling(j, i)) throw ValidationError("coupling", "must be symmetric");
            }
        }
    }
};

// Two oscillators coupled by k12; the configuration of the continuum analysis.
inline OscillatorNetwork make_pair_network(double mass, double spring, double k12, double dt = 0.1,
                                           std::size_t steps = 2) {
    OscillatorNetwork net;
    net.num_sources = 2;
    net.mass = mass;
    net.spring = spring;
    net.coupling = CouplingMatrix::uniform(2, k12);
    net.dt = dt;
    net.steps = steps;
    return net;
}

}  // namespace pathamp
