#pragma once

// Independent reference computations and random generators for the tests.
// Nothing here calls into the library's solvers; the oracles are written
// from the model definitions directly.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

/// Small seeded generator for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
    bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

    /// T > R > P > S by rejection from independent uniforms on [-10, 10].
    std::array<double, 4> pd() {
        while (true) {
            const double t = uniform(-10, 10), r = uniform(-10, 10), p = uniform(-10, 10), s = uniform(-10, 10);
            if (t > r && r > p && p > s) return {t, r, p, s};
        }
    }

    /// Random probability vector of length n.
    std::vector<double> simplex(std::size_t n) {
        std::vector<double> v(n);
        double total = 0.0;
        for (auto& x : v) total += (x = -std::log(uniform(1e-12, 1.0)));
        for (auto& x : v) x /= total;
        // Push the rounding residue into the largest entry so the sum is 1 to within an ulp or two.
        double sum = 0.0;
        for (double x : v) sum += x;
        *std::max_element(v.begin(), v.end()) += 1.0 - sum;
        return v;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// Bitmask of pure equilibria of the recognition-transformed PD.
/// Bits: 1 = (C,C), 2 = (C,D), 4 = (D,C), 8 = (D,D). Weak inequalities.
inline unsigned equilibria(const std::array<double, 4>& pd, double a, double b) {
    const double T = pd[0], R = pd[1], P = pd[2], S = pd[3];
    // u[i][j]: row player's objective payoff playing i against j (0 = C, 1 = D).
    const double u[2][2] = {{R, S}, {T, P}};
    const auto tu = [&](int i, int j) { return a * u[i][j] + b * u[j][i]; };
    unsigned mask = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const bool row_ok = tu(i, j) >= tu(1 - i, j);
            const bool col_ok = tu(j, i) >= tu(1 - j, i);
            if (row_ok && col_ok) mask |= 1u << (2 * i + j);
        }
    return mask;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// P(lo <= W <= hi) for W ~ Normal(mean, sd) truncated to W >= 0.
inline double truncated_mass(double mean, double sd, double lo, double hi) {
    lo = std::max(lo, 0.0);
    if (hi < lo) return 0.0;
    const double kept = 1.0 - normal_cdf(-mean / sd);
    return (normal_cdf((hi - mean) / sd) - normal_cdf((lo - mean) / sd)) / kept;
}

/// Dense Gaussian elimination with partial pivoting; solves A x = b.
inline std::vector<double> solve_linear(std::vector<std::vector<double>> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(A[i][k]) > std::abs(A[piv][k])) piv = i;
        std::swap(A[k], A[piv]);
        std::swap(b[k], b[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = A[i][k] / A[k][k];
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) A[i][j] -= f * A[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= A[k][j] * x[j];
        x[k] = s / A[k][k];
    }
    return x;
}

/// Exact optimal-stopping values by policy iteration with linear solves.
/// P is dense row-stochastic; stop[i] is the stop payoff, cont[i] the
/// per-period continue payoff.
inline std::vector<double> stopping_values(const std::vector<std::vector<double>>& P,
                                           const std::vector<double>& stop, const std::vector<double>& cont,
                                           double delta) {
    const std::size_t n = stop.size();
    std::vector<bool> go(n, false); // start from always-stop
    std::vector<double> v = stop;
    for (int round = 0; round < 10'000; ++round) {
        std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
            A[i][i] = 1.0;
            if (go[i]) {
                for (std::size_t j = 0; j < n; ++j) A[i][j] -= delta * P[i][j];
                rhs[i] = cont[i];
            } else {
                rhs[i] = stop[i];
            }
        }
        v = solve_linear(A, rhs);
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            double e = 0.0;
            for (std::size_t j = 0; j < n; ++j) e += P[i][j] * v[j];
            const double c = cont[i] + delta * e;
            // Switch only on a clear improvement so rounding cannot cycle.
            const bool want = go[i] ? !(stop[i] > c + 1e-13 * (1.0 + std::abs(c))) : c > stop[i] + 1e-13 * (1.0 + std::abs(c));
            if (want != go[i]) {
                go[i] = want;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return v;
}

/// Value at the root of a deterministic growth path with zero costs:
/// max over stopping times k of delta^k * phi_k along the path, where the
/// path is phi0 (1+g)^k until it reaches `cap`, then stays at `cap`.
inline double deterministic_zero_cost_value(double phi0, double g, double cap, double delta) {
    double best = phi0;
    double phi = phi0;
    double disc = 1.0;
    for (int k = 1; k < 100'000; ++k) {
        const double next = phi * (1.0 + g);
        phi = next >= cap ? cap : next;
        disc *= delta;
        best = std::max(best, disc * phi);
        if (phi == cap) break;
    }
    return best;
}

} // namespace oracle
