#pragma once

// Discounted optimal stopping on a finite Markov chain:
//
//   V(i) = max{ stop(i), cont(i) + discount * sum_j P(i, j) V(j) }
//
// Stopping moves the process to an absorbing state worth zero.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "radv/errors.hpp"

namespace radv {

enum class Decision : std::uint8_t { Stop, Continue };

inline const char* to_string(Decision d) { return d == Decision::Stop ? "Stop" : "Continue"; }

/// Sparse row-stochastic transition matrix.
class Transitions {
public:
    using Entry = std::pair<std::size_t, double>;
    using Row = std::vector<Entry>;

    Transitions() = default;
    explicit Transitions(std::vector<Row> rows) : rows_(std::move(rows)) {}

    /// Throws InvalidProcess unless every row is a probability vector over
    /// valid state indices (sum within 1e-12).
    void validate() const {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            double total = 0.0;
            for (const auto& [j, p] : rows_[i]) {
                if (j >= rows_.size() || !(p >= 0.0) || !std::isfinite(p)) {
                    std::ostringstream os;
                    os << "transition row " << i << " has an invalid entry";
                    throw InvalidProcess(os.str());
                }
                total += p;
            }
            if (std::abs(total - 1.0) > 1e-12) {
                std::ostringstream os;
                os.precision(17);
                os << "transition row " << i << " is not stochastic (sum " << total << ")";
                throw InvalidProcess(os.str());
            }
        }
    }

    std::size_t size() const noexcept { return rows_.size(); }
    const Row& row(std::size_t i) const { return rows_[i]; }
    const std::vector<Row>& rows() const noexcept { return rows_; }

    double expectation(std::size_t i, std::span<const double> values) const {
        double e = 0.0;
        for (const auto& [j, p] : rows_[i]) e += p * values[j];
        return e;
    }

private:
    std::vector<Row> rows_;
};

struct StoppingRewards {
    std::vector<double> stop;
    std::vector<double> cont;
};

struct StoppingSolution {
    std::vector<double> value;
    std::vector<Decision> policy;
    /// Sup-norm change of every sweep, in order.
    std::vector<double> residuals;
    std::size_t iterations = 0;
    double residual = 0.0;
};

namespace detail {

inline double sup_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

} // namespace detail

/// One application of the max-backup. Ties resolve to Stop.
inline std::vector<double> stopping_backup(const Transitions& tr, const StoppingRewards& rw, double discount,
                                           std::span<const double> next, std::vector<Decision>* policy = nullptr) {
    std::vector<double> out(tr.size());
    if (policy) policy->resize(tr.size());
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double cont = rw.cont[i] + discount * tr.expectation(i, next);
        const bool stop = rw.stop[i] >= cont;
        out[i] = stop ? rw.stop[i] : cont;
        if (policy) (*policy)[i] = stop ? Decision::Stop : Decision::Continue;
    }
    return out;
}

/// Value iteration from V0 = stop rewards until the sweep residual drops
/// below `tolerance`. Throws NonConvergence after `max_iterations` sweeps.
inline StoppingSolution solve_stopping(const Transitions& tr, const StoppingRewards& rw, double discount,
                                       double tolerance, std::size_t max_iterations) {
    StoppingSolution sol;
    std::vector<double> v = rw.stop;
    while (true) {
        if (sol.iterations >= max_iterations) {
            std::ostringstream os;
            os << "value iteration did not reach tolerance " << tolerance << " within " << max_iterations
               << " sweeps (last residual " << sol.residual << ")";
            throw NonConvergence(os.str(), sol.iterations, sol.residual);
        }
        std::vector<double> next = stopping_backup(tr, rw, discount, v);
        sol.residual = detail::sup_distance(next, v);
        sol.residuals.push_back(sol.residual);
        ++sol.iterations;
        v = std::move(next);
        if (sol.residual < tolerance) break;
    }
    stopping_backup(tr, rw, discount, v, &sol.policy);
    sol.value = std::move(v);
    return sol;
}

/// Value of a fixed stationary policy, by iterating its linear operator.
inline std::vector<double> evaluate_policy(const Transitions& tr, const StoppingRewards& rw, double discount,
                                           std::span<const Decision> policy, double tolerance,
                                           std::size_t max_iterations) {
    std::vector<double> v(tr.size(), 0.0);
    for (std::size_t k = 0;; ++k) {
        std::vector<double> next(tr.size());
        for (std::size_t i = 0; i < tr.size(); ++i)
            next[i] = policy[i] == Decision::Stop ? rw.stop[i] : rw.cont[i] + discount * tr.expectation(i, v);
        const double r = detail::sup_distance(next, v);
        v = std::move(next);
        if (r < tolerance) break;
        if (k + 1 >= max_iterations) throw NonConvergence("policy evaluation did not converge", k + 1, r);
    }
    return v;
}

} // namespace radv
