#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "mec/errors.hpp"
#include "mec/numeric.hpp"

namespace mec {

// Finite distribution with states kept sorted nonincreasing. Zero states are
// retained, not stripped, so state indices line up with a fixed support size;
// entropy ignores them. Immutable after construction.
template <class R>
class basic_distribution {
public:
    using value_type = R;
    using traits = numeric_traits<R>;
    static constexpr numeric_mode mode = traits::mode;

    // Point mass; the only distribution over one state.
    basic_distribution() : probs_{R(1)}, cum_{R(1)} {}

    // Validates nonnegativity and unit sum, sorts nonincreasing (stable, so
    // equal states keep their input order). With renormalize the values are
    // divided by their sum before validation.
    static basic_distribution from_masses(std::vector<R> values, bool renormalize = false,
                                          tolerances tol = {}) {
        if (values.empty()) throw domain_error("distribution: no states");
        for (auto& v : values) {
            if (!traits::leq(R(0), v, tol.mass))
                throw negative_mass_error("distribution: negative mass " +
                                          mass_string(v));
            if (v < R(0)) v = R(0);  // inside tolerance; clamp
        }
        R total(0);
        for (const auto& v : values) total += v;
        if (renormalize) {
            if (!(total > R(0))) throw not_normalized_error("distribution: total mass is zero");
            for (auto& v : values) v /= total;
        } else if (!traits::close(total, R(1), tol.mass)) {
            throw not_normalized_error("distribution: masses sum to " + mass_string(total) +
                                       ", expected 1");
        }
        std::stable_sort(values.begin(), values.end(), std::greater<R>());
        return basic_distribution(std::move(values));
    }

    std::size_t size() const { return probs_.size(); }
    const R& state(std::size_t i) const {
        if (i >= probs_.size()) throw index_error("distribution: state index out of range");
        return probs_[i];
    }
    const std::vector<R>& probs() const { return probs_; }

    // Sum of the first `count` states; count may be 0 (empty prefix) or size().
    R prefix(std::size_t count) const {
        if (count > probs_.size()) throw index_error("distribution: prefix length out of range");
        return count == 0 ? R(0) : cum_[count - 1];
    }

    double entropy_bits() const {
        double h = 0.0;
        for (const auto& v : probs_) {
            double x = traits::to_double(v);
            if (x > 0.0) h -= x * std::log2(x);
        }
        return h;
    }

    // Zero-extended copy with at least n states.
    basic_distribution padded(std::size_t n) const {
        if (n <= probs_.size()) return *this;
        std::vector<R> v = probs_;
        v.resize(n, R(0));
        return basic_distribution(std::move(v));
    }

    bool operator==(const basic_distribution& other) const { return probs_ == other.probs_; }

private:
    explicit basic_distribution(std::vector<R> sorted) : probs_(std::move(sorted)) {
        cum_.reserve(probs_.size());
        R run(0);
        for (const auto& v : probs_) {
            run += v;
            cum_.push_back(run);
        }
    }

    static std::string mass_string(const R& v) {
        if constexpr (traits::exact)
            return to_string(v);
        else
            return std::to_string(v);
    }

    std::vector<R> probs_;  // nonincreasing
    std::vector<R> cum_;    // running prefix sums
};

using distribution = basic_distribution<double>;
using exact_distribution = basic_distribution<rational>;

template <class R>
basic_distribution<R> make_distribution(std::vector<R> values, bool renormalize = false,
                                        tolerances tol = {}) {
    return basic_distribution<R>::from_masses(std::move(values), renormalize, tol);
}

inline distribution make_distribution(std::initializer_list<double> values,
                                      bool renormalize = false, tolerances tol = {}) {
    return distribution::from_masses(std::vector<double>(values), renormalize, tol);
}

template <class R>
R prefix_sum(const basic_distribution<R>& d, std::size_t count) {
    return d.prefix(count);
}

template <class R>
double entropy(const basic_distribution<R>& d) {
    return d.entropy_bits();
}

// Entropy of a raw mass sequence in bits; zero masses contribute nothing.
template <class R>
double entropy(std::span<const R> masses) {
    double h = 0.0;
    for (const auto& v : masses) {
        double x = numeric_traits<R>::to_double(v);
        if (x > 0.0) h -= x * std::log2(x);
    }
    return h;
}

template <class R>
double entropy(const std::vector<R>& masses) {
    return entropy(std::span<const R>(masses));
}

// Uniform distribution over n states.
template <class R = double>
basic_distribution<R> uniform_distribution(std::size_t n) {
    if (n == 0) throw domain_error("uniform_distribution: n must be positive");
    if constexpr (numeric_traits<R>::exact)
        return basic_distribution<R>::from_masses(std::vector<R>(n, rational(1, n)));
    else
        return basic_distribution<R>::from_masses(std::vector<R>(n, 1.0 / double(n)), true);
}

}  // namespace mec
