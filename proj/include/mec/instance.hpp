#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "mec/distribution.hpp"
#include "mec/errors.hpp"

namespace mec {

// An ordered set of m marginals, zero-padded to a common support size n.
// The numeric mode is shared by construction (it is the template parameter).
template <class R>
class basic_instance {
public:
    static constexpr numeric_mode mode = numeric_traits<R>::mode;

    static basic_instance from_marginals(std::vector<basic_distribution<R>> marginals) {
        if (marginals.empty()) throw domain_error("instance: needs at least one marginal");
        std::size_t n = 0;
        for (const auto& p : marginals) n = std::max(n, p.size());
        for (auto& p : marginals) p = p.padded(n);
        return basic_instance(std::move(marginals), n);
    }

    std::size_t marginal_count() const { return marginals_.size(); }  // m
    std::size_t state_count() const { return states_; }               // n

    const basic_distribution<R>& marginal(std::size_t j) const {
        if (j >= marginals_.size()) throw index_error("instance: marginal index out of range");
        return marginals_[j];
    }
    const std::vector<basic_distribution<R>>& marginals() const { return marginals_; }

private:
    basic_instance(std::vector<basic_distribution<R>> marginals, std::size_t n)
        : marginals_(std::move(marginals)), states_(n) {}

    std::vector<basic_distribution<R>> marginals_;
    std::size_t states_;
};

using instance = basic_instance<double>;
using exact_instance = basic_instance<rational>;

}  // namespace mec
