#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mec/distribution.hpp"
#include "mec/errors.hpp"
#include "mec/instance.hpp"

namespace mec {

// One joint state: a state index per marginal plus its probability mass.
template <class R>
struct coupling_cell {
    std::vector<std::uint32_t> indices;  // 0-based, one per marginal
    R mass;
};

// Sparse coupling over an instance, cells kept in construction order. The
// dense m-way tensor is never materialized. Validation checks unit mass and
// per-marginal conservation: exact in rational mode, within tol.mass in float.
template <class R>
class basic_coupling {
public:
    using traits = numeric_traits<R>;

    basic_coupling(basic_instance<R> inst, std::vector<coupling_cell<R>> cells,
                   tolerances tol = {})
        : instance_(std::move(inst)), cells_(std::move(cells)) {
        validate(tol);
    }

    const basic_instance<R>& instance() const { return instance_; }
    const std::vector<coupling_cell<R>>& cells() const { return cells_; }
    std::size_t cell_count() const { return cells_.size(); }

    std::vector<R> masses() const {
        std::vector<R> out;
        out.reserve(cells_.size());
        for (const auto& c : cells_) out.push_back(c.mass);
        return out;
    }

    double entropy_bits() const {
        double h = 0.0;
        for (const auto& c : cells_) {
            double x = traits::to_double(c.mass);
            if (x > 0.0) h -= x * std::log2(x);
        }
        return h;
    }

private:
    void validate(tolerances tol) const {
        const std::size_t m = instance_.marginal_count();
        const std::size_t n = instance_.state_count();
        std::vector<std::vector<R>> sums(m, std::vector<R>(n, R(0)));
        R total(0);
        for (const auto& c : cells_) {
            if (c.indices.size() != m)
                throw coupling_error("coupling: cell arity does not match marginal count");
            if (!(c.mass >= R(0))) throw coupling_error("coupling: negative cell mass");
            for (std::size_t j = 0; j < m; ++j) {
                if (c.indices[j] >= n)
                    throw coupling_error("coupling: state index out of range");
                sums[j][c.indices[j]] += c.mass;
            }
            total += c.mass;
        }
        if (!traits::close(total, R(1), tol.mass))
            throw coupling_error("coupling: cell masses do not sum to 1");
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (!traits::close(sums[j][k], instance_.marginal(j).state(k), tol.mass))
                    throw coupling_error("coupling: marginal " + std::to_string(j) +
                                         " not conserved at state " + std::to_string(k));
    }

    basic_instance<R> instance_;
    std::vector<coupling_cell<R>> cells_;
};

using coupling = basic_coupling<double>;
using exact_coupling = basic_coupling<rational>;

template <class R>
double entropy(const basic_coupling<R>& c) {
    return c.entropy_bits();
}

}  // namespace mec
