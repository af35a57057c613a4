#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ftbn {

/// Selects the serial reference kernels or their OpenMP counterparts.
/// Both produce bitwise-identical results.
enum class Execution { Serial, Parallel };

/// Nonnegative table over a set of variables (identified by index).
/// Entries are laid out mixed-radix over `scope`, last variable fastest.
class Factor {
public:
    Factor() : values_{1.0} {}
    Factor(std::vector<std::size_t> scope, std::vector<std::size_t> cards, std::vector<double> values);

    static Factor scalar(double v);

    const std::vector<std::size_t>& scope() const noexcept { return scope_; }
    const std::vector<std::size_t>& cards() const noexcept { return cards_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    bool contains(std::size_t var) const;
    /// Position of `var` within the scope; scope().size() when absent.
    std::size_t position(std::size_t var) const;
    /// Stride of the variable at scope position `pos`.
    std::size_t stride(std::size_t pos) const;

    double sum() const;

    bool operator==(const Factor&) const = default;

private:
    std::vector<std::size_t> scope_;
    std::vector<std::size_t> cards_;
    std::vector<double> values_;
};

/// Keeps only entries where `var` takes `state`, dropping `var` from the scope.
Factor restrict(const Factor& f, std::size_t var, std::size_t state);

namespace kernels {

namespace serial {
/// Pointwise product; result scope is a's scope followed by b's new variables.
Factor product(const Factor& a, const Factor& b);
/// Sums `var` out, adding its states in index order.
Factor sum_out(const Factor& f, std::size_t var);
}  // namespace serial

namespace parallel {
Factor product(const Factor& a, const Factor& b);
Factor sum_out(const Factor& f, std::size_t var);
}  // namespace parallel

}  // namespace kernels

Factor product(const Factor& a, const Factor& b, Execution exec = Execution::Parallel);
Factor sum_out(const Factor& f, std::size_t var, Execution exec = Execution::Parallel);

}  // namespace ftbn
