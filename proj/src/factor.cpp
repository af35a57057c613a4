#include "ftbn/factor.hpp"

#include <algorithm>
#include <stdexcept>

namespace ftbn {

namespace {

// Below this many output entries the OpenMP kernels run on one thread.
constexpr std::ptrdiff_t kParallelThreshold = 1 << 12;
constexpr std::size_t kBlock = 1 << 12;

std::size_t table_size(const std::vector<std::size_t>& cards) {
    std::size_t n = 1;
    for (auto c : cards) n *= c;
    return n;
}

struct ProductLayout {
    std::vector<std::size_t> scope;
    std::vector<std::size_t> cards;
    std::vector<std::size_t> a_stride;  // per output position, 0 if absent from a
    std::vector<std::size_t> b_stride;
};

ProductLayout product_layout(const Factor& a, const Factor& b) {
    ProductLayout l;
    l.scope = a.scope();
    l.cards = a.cards();
    for (std::size_t i = 0; i < b.scope().size(); ++i)
        if (!a.contains(b.scope()[i])) {
            l.scope.push_back(b.scope()[i]);
            l.cards.push_back(b.cards()[i]);
        }
    for (std::size_t i = 0; i < l.scope.size(); ++i) {
        const std::size_t pa = a.position(l.scope[i]);
        const std::size_t pb = b.position(l.scope[i]);
        l.a_stride.push_back(pa < a.scope().size() ? a.stride(pa) : 0);
        l.b_stride.push_back(pb < b.scope().size() ? b.stride(pb) : 0);
    }
    return l;
}

std::vector<std::size_t> without(const std::vector<std::size_t>& v, std::size_t pos) {
    std::vector<std::size_t> out = v;
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(pos));
    return out;
}

}  // namespace

Factor::Factor(std::vector<std::size_t> scope, std::vector<std::size_t> cards, std::vector<double> values)
    : scope_(std::move(scope)), cards_(std::move(cards)), values_(std::move(values)) {
    if (scope_.size() != cards_.size()) throw std::invalid_argument("factor scope and cardinalities differ in length");
    if (values_.size() != table_size(cards_)) throw std::invalid_argument("factor table size mismatch");
    for (double v : values_)
        if (!(v >= 0.0)) throw std::invalid_argument("factor entries must be nonnegative");
}

Factor Factor::scalar(double v) { return Factor({}, {}, {v}); }

bool Factor::contains(std::size_t var) const { return position(var) < scope_.size(); }

std::size_t Factor::position(std::size_t var) const {
    return static_cast<std::size_t>(std::find(scope_.begin(), scope_.end(), var) - scope_.begin());
}

std::size_t Factor::stride(std::size_t pos) const {
    std::size_t s = 1;
    for (std::size_t i = pos + 1; i < cards_.size(); ++i) s *= cards_[i];
    return s;
}

double Factor::sum() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s;
}

Factor restrict(const Factor& f, std::size_t var, std::size_t state) {
    const std::size_t pos = f.position(var);
    if (pos == f.scope().size()) return f;
    if (state >= f.cards()[pos]) throw std::out_of_range("state index out of range");
    const std::size_t stride = f.stride(pos);
    const std::size_t block = stride * f.cards()[pos];
    std::vector<double> values;
    values.reserve(f.size() / f.cards()[pos]);
    for (std::size_t outer = 0; outer < f.size(); outer += block)
        for (std::size_t inner = 0; inner < stride; ++inner) values.push_back(f.values()[outer + state * stride + inner]);
    return Factor(without(f.scope(), pos), without(f.cards(), pos), std::move(values));
}

namespace kernels {

namespace serial {

Factor product(const Factor& a, const Factor& b) {
    const ProductLayout l = product_layout(a, b);
    const std::size_t n = table_size(l.cards);
    const std::size_t dims = l.cards.size();
    std::vector<double> out(n);
    std::vector<std::size_t> digit(dims, 0);
    std::size_t ia = 0, ib = 0;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = a.values()[ia] * b.values()[ib];
        for (std::size_t d = dims; d-- > 0;) {
            if (++digit[d] < l.cards[d]) {
                ia += l.a_stride[d];
                ib += l.b_stride[d];
                break;
            }
            digit[d] = 0;
            ia -= l.a_stride[d] * (l.cards[d] - 1);
            ib -= l.b_stride[d] * (l.cards[d] - 1);
        }
    }
    return Factor(l.scope, l.cards, std::move(out));
}

Factor sum_out(const Factor& f, std::size_t var) {
    const std::size_t pos = f.position(var);
    if (pos == f.scope().size()) return f;
    const std::size_t card = f.cards()[pos];
    const std::size_t stride = f.stride(pos);
    const std::size_t block = stride * card;
    std::vector<double> out(f.size() / card, 0.0);
    std::size_t o = 0;
    for (std::size_t outer = 0; outer < f.size(); outer += block)
        for (std::size_t inner = 0; inner < stride; ++inner, ++o) {
            double s = 0.0;
            for (std::size_t j = 0; j < card; ++j) s += f.values()[outer + j * stride + inner];
            out[o] = s;
        }
    return Factor(without(f.scope(), pos), without(f.cards(), pos), std::move(out));
}

}  // namespace serial

namespace parallel {

Factor product(const Factor& a, const Factor& b) {
    const ProductLayout l = product_layout(a, b);
    const std::size_t n = table_size(l.cards);
    const std::size_t dims = l.cards.size();
    std::vector<double> out(n);
    const double* av = a.values().data();
    const double* bv = b.values().data();
    // Fixed blocks: decode the mixed-radix index once per block, then step an odometer.
    const auto blocks = static_cast<std::ptrdiff_t>((n + kBlock - 1) / kBlock);
#pragma omp parallel for schedule(static) if (static_cast<std::ptrdiff_t>(n) >= kParallelThreshold)
    for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
        const std::size_t begin = static_cast<std::size_t>(blk) * kBlock;
        const std::size_t end = std::min(n, begin + kBlock);
        std::vector<std::size_t> digit(dims);
        std::size_t rest = begin, ia = 0, ib = 0;
        for (std::size_t d = dims; d-- > 0;) {
            digit[d] = rest % l.cards[d];
            rest /= l.cards[d];
            ia += digit[d] * l.a_stride[d];
            ib += digit[d] * l.b_stride[d];
        }
        for (std::size_t i = begin; i < end; ++i) {
            out[i] = av[ia] * bv[ib];
            for (std::size_t d = dims; d-- > 0;) {
                ia += l.a_stride[d];
                ib += l.b_stride[d];
                if (++digit[d] < l.cards[d]) break;
                ia -= l.a_stride[d] * l.cards[d];
                ib -= l.b_stride[d] * l.cards[d];
                digit[d] = 0;
            }
        }
    }
    return Factor(l.scope, l.cards, std::move(out));
}

Factor sum_out(const Factor& f, std::size_t var) {
    const std::size_t pos = f.position(var);
    if (pos == f.scope().size()) return f;
    const std::size_t card = f.cards()[pos];
    const std::size_t stride = f.stride(pos);
    const auto n = static_cast<std::ptrdiff_t>(f.size() / card);
    std::vector<double> out(static_cast<std::size_t>(n));
    const double* v = f.values().data();
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (std::ptrdiff_t o = 0; o < n; ++o) {
        const std::size_t outer = static_cast<std::size_t>(o) / stride;
        const std::size_t inner = static_cast<std::size_t>(o) % stride;
        const std::size_t base = outer * stride * card + inner;
        double s = 0.0;
        for (std::size_t j = 0; j < card; ++j) s += v[base + j * stride];
        out[static_cast<std::size_t>(o)] = s;
    }
    return Factor(without(f.scope(), pos), without(f.cards(), pos), std::move(out));
}

}  // namespace parallel

}  // namespace kernels

Factor product(const Factor& a, const Factor& b, Execution exec) {
    return exec == Execution::Serial ? kernels::serial::product(a, b) : kernels::parallel::product(a, b);
}

Factor sum_out(const Factor& f, std::size_t var, Execution exec) {
    return exec == Execution::Serial ? kernels::serial::sum_out(f, var) : kernels::parallel::sum_out(f, var);
}

}  // namespace ftbn
