#include <doctest.h>

#include <omp.h>

#include <random>

#include "ftbn/factor.hpp"

using namespace ftbn;

namespace {

Factor random_factor(std::mt19937_64& rng, std::vector<std::size_t> scope, std::vector<std::size_t> cards) {
    std::size_t size = 1;
    for (auto c : cards) size *= c;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> values(size);
    for (auto& v : values) v = u(rng);
    return Factor(std::move(scope), std::move(cards), std::move(values));
}

}  // namespace

TEST_CASE("product and sum_out on a small example") {
    // f(a, b), g(b, c)
    const Factor f({0, 1}, {2, 2}, {1, 2, 3, 4});
    const Factor g({1, 2}, {2, 2}, {5, 6, 7, 8});
    const Factor fg = product(f, g, Execution::Serial);
    CHECK(fg.scope() == std::vector<std::size_t>{0, 1, 2});
    CHECK(fg.values() == std::vector<double>{5, 6, 14, 16, 15, 18, 28, 32});

    const Factor over_b = sum_out(fg, 1, Execution::Serial);
    CHECK(over_b.scope() == std::vector<std::size_t>{0, 2});
    CHECK(over_b.values() == std::vector<double>{19, 22, 43, 50});

    CHECK(sum_out(sum_out(over_b, 0), 2).values() == std::vector<double>{134});
    CHECK(fg.sum() == 134);
}

TEST_CASE("restrict") {
    const Factor f({3, 7}, {2, 3}, {1, 2, 3, 4, 5, 6});
    CHECK(restrict(f, 3, 1).values() == std::vector<double>{4, 5, 6});
    CHECK(restrict(f, 7, 2).values() == std::vector<double>{3, 6});
    CHECK(restrict(f, 7, 2).scope() == std::vector<std::size_t>{3});
    CHECK(restrict(f, 9, 0) == f);
}

TEST_CASE("factor construction checks sizes") {
    CHECK_THROWS(Factor({0}, {2}, {1.0}));
    CHECK_THROWS(Factor({0, 1}, {2}, {1.0, 1.0}));
    CHECK(Factor::scalar(3.0).values() == std::vector<double>{3.0});
}

TEST_CASE("parallel kernels match the serial reference bitwise") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        // sizes straddle the parallel threshold
        const std::size_t wide = 8 + trial % 6;
        std::vector<std::size_t> sa, ca, sb, cb;
        for (std::size_t v = 0; v < wide; ++v) {
            if (v % 3 != 2) {
                sa.push_back(v);
                ca.push_back(2 + v % 2);
            }
            if (v % 2 == 0 || v + 1 == wide) {
                sb.push_back(v);
                cb.push_back(2 + v % 2);
            }
        }
        const Factor a = random_factor(rng, sa, ca);
        const Factor b = random_factor(rng, sb, cb);
        const Factor ps = kernels::serial::product(a, b);
        for (int threads : {1, 2, 4, 7}) {
            omp_set_num_threads(threads);
            const Factor pp = kernels::parallel::product(a, b);
            CHECK(pp == ps);
            for (std::size_t v : {sa.front(), sb.back(), sa[sa.size() / 2]})
                CHECK(kernels::parallel::sum_out(ps, v) == kernels::serial::sum_out(ps, v));
        }
    }
    omp_set_num_threads(omp_get_num_procs());
}
