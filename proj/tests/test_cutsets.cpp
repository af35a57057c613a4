#include <doctest.h>

#include <algorithm>
#include <random>

#include "ftbn/compiler.hpp"
#include "ftbn/cutsets.hpp"
#include "ftbn/plc_variants.hpp"
#include "ftbn/reliability.hpp"
#include "support/oracles.hpp"

using namespace ftbn;

namespace {

std::map<std::string, double> priors_of(const FaultTree& ft) { return probability_table(ft.primaries, MissionTime(4e5)); }

CutSet cs(std::vector<std::string> m) { return CutSet{std::move(m)}; }

bool is_cut(const FaultTree& ft, const CutSet& c) {
    std::map<std::string, bool> a;
    for (const auto& p : ft.primaries) a[p.id] = std::binary_search(c.members.begin(), c.members.end(), p.id);
    return boolean_eval(ft, a);
}

}  // namespace

TEST_CASE("small trees") {
    CHECK(minimal_cut_sets(parse_fault_tree("primary a prob=0.1; primary b prob=0.1; event t = and(a,b); top t;")) ==
          std::vector<CutSet>{cs({"a", "b"})});
    CHECK(minimal_cut_sets(parse_fault_tree("primary a prob=0.1; primary b prob=0.1; event t = or(a,b); top t;")) ==
          std::vector<CutSet>{cs({"a"}), cs({"b"})});
    CHECK(minimal_cut_sets(parse_fault_tree(
              "primary a prob=0.1; primary b prob=0.1; primary c prob=0.1; event t = 2 of 3(a,b,c); top t;")) ==
          std::vector<CutSet>{cs({"a", "b"}), cs({"a", "c"}), cs({"b", "c"})});
    // absorption: a or (a and b) has the single cut set {a}
    CHECK(minimal_cut_sets(parse_fault_tree(
              "primary a prob=0.1; primary b prob=0.1; event g = and(a,b); event t = or(a,g); top t;")) ==
          std::vector<CutSet>{cs({"a"})});
}

TEST_CASE("PLC has 59 minimal cut sets") {
    const auto mcs = minimal_cut_sets(plc_case_study());
    CHECK(mcs.size() == 59);
    CHECK(mcs[0] == cs({"Voter"}));
    std::size_t order2 = 0;
    for (const auto& c : mcs) order2 += c.order() == 2;
    CHECK(order2 == 58);
    CHECK(std::find(mcs.begin(), mcs.end(), cs({"PS1", "PS2"})) != mcs.end());
    CHECK(std::find(mcs.begin(), mcs.end(), cs({"CPU_A", "CPU_B"})) != mcs.end());
    CHECK(std::find(mcs.begin(), mcs.end(), cs({"IObus_A", "IObus_B"})) != mcs.end());
    CHECK(std::is_sorted(mcs.begin(), mcs.end(), [](const CutSet& a, const CutSet& b) {
        return a.order() != b.order() ? a.order() < b.order() : a.members < b.members;
    }));
}

TEST_CASE("composition agrees with brute force on random trees") {
    std::mt19937_64 rng(51);
    for (int i = 0; i < 150; ++i) {
        const FaultTree ft = testing::random_tree(rng, 2 + i % 11);
        const auto mcs = minimal_cut_sets(ft);
        std::set<std::set<std::string>> got;
        for (const auto& c : mcs) {
            got.emplace(c.members.begin(), c.members.end());
            CHECK(is_cut(ft, c));
            for (std::size_t drop = 0; drop < c.order(); ++drop) {
                CutSet smaller = c;
                smaller.members.erase(smaller.members.begin() + static_cast<std::ptrdiff_t>(drop));
                CHECK_FALSE(is_cut(ft, smaller));
            }
        }
        CHECK(got == testing::brute_force_minimal_cut_sets(ft));
    }
}

TEST_CASE("scored PLC cut sets") {
    const FaultTree ft = plc_case_study_rounded_priors();
    const auto priors = priors_of(ft);
    const BayesianNetwork bn = compile(ft, priors).bn;
    const auto scored = score_cut_sets(ft, bn, priors);
    REQUIRE(scored.size() == 59);

    CHECK(scored[0].cutset == cs({"CPU_A", "CPU_B"}));
    CHECK(std::abs(scored[0].unreliability - 0.03075) <= 1e-5);
    CHECK(std::abs(scored[0].posterior_unreliability - 0.13943) <= 1e-5);
    CHECK(std::abs(scored[0].diagnosis_posterior - 0.04533) <= 1e-5);

    const auto voter = std::find_if(scored.begin(), scored.end(), [](const auto& s) { return s.cutset == cs({"Voter"}); });
    REQUIRE(voter != scored.end());
    CHECK(std::abs(voter->unreliability - 0.02605) <= 1e-5);
    CHECK(std::abs(voter->posterior_unreliability - 0.11812) <= 1e-5);
    CHECK(std::abs(voter->diagnosis_posterior - 0.02682) <= 1e-5);

    for (std::size_t i = 0; i < scored.size(); ++i) {
        CHECK(scored[i].diagnosis_posterior <= scored[i].posterior_unreliability + 1e-15);
        if (i > 0) CHECK(scored[i - 1].unreliability >= scored[i].unreliability);
    }
}

TEST_CASE("unreliability") {
    const std::map<std::string, double> p{{"a", 0.1}, {"b", 0.2}};
    CHECK(unreliability(cs({"a", "b"}), p) == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(unreliability(cs({"a"}), p) == 0.1);
    CHECK_THROWS_AS(unreliability(cs({"z"}), p), UnknownNameError);
}

TEST_CASE("scoring needs deterministic gates") {
    const FaultTree ft = plc_case_study_rounded_priors();
    const auto priors = priors_of(ft);
    const BayesianNetwork noisy = plc_noisy_variant(compile(ft, priors).bn);
    CHECK_THROWS_AS(score_cut_sets(ft, noisy, priors), Error);
}
