#include <doctest.h>

#include <cmath>
#include <limits>

#include "arqsec/analysis/closed_form.hpp"
#include "arqsec/analysis/enumeration.hpp"
#include "arqsec/analysis/tradeoff.hpp"
#include "arqsec/rng.hpp"

using namespace arqsec;
using namespace arqsec::analysis;

namespace {

// Reference values computed offline with exact rational arithmetic.
constexpr double kP0Fig = 3.5052666248829024e-05;      // 0.9025^100 = 0.95^200
constexpr double kKnowsIds30 = 0.5454843193824371;     // 0.98^30
constexpr double kUsefulBound = 166.77586024688888702; // n=100, N=1e5, gamma=0.004
constexpr double kBounded02 = 0.5454843192661009;      // n=30, l=10, ae=.02, be=.02
constexpr double kBounded05 = 0.5454836857907286;      // be=.05
constexpr double kBounded10 = 0.5452364757918251;      // be=.10
constexpr double kBlind02 = 0.29755314269212074;
constexpr double kBlind05 = 0.1170820800625009;
constexpr double kBlind10 = 0.023123712119589482;
constexpr double kBoundedSmall = 0.2375205325417701;   // n=8, l=3, ae=.1, be=.3

std::vector<double> draw(CounterRng& rng, std::size_t n, double hi)
{
    std::vector<double> v(n);
    for (auto& x : v) {
        x = rng.uniform() * hi;
    }
    return v;
}

}  // namespace

TEST_CASE("frozen closed-form values")
{
    CHECK(p0_closed(0.05, 0.05, 200) == doctest::Approx(kP0Fig).epsilon(1e-12));
    CHECK(p0_closed(0.05, 0.05, 100) == doctest::Approx(0.005920529220334025).epsilon(1e-12));
    CHECK(useful_frames_bound(0.004, 100, 100000) == doctest::Approx(kUsefulBound).epsilon(1e-12));
    CHECK(outage_knows_ids(0.02, 30) == doctest::Approx(kKnowsIds30).epsilon(1e-12));
    CHECK(outage_blind(0.02, 0.02, 30) == doctest::Approx(kBlind02).epsilon(1e-12));
    CHECK(outage_blind(0.02, 0.05, 30) == doctest::Approx(kBlind05).epsilon(1e-12));
    CHECK(outage_blind(0.02, 0.10, 30) == doctest::Approx(kBlind10).epsilon(1e-12));
    CHECK(outage_bounded(0.02, 0.02, 30, 10) == doctest::Approx(kBounded02).epsilon(1e-12));
    CHECK(outage_bounded(0.02, 0.05, 30, 10) == doctest::Approx(kBounded05).epsilon(1e-12));
    CHECK(outage_bounded(0.02, 0.10, 30, 10) == doctest::Approx(kBounded10).epsilon(1e-12));
    CHECK(outage_bounded(0.1, 0.3, 8, 3) == doctest::Approx(kBoundedSmall).epsilon(1e-12));
    CHECK(outage_bounded(0.0, 0.5, 10, 10) == doctest::Approx(0.9990234375).epsilon(1e-14));
    CHECK(outage_blind(0.3, 0.3, 1) == doctest::Approx(0.49));
    CHECK(outage_blind(0.1, 0.1, 2) == doctest::Approx(0.6561));
}

TEST_CASE("useful-frame bound edge cases and direct sum")
{
    CHECK(useful_frames_bound(0.0, 10, 1000) == 990);
    CHECK(useful_frames_bound(1.0, 10, 1000) == 0);
    CHECK(useful_frames_bound(0.3, 10, 10) == 0);
    CHECK(useful_frames_bound(0.3, 10, 5) == 0);
    for (double g : {0.01, 0.1, 0.5}) {
        double direct = 0;
        for (int i = 5; i <= 50; ++i) {
            direct += std::pow(1 - g, i);
        }
        CHECK(useful_frames_bound(g, 4, 50) == doctest::Approx(direct).epsilon(1e-12));
    }
    // tiny gamma: no cancellation
    CHECK(useful_frames_bound(1e-12, 2, 1000000) == doctest::Approx(999998.0).epsilon(1e-6));
    CHECK(std::isfinite(useful_frames_bound(1e-300, 2, 1000)));
}

TEST_CASE("closed forms agree with exhaustive enumeration")
{
    CounterRng rng(1);
    for (unsigned n = 1; n <= 8; ++n) {
        for (int rep = 0; rep < 5; ++rep) {
            const auto ae = draw(rng, n, 0.5);
            const auto be = draw(rng, n, 0.5);
            CHECK(exact_outage_enumeration(ae, be, EnumPredicate::FramesAndAcks) ==
                  doctest::Approx(outage_blind(ae, be)).epsilon(1e-12));
            CHECK(exact_outage_enumeration(ae, be, EnumPredicate::AllFrames) ==
                  doctest::Approx(outage_knows_ids(ae)).epsilon(1e-12));
            CHECK(exact_outage_enumeration(ae, be, EnumPredicate::AllInit) ==
                  doctest::Approx(p0_closed(ae, be)).epsilon(1e-12));
        }
        const double a = 0.07 * n;
        const double b = 0.05 * n;
        for (unsigned ell = 1; ell <= n; ++ell) {
            const std::vector<double> av(n, a);
            const std::vector<double> bv(n, b);
            CHECK(exact_outage_enumeration(av, bv, EnumPredicate::Bounded, ell) ==
                  doctest::Approx(outage_bounded(a, b, n, ell)).epsilon(1e-12));
        }
    }
    // the off-by-one in the upper summation index is visible
    const std::vector<double> av(6, 0.1);
    const std::vector<double> bv(6, 0.3);
    CHECK(exact_outage_enumeration(av, bv, EnumPredicate::Bounded, 3) !=
          doctest::Approx(outage_bounded(0.1, 0.3, 6, 3, 1)).epsilon(1e-9));
}

TEST_CASE("enumeration limits and argument checks")
{
    const std::vector<double> big(13, 0.1);
    CHECK_THROWS_AS(exact_outage_enumeration(big, big, EnumPredicate::FramesAndAcks), EnumerationTooLarge);
    CHECK_NOTHROW(exact_outage_enumeration(big, big, EnumPredicate::AllFrames));
    CHECK_THROWS_AS(outage_bounded(0.1, 0.1, 5, 0), std::invalid_argument);
    CHECK_THROWS_AS(outage_bounded(0.1, 0.1, 5, 6), std::invalid_argument);
    CHECK_THROWS(p0_closed(0.1, 0.1, 3));
}

TEST_CASE("large n stays finite and ordered")
{
    const double bounded = outage_bounded(0.02, 0.02, 1000, 500);
    CHECK(std::isfinite(bounded));
    CHECK(bounded > 0);
    CHECK(bounded <= outage_knows_ids(0.02, 1000) * (1 + 1e-12));
    CHECK(bounded >= outage_blind(0.02, 0.02, 1000));
    CHECK(outage_bounded(0.001, 0.9, 4000, 40) >= 0);
}

TEST_CASE("ordering and monotonicity")
{
    for (double be : {0.01, 0.05, 0.1, 0.2, 0.3}) {
        const double blind = outage_blind(0.02, be, 30);
        const double bounded = outage_bounded(0.02, be, 30, 10);
        const double unbounded = outage_knows_ids(0.02, 30);
        CHECK(blind <= bounded);
        CHECK(bounded <= unbounded * (1 + 1e-12));
    }
    double prev = 0;
    for (unsigned ell = 1; ell <= 30; ++ell) {
        const double v = outage_bounded(0.02, 0.2, 30, ell);
        CHECK(v >= prev);
        prev = v;
    }
    prev = 1;
    for (double be = 0.0; be <= 0.5; be += 0.05) {
        const double v = outage_bounded(0.02, be, 30, 5);
        CHECK(v <= prev * (1 + 1e-12));
        prev = v;
    }
    prev = 1;
    for (unsigned n = 2; n <= 200; n += 2) {
        const double v = p0_closed(0.05, 0.05, n);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("throughput-secrecy tradeoff")
{
    const auto t = tradeoff_point(100, 10, 106000, 0.0, 0.05, 0.05);
    CHECK(t.n == 100);
    CHECK(t.reads_per_second == doctest::Approx(20.784313725490197).epsilon(1e-12));
    CHECK(t.outage == doctest::Approx(kP0Fig).epsilon(1e-12));
    CHECK(tradeoff_point(100, 10, 106000, 0.05, 0.05, 0.05).n == 95);
    double prev_rate = std::numeric_limits<double>::infinity();
    double prev_out = 1;
    for (unsigned m = 10; m <= 200; m += 10) {
        const auto p = tradeoff_point(m, 10, 106000, 0.0, 0.05, 0.05);
        CHECK(p.reads_per_second < prev_rate);
        CHECK(p.outage < prev_out);
        prev_rate = p.reads_per_second;
        prev_out = p.outage;
    }
}

TEST_CASE("attack effort scaling")
{
    const auto e = attack_effort(kUsefulBound, 100000);
    CHECK_FALSE(e.unbounded);
    CHECK(e.scale == doctest::Approx(100000 / kUsefulBound));
    CHECK(e.minutes == doctest::Approx(10 * 100000 / kUsefulBound));
    CHECK(e.years() == doctest::Approx(e.minutes / 525960.0));
    const auto full = attack_effort(100000, 100000);
    CHECK(full.minutes == doctest::Approx(10.0));
    const auto none = attack_effort(0, 100000);
    CHECK(none.unbounded);
    CHECK(std::isinf(none.minutes));
}
