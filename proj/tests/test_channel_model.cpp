#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

#include "coopamc/channel_model.hpp"
#include "support/oracles.hpp"

using namespace coopamc;

namespace {
AmcMode mode_a100() {
    AmcMode m;
    m.index = 1;
    m.rate = 1.0;
    m.fit_a = 100.0;
    m.fit_g = 1.0;
    m.cutoff = std::log(100.0);
    return m;
}
}  // namespace

TEST_CASE("per_instant branches and continuity") {
    const AmcMode m = mode_a100();
    CHECK(per_instant(m, 4.0) == 1.0);
    CHECK(per_instant(m, std::log(100.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(per_instant(m, std::log(1000.0)) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("per_instant is non-increasing and bounded") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> us(0.0, 30.0);
    for (int trial = 0; trial < 200; ++trial) {
        const AmcMode m = oracles::random_mode(rng, 1, 1.0);
        double x = us(rng);
        double y = us(rng);
        if (x > y) std::swap(x, y);
        const double px = per_instant(m, x);
        const double py = per_instant(m, y);
        CHECK(px >= py);
        CHECK(px <= 1.0);
        CHECK(py >= 0.0);
    }
}

TEST_CASE("rayleigh_interval_prob basic values") {
    CHECK(rayleigh_interval_prob(10.0, 0.0, kInf) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rayleigh_interval_prob(10.0, 10.0, kInf) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    const double quad = oracles::integrate(oracles::expo_density(10.0), 2.0, 5.0);
    CHECK(rayleigh_interval_prob(10.0, 2.0, 5.0) == doctest::Approx(quad).epsilon(1e-10));
    CHECK_THROWS_AS(rayleigh_interval_prob(10.0, 5.0, 2.0), std::invalid_argument);
}

TEST_CASE("interval probabilities telescope to one over any partition") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> umean(0.3, 40.0);
    std::uniform_real_distribution<double> ucut(0.01, 15.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double mean = umean(rng);
        std::vector<double> cuts{0.0};
        const int k = 1 + static_cast<int>(trial % 7);
        for (int i = 0; i < k; ++i) cuts.push_back(ucut(rng));
        std::sort(cuts.begin(), cuts.end());
        cuts.push_back(kInf);
        double total = 0.0;
        for (size_t i = 0; i + 1 < cuts.size(); ++i) {
            total += rayleigh_interval_prob(mean, cuts[i], cuts[i + 1]);
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("interval_avg_per against quadrature") {
    AmcMode m;
    m.index = 1;
    m.rate = 1.0;
    m.fit_a = 90.0;
    m.fit_g = 0.5;
    m.cutoff = std::log(90.0) / 0.5;
    const double got = interval_avg_per(m, 10.0, m.cutoff, kInf);
    const double want = oracles::quad_interval_avg_per(m, 10.0, m.cutoff, kInf);
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("interval_avg_per over a shrinking interval approaches per_instant") {
    const AmcMode m = mode_a100();
    const double lo = m.cutoff + 1.0;
    const double avg = interval_avg_per(m, 8.0, lo, lo + 1e-9);
    CHECK(avg == doctest::Approx(per_instant(m, lo)).epsilon(1e-6));
}

TEST_CASE("interval_avg_per of an error-free mode is zero") {
    AmcMode m;
    m.index = 1;
    m.rate = 2.0;
    m.fit_a = 0.0;
    m.fit_g = 1.0;
    m.cutoff = 1.5;
    CHECK(interval_avg_per(m, 5.0, 2.0, kInf) == 0.0);
}

TEST_CASE("interval_avg_per input validation") {
    const AmcMode m = mode_a100();
    CHECK_THROWS_AS(interval_avg_per(m, 10.0, 0.0, kInf), std::invalid_argument);
    CHECK_THROWS_AS(interval_avg_per(m, 10.0, m.cutoff + 1.0, m.cutoff + 1.0),
                    std::invalid_argument);
}

TEST_CASE("full_avg_per limits and quadrature") {
    AmcMode m = mode_a100();

    SUBCASE("huge cutoff means always failing") {
        m.cutoff = 1e6;
        CHECK(full_avg_per(m, 10.0) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("zero cutoff with small amplitude") {
        m.fit_a = 0.7;
        m.cutoff = 0.0;
        CHECK(full_avg_per(m, 10.0) ==
              doctest::Approx(0.7 / (1.0 + 1.0 * 10.0)).epsilon(1e-12));
    }
    SUBCASE("generic parameters") {
        const double got = full_avg_per(m, 7.3);
        const double want = oracles::quad_full_avg_per(m, 7.3);
        CHECK(got == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("closed forms match quadrature on random parameter draws") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> umean(0.5, 30.0);
    std::uniform_real_distribution<double> uwid(0.1, 20.0);
    for (int trial = 0; trial < 100; ++trial) {
        const AmcMode m = oracles::random_mode(rng, 1 + trial % 4, 1.0);
        const double mean = umean(rng);

        const double full = full_avg_per(m, mean);
        CHECK(full == doctest::Approx(oracles::quad_full_avg_per(m, mean)).epsilon(1e-9));

        const double lo = m.cutoff + 0.01 * uwid(rng);
        const double hi = trial % 3 == 0 ? kInf : lo + uwid(rng);
        const double avg = interval_avg_per(m, mean, lo, hi);
        CHECK(avg == doctest::Approx(oracles::quad_interval_avg_per(m, mean, lo, hi)).epsilon(1e-9));
    }
}

TEST_CASE("derive_topology") {
    const LinkSnrs a = derive_topology({10.0, 0.2, 4.0});
    CHECK(a.mean_sd == doctest::Approx(10.0));
    CHECK(a.mean_rd == doctest::Approx(10.0 * std::pow(0.8, -4.0)).epsilon(1e-14));
    CHECK(a.mean_rd == doctest::Approx(24.4140625).epsilon(1e-12));
    CHECK(a.snr_sr == doctest::Approx(6250.0).epsilon(1e-12));

    const LinkSnrs b = derive_topology({5.0, 0.0, 4.0});
    CHECK(b.mean_sd == 5.0);
    CHECK(b.mean_rd == 5.0);
    CHECK(std::isinf(b.snr_sr));

    const LinkSnrs c = derive_topology({1.0, 0.5, 2.0});
    CHECK(c.mean_rd == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(c.snr_sr == doctest::Approx(4.0).epsilon(1e-14));

    CHECK_THROWS_AS(derive_topology({-1.0, 0.2, 4.0}), std::invalid_argument);
    CHECK_THROWS_AS(derive_topology({1.0, 1.0, 4.0}), std::invalid_argument);
}

TEST_CASE("sr_packet_error") {
    const AmcMode m = mode_a100();
    CHECK(sr_packet_error(m, kInf) == 0.0);
    CHECK(sr_packet_error(m, 0.5 * m.cutoff) == 1.0);
    CHECK(sr_packet_error(m, std::log(1000.0)) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("SnrStream determinism and distribution") {
    SnrStream s1(42, 7);
    SnrStream s2(42, 7);
    for (int i = 0; i < 1000; ++i) {
        CHECK(s1.draw(3.0) == s2.draw(3.0));
    }

    SnrStream s(99, 0);
    const double mean = 2.5;
    const std::uint64_t n = 1000000;
    double sum = 0.0;
    std::uint64_t below_mean = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double x = s.draw(mean);
        sum += x;
        if (x <= mean) ++below_mean;
    }
    CHECK(sum / static_cast<double>(n) == doctest::Approx(mean).epsilon(0.01));

    // Empirical CDF at the mean, three binomial sigmas.
    const double p = 1.0 - std::exp(-1.0);
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    CHECK(std::abs(static_cast<double>(below_mean) / static_cast<double>(n) - p) <= 3.0 * sigma);
}

TEST_CASE("law of total expectation across a design partition") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> umean(1.0, 25.0);
    for (int trial = 0; trial < 10; ++trial) {
        const ModeTable table = oracles::random_table(rng, 4);
        const double mean = umean(rng);
        const LinkDesign d = design_link(table, mean, 0.03);

        double total = d.outage_prob();  // PER = 1 below the first threshold
        for (int n = 1; n <= d.n_modes(); ++n) {
            total += d.avg_per(n) * d.prob(n);
        }

        // Independent route: quadrature of the piecewise PER against the density.
        const auto density = oracles::expo_density(mean);
        const auto mode_at = [&](double snr) -> int {
            int m = 0;
            for (int k = 1; k <= d.n_modes(); ++k) {
                if (snr >= d.thresholds[static_cast<size_t>(k - 1)]) m = k;
            }
            return m;
        };
        const auto integrand = [&](double snr) {
            const int m = mode_at(snr);
            const double per = m == 0 ? 1.0 : per_instant(table.mode(m), snr);
            return per * density(snr);
        };
        double quad = 0.0;
        double prev = 0.0;
        for (int k = 0; k < d.n_modes(); ++k) {
            quad += oracles::integrate(integrand, prev, d.thresholds[static_cast<size_t>(k)]);
            prev = d.thresholds[static_cast<size_t>(k)];
        }
        quad += oracles::integrate_to_inf(integrand, prev, mean);

        CHECK(total == doctest::Approx(quad).epsilon(1e-9));
    }
}
