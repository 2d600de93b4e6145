#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "lfiqa/lf.hpp"

using namespace lfiqa;

namespace {
SimilarityScore sim(double v) { return {v, MetricKind::ssim()}; }
} // namespace

TEST_CASE("eq1 values") {
    // paper probes (Tables 2a/2c rows)
    CHECK(lf_value(0.99915, LfVariant::Eq1) == doctest::Approx(0.970845).epsilon(1e-6));
    CHECK(lf_value(0.809075, LfVariant::Eq1) == doctest::Approx(0.56305034).epsilon(1e-6));
    // 1 - sqrt(0.25)
    CHECK(lf_value(0.75, LfVariant::Eq1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("endpoints are fixed exactly for all variants") {
    for (LfVariant v : {LfVariant::Eq1, LfVariant::Eq2, LfVariant::Eq3}) {
        CHECK(lf_value(0.0, v) == 0.0);
        CHECK(lf_value(1.0, v) == 1.0);
    }
}

TEST_CASE("eq2 and eq3 values") {
    CHECK(lf_value(0.6, LfVariant::Eq2) == doctest::Approx(0.2).epsilon(1e-12));
    // 1 - 0.64^(1/3), evaluated directly
    CHECK(lf_value(0.6, LfVariant::Eq3) == doctest::Approx(1.0 - std::cbrt(0.64)).epsilon(1e-12));
    CHECK(lf_value(0.6, LfVariant::Eq3) == doctest::Approx(0.138226).epsilon(1e-5));
}

TEST_CASE("lf rejects out-of-range input") {
    CHECK_THROWS_AS(lf_value(-0.01, LfVariant::Eq1), Error);
    CHECK_THROWS_AS(lf_value(1.01, LfVariant::Eq1), Error);
    CHECK_THROWS_AS(lf_value(std::nan(""), LfVariant::Eq1), Error);
}

TEST_CASE("lf_map carries provenance") {
    LfScore s = lf_map(sim(0.75), LfVariant::Eq1);
    CHECK(s.value == doctest::Approx(0.5));
    CHECK(s.mode == LfMode::Final);
    CHECK(s.variant == LfVariant::Eq1);
    CHECK(s.source_kind.label == "ssim");
}

TEST_CASE("per-window pooling") {
    std::vector<double> ones(24, 1.0);
    CHECK(lf_per_window(ones, LfVariant::Eq1, MetricKind::ssim()).value == 1.0);

    std::vector<double> flat{0.75, 0.75};
    CHECK(lf_per_window(flat, LfVariant::Eq1, MetricKind::ssim()).value ==
          doctest::Approx(0.5).epsilon(1e-12));

    // mean(1-sqrt(0.5), 1) = 0.646447..., strictly above lf(mean) = lf(0.75) = 0.5
    std::vector<double> mixed{0.5, 1.0};
    double pw = lf_per_window(mixed, LfVariant::Eq1, MetricKind::ssim()).value;
    CHECK(pw == doctest::Approx(0.6464466094).epsilon(1e-9));
    CHECK(pw > lf_value(0.75, LfVariant::Eq1));

    // raw SSIM windows may dip below 0; they are clamped before mapping
    std::vector<double> negative{-0.2, 1.0};
    CHECK(lf_per_window(negative, LfVariant::Eq1, MetricKind::ssim()).value ==
          doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(lf_per_window(std::vector<double>{}, LfVariant::Eq1, MetricKind::ssim()),
                    Error);
    LfScore s = lf_per_window(mixed, LfVariant::Eq1, MetricKind::ssim());
    CHECK(s.mode == LfMode::PerWindow);
}

TEST_CASE("strict monotonicity preserves rank order") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (LfVariant v : {LfVariant::Eq1, LfVariant::Eq2, LfVariant::Eq3}) {
        for (int i = 0; i < 200; ++i) {
            double a = u(rng), b = u(rng);
            if (a == b)
                continue;
            if (a > b)
                std::swap(a, b);
            CHECK(lf_value(a, v) < lf_value(b, v));
        }
    }

    // consequent: sorting by raw and by LF gives the same permutation
    std::vector<double> scores(50);
    for (double& s : scores)
        s = u(rng);
    std::vector<size_t> by_raw(scores.size()), by_lf(scores.size());
    for (size_t i = 0; i < scores.size(); ++i)
        by_raw[i] = by_lf[i] = i;
    std::sort(by_raw.begin(), by_raw.end(),
              [&](size_t i, size_t j) { return scores[i] < scores[j]; });
    std::sort(by_lf.begin(), by_lf.end(), [&](size_t i, size_t j) {
        return lf_value(scores[i], LfVariant::Eq1) < lf_value(scores[j], LfVariant::Eq1);
    });
    CHECK(by_raw == by_lf);
}

TEST_CASE("eq1 contracts below identity and expands the high end") {
    std::mt19937 rng(55);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        double s = u(rng);
        CHECK(lf_value(s, LfVariant::Eq1) <= s + 1e-15);
    }
    // slope above 1 for pairs in [0.75, 1]
    std::uniform_real_distribution<double> hi(0.75, 1.0);
    for (int i = 0; i < 200; ++i) {
        double a = hi(rng), b = hi(rng);
        if (a == b)
            continue;
        if (a > b)
            std::swap(a, b);
        double slope = (lf_value(b, LfVariant::Eq1) - lf_value(a, LfVariant::Eq1)) / (b - a);
        CHECK(slope > 1.0);
    }
}

TEST_CASE("per-window never falls below the pooled mapping for eq1") {
    std::mt19937 rng(808);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> windows(1 + rng() % 64);
        double mean = 0.0;
        for (double& w : windows) {
            w = u(rng);
            mean += w;
        }
        mean /= double(windows.size());
        double pw = lf_per_window(windows, LfVariant::Eq1, MetricKind::ssim()).value;
        CHECK(pw >= lf_value(mean, LfVariant::Eq1) - 1e-12);
    }
}

TEST_CASE("variant names round-trip") {
    CHECK(parse_lf_variant("eq1") == LfVariant::Eq1);
    CHECK(parse_lf_variant("eq2") == LfVariant::Eq2);
    CHECK(parse_lf_variant("eq3") == LfVariant::Eq3);
    CHECK(!parse_lf_variant("eq4"));
    CHECK(to_string(LfVariant::Eq2) == "eq2");
}
