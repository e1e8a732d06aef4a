#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "pfm/errors.hpp"
#include "pfm/transfer.hpp"

using namespace pfm;

TEST(TransferS, Examples) {
    EXPECT_EQ(transfer_s(0.0), 0.0);
    EXPECT_EQ(transfer_s(-1.0), transfer_s(1.0));
    EXPECT_NEAR(transfer_s(1.0), 0.7615941559557649, 1e-15);
    EXPECT_LT(transfer_s(20.0), 1.0);
    EXPECT_LT(transfer_s(1e6), 1.0);
    EXPECT_NEAR(transfer_s(20.0), 1.0, 1e-12);
}

TEST(TransferS, MatchesExponentialForm) {
    for (double x = -6.0; x <= 6.0; x += 0.25) {
        const double e = std::exp(2.0 * std::fabs(x));
        EXPECT_NEAR(transfer_s(x), (e - 1.0) / (e + 1.0), 1e-14);
    }
}

TEST(TransferS, EvenBoundedAndMonotone) {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(gen);
        EXPECT_EQ(transfer_s(x), transfer_s(-x));
        EXPECT_GE(transfer_s(x), 0.0);
        EXPECT_LE(transfer_s(x), 1.0);
    }
    for (double x = 0.0; x < 8.0; x += 0.1) EXPECT_LT(transfer_s(x), transfer_s(x + 0.1));
}

TEST(Binarize, ZerosStayZero) {
    Rng rng(1);
    const std::vector<double> zeros(64, 0.0);
    for (int trial = 0; trial < 100; ++trial) {
        for (double bit : binarize(zeros, rng)) EXPECT_EQ(bit, 0.0);
    }
}

TEST(Binarize, LargeValuesAlmostAlwaysOne) {
    // P(any zero in 20 bits) <= 20 * (1 - tanh 10) ~ 8e-8 per trial.
    Rng rng(2);
    const std::vector<double> big(20, 10.0);
    int failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto bits = binarize(big, rng);
        for (double b : bits) {
            if (b != 1.0) {
                ++failures;
                break;
            }
        }
    }
    EXPECT_LT(failures / 1000.0, 1e-3);
}

TEST(Binarize, FrequencyTracksTransfer) {
    Rng rng(3);
    const std::vector<double> one{1.0};
    int ones = 0;
    for (int i = 0; i < 100000; ++i) ones += binarize(one, rng)[0] == 1.0 ? 1 : 0;
    EXPECT_NEAR(ones / 100000.0, 0.7616, 0.01);
}

TEST(Binarize, ConsumesOneDrawPerCoordinate) {
    Rng rng(4), reference(4);
    binarize(std::vector<double>(7, 0.3), rng);
    for (int i = 0; i < 7; ++i) reference.next();
    EXPECT_EQ(rng.next(), reference.next());
}

TEST(Binarize, RejectsNonFinite) {
    Rng rng(5);
    EXPECT_THROW(binarize(std::vector<double>{0.1, std::numeric_limits<double>::infinity()}, rng),
                 EvaluationError);
    EXPECT_THROW(binarize(std::vector<double>{std::nan("")}, rng), EvaluationError);
}
