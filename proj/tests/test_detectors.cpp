#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "coopdstc/detectors.hpp"
#include "oracles.hpp"

using namespace coopdstc;

TEST_CASE("rake weights equal the target signature")
{
    CVec h(2);
    h << cd(1, 0), cd(0, 0);
    CHECK(rake_filter(h).weights == h);
    h << cd(0.6, 0), cd(0, 0.8);
    const auto w = rake_filter(h);
    CHECK(w.weights == h);
    CHECK(w.kind == DetectorKind::Rake);

    std::mt19937 gen(1);
    for (int i = 0; i < 50; ++i) {
        const CVec v = oracle::random_vector(gen, 16);
        const cd out = detect(rake_filter(v), v);
        CHECK(std::abs(out.imag()) < 1e-12);
        CHECK(out.real() == doctest::Approx(v.squaredNorm()).epsilon(1e-12));
    }
}

TEST_CASE("single-user mmse matches the rank-one closed form")
{
    std::mt19937 gen(2);
    for (int i = 0; i < 100; ++i) {
        const std::vector<CVec> sigs{oracle::random_vector(gen, 16)};
        const double noise = 0.01 + 2.0 * std::uniform_real_distribution<double>(0.0, 1.0)(gen);
        const CVec w = mmse_filter(sigs, 0, noise).weights;
        const CVec closed = sigs[0] / (sigs[0].squaredNorm() + noise);
        CHECK((w - closed).norm() <= 1e-10 * closed.norm());
        CHECK((oracle::mmse_by_inverse(sigs, 0, noise) - closed).norm() <= 1e-10 * closed.norm());
    }

    CVec unit = CVec::Zero(4);
    unit(2) = cd(0.0, 1.0);
    const std::vector<CVec> one{unit};
    CHECK((mmse_filter(one, 0, 1.0).weights - unit / 2.0).norm() < 1e-14);
}

TEST_CASE("multi-user mmse solves the regularized normal equations")
{
    std::mt19937 gen(3);
    for (int i = 0; i < 100; ++i) {
        std::vector<CVec> sigs;
        for (int k = 0; k < 3; ++k) {
            sigs.push_back(oracle::random_vector(gen, 16, 0.25));
        }
        const double noise = 0.05;
        const auto all = mmse_filters(sigs, noise);
        CMat r = noise * CMat::Identity(16, 16);
        for (const auto& h : sigs) {
            r += h * h.adjoint();
        }
        for (std::size_t k = 0; k < sigs.size(); ++k) {
            const CVec w = mmse_filter(sigs, k, noise).weights;
            CHECK((r * w - sigs[k]).norm() <= 1e-10 * sigs[k].norm());
            CHECK((all[k].weights - w).norm() <= 1e-12 * w.norm());
            const CVec ref = oracle::mmse_by_inverse(sigs, k, noise);
            CHECK((ref - w).norm() <= 1e-10 * ref.norm());
        }
    }
}

TEST_CASE("mmse approaches a scaled matched filter at very high noise")
{
    std::mt19937 gen(4);
    std::vector<CVec> sigs;
    for (int k = 0; k < 3; ++k) {
        sigs.push_back(oracle::random_vector(gen, 16));
    }
    const double noise = 1e6;
    for (std::size_t k = 0; k < sigs.size(); ++k) {
        const CVec w = mmse_filter(sigs, k, noise).weights;
        const CVec approx = sigs[k] / noise;
        CHECK((w - approx).norm() <= 1e-3 * approx.norm());
    }
}

TEST_CASE("mmse rejects non-positive noise and ragged input")
{
    const std::vector<CVec> sigs{CVec::Ones(4)};
    CHECK_THROWS_AS(mmse_filter(sigs, 0, 0.0), ParameterError);
    CHECK_THROWS_AS(mmse_filter(sigs, 0, -1.0), ParameterError);
    CHECK_THROWS_AS(mmse_filter(sigs, 1, 1.0), InputError);
    const std::vector<CVec> ragged{CVec::Ones(4), CVec::Ones(3)};
    CHECK_THROWS_AS(mmse_filters(ragged, 1.0), InputError);
}

TEST_CASE("detect is the conjugated inner product")
{
    CVec h(3);
    h << cd(1, 2), cd(-0.5, 0.25), cd(0, 1);
    const auto w = rake_filter(h);
    CHECK(std::abs(detect(w, h) - cd(h.squaredNorm(), 0)) < 1e-15);
    CHECK(std::abs(detect(w, -h) - cd(-h.squaredNorm(), 0)) < 1e-15);

    CVec a(2), b(2);
    a << cd(1, 0), cd(0, 1);
    b << cd(0, 1), cd(1, 0);
    CHECK(std::abs(detect(rake_filter(a), b)) < 1e-15);
    CHECK_THROWS_AS(detect(w, CVec::Zero(2)), InputError);
}

TEST_CASE("slicer decides on the sign of the real part")
{
    CHECK(slice(cd(0.3, -2.0)) == 1);
    CHECK(slice(cd(-0.01, 0.0)) == -1);
    CHECK(slice(cd(0.0, 0.0)) == 1);
    CHECK(slice(cd(0.0, -5.0)) == 1);
}
