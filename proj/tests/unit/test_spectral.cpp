#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "nonmarkov/error.hpp"
#include "nonmarkov/quadrature.hpp"
#include "nonmarkov/spectral.hpp"

using namespace nonmarkov;
using namespace nonmarkov::spectral;
using cplx = std::complex<double>;

namespace {

// g(τ) = η²ξ₀ e^{−iω₀τ} J₁(2ξ₀τ)/τ for the semicircular band.
cplx waveguide_g_bessel(double eta, double omega0, double xi0, double tau) {
    const double radial = tau == 0.0 ? xi0 : std::cyl_bessel_j(1.0, 2.0 * xi0 * tau) / tau;
    return eta * eta * xi0 * radial * std::polar(1.0, -omega0 * tau);
}

// g(τ) = κ ω_c^{1−p} Γ(p+1) / (1/ω_c + iτ)^{p+1} for the Ohmic family.
cplx ohmic_g_closed(double kappa, double wc, double p, double tau) {
    return kappa * std::pow(wc, 1.0 - p) * std::tgamma(p + 1.0) / std::pow(cplx(1.0 / wc, tau), p + 1.0);
}

} // namespace

TEST_CASE("waveguide spectral density") {
    const SpectralModel m(Waveguide{2.0, 10.0, 1.0});
    CHECK(m.J(10.0) == doctest::Approx(8.0));
    CHECK(m.J(12.0) == 0.0);
    CHECK(m.J(7.9) == 0.0);
    CHECK(m.J(10.0 + std::sqrt(3.0)) == doctest::Approx(4.0));
    CHECK(m.support().lower == 8.0);
    CHECK(m.support().upper == 12.0);
    CHECK_FALSE(m.vanishes());
    CHECK(SpectralModel(Waveguide{0.0, 10.0, 1.0}).vanishes());
}

TEST_CASE("invalid parameters are domain errors") {
    auto kind_of = [](auto&& make) {
        try {
            make();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::Io;
    };
    CHECK(kind_of([] { SpectralModel(Waveguide{1.0, 10.0, -1.0}); }) == ErrorKind::Domain);
    CHECK(kind_of([] { SpectralModel(OhmicFamily{1.0, 0.0, 1.0}); }) == ErrorKind::Domain);
    CHECK(kind_of([] { SpectralModel(Tabulated{{1.0, 0.5}, {0.0, 1.0}}); }) == ErrorKind::Domain);
    CHECK(kind_of([] { SpectralModel(Tabulated{{0.0, 1.0}, {0.0, -1.0}}); }) == ErrorKind::Domain);
}

TEST_CASE("waveguide g matches the Bessel closed form") {
    const double eta = 1.0, w0 = 10.0, xi0 = 1.0;
    const SpectralModel m(Waveguide{eta, w0, xi0});
    double worst = 0.0;
    for (int i = 0; i <= 500; ++i) {
        const double tau = 0.1 * i;
        worst = std::max(worst, std::abs(eval_g(m, tau) - waveguide_g_bessel(eta, w0, xi0, tau)));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("ohmic g matches the gamma-function closed form") {
    for (double p : {0.5, 1.0, 3.0}) {
        const SpectralModel m(OhmicFamily{0.05, 2.0, p});
        for (double tau : {0.0, 0.3, 2.0, 10.0}) {
            const cplx ref = ohmic_g_closed(0.05, 2.0, p, tau);
            CHECK(std::abs(eval_g(m, tau) - ref) < 1e-9 * std::abs(ohmic_g_closed(0.05, 2.0, p, 0.0)));
        }
    }
}

TEST_CASE("kernels are Hermitian in the lag") {
    const SpectralModel m(Waveguide{1.3, 10.0, 1.0});
    const BathSpec bath(4.0);
    for (double tau : {0.2, 1.7, 9.0}) {
        CHECK(std::abs(eval_g(m, -tau) - std::conj(eval_g(m, tau))) < 1e-13);
        CHECK(std::abs(eval_gtilde(m, bath, -tau) - std::conj(eval_gtilde(m, bath, tau))) < 1e-13);
    }
}

TEST_CASE("weighted kernel is linear in the weight") {
    const SpectralModel m(Waveguide{0.8, 10.0, 1.0});
    for (double tau : {0.0, 0.5, 3.0}) {
        const cplx g = eval_g(m, tau);
        CHECK(std::abs(weighted_kernel(m, tau, [](double) { return 2.5; }) - 2.5 * g) < 1e-12);
        const cplx a = weighted_kernel(m, tau, [](double w) { return w; });
        const cplx b = weighted_kernel(m, tau, [](double w) { return w * w; });
        const cplx ab = weighted_kernel(m, tau, [](double w) { return 3.0 * w - w * w; });
        CHECK(std::abs(ab - (3.0 * a - b)) < 1e-10);
    }
}

TEST_CASE("zero temperature gives a vanishing noise kernel") {
    const SpectralModel m(Waveguide{1.0, 10.0, 1.0});
    CHECK(std::abs(eval_gtilde(m, BathSpec{}, 0.7)) == 0.0);
    CHECK(eval_nbar(BathSpec{}, 3.0) == 0.0);
}

TEST_CASE("thermal occupation") {
    const BathSpec bath(2.0);
    CHECK(eval_nbar(bath, 2.0) == doctest::Approx(1.0 / (std::exp(1.0) - 1.0)).epsilon(1e-14));
    const auto b = BathSpec::from_occupation(10.0, 0.5);
    CHECK(eval_nbar(b, 10.0) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK_THROWS_AS(eval_nbar(bath, 0.0), Error);
    CHECK_THROWS_AS(eval_nbar(bath, -1.0), Error);
}

TEST_CASE("thermal kernel at zero lag equals the occupation-weighted integral") {
    const SpectralModel m(Waveguide{1.0, 10.0, 1.0});
    const BathSpec bath(5.0);
    // independent GK quadrature in ω
    const double ref = quad::integrate(
        [&](double w) { return m.J(w) * eval_nbar(bath, w) / (2.0 * std::numbers::pi); }, 8.0, 12.0, 1e-14, 1e-13);
    CHECK(eval_gtilde(m, bath, 0.0).real() == doctest::Approx(ref).epsilon(1e-10));
    CHECK(std::abs(eval_gtilde(m, bath, 0.0).imag()) < 1e-14);
}

TEST_CASE("tabulated model interpolates linearly") {
    const SpectralModel m(Tabulated{{0.0, 1.0, 3.0}, {0.0, 2.0, 0.0}});
    CHECK(m.J(0.5) == doctest::Approx(1.0));
    CHECK(m.J(2.0) == doctest::Approx(1.0));
    CHECK(m.J(3.5) == 0.0);
    // g(0) = area/2π = (1·2/2 + 2·2/2)/2π
    CHECK(eval_g(m, 0.0).real() == doctest::Approx(3.0 / (2.0 * std::numbers::pi)).epsilon(1e-13));
}

TEST_CASE("kernel table carries the rotating-frame phase") {
    const SpectralModel m(Waveguide{1.0, 10.0, 1.0});
    const BathSpec bath(3.0);
    const auto table = tabulate_kernels(m, bath, 10.0, 0.05, 200);
    REQUIRE(table.size() == 201);
    for (std::size_t k : {0u, 7u, 80u, 200u}) {
        const double tau = 0.05 * static_cast<double>(k);
        const cplx phase = std::polar(1.0, 10.0 * tau);
        CHECK(std::abs(table.g[k] - eval_g(m, tau) * phase) < 1e-11);
        CHECK(std::abs(table.gtilde[k] - eval_gtilde(m, bath, tau) * phase) < 1e-11);
    }
}

TEST_CASE("exponential sums match direct evaluation") {
    const std::vector<double> f{0.3, -2.0, 7.5};
    const std::vector<double> a{1.0, 0.5, -0.25};
    const auto s = quad::exponential_sums(f, a, 0.01, 1000);
    for (std::size_t k : {0u, 63u, 64u, 65u, 999u, 1000u}) {
        cplx ref = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) ref += a[i] * std::polar(1.0, -f[i] * 0.01 * static_cast<double>(k));
        CHECK(std::abs(s[k] - ref) < 1e-13);
    }
}
