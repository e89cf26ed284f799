// quadrature.cpp: Gauss–Legendre panel rules and adaptive quadrature wrappers

#include "nonmarkov/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nonmarkov/error.hpp"

namespace nonmarkov::quad {

namespace {

constexpr unsigned kGaussPoints = 20;
constexpr std::size_t kMaxPanels = 4000;

using Gauss = boost::math::quadrature::gauss<double, kGaussPoints>;
using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;

void append_panel(Rule& rule, double a, double b) {
    const auto& x = Gauss::abscissa();
    const auto& w = Gauss::weights();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    // boost stores the non-negative half; 20 points is even so no zero node
    for (std::size_t i = x.size(); i-- > 0;) {
        rule.node.push_back(mid - half * x[i]);
        rule.weight.push_back(half * w[i]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        rule.node.push_back(mid + half * x[i]);
        rule.weight.push_back(half * w[i]);
    }
}

template <class T>
struct Panel {
    double a, b;
    T value;
    double err, l1;
};

template <class T, class F>
Panel<T> make_panel(const F& f, double a, double b) {
    double err = 0.0, l1 = 0.0;
    const T value = Kronrod::integrate(f, a, b, 0, 0.0, &err, &l1);
    // boost 1.74 leaves the non-adaptive error estimate unscaled by the half-width
    return {a, b, value, err * 0.5 * (b - a), l1};
}

// Global adaptive bisection on 7-15 Gauss–Kronrod panels, always splitting the
// panel with the largest error estimate.
template <class T, class F>
bool adaptive(const F& f, double a, double b, double abs_tol, double rel_tol, T& value, double& err) {
    auto by_error = [](const Panel<T>& x, const Panel<T>& y) { return x.err < y.err; };
    std::vector<Panel<T>> heap{make_panel<T>(f, a, b)};
    value = heap[0].value;
    err = heap[0].err;
    double l1 = heap[0].l1;
    while (heap.size() < kMaxPanels && std::isfinite(std::abs(value)) && err > std::max(abs_tol, rel_tol * l1)) {
        std::pop_heap(heap.begin(), heap.end(), by_error);
        const Panel<T> worst = heap.back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // at floating-point resolution
        const auto lo = make_panel<T>(f, worst.a, mid);
        const auto hi = make_panel<T>(f, mid, worst.b);
        value += lo.value + hi.value - worst.value;
        err += lo.err + hi.err - worst.err;
        l1 += lo.l1 + hi.l1 - worst.l1;
        heap.back() = lo;
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back(hi);
        std::push_heap(heap.begin(), heap.end(), by_error);
    }
    // re-sum so the running updates leave no round-off behind
    value = T{};
    err = 0.0;
    l1 = 0.0;
    for (const auto& p : heap) {
        value += p.value;
        err += p.err;
        l1 += p.l1;
    }
    return std::isfinite(std::abs(value)) && err <= std::max(abs_tol, 100.0 * rel_tol * l1);
}

[[noreturn]] void fail(double a, double b, double err, double value) {
    std::ostringstream os;
    os << "adaptive quadrature on [" << a << ", " << b << "] did not converge: estimate "
       << value << ", error bound " << err;
    throw Error(ErrorKind::Numerical, os.str());
}

} // namespace

Rule composite_gauss_legendre(double a, double b, std::size_t panels) {
    Rule rule;
    if (panels == 0 || !(b > a)) return rule;
    rule.node.reserve(panels * kGaussPoints);
    rule.weight.reserve(panels * kGaussPoints);
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + h * static_cast<double>(p);
        const double hi = (p + 1 == panels) ? b : lo + h;
        append_panel(rule, lo, hi);
    }
    return rule;
}

Rule composite_gauss_legendre(const std::vector<double>& breakpoints) {
    Rule rule;
    for (std::size_t p = 1; p < breakpoints.size(); ++p) {
        if (breakpoints[p] > breakpoints[p - 1]) append_panel(rule, breakpoints[p - 1], breakpoints[p]);
    }
    return rule;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, double rel_tol) {
    if (a == b) return 0.0;
    double value = 0.0, err = 0.0;
    if (!adaptive(f, a, b, abs_tol, rel_tol, value, err)) fail(a, b, err, value);
    return value;
}

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f,
                                       double a, double b, double abs_tol, double rel_tol) {
    if (a == b) return {0.0, 0.0};
    std::complex<double> value;
    double err = 0.0;
    if (!adaptive(f, a, b, abs_tol, rel_tol, value, err)) fail(a, b, err, std::abs(value));
    return value;
}

std::vector<std::complex<double>> exponential_sums(const std::vector<double>& frequency,
                                                   const std::vector<double>& amplitude,
                                                   double dt, std::size_t steps) {
    constexpr std::size_t kReseed = 64;
    const std::size_t m = frequency.size();
    std::vector<std::complex<double>> out(steps + 1);
    std::vector<std::complex<double>> phase(m), step(m);
    for (std::size_t i = 0; i < m; ++i) step[i] = std::polar(1.0, -frequency[i] * dt);
    for (std::size_t k = 0; k <= steps; ++k) {
        if (k % kReseed == 0) {
            const double t = dt * static_cast<double>(k);
            for (std::size_t i = 0; i < m; ++i) phase[i] = std::polar(1.0, -frequency[i] * t);
        }
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t i = 0; i < m; ++i) {
            acc += amplitude[i] * phase[i];
            phase[i] *= step[i];
        }
        out[k] = acc;
    }
    return out;
}

} // namespace nonmarkov::quad
