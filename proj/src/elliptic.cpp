// Copyright 2026 The hcft Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hcft/elliptic.hpp"

#include <array>
#include <boost/math/tools/toms748_solve.hpp>
#include <cfloat>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hcft {

namespace {

constexpr double kPi = std::numbers::pi;
// Below this complement the first-order hyperbolic expansion is exact to
// double precision.
constexpr double kNearOne = 1e-9;

void check_parameter(EllipticParameter p) {
    if (!(p.m >= 0.0) || !(p.m1 > 0.0) || !std::isfinite(p.m) || !std::isfinite(p.m1)) {
        throw std::domain_error("elliptic parameter outside [0, 1)");
    }
}

// |u| <= K/2 keeps cn and dn away from zero.
JacobiValues jacobi_core(double u, EllipticParameter p) {
    if (p.m1 < kNearOne) {
        double ch = std::cosh(u), sh = std::sinh(u), th = std::tanh(u);
        double sech = 1.0 / ch;
        double q = 0.25 * p.m1 * (sh * ch - u);
        double r = 0.25 * p.m1 * (sh * ch + u);
        return {th + q * sech * sech, sech - q * th * sech, sech + r * th * sech};
    }
    if (p.m == 0.0) return {std::sin(u), std::cos(u), 1.0};

    std::array<double, 64> a{}, c{};
    a[0] = 1.0;
    double b = std::sqrt(p.m1);
    c[0] = std::sqrt(p.m);
    size_t n = 0;
    while (std::abs(c[n]) > DBL_EPSILON * a[n] && n + 1 < a.size()) {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = std::sqrt(a[n] * b);
        n++;
    }
    double phi = std::ldexp(a[n] * u, static_cast<int>(n));
    double phi_next = phi;
    for (size_t k = n; k > 0; k--) {
        phi_next = phi;
        phi = 0.5 * (phi + std::asin(c[k] / a[k] * std::sin(phi)));
    }
    double sn = std::sin(phi), cn = std::cos(phi);
    double dn = n == 0 ? 1.0 : cn / std::cos(phi_next - phi);
    return {sn, cn, dn};
}

}  // namespace

EllipticParameter EllipticParameter::from_m(double m) {
    EllipticParameter p{m, 1.0 - m};
    check_parameter(p);
    return p;
}

EllipticParameter EllipticParameter::from_complement(double m1) {
    EllipticParameter p{1.0 - m1, m1};
    check_parameter(p);
    return p;
}

double agm(double a, double b) {
    for (int k = 0; k < 64 && std::abs(a - b) > 2 * DBL_EPSILON * a; k++) {
        double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return 0.5 * (a + b);
}

double ellint_K(double m) { return ellint_K(EllipticParameter::from_m(m)); }

double ellint_K(EllipticParameter p) {
    check_parameter(p);
    return kPi / (2.0 * agm(1.0, std::sqrt(p.m1)));
}

JacobiValues jacobi(double u, EllipticParameter p) {
    check_parameter(p);
    double K = ellint_K(p);
    // reduce to (-2K, 2K], then fold onto [-K, K]
    double r = std::remainder(u, 4.0 * K);
    double cn_sign = 1.0;
    if (std::abs(r) > K) {
        r = std::copysign(2.0 * K, r) - r;
        cn_sign = -1.0;
    }
    double sign = r < 0 ? -1.0 : 1.0;
    double t = std::abs(r);
    JacobiValues out;
    if (t > 0.5 * K) {
        // sn(K - v) = cn(v)/dn(v), cn(K - v) = sqrt(m1) sn(v)/dn(v), dn(K - v) = sqrt(m1)/dn(v)
        JacobiValues v = jacobi_core(K - t, p);
        double s1 = std::sqrt(p.m1);
        out = {v.cn / v.dn, s1 * v.sn / v.dn, s1 / v.dn};
    } else {
        out = jacobi_core(t, p);
    }
    out.sn *= sign;
    out.cn *= cn_sign;
    return out;
}

double jacobi_sn(double u, double m) { return jacobi(u, EllipticParameter::from_m(m)).sn; }

double tau_of(EllipticParameter p) {
    check_parameter(p);
    return agm(1.0, std::sqrt(p.m1)) / (2.0 * agm(1.0, std::sqrt(p.m)));
}

SolvedParameter solve_m(double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw std::domain_error("aspect ratio must be positive");

    // Solve in s = ln(small parameter): s = ln(1-m) for tau < 1/2, ln(m) otherwise.
    bool small_tau = tau < 0.5;
    auto param = [&](double s) {
        double e = std::exp(s);
        return small_tau ? EllipticParameter{1.0 - e, e} : EllipticParameter{e, 1.0 - e};
    };
    auto f = [&](double s) { return tau_of(param(s)) - tau; };

    const double s_max = std::log(0.5);
    const double s_min = std::log(DBL_MIN);
    double seed = small_tau ? std::log(16.0) - kPi / (2.0 * tau) : std::log(16.0) - 2.0 * kPi * tau;

    SolvedParameter out;
    double s;
    if (f(s_max) == 0.0) {
        s = s_max;
    } else {
        double hi = std::clamp(seed + 1.0, s_min + 1.0, s_max);
        double lo = std::max(std::min(seed - 1.0, hi - 1.0), s_min);
        while (lo > s_min && f(lo) * f(hi) > 0) {
            hi = lo;
            lo = std::max(lo - 4.0, s_min);
        }
        while (hi < s_max && f(lo) * f(hi) > 0) {
            lo = hi;
            hi = std::min(hi + 4.0, s_max);
        }
        if (f(lo) * f(hi) > 0) {
            // tau beyond what a double parameter can express
            s = std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi;
            out.precision_warning = true;
        } else {
            std::uintmax_t iters = 200;
            auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
            s = 0.5 * (r.first + r.second);
        }
    }
    out.param = param(s);
    out.K = ellint_K(out.param);
    out.K1 = ellint_K(out.param.complement());
    if (tau < kTauPrecisionFloor) out.precision_warning = true;
    return out;
}

}  // namespace hcft
