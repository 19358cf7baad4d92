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

#include <gtest/gtest.h>

#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "hcft/conformal.hpp"
#include "hcft/errors.hpp"

using namespace hcft;

namespace {

constexpr double kPi = std::numbers::pi;

// The integrand of K is smooth and periodic in theta, so the trapezoid rule
// converges geometrically.
double K_trapezoid(double m, int n = 400) {
    double h = kPi / n, s = 0;
    for (int i = 0; i < n; i++) {
        double th = i * h;
        s += 1.0 / std::sqrt(1.0 - m * std::sin(th) * std::sin(th));
    }
    return 0.5 * s * h;
}

// m(tau) from the theta-function nome: m = theta2^4/theta3^4 at
// q = exp(-2 pi tau), and the complement 1 - m likewise at q' = exp(-pi/(2 tau)).
double theta2(double q) {
    double s = 0;
    for (int n = 0; n < 40; n++) s += std::pow(q, (n + 0.5) * (n + 0.5));
    return 2 * s;
}
double theta3(double q) {
    double s = 1;
    for (int n = 1; n < 40; n++) s += 2 * std::pow(q, n * n);
    return s;
}
double small_parameter_from_nome(double q) { return std::pow(theta2(q) / theta3(q), 4); }

struct Complex3 {
    Complex sn, cn, dn;
};

// Jacobi functions at x + iy from real-argument values (addition theorem),
// evaluated with Boost in extended precision. dn is rebuilt from sn.
Complex3 jacobi_complex(double x, double y, double m) {
    using LD = long double;
    LD mm = m, k = std::sqrt(mm), k1 = std::sqrt(1 - mm);
    LD c, d, c1, d1;
    LD s = boost::math::jacobi_elliptic(k, static_cast<LD>(x), &c, &d);
    LD s1 = boost::math::jacobi_elliptic(k1, static_cast<LD>(y), &c1, &d1);
    d = std::sqrt(1 - mm * s * s);
    d1 = std::sqrt(1 - (1 - mm) * s1 * s1);
    LD den = c1 * c1 + mm * s * s * s1 * s1;
    auto cx = [&](LD re, LD im) { return Complex(static_cast<double>(re / den), static_cast<double>(im / den)); };
    return {cx(s * d1, c * d * s1 * c1), cx(c * c1, -s * d * s1 * d1), cx(d * c1 * d1, -mm * s * c * s1)};
}

}  // namespace

TEST(Elliptic, complete_integral) {
    EXPECT_DOUBLE_EQ(ellint_K(0.0), kPi / 2);
    EXPECT_NEAR(ellint_K(0.5), K_trapezoid(0.5), 1e-12 * K_trapezoid(0.5));
    for (double m : {0.01, 0.2, 0.5, 0.7, 0.9, 0.99}) {
        double ref = K_trapezoid(m, 4000);
        EXPECT_NEAR(ellint_K(m), ref, 1e-13 * ref) << m;
        EXPECT_NEAR(ellint_K(m), boost::math::ellint_1(std::sqrt(m)), 1e-13 * ref) << m;
    }
    auto half = EllipticParameter::from_m(0.5);
    EXPECT_EQ(ellint_K(half), ellint_K(half.complement()));
    // near m = 1 only the complement is meaningful: K ~ ln(4/sqrt(m1))
    auto p = EllipticParameter::from_complement(1e-30);
    EXPECT_NEAR(ellint_K(p), std::log(4.0 / std::sqrt(1e-30)), 1e-12);
    EXPECT_THROW(ellint_K(1.0), std::domain_error);
    EXPECT_THROW(ellint_K(1.5), std::domain_error);
    EXPECT_THROW(ellint_K(-0.1), std::domain_error);
}

TEST(Elliptic, jacobi_special_values) {
    for (double m : {0.0, 0.1, 0.5, 0.9, 0.999999}) {
        EXPECT_EQ(jacobi_sn(0.0, m), 0.0);
        EXPECT_NEAR(jacobi_sn(ellint_K(m), m), 1.0, 1e-14);
    }
    for (double u : {0.3, 1.0, 1.5}) EXPECT_NEAR(jacobi_sn(u, 0.0), std::sin(u), 1e-15);
}

TEST(Elliptic, jacobi_matches_boost) {
    // Boost in extended precision; dn from sn since Boost's dn degrades
    // next to the zeros of cn.
    for (double m : {1e-12, 1e-6, 0.05, 0.3, 0.5, 0.8, 0.95, 0.999, 0.999999}) {
        auto p = EllipticParameter::from_m(m);
        double K = ellint_K(p);
        long double k = std::sqrt(static_cast<long double>(m));
        for (int i = -40; i <= 40; i++) {
            double u = 2 * K * i / 40.0;
            long double cn, dn;
            long double sn = boost::math::jacobi_elliptic(k, static_cast<long double>(u), &cn, &dn);
            dn = std::sqrt(1.0L - k * k * sn * sn);
            JacobiValues j = jacobi(u, p);
            EXPECT_NEAR(j.sn, static_cast<double>(sn), 1e-12) << m << " " << u;
            EXPECT_NEAR(j.cn, static_cast<double>(cn), 1e-12) << m << " " << u;
            EXPECT_NEAR(j.dn, static_cast<double>(dn), 1e-12) << m << " " << u;
        }
    }
}

TEST(Elliptic, jacobi_near_unit_parameter) {
    for (double m1 : {1e-6, 1e-8, 1e-9, 1e-10, 1e-12}) {
        auto p = EllipticParameter::from_complement(m1);
        long double k = std::sqrt(1.0L - static_cast<long double>(m1));
        for (double u : {0.1, 1.0, 3.0, 6.0}) {
            long double cn, dn;
            long double sn = boost::math::jacobi_elliptic(k, static_cast<long double>(u), &cn, &dn);
            JacobiValues j = jacobi(u, p);
            EXPECT_NEAR(j.sn, static_cast<double>(sn), 1e-12) << m1 << " " << u;
            EXPECT_NEAR(j.cn, static_cast<double>(cn), 1e-12) << m1 << " " << u;
            EXPECT_NEAR(j.dn, static_cast<double>(dn), 1e-12) << m1 << " " << u;
        }
    }
}

TEST(Elliptic, jacobi_identities) {
    for (double m1 : {1e-20, 1e-10, 1e-4, 0.1, 0.5, 0.9, 0.999, 1.0}) {
        auto p = EllipticParameter::from_complement(m1);
        double K = ellint_K(p);
        for (int i = 0; i <= 50; i++) {
            double u = -2 * K + 4 * K * i / 50.0;
            JacobiValues j = jacobi(u, p);
            EXPECT_NEAR(j.sn * j.sn + j.cn * j.cn, 1.0, 1e-11);
            EXPECT_NEAR(j.dn * j.dn + p.m * j.sn * j.sn, 1.0, 1e-11);
        }
    }
}

TEST(Elliptic, solve_m_against_theta_nome) {
    auto half = solve_m(0.5);
    EXPECT_NEAR(half.param.m, 0.5, 1e-15);
    for (double tau : {0.03, 0.05, 0.1, 0.2, 0.35, 0.5, 0.7, 1.0, 2.0, 3.0, 5.0, 10.0}) {
        SolvedParameter s = solve_m(tau);
        EXPECT_NEAR(s.K1 / (2 * s.K), tau, 1e-12 * std::max(1.0, tau)) << tau;
        if (tau < 0.5) {
            double ref = small_parameter_from_nome(std::exp(-kPi / (2 * tau)));
            EXPECT_NEAR(s.param.m1, ref, 1e-10 * ref) << tau;
        } else {
            double ref = small_parameter_from_nome(std::exp(-2 * kPi * tau));
            EXPECT_NEAR(s.param.m, ref, 1e-10 * ref) << tau;
        }
        EXPECT_EQ(s.precision_warning, tau < 0.03);
    }
    EXPECT_TRUE(solve_m(0.02).precision_warning);
    // 1 - m underflows below tau ~ 2.2e-3; the solve clamps instead of throwing
    for (double tau : {2e-3, 1.2e-3, 1e-5}) {
        SolvedParameter s = solve_m(tau);
        EXPECT_TRUE(s.precision_warning);
        EXPECT_GT(s.param.m1, 0.0);
        EXPECT_TRUE(std::isfinite(s.K));
    }
    EXPECT_THROW(solve_m(0.0), std::domain_error);
    EXPECT_THROW(solve_m(-1.0), std::domain_error);
}

TEST(Elliptic, solve_m_asymptotics) {
    double m1 = solve_m(0.05).param.m1;
    EXPECT_NEAR(m1 / (16 * std::exp(-kPi / (2 * 0.05))), 1.0, 0.01);
    double m = solve_m(3.0).param.m;
    EXPECT_NEAR(m / (16 * std::exp(-2 * kPi * 3.0)), 1.0, 0.01);
}

TEST(Conformal, frame_invariants) {
    for (int i = 0; i <= 40; i++) {
        double tau = 0.03 * std::pow(10.0 / 0.03, i / 40.0);
        double L = 128;
        ConformalFrame f = make_frame(L, tau * L);
        EXPECT_NEAR(f.K1 / (2 * f.K), tau, 1e-10 * tau);
        EXPECT_NEAR(f.lambda * L, 2 * f.K, 1e-10 * 2 * f.K);
        EXPECT_NEAR(f.lambda * f.Y, f.K1, 1e-10 * f.K1);
    }
    EXPECT_THROW(make_frame(0, 1), GeometryError);
    EXPECT_THROW(make_frame(10, -1), GeometryError);
}

TEST(Conformal, corner_images) {
    for (double tau : {0.03, 0.05, 0.5, 2.0}) {
        double L = 64, Y = tau * L;
        ConformalFrame f = make_frame(L, Y);
        double rm = std::sqrt(f.param.m);
        EXPECT_NEAR(rect_to_lhp({-L / 2, Y}, f).w, -1.0, 1e-8);
        EXPECT_NEAR(rect_to_lhp({-L / 2, 0}, f).w, -1 / rm, 1e-8 / rm);
        EXPECT_NEAR(rect_to_lhp({L / 2, 0}, f).w, 1 / rm, 1e-8 / rm);
        EXPECT_NEAR(rect_to_lhp({L / 2, Y}, f).w, 1.0, 1e-8);
        // approaching a corner along either edge gives the same image
        double eps = 1e-7;
        EXPECT_NEAR(rect_to_lhp({-L / 2, eps}, f).w, rect_to_lhp({-L / 2 + eps, 0}, f).w, 1e-6 / rm);
        EXPECT_NEAR(rect_to_lhp({L / 2, Y - eps}, f).w, rect_to_lhp({L / 2 - eps, Y}, f).w, 1e-6);
        EXPECT_EQ(rect_to_lhp({0, Y}, f).w, 0.0);
        EXPECT_GT(corner_gap(Corner::z1, Corner::z2, f), 0.0);
    }
}

TEST(Conformal, boundary_images_match_complex_sn) {
    for (double tau : {0.25, 0.6, 1.5}) {
        double L = 20, Y = tau * L;
        ConformalFrame f = make_frame(L, Y);
        std::vector<Complex> pts;
        for (int i = 1; i < 20; i++) {
            pts.push_back({-L / 2 + L * i / 20.0, Y});
            pts.push_back({-L / 2 + L * i / 20.0, 0});
            pts.push_back({-L / 2, Y * i / 20.0});
            pts.push_back({L / 2, Y * i / 20.0});
        }
        for (Complex z : pts) {
            if (z == Complex(0, 0)) continue;
            Complex zeta = f.lambda * (z - Complex(0, Y));
            Complex3 j = jacobi_complex(zeta.real(), zeta.imag(), f.param.m);
            BoundaryPointImage im = rect_to_lhp(z, f);
            EXPECT_NEAR(j.sn.imag(), 0.0, 1e-9 * std::abs(j.sn));
            EXPECT_NEAR(im.w, j.sn.real(), 1e-11 * std::max(1.0, std::abs(im.w))) << z;
            double d = f.lambda * std::abs(j.cn * j.dn);
            EXPECT_NEAR(im.dw_dz, d, 1e-10 * std::max(1.0, d)) << z;
        }
    }
}

TEST(Conformal, boundary_order_is_preserved) {
    for (double tau : {0.03, 0.3, 3.0}) {
        double L = 40, Y = tau * L;
        ConformalFrame f = make_frame(L, Y);
        auto ref = rect_to_lhp({-L / 2, Y}, f);
        // z1 -> z2 down the left edge: w decreases from -1 to -1/sqrt(m)
        double last = 0;
        for (int i = 0; i <= 40; i++) {
            auto im = rect_to_lhp({-L / 2, Y - Y * i / 40.0}, f);
            double g = image_gap(im, ref, f);
            if (i > 0) EXPECT_LT(g, last) << tau << " " << i;
            last = g;
        }
        // z1 -> z4 along the top: increasing
        auto prev = ref;
        for (int i = 1; i <= 40; i++) {
            auto im = rect_to_lhp({-L / 2 + L * i / 40.0, Y}, f);
            EXPECT_GT(image_gap(im, prev, f), 0.0) << tau << " " << i;
            prev = im;
        }
    }
}

TEST(Conformal, small_tau_top_edge_is_tanh) {
    double L = 512, Y = 0.05 * L;
    ConformalFrame f = make_frame(L, Y);
    for (double x : {-200.0, -50.0, -10.0, 0.0, 7.0, 30.0, 180.0}) {
        EXPECT_NEAR(rect_to_lhp({x, Y}, f).w, std::tanh(kPi * x / (2 * Y)), 1e-3) << x;
    }
}

TEST(Conformal, fffa_abscissa_independent_of_position_at_small_tau) {
    double L = 512, Y = 0.05 * L;
    ConformalFrame f = make_frame(L, Y);
    double ref = std::log(collapse_xi(CornerConvention::fffa, f, {0, Y}));
    for (double x : {-L / 4, -L / 8, L / 8, L / 4}) {
        double v = std::log(collapse_xi(CornerConvention::fffa, f, {x, Y}));
        EXPECT_LT(std::abs(v - ref), 0.01 * std::abs(ref)) << x;
    }
    // closed form for the top edge: 2 lambda dn/cn
    for (double x : {-100.0, 3.0, 250.0}) {
        auto j = jacobi(f.lambda * x, f.param);
        double xi = collapse_xi(CornerConvention::fffa, f, {x, Y});
        EXPECT_NEAR(xi, 2 * f.lambda * j.dn / j.cn, 1e-9 * xi);
    }
}

TEST(Conformal, tiny_tau_keeps_side_points_resolved) {
    double L = 100, Y = 0.03 * L;
    ConformalFrame f = make_frame(L, Y);
    auto z1 = rect_to_lhp({-L / 2, Y}, f);
    auto z2 = rect_to_lhp({-L / 2, 0}, f);
    auto mid = rect_to_lhp({-L / 2, Y / 2}, f);
    EXPECT_LT(image_gap(mid, z1, f), 0.0);
    EXPECT_GT(image_gap(mid, z2, f), 0.0);
    double xi = collapse_xi(CornerConvention::afaa, f, {-L / 2, Y / 2});
    EXPECT_TRUE(std::isfinite(xi));
    EXPECT_GT(xi, 0.0);
}

TEST(Conformal, touching_intervals_have_unit_cross_ratio) {
    double L = 512, Y = L;
    ConformalFrame f = make_frame(L, Y);
    for (double x5 : {-100.0, 0.0, 100.0}) {
        double last = 0.0;
        for (double gap : {1.0, 0.1, 0.01, 0.001}) {
            double eta = cross_ratio(f, {-L / 2, Y}, {x5, Y}, {x5 + gap, Y}, {L / 2, Y});
            EXPECT_LT(eta, 1.0);
            EXPECT_GT(eta, 1.0 - 0.016 * gap) << x5 << " " << gap;
            EXPECT_GT(eta, last);
            last = eta;
        }
    }
}

TEST(Conformal, cross_ratio_is_mobius_invariant) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    double L = 30, Y = 18;
    ConformalFrame f = make_frame(L, Y);
    auto boundary_point = [&](double s) {
        // perimeter parameter s in [0, 1)
        double per = 2 * (L + Y), d = s * per;
        if (d < L) return Complex(-L / 2 + d, Y);
        d -= L;
        if (d < Y) return Complex(L / 2, Y - d);
        d -= Y;
        if (d < L) return Complex(L / 2 - d, 0);
        d -= L;
        return Complex(-L / 2, d);
    };
    for (int trial = 0; trial < 200; trial++) {
        Complex z[4];
        double w[4];
        for (int i = 0; i < 4; i++) {
            z[i] = boundary_point(u(rng));
            if (z[i] == Complex(0, 0)) z[i] = Complex(0.1, 0);
            w[i] = rect_to_lhp(z[i], f).w;
        }
        double eta = cross_ratio(f, z[0], z[1], z[2], z[3]);
        double a = u(rng) + 0.5, b = u(rng) - 0.5, c = u(rng) - 0.5, d = u(rng) + 0.5;
        if (a * d - b * c <= 0) continue;
        double mw[4];
        for (int i = 0; i < 4; i++) mw[i] = (a * w[i] + b) / (c * w[i] + d);
        EXPECT_NEAR(cross_ratio_real(mw[0], mw[1], mw[2], mw[3]), eta, 1e-10 * std::max(1.0, eta));
    }
}

TEST(Conformal, degenerate_and_off_boundary_points) {
    ConformalFrame f = make_frame(10, 5);
    EXPECT_THROW(rect_to_lhp({0, 2}, f), GeometryError);
    EXPECT_THROW(rect_to_lhp({8, 5}, f), GeometryError);
    EXPECT_THROW(rect_to_lhp({0, 0}, f), DegenerateProbeError);
    EXPECT_THROW(xi_two_point(f, {1, 5}, {1, 5}), DegenerateProbeError);
    EXPECT_THROW(collapse_xi(CornerConvention::fffa, f, {-5, 5}), DegenerateProbeError);
}

TEST(Conformal, strip_map) {
    double Y = 3.0;
    EXPECT_NEAR(std::abs(strip_map({0, Y}, Y).w - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(strip_map({0, 0}, Y).w + 1.0), 0.0, 1e-15);
    for (double x : {0.0, 1.0, 4.5}) {
        double w[4];
        double pts[4] = {-x - 2, -x, x, x + 2};
        for (int i = 0; i < 4; i++) w[i] = strip_map({pts[i], Y}, Y).w.real();
        double k = kPi / Y;
        double ref = std::pow(std::sinh(k) / std::sinh(k * (1 + x)), 2);
        EXPECT_NEAR(cross_ratio_real(w[0], w[1], w[2], w[3]), ref, 1e-12);
    }
}

TEST(Conformal, cylinder_map) {
    double L = 64;
    EXPECT_EQ(cylinder_map({0, 0}, L).w, Complex(0, 0));
    EXPECT_NEAR(cylinder_map({L / 4, 0}, L).w.real(), 1.0, 1e-15);
    Complex a = cylinder_map({L / 8, 0}, L).w, b = cylinder_map({L / 8 + L / 2, 0}, L).w;
    EXPECT_NEAR((a * b).real(), -1.0, 1e-12);
    auto p5 = cylinder_map({0, 0}, L), p6 = cylinder_map({L / 4, 0}, L);
    double xi = xi_two_point_real(p5.w.real(), std::abs(p5.dw_dz), p6.w.real(), std::abs(p6.dw_dz));
    EXPECT_NEAR(xi, 2 * (kPi / L) * (kPi / L), 1e-15);
    EXPECT_NEAR(pbc_xi_two_point(L / 4, L), xi, 1e-15);
}
