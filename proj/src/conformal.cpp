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

#include "hcft/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hcft/errors.hpp"

namespace hcft {

namespace {

constexpr double kPi = std::numbers::pi;

double sign_of(double x) { return x < 0 ? -1.0 : 1.0; }

BoundaryPointImage make_image(Corner anchor, double offset, double deriv, const ConformalFrame &f) {
    return {corner_image(anchor, f) + offset, deriv, anchor, offset};
}

// z = x + iY; w = sn(lambda x)
BoundaryPointImage top_edge(double x, const ConformalFrame &f) {
    const EllipticParameter p = f.param;
    double s = sign_of(x);
    double t = f.lambda * std::abs(x);
    double v = f.lambda * (0.5 * f.L - std::abs(x));
    double gap, deriv;  // gap = 1 - |w|
    if (t > 0.5 * f.K) {
        JacobiValues j = jacobi(v, p);
        gap = p.m1 * j.sn * j.sn / (j.dn * (j.dn + j.cn));
        deriv = f.lambda * p.m1 * j.sn / (j.dn * j.dn);
    } else {
        JacobiValues j = jacobi(t, p);
        gap = j.cn * j.cn / (1.0 + j.sn);
        deriv = f.lambda * j.cn * j.dn;
    }
    return make_image(s > 0 ? Corner::z4 : Corner::z1, -s * gap, deriv, f);
}

// z = -L/2 + iy; w = -1/dn(lambda (Y - y) | 1 - m)
BoundaryPointImage left_edge(double y, const ConformalFrame &f) {
    const EllipticParameter pc = f.param.complement();
    double m1 = f.param.m1;
    double from_top = f.lambda * (f.Y - y);
    double from_bottom = f.lambda * y;
    if (from_top <= 0.5 * f.K1) {
        JacobiValues j = jacobi(from_top, pc);
        double offset = -m1 * j.sn * j.sn / ((1.0 + j.dn) * j.dn);
        return make_image(Corner::z1, offset, f.lambda * m1 * j.sn * j.cn / (j.dn * j.dn), f);
    }
    JacobiValues j = jacobi(from_bottom, pc);
    double rm = std::sqrt(f.param.m);
    double offset = m1 * j.sn * j.sn / ((1.0 + j.dn) * rm);
    return make_image(Corner::z2, offset, f.lambda * m1 * j.sn * j.cn / rm, f);
}

// z = x; w = 1/(sqrt(m) sn(lambda x))
BoundaryPointImage bottom_edge(double x, const ConformalFrame &f) {
    const EllipticParameter p = f.param;
    double rm = std::sqrt(p.m);
    double s = sign_of(x);
    double t = f.lambda * std::abs(x);
    double v = f.lambda * (0.5 * f.L - std::abs(x));
    double gap, deriv;  // gap = |w| - 1/sqrt(m)
    if (t > 0.5 * f.K) {
        JacobiValues j = jacobi(v, p);
        gap = p.m1 * j.sn * j.sn / (rm * j.cn * (j.dn + j.cn));
        deriv = f.lambda * p.m1 * j.sn / (rm * j.cn * j.cn);
    } else {
        if (t == 0.0) throw DegenerateProbeError("bottom-edge midpoint maps to infinity");
        JacobiValues j = jacobi(t, p);
        gap = j.cn * j.cn / ((1.0 + j.sn) * rm * j.sn);
        deriv = f.lambda * j.cn * j.dn / (rm * j.sn * j.sn);
    }
    return make_image(s > 0 ? Corner::z3 : Corner::z2, s * gap, deriv, f);
}

Corner mirror(Corner c) {
    switch (c) {
        case Corner::z1: return Corner::z4;
        case Corner::z2: return Corner::z3;
        case Corner::z3: return Corner::z2;
        default: return Corner::z1;
    }
}

void require_nonzero(double v, const char *what) {
    if (v == 0.0 || !std::isfinite(v)) throw DegenerateProbeError(what);
}

}  // namespace

ConformalFrame make_frame(double L, double Y) {
    if (!(L > 0.0) || !(Y > 0.0) || !std::isfinite(L) || !std::isfinite(Y)) {
        throw GeometryError("rectangle needs positive width and depth");
    }
    ConformalFrame f;
    f.L = L;
    f.Y = Y;
    f.tau = Y / L;
    SolvedParameter s = solve_m(f.tau);
    f.param = s.param;
    f.K = s.K;
    f.K1 = s.K1;
    f.lambda = 2.0 * s.K / L;
    f.precision_warning = s.precision_warning;
    return f;
}

double corner_image(Corner c, const ConformalFrame &f) {
    double rm = std::sqrt(f.param.m);
    switch (c) {
        case Corner::z1: return -1.0;
        case Corner::z2: return -1.0 / rm;
        case Corner::z3: return 1.0 / rm;
        default: return 1.0;
    }
}

double corner_gap(Corner a, Corner b, const ConformalFrame &f) {
    if (a == b) return 0.0;
    double rm = std::sqrt(f.param.m);
    // 1/sqrt(m) - 1 written without cancellation
    double g = f.param.m1 / (rm * (1.0 + rm));
    if (a == Corner::z1 && b == Corner::z2) return g;
    if (a == Corner::z2 && b == Corner::z1) return -g;
    if (a == Corner::z4 && b == Corner::z3) return -g;
    if (a == Corner::z3 && b == Corner::z4) return g;
    return corner_image(a, f) - corner_image(b, f);
}

BoundaryPointImage rect_to_lhp(Complex z, const ConformalFrame &f) {
    double x = z.real(), y = z.imag();
    double tol = 1e-9 * std::max(f.L, f.Y);
    double half = 0.5 * f.L;
    if (std::abs(x) > half + tol || y < -tol || y > f.Y + tol || !std::isfinite(x) || !std::isfinite(y)) {
        throw GeometryError("point lies outside the rectangle");
    }
    x = std::clamp(x, -half, half);
    y = std::clamp(y, 0.0, f.Y);
    if (std::abs(y - f.Y) <= tol) return top_edge(x, f);
    if (std::abs(y) <= tol) return bottom_edge(x, f);
    if (std::abs(x + half) <= tol) return left_edge(y, f);
    if (std::abs(x - half) <= tol) {
        BoundaryPointImage im = left_edge(y, f);
        Corner c = mirror(im.anchor);
        return make_image(c, -im.offset, im.dw_dz, f);
    }
    throw GeometryError("point lies inside the rectangle, not on its boundary");
}

double image_gap(const BoundaryPointImage &a, const BoundaryPointImage &b, const ConformalFrame &f) {
    return corner_gap(a.anchor, b.anchor, f) + (a.offset - b.offset);
}

double xi_three_point(const ConformalFrame &f, Complex z5, Corner a, Corner b) {
    BoundaryPointImage p = rect_to_lhp(z5, f);
    double w_ab = corner_gap(a, b, f);
    double w_a5 = corner_gap(a, p.anchor, f) - p.offset;
    double w_5b = corner_gap(p.anchor, b, f) + p.offset;
    require_nonzero(w_a5 * w_5b, "probe point coincides with a corner");
    double xi = std::abs(p.dw_dz * w_ab / (w_a5 * w_5b));
    require_nonzero(xi, "probe point coincides with a corner");
    return xi;
}

double xi_two_point(const ConformalFrame &f, Complex z5, Complex z6) {
    BoundaryPointImage p5 = rect_to_lhp(z5, f), p6 = rect_to_lhp(z6, f);
    double d = image_gap(p5, p6, f);
    require_nonzero(d, "coincident probe points");
    return std::abs(p5.dw_dz * p6.dw_dz / (d * d));
}

double cross_ratio(const ConformalFrame &f, Complex za, Complex zb, Complex zc, Complex zd) {
    BoundaryPointImage a = rect_to_lhp(za, f), b = rect_to_lhp(zb, f);
    BoundaryPointImage c = rect_to_lhp(zc, f), d = rect_to_lhp(zd, f);
    double den = image_gap(a, c, f) * image_gap(b, d, f);
    require_nonzero(den, "coincident probe points");
    return std::abs(image_gap(a, b, f) * image_gap(c, d, f) / den);
}

double collapse_xi(CornerConvention convention, const ConformalFrame &f, Complex z5) {
    if (convention == CornerConvention::fffa) return xi_three_point(f, z5, Corner::z1, Corner::z4);
    return xi_three_point(f, z5, Corner::z2, Corner::z3);
}

MapValue strip_map(Complex z, double Y) {
    if (!(Y > 0.0)) throw GeometryError("strip needs positive width");
    Complex w = -std::exp(kPi * z / Y);
    return {w, (kPi / Y) * w};
}

MapValue cylinder_map(Complex z, double L) {
    if (!(L > 0.0)) throw GeometryError("cylinder needs positive circumference");
    Complex c = std::cos(kPi * z / L);
    return {std::tan(kPi * z / L), (kPi / L) / (c * c)};
}

double xi_two_point_real(double w5, double d5, double w6, double d6) {
    double d = w5 - w6;
    require_nonzero(d, "coincident probe points");
    return std::abs(d5 * d6 / (d * d));
}

double cross_ratio_real(double wa, double wb, double wc, double wd) {
    double den = (wa - wc) * (wb - wd);
    require_nonzero(den, "coincident probe points");
    return std::abs((wa - wb) * (wc - wd) / den);
}

double pbc_xi_two_point(double x12, double L) {
    if (!(L > 0.0)) throw GeometryError("chain needs positive length");
    double s = std::sin(kPi * x12 / L);
    require_nonzero(std::abs(s) > 1e-15 ? s : 0.0, "coincident probe points");
    return (kPi / L) * (kPi / L) / (s * s);
}

}  // namespace hcft
