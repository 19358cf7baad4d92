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

// Maps from circuit boundary coordinates z = x + i y to the real axis of the
// half plane. The rectangle has x in [-L/2, L/2] and y in [0, Y]; its
// corners are z1 = -L/2 + iY, z2 = -L/2, z3 = L/2, z4 = L/2 + iY, with
// images -1, -1/sqrt(m), 1/sqrt(m), 1.

#ifndef HCFT_CONFORMAL_HPP
#define HCFT_CONFORMAL_HPP

#include <complex>

#include "hcft/elliptic.hpp"

namespace hcft {

using Complex = std::complex<double>;

struct ConformalFrame {
    double L = 0.0;
    double Y = 0.0;
    double tau = 0.0;  // Y / L
    EllipticParameter param;
    double K = 0.0;       // K(m)
    double K1 = 0.0;      // K(1-m)
    double lambda = 0.0;  // 2 K(m) / L
    bool precision_warning = false;
};

// Throws GeometryError unless L > 0 and Y > 0.
ConformalFrame make_frame(double L, double Y);

enum class Corner { z1 = 0, z2 = 1, z3 = 2, z4 = 3 };

double corner_image(Corner c, const ConformalFrame &f);
// w(a) - w(b), without cancellation when 1 - m is tiny.
double corner_gap(Corner a, Corner b, const ConformalFrame &f);

// Image of a boundary point. w = corner_image(anchor) + offset, where the
// anchor is the nearest corner along the boundary and offset is held to
// full relative precision.
struct BoundaryPointImage {
    double w = 0.0;
    double dw_dz = 0.0;  // |dw/dz|; nonnegative along the boundary
    Corner anchor = Corner::z1;
    double offset = 0.0;
};

// Throws GeometryError if z is not on the rectangle boundary and
// DegenerateProbeError for the bottom midpoint, which maps to infinity.
BoundaryPointImage rect_to_lhp(Complex z, const ConformalFrame &f);

// w_a - w_b
double image_gap(const BoundaryPointImage &a, const BoundaryPointImage &b, const ConformalFrame &f);

// |w'_5 w_ab / (w_a5 w_5b)| with a, b the given corners.
double xi_three_point(const ConformalFrame &f, Complex z5, Corner a, Corner b);
// |w'_5 w'_6 / w_56^2|
double xi_two_point(const ConformalFrame &f, Complex z5, Complex z6);
// |w_ab w_cd / (w_ac w_bd)|
double cross_ratio(const ConformalFrame &f, Complex za, Complex zb, Complex zc, Complex zd);

// Which pair of corners anchors a three-point probe.
enum class CornerConvention { fffa, afaa };
double collapse_xi(CornerConvention convention, const ConformalFrame &f, Complex z5);

struct MapValue {
    Complex w;
    Complex dw_dz;
};

// w = -exp(pi z / Y) on the strip 0 <= Im z <= Y.
MapValue strip_map(Complex z, double Y);
// w = tan(pi z / L) on the semi-infinite cylinder of circumference L.
MapValue cylinder_map(Complex z, double L);

// Real-axis versions of the collapse formulas for the strip and cylinder
// maps, where points are given directly as (w, |dw/dz|).
double xi_two_point_real(double w5, double d5, double w6, double d6);
double cross_ratio_real(double wa, double wb, double wc, double wd);

// Two-point abscissa on a periodic chain: (pi/L)^2 / sin^2(pi x12 / L).
double pbc_xi_two_point(double x12, double L);

}  // namespace hcft

#endif
