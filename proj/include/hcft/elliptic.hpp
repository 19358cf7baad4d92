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

#ifndef HCFT_ELLIPTIC_HPP
#define HCFT_ELLIPTIC_HPP

namespace hcft {

// Elliptic parameter carried together with its complement, so that m close
// to 1 (or 0) keeps full relative precision in 1 - m (or m).
struct EllipticParameter {
    double m = 0.0;
    double m1 = 1.0;  // 1 - m

    static EllipticParameter from_m(double m);
    static EllipticParameter from_complement(double m1);
    EllipticParameter complement() const { return {m1, m}; }
};

double agm(double a, double b);

// K(m). Throws std::domain_error for m outside [0, 1).
double ellint_K(double m);
double ellint_K(EllipticParameter p);

struct JacobiValues {
    double sn, cn, dn;
};

// sn, cn, dn at real argument u.
JacobiValues jacobi(double u, EllipticParameter p);
double jacobi_sn(double u, double m);

// Result of inverting tau(m) = K(1-m) / (2 K(m)).
struct SolvedParameter {
    EllipticParameter param;
    double K = 0.0;   // K(m)
    double K1 = 0.0;  // K(1-m)
    // Set when tau is below the range where the map stays well resolved
    // in double precision, or when m or 1-m had to be clamped.
    bool precision_warning = false;
};

inline constexpr double kTauPrecisionFloor = 0.03;

// Aspect ratio as a function of the parameter.
double tau_of(EllipticParameter p);

// Throws std::domain_error for tau <= 0 or non-finite tau.
SolvedParameter solve_m(double tau);

}  // namespace hcft

#endif
