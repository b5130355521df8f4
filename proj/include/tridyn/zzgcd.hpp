#pragma once

// Exact division, gcd, and canonical reduction for integer-coefficient
// multivariate polynomials and rational functions.

#include <optional>

#include "tridyn/rational.hpp"

namespace tridyn {

using ZPoly = MultiPoly<ZZRing>;
using ZRational = RationalFn<ZZRing>;

// quotient a/b when b divides a exactly over ZZ, nullopt otherwise
std::optional<ZPoly> exact_divide(const ZPoly& a, const ZPoly& b);

// gcd normalized to a positive lexicographically-leading coefficient; gcd(0,0)=0
ZPoly gcd_mpoly(const ZPoly& a, const ZPoly& b);

// Canonical representative: common polynomial gcd removed (including the gcd of
// the integer contents), denominator's leading coefficient positive.
ZRational normalize_rational(const ZRational& f);

} // namespace tridyn
