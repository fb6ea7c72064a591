#pragma once

// Exact integer-coefficient polynomial arithmetic backing the Sturm oracle
// and the exact rung of the certified counter.

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "kaclab/kac_poly.hpp"

namespace kaclab::exact {

/// Integer polynomial, ascending powers, no trailing zero coefficients
/// (the zero polynomial has an empty coefficient vector).
struct IntPoly {
    std::vector<mpz_class> c;

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    const mpz_class& lead() const { return c.back(); }
    void trim();
};

/// F with p = 2^shift * F; F has integer coefficients.
IntPoly from_dyadic(CoeffView p, int* shift = nullptr);

IntPoly derivative(const IntPoly& f);
/// Divides out the positive content.
void make_primitive(IntPoly& f);
/// lc(b)^(deg a - deg b + 1) * a mod b.
IntPoly pseudo_remainder(IntPoly a, const IntPoly& b);
/// Exact quotient a / b (b must divide a over Q; result scaled to be primitive).
IntPoly exact_quotient(const IntPoly& a, const IntPoly& b);
/// Primitive gcd with positive leading coefficient.
IntPoly gcd(IntPoly a, IntPoly b);

/// v^d * f(u/v) for v > 0; its sign is the sign of f(u/v).
mpz_class eval_homogeneous(const IntPoly& f, const mpz_class& u, const mpz_class& v);
int sign_at(const IntPoly& f, const mpq_class& x);
/// Sign of f(x) as x -> +inf (dir = +1) or -inf (dir = -1).
int sign_at_infinity(const IntPoly& f, int dir);

/// Exact Taylor coefficients f^(k)(x0)/k!, k = 0..kmax.
std::vector<mpq_class> taylor_coefficients(CoeffView p, const mpq_class& x0, int kmax);

/// True when gcd(f, f') is constant modulo a 61-bit prime not dividing
/// lc(f); false means "possibly not squarefree".
bool squarefree_modular(const IntPoly& f);

}  // namespace kaclab::exact
