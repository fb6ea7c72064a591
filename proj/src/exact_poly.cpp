#include "kaclab/exact_poly.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace kaclab::exact {

void IntPoly::trim()
{
    while (!c.empty() && c.back() == 0)
        c.pop_back();
}

IntPoly from_dyadic(CoeffView p, int* shift)
{
    int emin = std::numeric_limits<int>::max();
    std::vector<DyadicCoefficient> d;
    d.reserve(p.size());
    for (double v : p) {
        d.push_back(DyadicCoefficient::from_double(v));
        if (!d.back().is_zero())
            emin = std::min(emin, d.back().exponent);
    }
    IntPoly f;
    if (emin == std::numeric_limits<int>::max()) {
        if (shift)
            *shift = 0;
        return f;
    }
    f.c.resize(d.size());
    for (std::size_t j = 0; j < d.size(); ++j) {
        if (d[j].is_zero())
            continue;
        mpz_class m(static_cast<long>(d[j].mantissa));
        mpz_mul_2exp(f.c[j].get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(d[j].exponent - emin));
    }
    f.trim();
    if (shift)
        *shift = emin;
    return f;
}

IntPoly derivative(const IntPoly& f)
{
    IntPoly d;
    if (f.degree() < 1)
        return d;
    d.c.resize(f.c.size() - 1);
    for (std::size_t j = 1; j < f.c.size(); ++j)
        d.c[j - 1] = f.c[j] * static_cast<unsigned long>(j);
    d.trim();
    return d;
}

void make_primitive(IntPoly& f)
{
    if (f.is_zero())
        return;
    mpz_class g = 0;
    for (const auto& a : f.c) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
        if (g == 1)
            return;
    }
    for (auto& a : f.c)
        mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), g.get_mpz_t());
}

IntPoly pseudo_remainder(IntPoly a, const IntPoly& b)
{
    if (b.is_zero())
        throw std::domain_error("pseudo_remainder: division by zero polynomial");
    const int db = b.degree();
    const mpz_class& lc = b.lead();
    mpz_class t;
    for (int i = a.degree(); i >= db; --i) {
        t = a.c[i];
        for (int j = 0; j < i; ++j)
            a.c[j] *= lc;
        if (t != 0)
            for (int j = 0; j < db; ++j)
                a.c[i - db + j] -= t * b.c[j];
        a.c[i] = 0;
    }
    a.trim();
    return a;
}

IntPoly exact_quotient(const IntPoly& a, const IntPoly& b)
{
    if (b.is_zero())
        throw std::domain_error("exact_quotient: division by zero polynomial");
    const int da = a.degree(), db = b.degree();
    if (da < db)
        return {};
    IntPoly rem = a;
    IntPoly q;
    q.c.assign(static_cast<std::size_t>(da - db + 1), 0);
    const mpz_class& lc = b.lead();
    for (int i = da; i >= db; --i) {
        const mpz_class t = rem.c[i];
        for (int j = 0; j < i; ++j)
            rem.c[j] *= lc;
        for (auto& qc : q.c)
            qc *= lc;
        q.c[i - db] += t;
        if (t != 0)
            for (int j = 0; j < db; ++j)
                rem.c[i - db + j] -= t * b.c[j];
        rem.c[i] = 0;
    }
    rem.trim();
    if (!rem.is_zero())
        throw std::domain_error("exact_quotient: divisor does not divide dividend");
    q.trim();
    make_primitive(q);
    return q;
}

IntPoly gcd(IntPoly a, IntPoly b)
{
    if (a.degree() < b.degree())
        std::swap(a, b);
    make_primitive(a);
    make_primitive(b);
    while (!b.is_zero()) {
        IntPoly r = pseudo_remainder(a, b);
        make_primitive(r);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero() && a.lead() < 0)
        for (auto& x : a.c)
            x = -x;
    return a;
}

mpz_class eval_homogeneous(const IntPoly& f, const mpz_class& u, const mpz_class& v)
{
    if (f.is_zero())
        return 0;
    mpz_class acc = f.lead();
    mpz_class vp = 1;
    for (int j = f.degree() - 1; j >= 0; --j) {
        vp *= v;
        acc *= u;
        if (f.c[j] != 0)
            acc += f.c[j] * vp;
    }
    return acc;
}

int sign_at(const IntPoly& f, const mpq_class& x)
{
    return sgn(eval_homogeneous(f, x.get_num(), x.get_den()));
}

int sign_at_infinity(const IntPoly& f, int dir)
{
    if (f.is_zero())
        return 0;
    const int s = sgn(f.lead());
    return (dir < 0 && f.degree() % 2 == 1) ? -s : s;
}

std::vector<mpq_class> taylor_coefficients(CoeffView p, const mpq_class& x0, int kmax)
{
    const int n = static_cast<int>(p.size()) - 1;
    std::vector<mpq_class> work(p.begin(), p.end());
    std::vector<mpq_class> out;
    kmax = std::min(kmax, n);
    for (int k = 0; k <= kmax; ++k) {
        for (int i = n - 1; i >= k; --i)
            work[i] += x0 * work[i + 1];
        out.push_back(work[k]);
    }
    return out;
}

namespace {

using u64 = std::uint64_t;
constexpr u64 prime61 = (u64{1} << 61) - 1;

u64 mulmod(u64 a, u64 b)
{
    const unsigned __int128 z = static_cast<unsigned __int128>(a) * b;
    u64 lo = static_cast<u64>(z & prime61);
    u64 hi = static_cast<u64>(z >> 61);
    u64 s = lo + hi;
    if (s >= prime61)
        s -= prime61;
    return s;
}

u64 powmod(u64 a, u64 e)
{
    u64 r = 1;
    while (e) {
        if (e & 1)
            r = mulmod(r, a);
        a = mulmod(a, a);
        e >>= 1;
    }
    return r;
}

u64 to_mod(const mpz_class& x)
{
    mpz_class r;
    static const mpz_class m(std::to_string(prime61));
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r.get_ui();
}

using ModPoly = std::vector<u64>;

void trim(ModPoly& f)
{
    while (!f.empty() && f.back() == 0)
        f.pop_back();
}

// remainder of a by b over GF(p), b monic-normalised on the fly
ModPoly mod_rem(ModPoly a, const ModPoly& b)
{
    const int db = static_cast<int>(b.size()) - 1;
    const u64 inv = powmod(b.back(), prime61 - 2);
    for (int i = static_cast<int>(a.size()) - 1; i >= db; --i) {
        if (a[i] == 0)
            continue;
        const u64 t = mulmod(a[i], inv);
        for (int j = 0; j <= db; ++j) {
            const u64 s = mulmod(t, b[j]);
            u64& x = a[i - db + j];
            x = x >= s ? x - s : x + prime61 - s;
        }
    }
    a.resize(static_cast<std::size_t>(std::max(db, 0)));
    trim(a);
    return a;
}

}  // namespace

bool squarefree_modular(const IntPoly& f)
{
    if (f.degree() <= 1)
        return true;
    ModPoly a(f.c.size());
    for (std::size_t j = 0; j < f.c.size(); ++j)
        a[j] = to_mod(f.c[j]);
    if (a.back() == 0)
        return false;
    ModPoly b(f.c.size() - 1);
    for (std::size_t j = 1; j < f.c.size(); ++j)
        b[j - 1] = mulmod(a[j], static_cast<u64>(j) % prime61);
    trim(b);
    if (b.empty())
        return false;
    while (!b.empty()) {
        ModPoly r = mod_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a.size() == 1;
}

}  // namespace kaclab::exact
