#include <algorithm>
#include <cmath>
#include <memory>
#include <ostream>

#include "certified_model.hpp"
#include "kaclab/exact_poly.hpp"
#include "kaclab/root_engine.hpp"

namespace kaclab {

namespace {

using detail::Big;
using exact::IntPoly;

void taylor_shift(std::vector<mpz_class>& c, const mpz_class& u)
{
    const int d = static_cast<int>(c.size()) - 1;
    if (u == 0)
        return;
    for (int i = 0; i < d; ++i)
        for (int j = d - 1; j >= i; --j)
            c[j] += u * c[j + 1];
}

int variations(const std::vector<mpz_class>& c)
{
    int v = 0, last = 0;
    for (const auto& x : c) {
        const int s = sgn(x);
        if (s == 0)
            continue;
        if (last != 0 && s != last)
            ++v;
        last = s;
    }
    return v;
}

// Integer polynomial whose roots in (0, 1) are the roots of g in (a, b).
IntPoly rescale_to_unit(const IntPoly& g, const mpq_class& a, const mpq_class& b)
{
    const int d = g.degree();
    const mpz_class& u = a.get_num();
    const mpz_class& v = a.get_den();
    IntPoly h;
    h.c.resize(d + 1);
    mpz_class vp = 1;
    for (int i = d; i >= 0; --i) {
        h.c[i] = g.c[i] * vp;
        vp *= v;
    }
    taylor_shift(h.c, u);
    const mpq_class r = mpq_class(v) * (b - a);
    const mpz_class& rn = r.get_num();
    const mpz_class& rd = r.get_den();
    mpz_class np = 1, dp = 1;
    std::vector<mpz_class> dpow(d + 1);
    for (int i = 0; i <= d; ++i) {
        dpow[i] = dp;
        dp *= rd;
    }
    for (int i = 0; i <= d; ++i) {
        h.c[i] *= np * dpow[d - i];
        np *= rn;
    }
    h.trim();
    exact::make_primitive(h);
    return h;
}

// Roots in (0, 1) of a polynomial without repeated factors.
int vincent_collins_akritas(IntPoly h, int depth)
{
    if (depth > 4000)
        throw UnresolvedError("exact subdivision exceeded depth limit");
    h.trim();
    while (!h.is_zero() && h.c.front() == 0)
        h.c.erase(h.c.begin());
    if (h.degree() <= 0)
        return 0;
    const int d = h.degree();
    std::vector<mpz_class> t(h.c.rbegin(), h.c.rend());
    taylor_shift(t, 1);
    const int v = variations(t);
    if (v <= 1)
        return v;
    IntPoly left = h;
    mpz_class scale = 1;
    for (int i = d; i >= 0; --i) {
        left.c[i] *= scale;
        scale *= 2;
    }
    exact::make_primitive(left);
    IntPoly right = left;
    taylor_shift(right.c, 1);
    const int mid = right.c.front() == 0 ? 1 : 0;
    return vincent_collins_akritas(std::move(left), depth + 1) + mid +
           vincent_collins_akritas(std::move(right), depth + 1);
}

struct Endpoint {
    mpq_class q;
    double lo_enc = 0.0, hi_enc = 0.0;  // doubles enclosing q
    bool is_double = false;
    int sign = 0;
    int mult = -1;
};

Endpoint make_endpoint(const mpq_class& q)
{
    Endpoint e;
    e.q = q;
    const double d = q.get_d();
    e.is_double = (mpq_class(d) == q);
    if (e.is_double) {
        e.lo_enc = e.hi_enc = d;
    } else {
        e.lo_enc = std::nextafter(d, -HUGE_VAL);
        e.hi_enc = std::nextafter(d, HUGE_VAL);
    }
    return e;
}

bool exact_midpoint(double lo, double hi)
{
    const double c = (lo + hi) / 2, h = (hi - lo) / 2;
    const mpq_class ql(lo), qh(hi);
    return mpq_class(c) * 2 == ql + qh && mpq_class(h) * 2 == qh - ql;
}

int model_terms(int n)
{
    if (n <= 64)
        return n + 1;
    return std::min(n + 1, 12 + static_cast<int>(std::ceil(std::log2(n) / 2)));
}

// Counts distinct roots of one polynomial inside subintervals of [-1, 1].
class Counter {
public:
    Counter(std::vector<double> coeffs, const CountBudget& budget) : p_(std::move(coeffs)), budget_(budget)
    {
        n_ = static_cast<int>(p_.size()) - 1;
        K_ = model_terms(n_);
    }

    int count_piece(const mpq_class& lo, bool lo_closed, const mpq_class& hi, bool hi_closed)
    {
        Endpoint a = make_endpoint(lo);
        a.sign = sign_at(a);
        if (lo == hi)
            return (lo_closed && hi_closed && a.sign == 0) ? 1 : 0;
        Endpoint b = make_endpoint(hi);
        b.sign = sign_at(b);
        int c = count_open<double>(a, b, 0);
        if (lo_closed && a.sign == 0)
            ++c;
        if (hi_closed && b.sign == 0)
            ++c;
        return c;
    }

    int escalations = 0;
    long boxes = 0;
    bool repeated_factor = false;

private:
    template <class T>
    const std::vector<T>& coeffs()
    {
        if constexpr (std::is_same_v<T, double>) {
            return p_;
        } else {
            if (big_.empty())
                big_.assign(p_.begin(), p_.end());
            return big_;
        }
    }

    template <class T>
    int count_open(Endpoint& a, Endpoint& b, int depth)
    {
        using std::abs;
        if (++boxes > budget_.max_boxes)
            throw UnresolvedError("subdivision box budget exhausted");
        const T lo(a.lo_enc), hi(b.hi_enc);
        const bool exact_box = a.is_double && b.is_double && exact_midpoint(a.lo_enc, b.hi_enc);
        const T c = (lo + hi) / T(2);
        const T h = exact_box ? (hi - lo) / T(2)
                              : std::max(c - lo, hi - c) * (T(1) + T(4) * detail::unit_roundoff<T>());
        const auto m = detail::taylor_model(coeffs<T>(), c, h, K_, scratch_);
        const int sign_product = a.sign * b.sign;

        if (detail::dominates(m, 0)) {
            trace(depth, a, b, "exclude");
            return 0;
        }
        if (m.complete) {
            const int v = detail::descartes_variations(m);
            if (v == 0) {
                trace(depth, a, b, "descartes 0");
                return 0;
            }
            if (v == 1) {
                if (exact_box) {
                    trace(depth, a, b, "descartes 1");
                    return 1;
                }
                if (sign_product != 0) {
                    trace(depth, a, b, "descartes 1");
                    return sign_product < 0 ? 1 : 0;
                }
            }
        }
        if (detail::dominates(m, 1, 0, true)) {
            trace(depth, a, b, "monotone");
            return sign_product < 0 ? 1 : 0;
        }
        if (a.sign == 0 && b.sign != 0 && endpoint_clear<T>(a, T(b.hi_enc) - T(a.lo_enc))) {
            trace(depth, a, b, "endpoint");
            return 0;
        }
        if (b.sign == 0 && a.sign != 0 && endpoint_clear<T>(b, T(b.hi_enc) - T(a.lo_enc))) {
            trace(depth, a, b, "endpoint");
            return 0;
        }

        const double dlo = a.lo_enc, dhi = b.hi_enc;
        const double ulp = std::nextafter(std::max(std::abs(dlo), std::abs(dhi)), HUGE_VAL) -
                           std::max(std::abs(dlo), std::abs(dhi));
        if (depth >= budget_.max_depth || dhi - dlo <= 64 * ulp)
            return escalate<T>(a, b);

        const double mid = dlo + (dhi - dlo) / 2;
        const double step = (dhi - dlo) / 16;
        for (double offset : {0.0, step, -step, 2 * step, -2 * step, 3 * step, -3 * step}) {
            const double x = mid + offset;
            if (!(x > dlo && x < dhi) || !(mpq_class(x) > a.q && mpq_class(x) < b.q))
                continue;
            const auto ev = detail::eval_certified(coeffs<T>(), T(x));
            if (!ev.decided())
                continue;
            Endpoint s = make_endpoint(mpq_class(x));
            s.sign = ev.sign();
            trace(depth, a, b, "split");
            return count_open<T>(a, s, depth + 1) + count_open<T>(s, b, depth + 1);
        }
        return escalate<T>(a, b);
    }

    template <class T>
    int escalate(Endpoint& a, Endpoint& b)
    {
        ++escalations;
        trace(-1, a, b, "escalate");
        if constexpr (std::is_same_v<T, double>)
            return count_open<Big>(a, b, 0);
        else
            return count_exact(a, b);
    }

    // No root in 0 < |x - e| <= width, given e is a root of known multiplicity.
    template <class T>
    bool endpoint_clear(Endpoint& e, const T& width)
    {
        if (!e.is_double)
            return false;
        const int m = multiplicity(e);
        const int K = std::max(K_, m + 4);
        const auto model = detail::taylor_model(coeffs<T>(), T(e.lo_enc), width, K, scratch_);
        return detail::dominates(model, m, m);
    }

    int multiplicity(Endpoint& e)
    {
        if (e.mult >= 0)
            return e.mult;
        std::vector<mpq_class> w(p_.begin(), p_.end());
        for (int k = 0; k <= n_; ++k) {
            for (int i = n_ - 1; i >= k; --i)
                w[i] += e.q * w[i + 1];
            if (w[k] != 0)
                return e.mult = k;
        }
        throw ZeroPolynomialError();
    }

    int sign_at(const Endpoint& e)
    {
        if (e.is_double) {
            const auto ev = detail::eval_certified(p_, e.lo_enc);
            if (ev.decided())
                return ev.sign();
            const auto eb = detail::eval_certified(coeffs<Big>(), Big(e.lo_enc));
            if (eb.decided())
                return eb.sign();
        }
        return sign_exact(p_, e.q);
    }

    int count_exact(const Endpoint& a, const Endpoint& b)
    {
        if (n_ > budget_.exact_degree_cap)
            throw UnresolvedError("exact subdivision refused above degree cap");
        if (!squarefree_) {
            IntPoly f = exact::from_dyadic(p_);
            if (exact::squarefree_modular(f)) {
                squarefree_ = std::make_unique<IntPoly>(std::move(f));
            } else {
                IntPoly d = exact::gcd(f, exact::derivative(f));
                if (d.degree() > 0) {
                    repeated_factor = true;
                    squarefree_ = std::make_unique<IntPoly>(exact::exact_quotient(f, d));
                } else {
                    squarefree_ = std::make_unique<IntPoly>(std::move(f));
                }
            }
        }
        return vincent_collins_akritas(rescale_to_unit(*squarefree_, a.q, b.q), 0);
    }

    void trace(int depth, const Endpoint& a, const Endpoint& b, const char* verdict)
    {
        if (!budget_.trace)
            return;
        *budget_.trace << "box depth=" << depth << " [" << a.q.get_d() << ", " << b.q.get_d() << "] " << verdict
                       << '\n';
    }

    std::vector<double> p_;
    std::vector<Big> big_;
    std::unique_ptr<IntPoly> squarefree_;
    const CountBudget& budget_;
    detail::Scratch scratch_;
    int n_ = 0, K_ = 1;
};

struct Piece {
    mpq_class lo, hi;
    bool lo_closed, hi_closed;
    bool reciprocal;
};

bool nonempty(const Piece& s)
{
    return s.lo < s.hi || (s.lo == s.hi && s.lo_closed && s.hi_closed);
}

// Splits I into its parts inside [-1, 1] and the images of the outer parts under x -> 1/x.
std::vector<Piece> pieces(const Interval& I)
{
    std::vector<Piece> out;
    const mpq_class one = 1, minus_one = -1;

    // I ∩ [-1, 1]
    {
        Piece s{minus_one, one, true, true, false};
        if (!I.lo_infinite && I.lo >= minus_one) {
            s.lo = I.lo;
            s.lo_closed = I.lo_closed;
        }
        if (!I.hi_infinite && I.hi <= one) {
            s.hi = I.hi;
            s.hi_closed = I.hi_closed;
        }
        if (nonempty(s))
            out.push_back(s);
    }
    // I ∩ (1, inf) mapped to (0, 1)
    if (I.hi_infinite || I.hi > one) {
        mpq_class L = one;
        bool Lc = false;
        if (!I.lo_infinite && I.lo > one) {
            L = I.lo;
            Lc = I.lo_closed;
        }
        Piece s{0, 1 / L, false, Lc, true};
        if (!I.hi_infinite) {
            s.lo = 1 / I.hi;
            s.lo_closed = I.hi_closed;
        }
        if (nonempty(s))
            out.push_back(s);
    }
    // I ∩ (-inf, -1) mapped to (-1, 0)
    if (I.lo_infinite || I.lo < minus_one) {
        mpq_class U = minus_one;
        bool Uc = false;
        if (!I.hi_infinite && I.hi < minus_one) {
            U = I.hi;
            Uc = I.hi_closed;
        }
        Piece s{1 / U, 0, Uc, false, true};
        if (!I.lo_infinite) {
            s.hi = 1 / I.lo;
            s.hi_closed = I.lo_closed;
        }
        if (nonempty(s))
            out.push_back(s);
    }
    return out;
}

}  // namespace

RootCountResult descartes_count(CoeffView p, const Interval& I, const CountBudget& budget)
{
    I.validate();
    int first = -1, last = -1;
    for (int j = 0; j < static_cast<int>(p.size()); ++j)
        if (p[j] != 0.0) {
            if (first < 0)
                first = j;
            last = j;
        }
    if (first < 0)
        throw ZeroPolynomialError();

    RootCountResult res;
    res.method = CountMethod::descartes;
    if (first == last) {
        // monomial: the only possible root is 0
        res.count = (first > 0 && I.contains(0)) ? 1 : 0;
        return res;
    }
    // x^first divides p; the rest has a nonzero constant term
    std::vector<double> q(p.begin() + first, p.begin() + last + 1);
    int count = (first > 0 && I.contains(0)) ? 1 : 0;

    std::unique_ptr<Counter> direct, reciprocal;
    for (const auto& s : pieces(I)) {
        auto& counter = s.reciprocal ? reciprocal : direct;
        if (!counter)
            counter = std::make_unique<Counter>(
                s.reciprocal ? std::vector<double>(q.rbegin(), q.rend()) : q, budget);
        count += counter->count_piece(s.lo, s.lo_closed, s.hi, s.hi_closed);
    }
    for (const auto* c : {direct.get(), reciprocal.get()})
        if (c) {
            res.escalations += c->escalations;
            res.repeated_factor = res.repeated_factor || c->repeated_factor;
        }
    res.count = count;
    return res;
}

RootCountResult descartes_count(const PolynomialSample& p, const Interval& I, const CountBudget& budget)
{
    return descartes_count(p.coeffs(), I, budget);
}

}  // namespace kaclab
