#include "kaclab/exact_poly.hpp"
#include "kaclab/root_engine.hpp"

namespace kaclab {

namespace {

using exact::IntPoly;

std::vector<IntPoly> sturm_chain(const IntPoly& g)
{
    std::vector<IntPoly> chain{g, exact::derivative(g)};
    exact::make_primitive(chain[1]);
    while (chain.back().degree() > 0) {
        const IntPoly& a = chain[chain.size() - 2];
        const IntPoly& b = chain.back();
        IntPoly r = exact::pseudo_remainder(a, b);
        if (r.is_zero())
            break;
        exact::make_primitive(r);
        // r = lc(b)^delta * rem(a, b); the chain continues with -rem
        const int delta = a.degree() - b.degree() + 1;
        const bool lc_power_positive = sgn(b.lead()) > 0 || delta % 2 == 0;
        if (lc_power_positive)
            for (auto& x : r.c)
                x = -x;
        chain.push_back(std::move(r));
    }
    return chain;
}

int variations(const std::vector<int>& signs)
{
    int v = 0, last = 0;
    for (int s : signs) {
        if (s == 0)
            continue;
        if (last != 0 && s != last)
            ++v;
        last = s;
    }
    return v;
}

int variations_at(const std::vector<IntPoly>& chain, const mpq_class& x)
{
    std::vector<int> s;
    s.reserve(chain.size());
    for (const auto& f : chain)
        s.push_back(exact::sign_at(f, x));
    return variations(s);
}

int variations_at_infinity(const std::vector<IntPoly>& chain, int dir)
{
    std::vector<int> s;
    s.reserve(chain.size());
    for (const auto& f : chain)
        s.push_back(exact::sign_at_infinity(f, dir));
    return variations(s);
}

}  // namespace

RootCountResult sturm_count(CoeffView p, const Interval& I)
{
    I.validate();
    IntPoly f = exact::from_dyadic(p);
    if (f.is_zero())
        throw ZeroPolynomialError();
    RootCountResult res;
    res.method = CountMethod::sturm;
    if (f.degree() == 0)
        return res;

    IntPoly g = f;
    if (!exact::squarefree_modular(f)) {
        IntPoly d = exact::gcd(f, exact::derivative(f));
        if (d.degree() > 0) {
            g = exact::exact_quotient(f, d);
            res.repeated_factor = true;
        }
    }
    exact::make_primitive(g);

    if (!I.lo_infinite && !I.hi_infinite && I.lo == I.hi) {
        res.count = exact::sign_at(g, I.lo) == 0 ? 1 : 0;
        return res;
    }

    const auto chain = sturm_chain(g);
    // V(a) - V(b) counts the roots in (a, b] of a squarefree polynomial
    const int va = I.lo_infinite ? variations_at_infinity(chain, -1) : variations_at(chain, I.lo);
    const int vb = I.hi_infinite ? variations_at_infinity(chain, +1) : variations_at(chain, I.hi);
    int count = va - vb;
    if (!I.lo_infinite && I.lo_closed && exact::sign_at(g, I.lo) == 0)
        ++count;
    if (!I.hi_infinite && !I.hi_closed && exact::sign_at(g, I.hi) == 0)
        --count;
    res.count = count;
    return res;
}

RootCountResult sturm_count(const PolynomialSample& p, const Interval& I)
{
    return sturm_count(p.coeffs(), I);
}

}  // namespace kaclab
