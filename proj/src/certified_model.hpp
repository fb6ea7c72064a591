#pragma once

// Certified Taylor models of a polynomial on a box, shared by the subdivision
// counter and the double-root search.  Templated on the working scalar so the
// same code runs in double and in 256-bit binary floating point.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace kaclab::detail {

using Big = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

template <class T>
T unit_roundoff();
template <>
inline double unit_roundoff<double>()
{
    return 0x1.0p-53;
}
template <>
inline Big unit_roundoff<Big>()
{
    return Big(std::ldexp(1.0, -254));
}

template <class T>
T tiny();
template <>
inline double tiny<double>()
{
    return std::numeric_limits<double>::denorm_min();
}
template <>
inline Big tiny<Big>()
{
    return Big(0);
}

template <class T>
T gamma_n(long k)
{
    const T ku = T(static_cast<double>(k)) * unit_roundoff<T>();
    return ku / (T(1) - ku);
}

/// q(t) = p(c + h t) = sum a_k t^k on |t| <= 1, truncated after K terms.
template <class T>
struct TaylorModel {
    std::vector<T> a;
    std::vector<T> rad;  // |computed a_k - a_k| <= rad_k
    T rem = T(0);        // |sum_{k >= K} a_k t^k| <= rem
    bool complete = false;

    int terms() const { return static_cast<int>(a.size()); }
};

struct Scratch {
    std::vector<double> w, wa;
    std::vector<detail::Big> bw, bwa;
};

template <class T>
std::vector<T>& scratch_w(Scratch& s);
template <>
inline std::vector<double>& scratch_w<double>(Scratch& s)
{
    return s.w;
}
template <>
inline std::vector<Big>& scratch_w<Big>(Scratch& s)
{
    return s.bw;
}
template <class T>
std::vector<T>& scratch_wa(Scratch& s);
template <>
inline std::vector<double>& scratch_wa<double>(Scratch& s)
{
    return s.wa;
}
template <>
inline std::vector<Big>& scratch_wa<Big>(Scratch& s)
{
    return s.bwa;
}

template <class T>
TaylorModel<T> taylor_model(const std::vector<T>& p, const T& c, const T& h, int K, Scratch& scratch)
{
    using std::abs;
    const int n = static_cast<int>(p.size()) - 1;
    K = std::clamp(K, 1, n + 1);
    auto& w = scratch_w<T>(scratch);
    auto& wa = scratch_wa<T>(scratch);
    w.assign(p.begin(), p.end());
    wa.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        wa[i] = abs(p[i]);
    const T ac = abs(c), ah = abs(h);

    TaylorModel<T> m;
    m.a.resize(K);
    m.rad.resize(K);
    T hk = T(1);
    for (int s = 0; s < K; ++s) {
        for (int i = n - 1; i >= s; --i) {
            w[i] += c * w[i + 1];
            wa[i] += ac * wa[i + 1];
        }
        m.a[s] = w[s] * (s % 2 && h < 0 ? -hk : hk);
        m.rad[s] = T(2) * gamma_n<T>(4L * n + 4L * s + 8) * wa[s] * hk + tiny<T>();
        hk *= ah;
    }
    m.complete = (K == n + 1);
    if (!m.complete) {
        // Lagrange remainder, bounded by the absolute polynomial at |c| + |h|
        const T y = (ac + ah) * (T(1) + T(2) * unit_roundoff<T>());
        for (std::size_t i = 0; i < p.size(); ++i)
            wa[i] = abs(p[i]);
        for (int s = 0; s <= K; ++s)
            for (int i = n - 1; i >= s; --i)
                wa[i] += y * wa[i + 1];
        m.rem = wa[K] * hk * (T(1) + T(2) * gamma_n<T>(4L * n + 4L * K + 8)) + tiny<T>();
    }
    return m;
}

template <class T>
bool certainly_greater(const T& lhs, const T& rhs, int terms)
{
    return lhs * (T(1) - T(2) * unit_roundoff<T>()) > rhs * (T(1) + gamma_n<T>(2L * terms + 8));
}

/// |a_j| dominates every other term, with coefficients below `floor` known to vanish
/// and coefficient k weighted by k^weight_power (1 for the derivative model).
template <class T>
bool dominates(const TaylorModel<T>& m, int j, int floor = 0, bool derivative = false)
{
    using std::abs;
    const int K = m.terms();
    if (j >= K)
        return false;
    const auto weight = [&](int k) { return derivative ? T(k) : T(1); };
    const T lhs = (abs(m.a[j]) - m.rad[j]) * weight(j);
    if (!(lhs > T(0)))
        return false;
    T rhs = m.rem * (derivative ? T(K) : T(1));
    for (int k = floor; k < K; ++k)
        if (k != j && (!derivative || k > 0))
            rhs += (abs(m.a[k]) + m.rad[k]) * weight(k);
    return certainly_greater(lhs, rhs, K);
}

template <class T>
struct Ball {
    T v, r;
};

template <class T>
Ball<T> ball_add(const Ball<T>& x, const Ball<T>& y)
{
    using std::abs;
    const T s = x.v + y.v;
    const T u = unit_roundoff<T>();
    return {s, (x.r + y.r + abs(s) * u) * (T(1) + T(4) * u) + tiny<T>()};
}

/// Sign variations of the Descartes transform of a complete model on (-1, 1);
/// -1 when some coefficient sign is not certified.
template <class T>
int descartes_variations(const TaylorModel<T>& m)
{
    using std::abs;
    const int d = m.terms() - 1;
    std::vector<Ball<T>> c(d + 1);
    for (int k = 0; k <= d; ++k)
        c[k] = {m.a[k], m.rad[k]};
    // q(2s - 1): shift by -1 then scale by 2^k
    for (int i = 0; i < d; ++i)
        for (int j = d - 1; j >= i; --j)
            c[j] = ball_add(c[j], Ball<T>{-c[j + 1].v, c[j + 1].r});
    T scale = T(1);
    for (int k = 0; k <= d; ++k) {
        c[k].v *= scale;
        c[k].r *= scale;
        scale *= T(2);
    }
    // (1 + s)^d f(1 / (1 + s))
    std::reverse(c.begin(), c.end());
    for (int i = 0; i < d; ++i)
        for (int j = d - 1; j >= i; --j)
            c[j] = ball_add(c[j], c[j + 1]);
    int v = 0, last = 0;
    for (const auto& b : c) {
        if (!(abs(b.v) > b.r)) {
            if (b.v == T(0) && b.r == T(0))
                continue;
            return -1;
        }
        const int s = b.v > T(0) ? 1 : -1;
        if (last != 0 && s != last)
            ++v;
        last = s;
    }
    return v;
}

template <class T>
struct Evaluation {
    T value, radius;
    int sign() const
    {
        using std::abs;
        if (!(abs(value) > radius))
            return 0;
        return value > T(0) ? 1 : -1;
    }
    bool decided() const
    {
        using std::abs;
        return abs(value) > radius;
    }
};

template <class T>
Evaluation<T> eval_certified(const std::vector<T>& p, const T& x)
{
    using std::abs;
    const int n = static_cast<int>(p.size()) - 1;
    const T ax = abs(x);
    T v = p[n], b = abs(p[n]);
    for (int i = n - 1; i >= 0; --i) {
        v = v * x + p[i];
        b = b * ax + abs(p[i]);
    }
    return {v, T(2) * gamma_n<T>(2L * n + 4) * b + tiny<T>()};
}

}  // namespace kaclab::detail
