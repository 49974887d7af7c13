#pragma once

#include <cassert>
#include <vector>

namespace cmclab {

// Truncated power series over a field F, represented as plain coefficient
// vectors (index = power of the local variable). All routines work "to K
// terms": output index range [0, K).

template <class F>
std::vector<F> series_mul(const std::vector<F>& a, const std::vector<F>& b, size_t terms) {
    std::vector<F> r(terms, F(0));
    for (size_t i = 0; i < a.size() && i < terms; ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size() && i + j < terms; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

// a / b with b[0] invertible
template <class F>
std::vector<F> series_div(const std::vector<F>& a, const std::vector<F>& b, size_t terms) {
    assert(!b.empty() && !b[0].is_zero());
    std::vector<F> q(terms, F(0));
    F inv0 = field_inverse(b[0]);
    for (size_t k = 0; k < terms; ++k) {
        F acc = k < a.size() ? a[k] : F(0);
        for (size_t j = 1; j <= k && j < b.size(); ++j) acc -= b[j] * q[k - j];
        q[k] = acc * inv0;
    }
    return q;
}

template <class F>
std::vector<F> series_inverse(const std::vector<F>& b, size_t terms) {
    std::vector<F> one{F(1)};
    return series_div(one, b, terms);
}

}  // namespace cmclab
