// Classical Hochschild cochains, coded directly from the bar complex:
//
//   (delta f)(a_1, ..., a_{n+1}) = a_1 f(a_2, ..., a_{n+1})
//       + sum_{k=1}^{n} (-1)^k f(a_1, ..., a_k a_{k+1}, ..., a_{n+1})
//       + (-1)^{n+1} f(a_1, ..., a_n) a_{n+1}
//
// Shares nothing with the cosimplicial assembly beyond rank().

#include "hhx/cochain.hpp"

namespace hhx::cochain {

namespace {

using linalg::Scalar;
using linalg::SparseRow;

std::size_t ipow(std::size_t b, std::size_t e)
{
    std::size_t r = 1;
    while (e--)
        r *= b;
    return r;
}

Matrix bar_differential(const Algebra& alg, const std::vector<Matrix>& left, const std::vector<Matrix>& right,
                        std::size_t m, std::size_t n)
{
    const std::size_t d = alg.dim();
    const std::size_t src_tensors = ipow(d, n);
    const std::size_t tgt_tensors = ipow(d, n + 1);
    const auto& field = alg.field();
    std::vector<SparseRow> data(tgt_tensors * m);

    std::vector<std::size_t> a(n + 1);
    for (std::size_t tensor = 0; tensor < tgt_tensors; ++tensor) {
        std::size_t rest = tensor;
        for (std::size_t p = n + 1; p-- > 0;) {
            a[p] = rest % d;
            rest /= d;
        }
        auto encode = [&](std::size_t skip_from, std::size_t skip_to) {
            // digits of a with positions [skip_from, skip_to) removed
            std::size_t idx = 0;
            for (std::size_t p = 0; p <= n; ++p)
                if (p < skip_from || p >= skip_to)
                    idx = idx * d + a[p];
            return idx;
        };

        // a_1 f(a_2 ...)
        std::size_t src = encode(0, 1);
        for (std::size_t r = 0; r < m; ++r)
            for (const auto& e : left[a[0]].row(r))
                data[tensor * m + r].push_back({src * m + e.col, e.value});

        // inner faces
        for (std::size_t k = 1; k <= n; ++k) {
            const auto& prod = alg.product(a[k - 1], a[k]);
            Scalar sign = (k % 2) ? -1 : 1;
            for (std::size_t u = 0; u < d; ++u) {
                if (prod[u] == 0)
                    continue;
                std::size_t idx = 0;
                for (std::size_t p = 0; p <= n; ++p) {
                    if (p == k)
                        continue;
                    idx = idx * d + (p == k - 1 ? u : a[p]);
                }
                for (std::size_t r = 0; r < m; ++r)
                    data[tensor * m + r].push_back({idx * m + r, sign * prod[u]});
            }
        }

        // f(a_1 ... a_n) a_{n+1}
        src = encode(n, n + 1);
        Scalar sign = ((n + 1) % 2) ? -1 : 1;
        for (std::size_t r = 0; r < m; ++r)
            for (const auto& e : right[a[n]].row(r))
                data[tensor * m + r].push_back({src * m + e.col, sign * e.value});
    }
    return Matrix(field, tgt_tensors * m, src_tensors * m, std::move(data));
}

} // namespace

std::vector<std::size_t> classical_oracle(const Algebra& alg, const coeffalg::MultiModule& bimodule,
                                          const std::string& left_id, const std::string& right_id, std::uint32_t max_degree)
{
    const auto& left = bimodule.actions.at(left_id);
    const auto& right = bimodule.actions.at(right_id);
    const std::size_t m = bimodule.dim;
    std::vector<std::size_t> ranks;
    for (std::size_t n = 0; n <= max_degree; ++n)
        ranks.push_back(m == 0 ? 0 : linalg::rank(bar_differential(alg, left, right, m, n)));
    std::vector<std::size_t> hh;
    for (std::size_t n = 0; n <= max_degree; ++n)
        hh.push_back(m * ipow(alg.dim(), n) - ranks[n] - (n ? ranks[n - 1] : 0));
    return hh;
}

} // namespace hhx::cochain
