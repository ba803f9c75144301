#include "bnsl/combinatorics.hpp"

#include <vector>

#include "bnsl/error.hpp"

namespace bnsl {

BigInt binomial(unsigned n, unsigned k) {
    if (k > n)
        return 0;
    if (k > n - k)
        k = n - k;
    BigInt c = 1;
    for (unsigned i = 1; i <= k; ++i)
        c = c * (n - k + i) / i;
    return c;
}

BigInt dag_count(unsigned n) {
    std::vector<BigInt> f(n + 1);
    f[0] = 1;
    for (unsigned m = 1; m <= n; ++m) {
        BigInt sum = 0;
        for (unsigned i = 1; i <= m; ++i) {
            BigInt term = binomial(m, i) * (BigInt(1) << (i * (m - i))) * f[m - i];
            if (i % 2 == 1)
                sum += term;
            else
                sum -= term;
        }
        f[m] = sum;
    }
    return f[n];
}

BigInt order_consistent_count(unsigned n) {
    const unsigned long long exponent = static_cast<unsigned long long>(n) * (n == 0 ? 0 : n - 1) / 2;
    return BigInt(1) << exponent;
}

BigInt count_all_cps(int n, int max_indeg) {
    if (n < 1 || max_indeg < 0 || max_indeg >= n)
        throw ParameterError("count_all_cps requires 0 <= k < n");
    BigInt per_node = 0;
    for (int j = 0; j <= max_indeg; ++j)
        per_node += binomial(static_cast<unsigned>(n - 1), static_cast<unsigned>(j));
    return per_node * n;
}

}  // namespace bnsl
