#ifndef BNSL_COMBINATORICS_HPP
#define BNSL_COMBINATORICS_HPP

#include <boost/multiprecision/cpp_int.hpp>

namespace bnsl {

using BigInt = boost::multiprecision::cpp_int;

BigInt binomial(unsigned n, unsigned k);

/// Number of labeled DAGs on n nodes (Robinson's recurrence).
BigInt dag_count(unsigned n);

/// Number of DAGs consistent with one fixed node ordering: 2^(n(n-1)/2).
BigInt order_consistent_count(unsigned n);

/// n * sum_{j=0..k} C(n-1, j): parent sets of size <= k over all n children.
/// Throws ParameterError unless 0 <= k < n.
BigInt count_all_cps(int n, int max_indeg);

}  // namespace bnsl

#endif  // BNSL_COMBINATORICS_HPP
