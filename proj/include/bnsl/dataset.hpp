#ifndef BNSL_DATASET_HPP
#define BNSL_DATASET_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace bnsl {

using NodeIndex = int;
using State = std::int32_t;

/// Complete discrete observational data. Immutable after construction.
///
/// Every column's values lie in [0, cardinality). The loaders produce dense
/// encodings (largest observed value is cardinality - 1); the constructor
/// also accepts declared state spaces with states that never occur.
class Dataset {
public:
    Dataset() = default;

    /// Validates the invariants and throws bnsl::Error on violation.
    Dataset(std::vector<std::string> names, std::vector<int> cardinalities,
            std::vector<State> rows_row_major);

    /// Builds a dataset from raw integer codes, re-indexing each column in
    /// first-appearance order.
    static Dataset from_raw_columns(std::vector<std::string> names,
                                    const std::vector<std::vector<int>>& rows);

    int n_vars() const { return static_cast<int>(m_names.size()); }
    std::size_t n_rows() const { return m_n_rows; }

    const std::vector<std::string>& names() const { return m_names; }
    const std::vector<int>& cardinalities() const { return m_cardinalities; }
    int cardinality(NodeIndex v) const { return m_cardinalities[v]; }

    State at(std::size_t row, NodeIndex var) const { return m_values[row * m_names.size() + var]; }
    std::span<const State> row(std::size_t r) const {
        return {m_values.data() + r * m_names.size(), m_names.size()};
    }

private:
    std::vector<std::string> m_names;
    std::vector<int> m_cardinalities;
    std::vector<State> m_values;
    std::size_t m_n_rows = 0;
};

enum class Delimiter { Comma, Whitespace };

/// Reads a header line of unique names followed by one token per variable per
/// line. Tokens are mapped to states in first-appearance order per column.
/// "?" and empty tokens are rejected as missing values.
Dataset load_dataset(std::istream& in, Delimiter delim = Delimiter::Comma);
Dataset load_dataset_file(const std::string& path, Delimiter delim = Delimiter::Comma);

/// Contingency table of a (child, parents) family.
///
/// Parent configurations use a mixed-radix index in the given parent order,
/// first parent most significant. Only configurations seen in the data are
/// stored; absent ones are implicitly all-zero.
struct FamilyCounts {
    NodeIndex child = 0;
    std::vector<NodeIndex> parents;
    std::uint64_t q = 1;
    int r = 1;
    std::map<std::uint64_t, std::vector<std::int64_t>> counts;

    std::int64_t total() const;
    /// Per-child-state counts of configuration `config`, zeros if unseen.
    std::vector<std::int64_t> at(std::uint64_t config) const;
};

FamilyCounts family_counts(const Dataset& ds, NodeIndex child, std::span<const NodeIndex> parents);

/// Throws InvalidFamily if child is among parents, parents repeat, or any
/// index is out of range.
void validate_family(const Dataset& ds, NodeIndex child, std::span<const NodeIndex> parents);

}  // namespace bnsl

#endif  // BNSL_DATASET_HPP
