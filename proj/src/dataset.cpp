#include "bnsl/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <set>
#include <unordered_map>

#include "bnsl/error.hpp"

namespace bnsl {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view line, Delimiter delim) {
    std::vector<std::string> out;
    if (delim == Delimiter::Comma) {
        std::size_t start = 0;
        while (true) {
            const auto pos = line.find(',', start);
            out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
            if (pos == std::string_view::npos)
                break;
            start = pos + 1;
        }
    } else {
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
                ++i;
            const auto start = i;
            while (i < line.size() && !(line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
                ++i;
            if (i > start)
                out.emplace_back(line.substr(start, i - start));
        }
    }
    return out;
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

}  // namespace

Dataset::Dataset(std::vector<std::string> names, std::vector<int> cardinalities,
                 std::vector<State> rows_row_major)
    : m_names(std::move(names)), m_cardinalities(std::move(cardinalities)), m_values(std::move(rows_row_major)) {
    const auto n = m_names.size();
    if (m_cardinalities.size() != n)
        throw Error("dataset: cardinality vector does not match variable count");
    if (std::set<std::string>(m_names.begin(), m_names.end()).size() != n)
        throw Error("dataset: duplicate variable names");
    if (n == 0) {
        if (!m_values.empty())
            throw Error("dataset: values without variables");
        return;
    }
    if (m_values.size() % n != 0)
        throw Error("dataset: ragged value matrix");
    m_n_rows = m_values.size() / n;

    for (std::size_t var = 0; var < n; ++var)
        if (m_cardinalities[var] < 1)
            throw Error("dataset: cardinality must be positive for '" + m_names[var] + "'");
    for (std::size_t i = 0; i < m_values.size(); ++i) {
        const auto var = i % n;
        const auto v = m_values[i];
        if (v < 0 || v >= m_cardinalities[var])
            throw Error("dataset: value out of range for variable '" + m_names[var] + "'");
    }
}

Dataset Dataset::from_raw_columns(std::vector<std::string> names, const std::vector<std::vector<int>>& rows) {
    const auto n = names.size();
    std::vector<std::unordered_map<int, State>> index(n);
    std::vector<State> values;
    values.reserve(rows.size() * n);
    for (const auto& row : rows) {
        if (row.size() != n)
            throw Error("dataset: ragged row");
        for (std::size_t var = 0; var < n; ++var) {
            auto& map = index[var];
            auto [it, inserted] = map.try_emplace(row[var], static_cast<State>(map.size()));
            values.push_back(it->second);
        }
    }
    std::vector<int> cards(n);
    for (std::size_t var = 0; var < n; ++var)
        cards[var] = std::max<int>(1, static_cast<int>(index[var].size()));
    return Dataset(std::move(names), std::move(cards), std::move(values));
}

Dataset load_dataset(std::istream& in, Delimiter delim) {
    std::string line;
    std::size_t line_no = 0;

    std::vector<std::string> names;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line))
            continue;
        names = split(line, delim);
        break;
    }
    if (names.empty())
        throw ParseError("missing header line", line_no);
    {
        std::set<std::string> seen;
        for (const auto& name : names) {
            if (name.empty())
                throw ParseError("empty variable name in header", line_no);
            if (!seen.insert(name).second)
                throw ParseError("duplicate variable name '" + name + "'", line_no);
        }
    }

    const auto n = names.size();
    std::vector<std::unordered_map<std::string, State>> index(n);
    std::vector<State> values;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line))
            continue;
        auto tokens = split(line, delim);
        if (tokens.size() != n)
            throw ParseError("expected " + std::to_string(n) + " tokens, found " + std::to_string(tokens.size()),
                             line_no);
        for (std::size_t var = 0; var < n; ++var) {
            const auto& tok = tokens[var];
            if (tok.empty() || tok == "?")
                throw ParseError("missing value for '" + names[var] + "'", line_no);
            auto& map = index[var];
            auto [it, inserted] = map.try_emplace(tok, static_cast<State>(map.size()));
            values.push_back(it->second);
        }
    }
    if (values.empty())
        throw ParseError("dataset has no rows", line_no);

    std::vector<int> cards(n);
    for (std::size_t var = 0; var < n; ++var)
        cards[var] = static_cast<int>(index[var].size());
    return Dataset(std::move(names), std::move(cards), std::move(values));
}

Dataset load_dataset_file(const std::string& path, Delimiter delim) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open '" + path + "'");
    return load_dataset(in, delim);
}

void validate_family(const Dataset& ds, NodeIndex child, std::span<const NodeIndex> parents) {
    const auto n = ds.n_vars();
    if (child < 0 || child >= n)
        throw InvalidFamily("child index " + std::to_string(child) + " out of range");
    std::vector<bool> seen(n, false);
    for (auto p : parents) {
        if (p < 0 || p >= n)
            throw InvalidFamily("parent index " + std::to_string(p) + " out of range");
        if (p == child)
            throw InvalidFamily("variable '" + ds.names()[child] + "' cannot be its own parent");
        if (seen[p])
            throw InvalidFamily("repeated parent '" + ds.names()[p] + "'");
        seen[p] = true;
    }
}

std::int64_t FamilyCounts::total() const {
    std::int64_t sum = 0;
    for (const auto& [config, row] : counts)
        for (auto c : row)
            sum += c;
    return sum;
}

std::vector<std::int64_t> FamilyCounts::at(std::uint64_t config) const {
    auto it = counts.find(config);
    if (it == counts.end())
        return std::vector<std::int64_t>(static_cast<std::size_t>(r), 0);
    return it->second;
}

FamilyCounts family_counts(const Dataset& ds, NodeIndex child, std::span<const NodeIndex> parents) {
    validate_family(ds, child, parents);

    FamilyCounts fc;
    fc.child = child;
    fc.parents.assign(parents.begin(), parents.end());
    fc.r = ds.cardinality(child);
    for (auto p : parents) {
        const auto card = static_cast<std::uint64_t>(ds.cardinality(p));
        if (fc.q > std::numeric_limits<std::uint64_t>::max() / card)
            throw InvalidFamily("parent configuration space overflows 64 bits");
        fc.q *= card;
    }

    for (std::size_t row = 0; row < ds.n_rows(); ++row) {
        std::uint64_t config = 0;
        for (auto p : parents)
            config = config * static_cast<std::uint64_t>(ds.cardinality(p)) + static_cast<std::uint64_t>(ds.at(row, p));
        auto [it, inserted] = fc.counts.try_emplace(config);
        if (inserted)
            it->second.assign(static_cast<std::size_t>(fc.r), 0);
        ++it->second[static_cast<std::size_t>(ds.at(row, child))];
    }
    return fc;
}

}  // namespace bnsl
