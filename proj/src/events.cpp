#include "dml/events.hpp"

#include <algorithm>
#include <string>

namespace dml {

std::vector<int> FeatureSchema::feature_cols() const {
  std::vector<int> out;
  out.reserve(names.size() - 1);
  for (int c = 0; c < n_vars(); ++c)
    if (c != class_col) out.push_back(c);
  return out;
}

bool ObservationSet::fully_labeled() const {
  for (const auto& row : rows)
    if (row[schema.class_col] == kMissing) return false;
  return true;
}

bool ObservationSet::fully_unlabeled() const {
  for (const auto& row : rows)
    if (row[schema.class_col] != kMissing) return false;
  return true;
}

void validate(const ObservationSet& data) {
  const FeatureSchema& s = data.schema;
  if (s.names.empty() || s.names.size() != s.cards.size())
    fail(Errc::ShapeMismatch, "schema name/cardinality size mismatch");
  if (s.class_col < 0 || s.class_col >= s.n_vars())
    fail(Errc::InvalidArgument, "class column out of range");
  for (int c = 0; c < s.n_vars(); ++c)
    if (s.cards[c] < 2)
      fail(Errc::InvalidArgument,
           "cardinality of " + s.names[c] + " must be at least 2");
  if (data.rows.empty()) fail(Errc::InvalidArgument, "observation set is empty");
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    const auto& row = data.rows[r];
    if (static_cast<int>(row.size()) != s.n_vars())
      fail(Errc::RaggedRow, "row " + std::to_string(r) + " has wrong width");
    for (int c = 0; c < s.n_vars(); ++c) {
      int v = row[c];
      if (v == kMissing) {
        if (c != s.class_col)
          fail(Errc::MissingValue,
               "row " + std::to_string(r) + " missing feature " + s.names[c]);
        continue;
      }
      if (v < 0 || v >= s.cards[c])
        fail(Errc::InvalidArgument, "row " + std::to_string(r) + " value " +
                                        std::to_string(v) + " out of range for " +
                                        s.names[c]);
    }
  }
}

ObservationSet with_class(const ObservationSet& data,
                          const std::vector<int>& assignments) {
  if (assignments.size() != data.rows.size())
    fail(Errc::LengthMismatch, "one assignment per row required");
  ObservationSet out = data;
  for (std::size_t r = 0; r < out.rows.size(); ++r) {
    int v = assignments[r];
    if (v != kMissing && (v < 0 || v >= out.schema.k()))
      fail(Errc::InvalidArgument,
           "assignment " + std::to_string(v) + " outside class range");
    out.rows[r][out.schema.class_col] = v;
  }
  return out;
}

ObservationSet with_class_cardinality(const ObservationSet& data, int k) {
  if (k < 2) fail(Errc::InvalidK, "class cardinality must be at least 2");
  ObservationSet out = data;
  out.schema.cards[out.schema.class_col] = k;
  for (std::size_t r = 0; r < out.rows.size(); ++r) {
    int v = out.rows[r][out.schema.class_col];
    if (v != kMissing && v >= k)
      fail(Errc::InvalidArgument,
           "row " + std::to_string(r) + " label exceeds new class cardinality");
  }
  return out;
}

long long MarginalCounts::at(std::span<const int> levels) const {
  if (levels.size() != vars.size())
    fail(Errc::ShapeMismatch, "level tuple width mismatch");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    int v = levels[i];
    if (v < 0 || v >= cards[i]) fail(Errc::InvalidArgument, "level out of range");
    idx = idx * static_cast<std::size_t>(cards[i]) + static_cast<std::size_t>(v);
  }
  return counts[idx];
}

MarginalCounts marginal_counts(const ObservationSet& data,
                               const std::vector<int>& vars) {
  const FeatureSchema& s = data.schema;
  MarginalCounts out;
  out.vars = vars;
  out.cards.reserve(vars.size());
  std::size_t cells = 1;
  for (int v : vars) {
    if (v < 0 || v >= s.n_vars()) fail(Errc::NotSubset, "unknown variable index");
    out.cards.push_back(s.cards[v]);
    cells *= static_cast<std::size_t>(s.cards[v]);
  }
  for (std::size_t i = 0; i < vars.size(); ++i)
    for (std::size_t j = i + 1; j < vars.size(); ++j)
      if (vars[i] == vars[j])
        fail(Errc::InvalidArgument, "duplicate variable in subset");
  out.counts.assign(cells, 0);
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    const auto& row = data.rows[r];
    std::size_t idx = 0;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      int v = row[vars[i]];
      if (v == kMissing)
        fail(Errc::MissingValue,
             "row " + std::to_string(r) + " has no class label");
      idx = idx * static_cast<std::size_t>(out.cards[i]) +
            static_cast<std::size_t>(v);
    }
    ++out.counts[idx];
  }
  out.total = static_cast<long long>(data.rows.size());
  return out;
}

MarginalCounts project(const MarginalCounts& counts,
                       const std::vector<int>& vars) {
  std::vector<std::size_t> pos;
  pos.reserve(vars.size());
  for (int v : vars) {
    auto it = std::find(counts.vars.begin(), counts.vars.end(), v);
    if (it == counts.vars.end())
      fail(Errc::NotSubset,
           "variable " + std::to_string(v) + " not in source table");
    pos.push_back(static_cast<std::size_t>(it - counts.vars.begin()));
  }
  MarginalCounts out;
  out.vars = vars;
  std::size_t cells = 1;
  for (std::size_t p : pos) {
    out.cards.push_back(counts.cards[p]);
    cells *= static_cast<std::size_t>(counts.cards[p]);
  }
  out.counts.assign(cells, 0);
  out.total = counts.total;

  std::size_t n_src = counts.vars.size();
  std::vector<int> levels(n_src, 0);
  for (std::size_t cell = 0; cell < counts.counts.size(); ++cell) {
    // Decode the row-major source cell, fold into the target cell.
    std::size_t rem = cell;
    for (std::size_t i = n_src; i-- > 0;) {
      levels[i] = static_cast<int>(rem % static_cast<std::size_t>(counts.cards[i]));
      rem /= static_cast<std::size_t>(counts.cards[i]);
    }
    std::size_t idx = 0;
    for (std::size_t i = 0; i < pos.size(); ++i)
      idx = idx * static_cast<std::size_t>(out.cards[i]) +
            static_cast<std::size_t>(levels[pos[i]]);
    out.counts[idx] += counts.counts[cell];
  }
  return out;
}

}  // namespace dml
