#include "dml/dataset.hpp"

#include <fstream>
#include <sstream>

namespace dml {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field += ch;
    }
  }
  out.push_back(field);
  return out;
}

}  // namespace

Dataset load_dataset(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, "cannot open " + path);

  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.eof()) break;
    lines.push_back(split_line(line));
  }
  if (lines.empty()) fail(Errc::ParseError, path + ": no header row");

  const std::vector<std::string>& header = lines[0];
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c].empty())
      fail(Errc::ParseError, path + ": empty column name in header");
    for (std::size_t d = c + 1; d < header.size(); ++d)
      if (header[c] == header[d])
        fail(Errc::ParseError, path + ": duplicate column " + header[c]);
  }
  auto column_of = [&](const std::string& name) {
    for (std::size_t c = 0; c < header.size(); ++c)
      if (header[c] == name) return static_cast<int>(c);
    fail(Errc::UnknownColumn, path + ": no column named " + name);
  };

  int gold_src = options.gold_col.empty() ? -1 : column_of(options.gold_col);
  int class_src = options.class_col.empty() ? -1 : column_of(options.class_col);
  if (gold_src >= 0 && gold_src == class_src)
    fail(Errc::InvalidArgument, "class and gold columns must differ");

  Dataset out;
  out.gold_col_name = options.gold_col;

  // Data columns in file order, gold excluded; a missing class designation
  // appends a synthetic unlabeled column.
  std::vector<int> src_cols;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (static_cast<int>(c) != gold_src) src_cols.push_back(static_cast<int>(c));

  FeatureSchema schema;
  for (int c : src_cols) schema.names.push_back(header[c]);
  if (class_src < 0) {
    std::string name = "class";
    bool taken = true;
    while (taken) {
      taken = false;
      for (const std::string& n : schema.names)
        if (n == name) taken = true;
      if (taken) name += "_";
    }
    schema.names.push_back(name);
    schema.class_col = static_cast<int>(schema.names.size()) - 1;
  } else {
    for (std::size_t i = 0; i < src_cols.size(); ++i)
      if (src_cols[i] == class_src) schema.class_col = static_cast<int>(i);
  }

  int n_cols = static_cast<int>(schema.names.size());
  out.level_names.assign(static_cast<std::size_t>(n_cols), {});
  auto level_of = [&](int col, const std::string& value) {
    auto& dict = out.level_names[col];
    for (std::size_t i = 0; i < dict.size(); ++i)
      if (dict[i] == value) return static_cast<int>(i);
    dict.push_back(value);
    return static_cast<int>(dict.size()) - 1;
  };

  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto& fields = lines[r];
    if (fields.size() != header.size())
      fail(Errc::RaggedRow, path + ": line " + std::to_string(r + 1) + " has " +
                                std::to_string(fields.size()) + " fields, wanted " +
                                std::to_string(header.size()));
    std::vector<int> row(static_cast<std::size_t>(n_cols), kMissing);
    for (std::size_t i = 0; i < src_cols.size(); ++i) {
      const std::string& value = fields[src_cols[i]];
      if (value.empty())
        fail(Errc::ParseError,
             path + ": empty field at line " + std::to_string(r + 1));
      if (value == "?") {
        if (static_cast<int>(i) != schema.class_col)
          fail(Errc::MissingValue, path + ": missing feature value at line " +
                                       std::to_string(r + 1) + ", column " +
                                       header[src_cols[i]]);
        row[i] = kMissing;
      } else {
        row[i] = level_of(static_cast<int>(i), value);
      }
    }
    out.data.rows.push_back(std::move(row));
    if (gold_src >= 0) {
      const std::string& value = fields[gold_src];
      if (value.empty() || value == "?")
        fail(Errc::MissingValue, path + ": gold label missing at line " +
                                     std::to_string(r + 1));
      int lvl = -1;
      for (std::size_t i = 0; i < out.gold_levels.size(); ++i)
        if (out.gold_levels[i] == value) lvl = static_cast<int>(i);
      if (lvl < 0) {
        out.gold_levels.push_back(value);
        lvl = static_cast<int>(out.gold_levels.size()) - 1;
      }
      out.gold.push_back(lvl);
    }
  }
  if (out.data.rows.empty()) fail(Errc::ParseError, path + ": no data rows");

  for (int c = 0; c < n_cols; ++c)
    schema.cards.push_back(
        std::max(2, static_cast<int>(out.level_names[c].size())));
  out.data.schema = std::move(schema);
  validate(out.data);
  return out;
}

void save_dataset(const Dataset& dataset, const std::string& path) {
  const ObservationSet& data = dataset.data;
  if (dataset.level_names.size() != static_cast<std::size_t>(data.schema.n_vars()))
    fail(Errc::ShapeMismatch, "level names do not match the schema");
  bool has_gold = !dataset.gold.empty();
  if (has_gold && dataset.gold.size() != data.rows.size())
    fail(Errc::LengthMismatch, "one gold label per row required");

  std::ostringstream text;
  for (int c = 0; c < data.schema.n_vars(); ++c) {
    if (c) text << ',';
    text << data.schema.names[c];
  }
  if (has_gold)
    text << ','
         << (dataset.gold_col_name.empty() ? "gold" : dataset.gold_col_name);
  text << '\n';
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    for (int c = 0; c < data.schema.n_vars(); ++c) {
      if (c) text << ',';
      int v = data.rows[r][c];
      if (v == kMissing) {
        text << '?';
      } else {
        if (v >= static_cast<int>(dataset.level_names[c].size()))
          fail(Errc::InvalidArgument, "level without a name in column " +
                                          data.schema.names[c]);
        text << dataset.level_names[c][v];
      }
    }
    if (has_gold) text << ',' << dataset.gold_levels[dataset.gold[r]];
    text << '\n';
  }

  std::ofstream outf(path);
  if (!outf) fail(Errc::ParseError, "cannot write " + path);
  outf << text.str();
}

}  // namespace dml
