#include "io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace densilab {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

Mat from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) parse_fail("matrix has no rows");
  const auto n = rows.size();
  Mat m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != rows.front().size()) parse_fail("ragged matrix rows");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  if (m.rows() != m.cols()) parse_fail("matrix must be square");
  return m;
}

Mat parse_json_matrix(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    parse_fail(std::string("invalid matrix JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("rows")) parse_fail("matrix JSON needs a \"rows\" field");
  std::vector<std::vector<double>> rows;
  try {
    rows = j.at("rows").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    parse_fail(std::string("matrix rows must be numbers: ") + e.what());
  }
  Mat m = from_rows(rows);
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer() || j["dim"].get<long long>() != m.rows())
      parse_fail("\"dim\" does not match the rows");
  }
  return m;
}

Mat parse_inline(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream rs(text);
  std::string row;
  while (std::getline(rs, row, ';')) {
    std::vector<double> values;
    std::stringstream cs(row);
    std::string cell;
    while (std::getline(cs, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        parse_fail("bad matrix entry '" + cell + "'");
      }
      if (cell.find_first_not_of(" \t", used) != std::string::npos) parse_fail("bad matrix entry '" + cell + "'");
      values.push_back(v);
    }
    rows.push_back(std::move(values));
  }
  return from_rows(rows);
}

Mat subspace(const nlohmann::json& j, const char* key, int dim, int default_axis) {
  if (!j.contains(key)) {
    if (default_axis >= dim) throw Error(ErrorCode::BadParameter, std::string("missing subspace ") + key);
    return Mat(Mat::Identity(dim, dim).col(default_axis));
  }
  const auto cols = j.at(key).get<std::vector<std::vector<double>>>();
  Mat m(dim, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (static_cast<int>(cols[c].size()) != dim) parse_fail(std::string("subspace vector length in ") + key);
    for (int r = 0; r < dim; ++r) m(r, static_cast<Eigen::Index>(c)) = cols[c][static_cast<std::size_t>(r)];
  }
  return m;
}

}  // namespace

Mat parse_matrix(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) parse_fail("empty matrix text");
  Mat m = text[first] == '{' ? parse_json_matrix(text) : parse_inline(text);
  if (!m.allFinite()) parse_fail("matrix entries must be finite");
  return m;
}

Mat load_matrix(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    if (!in) parse_fail("cannot read " + arg);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_matrix(ss.str());
  }
  return parse_matrix(arg);
}

IntMatrix to_int_matrix(const Mat& m) {
  IntMatrix out(static_cast<int>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (v != std::trunc(v) || std::abs(v) > 9007199254740992.0)
        throw Error(ErrorCode::PreconditionViolated, "matrix entries must be exact integers");
      out(static_cast<int>(i), static_cast<int>(j)) = static_cast<std::int64_t>(v);
    }
  return out;
}

nlohmann::json matrix_json(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j) + 0.0);  // no "-0"
    rows.push_back(std::move(row));
  }
  return {{"dim", m.rows()}, {"rows", rows}};
}

Region parse_region(const nlohmann::json& j, int dim) {
  try {
    if (!j.is_object() || !j.contains("type")) parse_fail("region descriptor needs a \"type\"");
    const auto type = j.at("type").get<std::string>();
    if (type == "all") return Region::all_space(dim);
    if (type == "ball") return Region::ball(dim, j.value("r", 1.0));
    if (type == "cube") return Region::cube(dim, j.value("r", 1.0));
    if (type == "ealpha") return Region::ealpha(dim, j.at("alpha").get<double>(), j.value("i", 0), j.value("l", 1));
    if (type == "gdelta") return Region::gdelta(j.at("delta").get<double>(), subspace(j, "u1", dim, 0));
    if (type == "fdelta")
      return Region::fdelta(j.at("delta").get<double>(), subspace(j, "u", dim, 0), subspace(j, "v", dim, 1));
    if (type == "cone")
      return Region::cone(j.at("kappa").get<double>(), subspace(j, "u", dim, 0), subspace(j, "v", dim, 1));
    if (type == "complement") return Region::complement(parse_region(j.at("of"), dim));
    if (type == "translate") {
      const auto off = j.at("offset").get<std::vector<double>>();
      if (static_cast<int>(off.size()) != dim) parse_fail("translate offset has wrong length");
      return Region::translate(parse_region(j.at("of"), dim), Eigen::Map<const Vec>(off.data(), dim));
    }
    if (type == "cylinder") {
      const Mat axis = subspace(j, "axis", dim, dim);
      const int base_dim = dim - static_cast<int>(axis.cols());
      return Region::cylinder(parse_region(j.at("base"), base_dim), axis);
    }
    if (type == "intersection")
      return Region::intersection(parse_region(j.at("lhs"), dim), parse_region(j.at("rhs"), dim));
    parse_fail("unknown region type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    parse_fail(std::string("invalid region descriptor: ") + e.what());
  }
}

}  // namespace densilab
