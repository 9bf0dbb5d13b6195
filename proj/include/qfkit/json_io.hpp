#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "qfkit/lattice.hpp"

namespace qfkit {

using json = nlohmann::ordered_json;

inline const Int kJsonNumberLimit = Int(1) << 53;

/// Exact integers ride as JSON numbers below 2^53, as decimal strings above.
inline json encode_int(const Int& x, bool& used_bigint) {
  if (abs_int(x) < kJsonNumberLimit) return json(static_cast<std::int64_t>(x));
  used_bigint = true;
  return json(x.str());
}

inline Int decode_int(const json& v) {
  if (v.is_number_integer()) {
    if (v.is_number_unsigned()) return Int(v.get<std::uint64_t>());
    return Int(v.get<std::int64_t>());
  }
  if (v.is_string()) {
    const std::string& s = v.get<std::string>();
    require(!s.empty(), errc::not_integral, "empty integer string");
    for (std::size_t i = 0; i < s.size(); ++i)
      require((s[i] >= '0' && s[i] <= '9') || (i == 0 && s[i] == '-'), errc::not_integral,
              "malformed integer string: " + s);
    return Int(s);
  }
  fail(errc::not_integral, "expected an integer entry");
}

inline json encode_imat(const IMat& m, bool& used_bigint) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols; ++j) row.push_back(encode_int(m(i, j), used_bigint));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline IMat decode_imat(const json& v) {
  require(v.is_array() && !v.empty(), errc::bad_input, "expected a nonempty matrix");
  std::size_t rows = v.size();
  require(v[0].is_array(), errc::bad_input, "expected a matrix of rows");
  std::size_t cols = v[0].size();
  IMat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    require(v[i].is_array() && v[i].size() == cols, errc::bad_input, "ragged matrix");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = decode_int(v[i][j]);
  }
  return m;
}

inline json lattice_to_json(const Lattice& l, const std::string& label = "") {
  json out;
  bool big = false;
  out["gram"] = encode_imat(l.gram(), big);
  if (!label.empty()) out["label"] = label;
  if (big) out["bigint"] = true;
  return out;
}

inline Lattice lattice_from_json(const json& v) {
  require(v.is_object() && v.contains("gram"), errc::bad_input,
          "lattice JSON needs a \"gram\" field");
  return Lattice::from_gram(decode_imat(v["gram"]));
}

inline Lattice load_lattice(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), errc::bad_input, "cannot open " + path);
  json v;
  try {
    in >> v;
  } catch (const std::exception& e) {
    fail(errc::bad_input, std::string("JSON parse error: ") + e.what());
  }
  return lattice_from_json(v);
}

inline json rat_to_json(const Rat& r) {
  if (denominator(r) == 1) {
    bool big = false;
    return encode_int(numerator(r), big);
  }
  return json(numerator(r).str() + "/" + denominator(r).str());
}

}  // namespace qfkit
