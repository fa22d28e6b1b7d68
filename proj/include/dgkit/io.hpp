#pragma once

// JSON file formats: .dgc (category), .dgm (module), .twc (twisted complex)
// and .twm (morphism of twisted complexes). Every file starts with "format": 1.
// Coefficients are strings, "a/b" over Q or an integer mod p.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fixtures.hpp"
#include "twisted.hpp"

namespace dgkit {

using Json = nlohmann::ordered_json;

class FormatError : public Error {
 public:
  using Error::Error;
};

namespace io {

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << text;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline void require(bool cond, const std::string& what) {
  if (!cond) throw FormatError(what);
}

inline void check_header(const Json& j, const std::string& kind) {
  require(j.is_object(), kind + ": top level must be an object");
  require(j.contains("format"), kind + ": missing \"format\"");
  require(j["format"] == 1, kind + ": unsupported format version " + j["format"].dump());
}

inline const Json& member(const Json& j, const std::string& key, const std::string& ctx) {
  require(j.is_object() && j.contains(key), ctx + ": missing \"" + key + "\"");
  return j.at(key);
}

// Member or an empty object; returns a reference so items() can be iterated.
inline const Json& object_or_empty(const Json& j, const std::string& key) {
  static const Json empty = Json::object();
  return j.contains(key) ? j.at(key) : empty;
}

inline int parse_int(const std::string& s, const std::string& ctx) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc() && p == s.data() + s.size(), ctx + ": bad integer '" + s + "'");
  return v;
}

inline std::pair<std::string, std::string> split_arrow(const std::string& key, const std::string& ctx) {
  auto pos = key.find("->");
  require(pos != std::string::npos, ctx + ": key '" + key + "' is not of the form a->b");
  return {key.substr(0, pos), key.substr(pos + 2)};
}

template <class F>
typename F::value_type coeff(const F& k, const Json& j, const std::string& ctx) {
  try {
    if (j.is_string()) return k.parse(j.template get<std::string>());
    if (j.is_number_integer()) return k.from_int(j.template get<long long>());
  } catch (const Error& e) {
    throw FormatError(ctx + ": " + e.what());
  }
  throw FormatError(ctx + ": coefficient must be a string or integer");
}

// Hom element as [[basis-name, coeff], ...] in hom(a, b).
template <class F>
Json elem_json(const DgCategory<F>& q, std::size_t a, std::size_t b, const Vec<F>& v) {
  Json out = Json::array();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!q.field.is_zero(v[i])) out.push_back(Json::array({q.hom(a, b).basis[i].name, q.field.to_string(v[i])}));
  return out;
}

template <class F>
Vec<F> elem_from(const DgCategory<F>& q, std::size_t a, std::size_t b, const Json& j, const std::string& ctx) {
  require(j.is_array(), ctx + ": element must be a list of [name, coeff]");
  Vec<F> v(q.hom(a, b).size());
  for (auto& term : j) {
    require(term.is_array() && term.size() == 2 && term[0].is_string(), ctx + ": malformed term " + term.dump());
    auto name = term[0].template get<std::string>();
    auto where = q.lookup(name);
    require(where.has_value(), ctx + ": unknown basis element '" + name + "'");
    auto [sa, sb, i] = *where;
    require(sa == a && sb == b, ctx + ": '" + name + "' is not in hom(" + q.objects[a] + ", " + q.objects[b] + ")");
    v[i] = q.field.add(v[i], coeff(q.field, term[1], ctx));
  }
  return v;
}

template <class F>
Json matrix_json(const F& k, const Matrix<F>& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(k.to_string(m.get(r, c)));
    out.push_back(row);
  }
  return out;
}

template <class F>
Matrix<F> matrix_from(const F& k, const Json& j, std::size_t rows, std::size_t cols, const std::string& ctx) {
  require(j.is_array() && j.size() == rows, ctx + ": expected " + std::to_string(rows) + " rows");
  Matrix<F> m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    require(j[r].is_array() && j[r].size() == cols, ctx + ": expected " + std::to_string(cols) + " columns");
    for (std::size_t c = 0; c < cols; ++c) m.set(k, r, c, coeff(k, j[r][c], ctx));
  }
  return m;
}

}  // namespace io

// ---------------------------------------------------------------------------
// .dgc

inline FieldSpec dgc_field(const Json& j) {
  if (!j.contains("field")) return FieldSpec::rational();
  try {
    return FieldSpec::parse(j.at("field").template get<std::string>());
  } catch (const std::exception& e) {
    throw FormatError(std::string("dgc: bad field: ") + e.what());
  }
}

template <class F>
Json dgc_to_json(const DgCategory<F>& q) {
  const std::size_t N = q.N();
  Json j;
  j["format"] = 1;
  j["field"] = q.field.spec().name();
  j["objects"] = q.objects;
  Json homs = Json::object();
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) {
      auto& h = q.hom(a, b);
      if (!h.size()) continue;
      Json basis = Json::array(), d = Json::object();
      for (std::size_t i = 0; i < h.size(); ++i) {
        basis.push_back({{"name", h.basis[i].name}, {"deg", h.basis[i].degree}});
        auto di = q.diff(a, b, q.basis_vec(a, b, i));
        if (!vec_is_zero(q.field, di)) d[h.basis[i].name] = io::elem_json(q, a, b, di);
      }
      homs[q.objects[a] + "->" + q.objects[b]] = {{"basis", basis}, {"d", d}};
    }
  j["homs"] = homs;
  Json comp = Json::object();
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t c = 0; c < N; ++c)
        for (std::size_t gi = 0; gi < q.hom(b, c).size(); ++gi)
          for (std::size_t fi = 0; fi < q.hom(a, b).size(); ++fi) {
            auto e = q.comp_entry(a, b, c, gi, fi);
            if (e && !vec_is_zero(q.field, *e)) comp[q.hom(b, c).basis[gi].name + "," + q.hom(a, b).basis[fi].name] = io::elem_json(q, a, c, *e);
          }
  j["comp"] = comp;
  Json ids = Json::object();
  for (std::size_t a = 0; a < N; ++a) ids[q.objects[a]] = io::elem_json(q, a, a, q.identity(a));
  j["ids"] = ids;
  return j;
}

template <class F>
DgCategory<F> dgc_from_json(const Json& j, const F& k) {
  using io::require;
  io::check_header(j, "dgc");
  DgCategory<F> q(k);
  auto& objs = io::member(j, "objects", "dgc");
  require(objs.is_array(), "dgc: objects must be a list");
  try {
    for (auto& o : objs) q.add_object(o.template get<std::string>());
  } catch (const Json::exception& e) {
    throw FormatError(std::string("dgc: ") + e.what());
  } catch (const Error& e) {
    throw FormatError(std::string("dgc: ") + e.what());
  }
  q.finalize_objects();
  auto obj = [&](const std::string& name, const std::string& ctx) {
    require(q.has_object(name), ctx + ": unknown object '" + name + "'");
    return q.obj(name);
  };
  const Json& homs = io::object_or_empty(j, "homs");
  for (auto& [key, h] : homs.items()) {
    auto [sa, sb] = io::split_arrow(key, "dgc homs");
    std::size_t a = obj(sa, "dgc homs"), b = obj(sb, "dgc homs");
    std::vector<BasisElem> basis;
    for (auto& e : io::member(h, "basis", "dgc hom " + key)) {
      require(e.is_object() && e.contains("name") && e.contains("deg"), "dgc hom " + key + ": basis entries need name and deg");
      basis.push_back({e["name"].template get<std::string>(), e["deg"].template get<int>()});
    }
    try {
      q.set_basis(a, b, std::move(basis));
    } catch (const Error& e) {
      throw FormatError(std::string("dgc: ") + e.what());
    }
  }
  for (auto& [key, h] : homs.items()) {
    if (!h.contains("d")) continue;
    for (auto& [name, v] : h["d"].items()) {
      auto where = q.lookup(name);
      require(where.has_value(), "dgc d: unknown basis element '" + name + "'");
      auto [a, b, i] = *where;
      q.set_d(a, b, i, io::elem_from(q, a, b, v, "dgc d(" + name + ")"));
    }
  }
  for (auto& [key, v] : io::object_or_empty(j, "comp").items()) {
    auto comma = key.find(',');
    require(comma != std::string::npos, "dgc comp: key '" + key + "' is not of the form g,f");
    auto g = q.lookup(key.substr(0, comma)), f = q.lookup(key.substr(comma + 1));
    require(g && f, "dgc comp: unknown basis element in '" + key + "'");
    auto [fa, fb, fi] = *f;
    auto [gb, gc, gi] = *g;
    require(fb == gb, "dgc comp: '" + key + "' is not composable");
    q.set_comp(fa, fb, gc, gi, fi, io::elem_from(q, fa, gc, v, "dgc comp " + key));
  }
  auto& ids = io::member(j, "ids", "dgc");
  for (std::size_t a = 0; a < q.N(); ++a) {
    require(ids.contains(q.objects[a]), "dgc ids: missing identity of '" + q.objects[a] + "'");
    q.set_identity(a, io::elem_from(q, a, a, ids[q.objects[a]], "dgc id"));
  }
  return q;
}

// ---------------------------------------------------------------------------
// Category references: a builtin fixture name or a .dgc path relative to the
// referring file.

inline std::string resolve_path(const std::string& ref, const std::string& referrer) {
  std::filesystem::path p(ref);
  if (p.is_absolute() || referrer.empty()) return ref;
  return (std::filesystem::path(referrer).parent_path() / p).string();
}

inline bool is_builtin_fixture(const std::string& ref) {
  return ref == "F1" || ref == "F2" || ref == "F4" || ref == "F2p" || ref == "F4-broken";
}

// Field declared by a category reference (builtin fixtures are over Q).
inline FieldSpec referenced_field(const std::string& ref, const std::string& referrer) {
  if (is_builtin_fixture(ref)) return FieldSpec::rational();
  return dgc_field(io::read_json_file(resolve_path(ref, referrer)));
}

template <class F>
CategoryPtr<F> load_category(const std::string& ref, const std::string& referrer, const F& k) {
  if (is_builtin_fixture(ref)) return share(fixture_by_name(k, ref));
  return share(dgc_from_json(io::read_json_file(resolve_path(ref, referrer)), k));
}

// ---------------------------------------------------------------------------
// .dgm

template <class F>
Json dgm_to_json(const DgModule<F>& m, const std::string& category_ref) {
  const auto& q = *m.base;
  const auto& k = q.field;
  Json j;
  j["format"] = 1;
  j["category"] = category_ref;
  Json values = Json::object();
  for (std::size_t a = 0; a < q.N(); ++a) {
    Json dims = Json::object(), d = Json::object();
    for (auto& [n, dim] : m.values[a].dims) dims[std::to_string(n)] = dim;
    for (auto& [n, mat] : m.values[a].d) d[std::to_string(n)] = io::matrix_json(k, mat);
    values[q.objects[a]] = {{"dims", dims}, {"d", d}};
  }
  j["values"] = values;
  Json action = Json::object();
  for (std::size_t a = 0; a < q.N(); ++a)
    for (std::size_t b = 0; b < q.N(); ++b)
      for (std::size_t i = 0; i < q.hom(a, b).size(); ++i) {
        auto& rho = m.act(a, b, i);
        if (rho.is_zero()) continue;
        Json comps = Json::object();
        for (auto& [n, mat] : rho.comp) comps[std::to_string(n)] = io::matrix_json(k, mat);
        action[q.hom(a, b).basis[i].name] = comps;
      }
  j["action"] = action;
  return j;
}

template <class F>
DgModule<F> dgm_from_json(const Json& j, const CategoryPtr<F>& qp) {
  using io::require;
  io::check_header(j, "dgm");
  const auto& q = *qp;
  const auto& k = q.field;
  auto m = zero_module(qp);
  auto& values = io::member(j, "values", "dgm");
  require(values.is_object(), "dgm: values must be an object");
  for (auto& [name, v] : values.items()) {
    require(q.has_object(name), "dgm: unknown object '" + name + "'");
    auto a = q.obj(name);
    auto& c = m.values[a];
    for (auto& [deg, dim] : io::member(v, "dims", "dgm value " + name).items()) {
      require(dim.is_number_unsigned(), "dgm value " + name + ": dimension must be a nonnegative integer");
      c.set_dim(io::parse_int(deg, "dgm dims"), dim.template get<std::size_t>());
    }
    for (auto& [deg, mat] : io::object_or_empty(v, "d").items()) {
      int n = io::parse_int(deg, "dgm d");
      c.set_diff(n, io::matrix_from(k, mat, c.dim(n + 1), c.dim(n), "dgm d of " + name + " at " + deg));
    }
  }
  for (auto& [name, comps] : io::object_or_empty(j, "action").items()) {
    auto where = q.lookup(name);
    require(where.has_value(), "dgm action: unknown basis element '" + name + "'");
    auto [a, b, i] = *where;
    auto& rho = m.action[a * q.N() + b][i];
    for (auto& [deg, mat] : comps.items()) {
      int n = io::parse_int(deg, "dgm action");
      rho.set(n, io::matrix_from(k, mat, m.values[a].dim(n + rho.degree), m.values[b].dim(n), "dgm action of " + name + " at " + deg));
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// .twc and .twm

namespace io {

template <class F>
Json block_json(const DgCategory<F>& q, const Block<F>& b, const Objects& src, const Objects& tgt) {
  Json out = Json::array();
  for (std::size_t t = 0; t < b.rows; ++t) {
    Json row = Json::array();
    for (std::size_t s = 0; s < b.cols; ++s) row.push_back(elem_json(q, src[s], tgt[t], b.at(t, s)));
    out.push_back(row);
  }
  return out;
}

template <class F>
Block<F> block_from(const DgCategory<F>& q, const Json& j, const Objects& src, const Objects& tgt, const std::string& ctx) {
  require(j.is_array() && j.size() == tgt.size(), ctx + ": expected " + std::to_string(tgt.size()) + " rows");
  auto b = zero_block(q, src, tgt);
  for (std::size_t t = 0; t < tgt.size(); ++t) {
    require(j[t].is_array() && j[t].size() == src.size(), ctx + ": expected " + std::to_string(src.size()) + " columns");
    for (std::size_t s = 0; s < src.size(); ++s) b.at(t, s) = elem_from(q, src[s], tgt[t], j[t][s], ctx);
  }
  return b;
}

inline std::string arrow(int i, int j) { return std::to_string(i) + "->" + std::to_string(j); }

inline std::pair<int, int> arrow_from(const std::string& key, const std::string& ctx) {
  auto [a, b] = split_arrow(key, ctx);
  return {parse_int(a, ctx), parse_int(b, ctx)};
}

}  // namespace io

template <class F>
Json twc_to_json(const TwistedComplex<F>& x, const std::string& category_ref) {
  const auto& q = *x.base;
  Json j;
  j["format"] = 1;
  j["category"] = category_ref;
  j["window"] = Json::array({x.lo, x.hi});
  j["extendible"] = x.extendible;
  Json entries = Json::object();
  for (auto& [i, objs] : x.entries) {
    Json names = Json::array();
    for (auto o : objs) names.push_back(q.objects[o]);
    entries[std::to_string(i)] = names;
  }
  j["entries"] = entries;
  Json qj = Json::object();
  for (auto& [ij, b] : x.q) qj[io::arrow(ij.first, ij.second)] = io::block_json(q, b, x.at(ij.first), x.at(ij.second));
  j["q"] = qj;
  return j;
}

template <class F>
TwistedComplex<F> twc_from_json(const Json& j, const CategoryPtr<F>& qp) {
  using io::require;
  io::check_header(j, "twc");
  const auto& q = *qp;
  TwistedComplex<F> x;
  x.base = qp;
  for (auto& [key, names] : io::member(j, "entries", "twc").items()) {
    int i = io::parse_int(key, "twc entries");
    require(names.is_array(), "twc entries: entry " + key + " must be a list of objects");
    Objects objs;
    for (auto& n : names) {
      require(n.is_string() && q.has_object(n.template get<std::string>()), "twc entries: unknown object " + n.dump());
      objs.push_back(q.obj(n.template get<std::string>()));
    }
    if (!objs.empty()) x.entries[i] = std::move(objs);
  }
  if (j.contains("window")) {
    auto& w = j["window"];
    require(w.is_array() && w.size() == 2 && w[0].is_number_integer() && w[1].is_number_integer(), "twc: window must be [lo, hi]");
    x.lo = w[0].template get<int>();
    x.hi = w[1].template get<int>();
  } else if (!x.empty()) {
    x.lo = x.entries.begin()->first;
    x.hi = x.entries.rbegin()->first;
  }
  x.extendible = j.value("extendible", false);
  for (auto& [key, b] : io::object_or_empty(j, "q").items()) {
    auto [s, t] = io::arrow_from(key, "twc q");
    x.set_q(s, t, io::block_from(q, b, x.at(s), x.at(t), "twc q " + key));
  }
  return x;
}

template <class F>
Json twm_to_json(const TwMorphism<F>& f, const TwistedComplex<F>& x, const TwistedComplex<F>& y, const std::string& target_ref = "") {
  Json j;
  j["format"] = 1;
  if (!target_ref.empty()) j["target"] = target_ref;
  j["degree"] = f.degree;
  Json comp = Json::object();
  for (auto& [ij, b] : f.comp) comp[io::arrow(ij.first, ij.second)] = io::block_json(*x.base, b, x.at(ij.first), y.at(ij.second));
  j["comp"] = comp;
  return j;
}

template <class F>
TwMorphism<F> twm_from_json(const Json& j, const TwistedComplex<F>& x, const TwistedComplex<F>& y) {
  io::check_header(j, "twm");
  TwMorphism<F> f;
  io::require(j.contains("degree") && j["degree"].is_number_integer(), "twm: missing integer \"degree\"");
  f.degree = j["degree"].template get<int>();
  for (auto& [key, b] : io::object_or_empty(j, "comp").items()) {
    auto [s, t] = io::arrow_from(key, "twm comp");
    f.set(s, t, io::block_from(*x.base, b, x.at(s), y.at(t), "twm comp " + key));
  }
  return f;
}

}  // namespace dgkit
