#include "decayalg/serialize.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "decayalg/error.hpp"

namespace decayalg {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json to_json(const LatticeIndex& n) {
  json a = json::array();
  for (Coord x : n.coords()) a.push_back(x);
  return a;
}

LatticeIndex lattice_index_from_json(const json& j) {
  require(j.is_array() && !j.empty(), ErrorKind::Format, "lattice index must be a non-empty array");
  std::vector<Coord> coords;
  for (const auto& x : j) coords.push_back(x.get<Coord>());
  return LatticeIndex(std::move(coords));
}

json to_json(const Weight& w) {
  return {{"a", w.a()}, {"b", w.b()}, {"s", w.s()}, {"t", w.t()}, {"index_norm", to_string(w.index_norm())}};
}

Weight weight_from_json(const json& j) {
  require(j.is_object(), ErrorKind::Format, "weight must be a JSON object");
  return Weight(j.value("a", 0.0), j.value("b", 0.0), j.value("s", 0.0), j.value("t", 0.0),
                index_norm_from_string(j.value("index_norm", std::string("l1"))));
}

json to_json(const FiniteSeq& a) {
  json entries = json::array();
  const auto vals = a.values();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] == cplx{}) continue;
    entries.push_back({{"index", to_json(a.window().index(i))}, {"re", vals[i].real()}, {"im", vals[i].imag()}});
  }
  return {{"c", a.dim()}, {"radius", a.radius()}, {"entries", entries}};
}

FiniteSeq finite_seq_from_json(const json& j) {
  try {
    FiniteSeq a(j.at("c").get<int>(), j.at("radius").get<Coord>());
    for (const auto& e : j.at("entries"))
      a.set(lattice_index_from_json(e.at("index")), {e.value("re", 0.0), e.value("im", 0.0)});
    return a;
  } catch (const json::exception& e) {
    fail(ErrorKind::Format, std::string("FiniteSeq JSON: ") + e.what());
  }
}

json to_json(const DenseBlock& b) {
  json re = json::array(), im = json::array();
  for (std::size_t i = 0; i < b.dim(); ++i) {
    json rr = json::array(), ii = json::array();
    for (std::size_t k = 0; k < b.dim(); ++k) {
      rr.push_back(b(i, k).real());
      ii.push_back(b(i, k).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return {{"d", b.dim()}, {"re", re}, {"im", im}};
}

DenseBlock dense_block_from_json(const json& j) {
  try {
    const auto d = j.at("d").get<std::size_t>();
    const auto& re = j.at("re");
    const json im = j.contains("im") ? j.at("im") : json();
    require(re.size() == d && (im.is_null() || im.size() == d), ErrorKind::Format, "DenseBlock JSON: wrong row count");
    std::vector<cplx> vals(d * d);
    for (std::size_t i = 0; i < d; ++i) {
      require(re[i].size() == d && (im.is_null() || im[i].size() == d), ErrorKind::Format,
              "DenseBlock JSON: wrong column count");
      for (std::size_t k = 0; k < d; ++k)
        vals[i * d + k] = {re[i][k].get<double>(), im.is_null() ? 0.0 : im[i][k].get<double>()};
    }
    return DenseBlock(d, std::move(vals));
  } catch (const json::exception& e) {
    fail(ErrorKind::Format, std::string("DenseBlock JSON: ") + e.what());
  }
}

namespace {

template <class T>
void put_le(std::ostream& os, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  is.read(reinterpret_cast<char*>(bytes), sizeof(T));
  require(static_cast<std::size_t>(is.gcount()) == sizeof(T), ErrorKind::Format, "unexpected end of binary data");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T v;
  std::memcpy(&v, bytes, sizeof(T));
  return v;
}

void put_complex(std::ostream& os, cplx v) {
  put_le(os, v.real());
  put_le(os, v.imag());
}

cplx get_complex(std::istream& is) {
  const double re = get_le<double>(is);
  const double im = get_le<double>(is);
  return {re, im};
}

}  // namespace

void write_dense_block_binary(std::ostream& os, const DenseBlock& b) {
  os.write("DBLK", 4);
  put_le(os, static_cast<std::uint32_t>(b.dim()));
  for (const cplx& v : b.data()) put_complex(os, v);
}

DenseBlock read_dense_block_binary(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  require(is.gcount() == 4 && std::memcmp(magic, "DBLK", 4) == 0, ErrorKind::Format, "missing DBLK magic");
  const auto d = static_cast<std::size_t>(get_le<std::uint32_t>(is));
  std::vector<cplx> vals(d * d);
  for (auto& v : vals) v = get_complex(is);
  return DenseBlock(d, std::move(vals));
}

json to_json(const CDOperator& t) {
  json blocks = json::array();
  for (std::size_t k = 0; k < t.window().size(); ++k)
    for (std::size_t m = 0; m < t.band().size(); ++m)
      if (const DenseBlock* b = t.find_block(k, m))
        blocks.push_back({{"k", to_json(t.window().index(k))}, {"m", to_json(t.band().index(m))}, {"block", to_json(*b)}});
  return {{"c", t.dim()},
          {"N", t.window_radius()},
          {"W", t.band_radius()},
          {"d", t.local_dim()},
          {"boundary", to_string(t.boundary())},
          {"blocks", blocks}};
}

CDOperator cd_operator_from_json(const json& j) {
  try {
    CDOperator t(j.at("c").get<int>(), j.at("N").get<Coord>(), j.at("W").get<Coord>(), j.at("d").get<std::size_t>(),
                 boundary_from_string(j.at("boundary").get<std::string>()));
    for (const auto& b : j.at("blocks"))
      t.set_block(lattice_index_from_json(b.at("k")), lattice_index_from_json(b.at("m")),
                  dense_block_from_json(b.at("block")));
    return t;
  } catch (const json::exception& e) {
    fail(ErrorKind::Format, std::string("CDOperator JSON: ") + e.what());
  }
}

void write_envelope_csv(std::ostream& os, const std::vector<EnvelopeRow>& rows, int c) {
  for (int i = 1; i <= c; ++i) os << "m_" << i << ",";
  os << "beta,weight,weighted_beta,cumsum\n";
  for (const auto& r : rows) {
    for (Coord x : r.m.coords()) os << x << ",";
    os << format_double(r.beta) << "," << format_double(r.weight) << "," << format_double(r.weighted_beta) << ","
       << format_double(r.cumsum) << "\n";
  }
}

std::vector<EnvelopeRow> read_envelope_csv(std::istream& is, int c) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorKind::Format, "envelope CSV: missing header");
  std::vector<EnvelopeRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    require(cells.size() == static_cast<std::size_t>(c) + 4, ErrorKind::Format, "envelope CSV: wrong column count");
    EnvelopeRow r;
    std::vector<Coord> m;
    for (int i = 0; i < c; ++i) m.push_back(std::stoll(cells[static_cast<std::size_t>(i)]));
    r.m = LatticeIndex(std::move(m));
    const auto base = static_cast<std::size_t>(c);
    r.beta = std::stod(cells[base]);
    r.weight = std::stod(cells[base + 1]);
    r.weighted_beta = std::stod(cells[base + 2]);
    r.cumsum = std::stod(cells[base + 3]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_symbol_csv(std::ostream& os, const SymbolGrid& grid) {
  for (int i = 1; i <= grid.c; ++i) os << "theta_" << i << ",";
  os << "re,im\n";
  for (std::size_t j = 0; j < grid.values.size(); ++j) {
    for (double th : grid.point(j).phases) os << format_double(th) << ",";
    os << format_double(grid.values[j].real()) << "," << format_double(grid.values[j].imag()) << "\n";
  }
}

void write_grid_function(std::ostream& os, const GridFunction& x) {
  const json header = {{"format_version", kFormatVersion},
                       {"c", x.dim()},
                       {"N", x.cells().radius()},
                       {"q", x.samples_per_axis()},
                       {"encoding", "f64le"}};
  os << header.dump() << "\n";
  for (const cplx& v : x.values()) put_complex(os, v);
}

GridFunction read_grid_function(std::istream& is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorKind::Format, "grid function: missing header");
  json h;
  try {
    h = json::parse(line);
  } catch (const json::exception& e) {
    fail(ErrorKind::Format, std::string("grid function header: ") + e.what());
  }
  require(h.value("encoding", std::string("f64le")) == "f64le", ErrorKind::Format, "grid function: unknown encoding");
  GridFunction x(h.at("c").get<int>(), h.at("N").get<Coord>(), h.at("q").get<std::size_t>());
  for (auto& v : x.values()) v = get_complex(is);
  return x;
}

void write_kernel_block_csv(std::ostream& os, const Kernel& kern, const LatticeIndex& k, const LatticeIndex& m) {
  const CDOperator& ops = kern.blocks();
  const int c = ops.dim();
  for (int i = 1; i <= c; ++i) os << "t_" << i << ",";
  for (int i = 1; i <= c; ++i) os << "s_" << i << ",";
  os << "re,im\n";
  const DenseBlock* b = ops.find_block(k, m);
  if (!b) return;
  const auto l = ops.source_cell(ops.window().linear(k), m);
  if (!l) return;
  const LatticeIndex cell_l = ops.window().index(*l);
  const std::size_t q = kern.samples_per_axis();
  const auto position = [&](const LatticeIndex& cell, std::size_t raster) {
    std::vector<double> pos(static_cast<std::size_t>(c));
    for (int axis = c - 1; axis >= 0; --axis) {
      pos[static_cast<std::size_t>(axis)] =
          static_cast<double>(cell[axis]) + static_cast<double>(raster % q) / static_cast<double>(q);
      raster /= q;
    }
    return pos;
  };
  for (std::size_t i = 0; i < b->dim(); ++i) {
    const auto t = position(k, i);
    for (std::size_t j = 0; j < b->dim(); ++j) {
      const auto s = position(cell_l, j);
      for (double v : t) os << format_double(v) << ",";
      for (double v : s) os << format_double(v) << ",";
      os << format_double((*b)(i, j).real()) << "," << format_double((*b)(i, j).imag()) << "\n";
    }
  }
}

}  // namespace decayalg
