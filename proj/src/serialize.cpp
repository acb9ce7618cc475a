#include "psl/serialize.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "psl/error.hpp"

namespace psl {

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b;
  for (int k = 0; k < 8; ++k) b[k] = static_cast<char>((v >> (8 * k)) & 0xffu);
  out.write(b.data(), 8);
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b;
  if (!in.read(reinterpret_cast<char*>(b.data()), 8)) throw FormatError("binary stream is truncated");
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
  return v;
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  while (first < last && *first == ' ') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) throw FormatError("bad number '" + text + "'");
  return v;
}

void write_signal_csv(std::ostream& out, const Signal& f) {
  out << "index,t,re,im\n";
  for (std::size_t m = 0; m < f.size(); ++m)
    out << m << ',' << format_double(f.coord(m)) << ',' << format_double(f[m].real()) << ','
        << format_double(f[m].imag()) << '\n';
}

Signal read_signal_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "index,t,re,im") throw FormatError("bad signal CSV header");
  std::vector<cplx> values;
  double t0 = 0.0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = split(line);
    if (cols.size() != 4) throw FormatError("signal CSV rows need 4 columns");
    if (std::stoul(cols[0]) != values.size()) throw FormatError("signal CSV indices out of order");
    if (values.empty()) t0 = parse_double(cols[1]);
    values.emplace_back(parse_double(cols[2]), parse_double(cols[3]));
  }
  const std::size_t n = values.size();
  if (n < 4) throw FormatError("signal CSV too short");
  const Grid1D g = Grid1D::make(n, -t0 / static_cast<double>(n / 2));
  return Signal(g, std::move(values));
}

void write_signal_binary(std::ostream& out, const Signal& f) {
  put_u64(out, f.size());
  put_f64(out, f.grid().dt);
  for (auto v : f.values()) {
    put_f64(out, v.real());
    put_f64(out, v.imag());
  }
}

Signal read_signal_binary(std::istream& in) {
  const std::uint64_t n = get_u64(in);
  const double dt = get_f64(in);
  if (n > (1ull << 32)) throw FormatError("signal binary header is implausible");
  const Grid1D g = Grid1D::make(static_cast<std::size_t>(n), dt);
  std::vector<cplx> values(g.n);
  for (auto& v : values) {
    const double re = get_f64(in);
    v = cplx(re, get_f64(in));
  }
  return Signal(g, std::move(values));
}

void save_signal(const Signal& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  if (ends_with(path, ".csv"))
    write_signal_csv(out, f);
  else
    write_signal_binary(out, f);
}

Signal load_signal(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return ends_with(path, ".csv") ? read_signal_csv(in) : read_signal_binary(in);
}

nlohmann::ordered_json phase_grid_to_json(const PhaseGrid& g) {
  nlohmann::ordered_json j;
  j["x_axis"] = {{"n", g.xgrid.n}, {"step", g.xgrid.dt}};
  j["xi_axis"] = {{"n", g.xigrid.n}, {"step", g.xigrid.dt}};
  j["rows"] = {{"first", g.row0}, {"count", g.rows}};
  j["bins"] = {{"first", g.bin0}, {"count", g.bins}};
  j["cell_area"] = g.cell_area();
  return j;
}

PhaseGrid phase_grid_from_json(const nlohmann::json& j) {
  try {
    PhaseGrid g;
    g.xgrid = Grid1D{j.at("x_axis").at("n").get<std::size_t>(), j.at("x_axis").at("step").get<double>()};
    g.xigrid = Grid1D{j.at("xi_axis").at("n").get<std::size_t>(), j.at("xi_axis").at("step").get<double>()};
    g.row0 = j.at("rows").at("first").get<std::size_t>();
    g.rows = j.at("rows").at("count").get<std::size_t>();
    g.bin0 = j.at("bins").at("first").get<std::size_t>();
    g.bins = j.at("bins").at("count").get<std::size_t>();
    if (g.row0 + g.rows > g.xgrid.n || g.bin0 + g.bins > g.xigrid.n || g.rows == 0 || g.bins == 0)
      throw FormatError("phase grid window exceeds its axes");
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad phase grid description: ") + e.what());
  }
}

void write_field_csv(std::ostream& out, const PhaseSpaceField& w) {
  out << "ix,ixi,x,xi,re,im\n";
  for (std::size_t i = 0; i < w.grid.rows; ++i)
    for (std::size_t j = 0; j < w.grid.bins; ++j) {
      const cplx v = w.at(i, j);
      out << i << ',' << j << ',' << format_double(w.grid.x(i)) << ',' << format_double(w.grid.xi(j))
          << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
}

void write_field_binary(const PhaseSpaceField& w, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  put_u64(out, w.grid.rows);
  put_u64(out, w.grid.bins);
  for (auto v : w.values) {
    put_f64(out, v.real());
    put_f64(out, v.imag());
  }
  nlohmann::ordered_json side;
  side["kind"] = to_string(w.kind);
  side["tau"] = w.tau;
  side["real"] = w.real;
  side["grid"] = phase_grid_to_json(w.grid);
  std::ofstream js(path + ".json", std::ios::binary);
  if (!js) throw FormatError("cannot open '" + path + ".json' for writing");
  js << side.dump(2) << '\n';
}

PhaseSpaceField read_field_binary(const std::string& path) {
  std::ifstream js(path + ".json");
  if (!js) throw FormatError("missing field sidecar '" + path + ".json'");
  nlohmann::json side;
  try {
    js >> side;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad field sidecar: ") + e.what());
  }
  PhaseSpaceField w;
  w.grid = phase_grid_from_json(side.at("grid"));
  w.kind = field_kind_from_string(side.at("kind").get<std::string>());
  w.tau = side.at("tau").get<double>();
  w.real = side.at("real").get<bool>();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  if (get_u64(in) != w.grid.rows || get_u64(in) != w.grid.bins)
    throw FormatError("field payload dimensions disagree with the sidecar");
  w.values.resize(w.grid.size());
  for (auto& v : w.values) {
    const double re = get_f64(in);
    v = cplx(re, get_f64(in));
  }
  return w;
}

}  // namespace psl
