#include "psl/mask.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "psl/error.hpp"
#include "psl/serialize.hpp"

namespace psl {

namespace {

template <class Pred>
DomainMask rasterize(const PhaseGrid& grid, Pred&& inside) {
  std::vector<std::uint8_t> cells(grid.size());
  for (std::size_t i = 0; i < grid.rows; ++i)
    for (std::size_t j = 0; j < grid.bins; ++j)
      cells[i * grid.bins + j] = inside(grid.x(i), grid.xi(j)) ? 1 : 0;
  return DomainMask(grid, std::move(cells));
}

}  // namespace

DomainMask::DomainMask(PhaseGrid grid, std::vector<std::uint8_t> cells)
    : grid_(grid), cells_(std::move(cells)) {
  if (cells_.size() != grid_.size()) throw GridMismatch("mask size does not match its grid");
  for (auto& c : cells_) {
    c = c ? 1 : 0;
    count_ += c;
  }
  if (count_ == 0) throw InvalidArgument("mask must have positive measure");
  if (count_ == cells_.size()) throw InvalidArgument("mask must not cover the whole grid");
}

DomainMask DomainMask::rectangle(const PhaseGrid& grid, double x_min, double x_max,
                                 double xi_min, double xi_max) {
  return rasterize(grid, [&](double x, double xi) {
    return x >= x_min && x <= x_max && xi >= xi_min && xi <= xi_max;
  });
}

DomainMask DomainMask::disk(const PhaseGrid& grid, PhasePoint center, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("disk radius must be positive");
  return rasterize(grid, [&](double x, double xi) {
    return std::hypot(x - center.x, xi - center.xi) <= radius;
  });
}

DomainMask DomainMask::annulus(const PhaseGrid& grid, PhasePoint center, double inner_radius,
                               double outer_radius) {
  if (!(inner_radius >= 0.0 && outer_radius > inner_radius))
    throw InvalidArgument("annulus radii must satisfy 0 <= inner < outer");
  return rasterize(grid, [&](double x, double xi) {
    const double r = std::hypot(x - center.x, xi - center.xi);
    return r >= inner_radius && r <= outer_radius;
  });
}

DomainMask DomainMask::almost_full(const PhaseGrid& grid) {
  std::vector<std::uint8_t> cells(grid.size(), 1);
  cells[0] = 0;
  return DomainMask(grid, std::move(cells));
}

PhasePoint DomainMask::centroid() const {
  double sx = 0.0, sxi = 0.0;
  for (std::size_t i = 0; i < grid_.rows; ++i)
    for (std::size_t j = 0; j < grid_.bins; ++j)
      if (contains(i, j)) {
        sx += grid_.x(i);
        sxi += grid_.xi(j);
      }
  const double n = static_cast<double>(count_);
  return {sx / n, sxi / n};
}

std::vector<std::pair<std::size_t, std::size_t>> DomainMask::members() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < grid_.rows; ++i)
    for (std::size_t j = 0; j < grid_.bins; ++j)
      if (contains(i, j)) out.emplace_back(i, j);
  return out;
}

DomainMask DomainMask::translated(PhasePoint c) const {
  const long di = std::lround(c.x / grid_.xgrid.dt);
  const long dj = std::lround(c.xi / grid_.xigrid.dt);
  std::vector<std::uint8_t> cells(cells_.size());
  const long rows = static_cast<long>(grid_.rows), bins = static_cast<long>(grid_.bins);
  for (const auto& [i, j] : members()) {
    const long ni = static_cast<long>(i) + di, nj = static_cast<long>(j) + dj;
    if (ni < 0 || ni >= rows || nj < 0 || nj >= bins)
      throw GuardViolation("translated mask leaves the grid");
    cells[static_cast<std::size_t>(ni * bins + nj)] = 1;
  }
  return DomainMask(grid_, std::move(cells));
}

DomainMask unite(const DomainMask& a, const DomainMask& b) {
  if (!(a.grid_ == b.grid_)) throw GridMismatch("masks live on different grids");
  std::vector<std::uint8_t> cells(a.cells_.size());
  for (std::size_t k = 0; k < cells.size(); ++k) cells[k] = a.cells_[k] | b.cells_[k];
  return DomainMask(a.grid_, std::move(cells));
}

void write_mask(const DomainMask& mask, const std::string& path) {
  const PhaseGrid& g = mask.grid();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << "P1\n" << g.bins << ' ' << g.rows << '\n';
  for (std::size_t i = 0; i < g.rows; ++i) {
    for (std::size_t j = 0; j < g.bins; ++j) out << (mask.contains(i, j) ? '1' : '0');
    out << '\n';
  }
  nlohmann::ordered_json side;
  side["grid"] = phase_grid_to_json(g);
  side["cells"] = mask.count();
  side["measure"] = mask.measure();
  std::ofstream js(path + ".json", std::ios::binary);
  if (!js) throw FormatError("cannot open '" + path + ".json' for writing");
  js << side.dump(2) << '\n';
}

DomainMask read_mask(const std::string& path) {
  std::ifstream js(path + ".json");
  if (!js) throw FormatError("missing mask sidecar '" + path + ".json'");
  nlohmann::json side;
  try {
    js >> side;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad mask sidecar: ") + e.what());
  }
  const PhaseGrid g = phase_grid_from_json(side.at("grid"));

  std::ifstream in(path);
  if (!in) throw FormatError("cannot open mask bitmap '" + path + "'");
  std::string magic;
  in >> magic;
  if (magic != "P1") throw FormatError("mask bitmap must be plain PBM (P1)");
  auto skip_comments = [&] {
    in >> std::ws;
    while (in.peek() == '#') {
      std::string line;
      std::getline(in, line);
      in >> std::ws;
    }
  };
  std::size_t width = 0, height = 0;
  skip_comments();
  in >> width;
  skip_comments();
  in >> height;
  if (!in || width != g.bins || height != g.rows)
    throw FormatError("mask bitmap size does not match its sidecar grid");
  std::vector<std::uint8_t> cells;
  cells.reserve(g.size());
  char ch;
  while (cells.size() < g.size() && in.get(ch)) {
    if (ch == '#') {
      std::string line;
      std::getline(in, line);
    } else if (ch == '0' || ch == '1') {
      cells.push_back(ch == '1' ? 1 : 0);
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      throw FormatError("unexpected character in mask bitmap");
    }
  }
  if (cells.size() != g.size()) throw FormatError("mask bitmap is truncated");
  return DomainMask(g, std::move(cells));
}

}  // namespace psl
